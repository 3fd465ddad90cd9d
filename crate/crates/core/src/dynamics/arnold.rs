use rayon::prelude::*;

use crate::confrac::Rational;
use crate::{Error, Real, Result};

/// Circle map `Φ → Φ + 2πΩ − c sin Φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArnoldParams<T> {
    pub omega: T,
    pub c: T,
    pub phi0: T,
}

impl<T: Real> ArnoldParams<T> {
    pub fn new(omega: T, c: T, phi0: T) -> Result<Self> {
        if !(c >= T::zero()) || !c.is_finite() || !omega.is_finite() || !phi0.is_finite() {
            return Err(Error::Parameter(format!("need finite Ω, Φ0 and c ≥ 0 (got c = {c})")));
        }
        Ok(Self { omega, c, phi0 })
    }
}

pub const MIN_ITER: usize = 1000;

/// Mean rotation per iterate of the lift, `(Φ_N − Φ_{n₀}) / (2π(N − n₀))`.
///
/// Choose `n_iter` divisible by small periods (multiples of 60 cover q ≤ 6) to
/// make locked orbits return exact rationals.
pub fn winding_number<T: Real>(params: ArnoldParams<T>, n_transient: usize, n_iter: usize) -> Result<T> {
    if n_iter < MIN_ITER {
        return Err(Error::Parameter(format!("n_iter = {n_iter} below the minimum {MIN_ITER}")));
    }
    let step = T::TAU() * params.omega;
    let c = params.c;
    let mut phi = params.phi0;
    for _ in 0..n_transient {
        phi = phi + step - c * phi.sin();
    }
    // accumulate displacement rather than the lift itself to keep precision
    let mut travelled = T::zero();
    for _ in 0..n_iter {
        let d = step - c * phi.sin();
        travelled += d;
        phi += d;
    }
    Ok(travelled / (T::TAU() * T::from_usize_lossy(n_iter)))
}

#[derive(Debug, Clone, Copy)]
pub struct StaircaseOptions<T> {
    pub n_transient: usize,
    pub n_iter: usize,
    pub plateau_tol: T,
    pub max_denominator: i64,
    pub phi0: T,
}

impl<T: Real> Default for StaircaseOptions<T> {
    fn default() -> Self {
        Self {
            n_transient: 4000,
            n_iter: 6000,
            plateau_tol: T::lit(1e-5),
            max_denominator: 16,
            phi0: T::zero(),
        }
    }
}

/// Run of grid points locked to the same rational.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plateau<T> {
    pub ratio: Rational<i64>,
    /// Grid indices of the first and last locked points.
    pub first: usize,
    pub last: usize,
    /// Edges placed halfway to the neighbouring unlocked grid points.
    pub omega_lo: T,
    pub omega_hi: T,
}

impl<T: Real> Plateau<T> {
    pub fn width(&self) -> T {
        self.omega_hi - self.omega_lo
    }
}

#[derive(Debug, Clone)]
pub struct Staircase<T> {
    pub c: T,
    pub points: Vec<(T, T)>,
    pub plateaus: Vec<Plateau<T>>,
    /// Set for `c ≥ 1`, where tongues may overlap and the map is not invertible.
    pub overlap_warning: bool,
}

impl<T: Real> Staircase<T> {
    /// Widest detected plateau at `p/q`, if any.
    pub fn plateau(&self, ratio: Rational<i64>) -> Option<&Plateau<T>> {
        self.plateaus
            .iter()
            .filter(|p| p.ratio == ratio)
            .max_by(|a, b| a.width().partial_cmp(&b.width()).expect("finite widths"))
    }

    pub fn plateau_width(&self, ratio: Rational<i64>) -> T {
        self.plateau(ratio).map_or(T::zero(), Plateau::width)
    }
}

/// Smallest-denominator fraction within `tol` of `x`.
fn locked_ratio<T: Real>(x: T, tol: T, max_den: i64) -> Option<Rational<i64>> {
    (1..=max_den).find_map(|q| {
        let qf = T::from(q)?;
        let p = (x * qf).round();
        if (x - p / qf).abs() < tol {
            Rational::new(p.to_i64()?, q).ok()
        } else {
            None
        }
    })
}

/// Winding numbers over `omega_grid` (evaluated in parallel, returned in grid
/// order) and the plateaus of at least two consecutive locked points.
pub fn staircase_scan<T: Real>(c: T, omega_grid: &[T], opts: &StaircaseOptions<T>) -> Result<Staircase<T>> {
    if omega_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Parameter("Ω grid must be strictly increasing".into()));
    }
    ArnoldParams::new(T::zero(), c, opts.phi0)?;
    let nus = omega_grid
        .par_iter()
        .map(|&omega| winding_number(ArnoldParams { omega, c, phi0: opts.phi0 }, opts.n_transient, opts.n_iter))
        .collect::<Result<Vec<T>>>()?;
    let locks: Vec<Option<Rational<i64>>> = nus
        .iter()
        .map(|&nu| locked_ratio(nu, opts.plateau_tol, opts.max_denominator))
        .collect();

    let half = T::lit(0.5);
    let mut plateaus = Vec::new();
    let mut i = 0;
    while i < locks.len() {
        let Some(r) = locks[i] else {
            i += 1;
            continue;
        };
        let mut j = i;
        while j + 1 < locks.len() && locks[j + 1] == Some(r) {
            j += 1;
        }
        if j > i {
            let lo = if i > 0 { (omega_grid[i - 1] + omega_grid[i]) * half } else { omega_grid[i] };
            let hi = if j + 1 < omega_grid.len() {
                (omega_grid[j] + omega_grid[j + 1]) * half
            } else {
                omega_grid[j]
            };
            plateaus.push(Plateau { ratio: r, first: i, last: j, omega_lo: lo, omega_hi: hi });
        }
        i = j + 1;
    }
    Ok(Staircase {
        c,
        points: omega_grid.iter().copied().zip(nus).collect(),
        plateaus,
        overlap_warning: c >= T::one(),
    })
}

/// Uniform grid `lo, lo + step, …` up to and including `hi`.
pub fn uniform_grid<T: Real>(lo: T, hi: T, step: T) -> Vec<T> {
    let n = ((hi - lo) / step).round().to_usize().unwrap_or(0);
    (0..=n).map(|i| lo + step * T::from_usize_lossy(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn nu(omega: f64, c: f64, phi0: f64) -> f64 {
        winding_number(ArnoldParams::new(omega, c, phi0).unwrap(), 2000, 6000).unwrap()
    }

    #[test]
    fn pure_rotation() {
        for omega in [0.0, 0.1234, 0.5, 0.987] {
            assert!((nu(omega, 0.0, 0.3) - omega).abs() < 1e-12);
        }
    }

    #[test]
    fn half_tongue_interior() {
        let v = nu(0.5, 0.9, 0.1);
        assert!((v - 0.5).abs() < 1e-6, "{v}");
        // period-2 orbit check: Φ₂ − Φ₀ = 2π after transient
        let (step, c) = (PI, 0.9);
        let mut phi = 0.1f64;
        for _ in 0..5000 {
            phi = phi + step - c * phi.sin();
        }
        let p0 = phi;
        phi = phi + step - c * phi.sin();
        phi = phi + step - c * phi.sin();
        assert!((phi - p0 - 2.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn zero_tongue_interior() {
        let c = 0.5;
        assert!(nu(c / (2.0 * PI) * 0.99, c, 0.0).abs() < 1e-6);
    }

    #[test]
    fn lift_symmetries() {
        let samples = [
            (0.05, 0.3), (0.13, 0.6), (0.27, 0.9), (0.33, 0.5), (0.41, 0.1),
            (0.5, 0.9), (0.61, 0.7), (0.72, 0.2), (0.85, 0.95), (0.97, 0.4),
        ];
        for (omega, c) in samples {
            let base = nu(omega, c, 0.7);
            assert!((nu(omega, c, 0.7 + 2.0 * PI) - base).abs() < 1e-9);
            assert!((nu(omega + 1.0, c, 0.7) - base - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn few_iterations_rejected() {
        assert!(winding_number(ArnoldParams::new(0.1, 0.1, 0.0).unwrap(), 0, 999).is_err());
        assert!(ArnoldParams::new(0.1, -0.1, 0.0).is_err());
    }

    #[test]
    fn no_plateaus_without_coupling() {
        let grid = uniform_grid(0.0013, 0.9013, 1e-3);
        let s = staircase_scan(0.0, &grid, &StaircaseOptions::default()).unwrap();
        assert!(s.plateaus.is_empty(), "{:?}", s.plateaus);
        assert!(!s.overlap_warning);
    }

    #[test]
    fn plateau_edges_are_sharp() {
        let grid = uniform_grid(-0.2, 0.6, 1e-4);
        let opts = StaircaseOptions::default();
        let s = staircase_scan(0.9, &grid, &opts).unwrap();
        for r in [(0, 1), (1, 2), (1, 3)] {
            let ratio = Rational::new(r.0, r.1).unwrap();
            let pl = s.plateau(ratio).expect("tongue detected");
            let target = ratio.to_real::<f64>();
            for k in pl.first..=pl.last {
                assert!((s.points[k].1 - target).abs() < 1e-6);
            }
            for k in [pl.first - 1, pl.last + 1] {
                assert!((s.points[k].1 - target).abs() > 1e-4, "{ratio} edge {k}: {}", s.points[k].1);
            }
        }
        assert!(staircase_scan(1.2, &grid[..10], &opts).unwrap().overlap_warning);
    }

    #[test]
    fn ratio_detection_prefers_small_denominator() {
        assert_eq!(locked_ratio(0.5 + 1e-7, 1e-5, 16), Some(Rational::new(1, 2).unwrap()));
        assert_eq!(locked_ratio(0.123456, 1e-5, 16), None);
    }
}

//! Scattering coefficient of the modular surface and its critical-line phase.

use num_complex::Complex;

use super::real_pow;
use super::special::{gamma_complex, xi, zeta_complex};
use crate::arith::ArithTable;
use crate::{Error, Real, Result};

/// Smallest |denominator factor| accepted before a division is refused.
const CONDITION_FLOOR: f64 = 1e-12;

/// `S(s)` computed two ways, plus the factors of the second route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scattering<T> {
    pub s: Complex<T>,
    /// `ξ(2s−1)/ξ(2s)`.
    pub via_xi: Complex<T>,
    /// `A(s)·Z(s)`.
    pub via_az: Complex<T>,
    /// `A(s) = Γ(1/2)Γ(s−1/2)/Γ(s)`.
    pub a: Complex<T>,
    /// `Z(s) = ζ(2s−1)/ζ(2s)`.
    pub z: Complex<T>,
}

impl<T: Real> Scattering<T> {
    pub fn value(&self) -> Complex<T> {
        self.via_xi
    }

    /// Relative disagreement of the two routes.
    pub fn route_gap(&self) -> T {
        (self.via_xi - self.via_az).norm() / self.via_xi.norm()
    }
}

fn guard<T: Real>(value: Complex<T>, name: &str, s: Complex<T>) -> Result<Complex<T>> {
    let n = value.norm();
    if !n.is_finite() {
        return Err(Error::Conditioning(format!("{name} is not finite at s = {s}")));
    }
    if n < T::lit(CONDITION_FLOOR) {
        return Err(Error::Conditioning(format!("{name} = {value} is too close to zero at s = {s}")));
    }
    Ok(value)
}

fn relabel<T>(r: Result<T>, name: &str) -> Result<T> {
    r.map_err(|e| match e {
        Error::Singularity(m) => Error::Conditioning(format!("{name}: {m}")),
        other => other,
    })
}

/// Scattering coefficient `S(s) = ξ(2s−1)/ξ(2s) = A(s)Z(s)`.
pub fn scattering_coefficient<T: Real>(s: Complex<T>) -> Result<Scattering<T>> {
    let one = Complex::new(T::one(), T::zero());
    let two_s = s * T::lit(2.0);
    let num_xi = relabel(xi(two_s - one), "ξ(2s−1)")?;
    // Γ has no zeros, so ξ(2s) vanishes only with ζ(2s), which is guarded below;
    // its magnitude decays like e^{−π|Im s|/2} and is not itself a condition signal.
    let den_xi = relabel(xi(two_s), "ξ(2s)")?;
    let num_z = relabel(zeta_complex(two_s - one), "ζ(2s−1)")?;
    let den_z = guard(relabel(zeta_complex(two_s), "ζ(2s)")?, "ζ(2s)", s)?;
    let g_num = relabel(gamma_complex(s - T::lit(0.5)), "Γ(s−1/2)")?;
    let g_den = relabel(gamma_complex(s), "Γ(s)")?;
    let a = g_num * T::PI().sqrt() / g_den;
    let z = num_z / den_z;
    Ok(Scattering {
        s,
        via_xi: num_xi / den_xi,
        via_az: a * z,
        a,
        z,
    })
}

/// Critical-line phase sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint<T> {
    pub k: T,
    /// `½ arg Z(1/2 + ik)`, unwrapped along the grid.
    pub kappa: T,
    /// Central difference of `κ` with step 10⁻³.
    pub kappa_prime: T,
    /// `½ arg S(1/2 + ik)`, unwrapped the same way.
    pub kappa_exact: T,
    /// `κ_exact − κ`: the smooth contribution of `A`.
    pub a_phase: T,
    pub s_modulus: T,
}

pub const PHASE_STEP: f64 = 1e-3;

fn wrap_pi<T: Real>(x: T) -> T {
    let two_pi = T::TAU();
    let mut y = x % two_pi;
    if y > T::PI() {
        y -= two_pi;
    } else if y <= -T::PI() {
        y += two_pi;
    }
    y
}

/// Unwraps `raw` phases in place, continuing from index `seed` outward.
fn unwrap_from<T: Real>(raw: &mut [T], seed: usize, ks: &[T]) -> Result<()> {
    let limit = T::FRAC_PI_2();
    let step = |prev: T, cur: T, k: T| -> Result<T> {
        let d = wrap_pi(cur - prev);
        if d.abs() >= limit {
            return Err(Error::Parameter(format!(
                "phase jumps by {d} near k = {k}; refine the grid"
            )));
        }
        Ok(prev + d)
    };
    for i in seed + 1..raw.len() {
        raw[i] = step(raw[i - 1], raw[i], ks[i])?;
    }
    for i in (0..seed).rev() {
        raw[i] = step(raw[i + 1], raw[i], ks[i])?;
    }
    Ok(())
}

/// `κ(k)` and `κ′(k)` over a strictly increasing grid avoiding `k = 0`.
///
/// Positive and negative k are unwrapped separately, each seeded on the
/// principal branch at its smallest |k|; this keeps `κ(−k) = −κ(k)` exact.
pub fn scattering_phase<T: Real>(k_grid: &[T]) -> Result<Vec<PhasePoint<T>>> {
    if k_grid.is_empty() {
        return Err(Error::Parameter("empty k grid".into()));
    }
    if k_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Parameter("k grid must be strictly increasing".into()));
    }
    let h = T::lit(PHASE_STEP);
    if let Some(k) = k_grid.iter().find(|k| k.abs() <= h * T::lit(2.0)) {
        return Err(Error::Singularity(format!(
            "k = {k} is within 2h of the k = 0 singularity of the critical-line phase"
        )));
    }
    let half = T::lit(0.5);
    let at = |k: T| scattering_coefficient(Complex::new(half, k));
    let samples = k_grid.iter().map(|&k| at(k)).collect::<Result<Vec<_>>>()?;
    let mut z_arg: Vec<T> = samples.iter().map(|v| v.z.arg()).collect();
    let mut s_arg: Vec<T> = samples.iter().map(|v| v.via_xi.arg()).collect();

    let split = k_grid.iter().position(|&k| k > T::zero()).unwrap_or(k_grid.len());
    for (lo, hi) in [(0, split), (split, k_grid.len())] {
        if lo == hi {
            continue;
        }
        let seed = if hi == split { hi - 1 } else { lo };
        let ks = &k_grid[lo..hi];
        unwrap_from(&mut z_arg[lo..hi], seed - lo, ks)?;
        unwrap_from(&mut s_arg[lo..hi], seed - lo, ks)?;
    }

    k_grid
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let (zp, zm) = (at(k + h)?.z, at(k - h)?.z);
            let kappa_prime = wrap_pi(zp.arg() - zm.arg()) * half / (h * T::lit(2.0));
            Ok(PhasePoint {
                k,
                kappa: z_arg[i] * half,
                kappa_prime,
                kappa_exact: s_arg[i] * half,
                a_phase: (s_arg[i] - z_arg[i]) * half,
                s_modulus: samples[i].via_xi.norm(),
            })
        })
        .collect()
}

/// Link between the log-derivative of `Z(s) = B(2s−1)`, `B(w) = ζ(w)/ζ(w+1)`,
/// and Mangoldt-type Dirichlet series, valid for `Re s > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDerivativeDiagnostic {
    pub s: Complex<f64>,
    /// `−Z′(s)/Z(s)` by a fourth-order central difference.
    pub numeric: Complex<f64>,
    /// `2 Σ_{n≤N} b(n) n^{1−2s}` with `b(n) = Λ(n)φ(n)/n`.
    pub b_series: Complex<f64>,
    /// `2 Σ_{n≤N} Λ(n)(1 − 1/n) n^{1−2s}`, the exact coefficients of `−B′/B`.
    pub exact_series: Complex<f64>,
    pub terms: u64,
    /// Bound on the tail `2 Σ_{n>N} ln n · n^{1−2Re s}`.
    pub tail_bound: f64,
}

impl LogDerivativeDiagnostic {
    pub fn b_gap(&self) -> f64 {
        (self.numeric - self.b_series).norm()
    }

    pub fn exact_gap(&self) -> f64 {
        (self.numeric - self.exact_series).norm()
    }
}

pub fn log_derivative_diagnostic(table: &ArithTable, s: Complex<f64>) -> Result<LogDerivativeDiagnostic> {
    if s.re <= 1.0 {
        return Err(Error::Domain(format!(
            "Re s = {} ≤ 1: the Dirichlet series for −Z′/Z diverges",
            s.re
        )));
    }
    let z = |w: Complex<f64>| scattering_coefficient(w).map(|v| v.z);
    let h = 1e-3;
    let dz = (z(s + h)? - z(s - h)?) * 8.0 - (z(s + 2.0 * h)? - z(s - 2.0 * h)?);
    let numeric = -(dz / (12.0 * h)) / z(s)?;

    let n_max = table.limit() as u64;
    let w = s * 2.0 - 1.0;
    let mut b_series = Complex::new(0.0, 0.0);
    let mut exact_series = Complex::new(0.0, 0.0);
    for n in 2..=n_max {
        let lambda = table.mangoldt(n)?;
        if lambda == 0.0 {
            continue;
        }
        let nf = n as f64;
        let pw = real_pow(nf, -w);
        b_series += pw * (lambda * table.totient(n)? as f64 / nf);
        exact_series += pw * (lambda * (1.0 - 1.0 / nf));
    }
    // Σ_{n>N} ln n · n^{−σ} ≤ ∫_N^∞ ln x · x^{−σ} dx
    let sigma = w.re;
    let nf = n_max as f64;
    let tail = nf.powf(1.0 - sigma) * (nf.ln() / (sigma - 1.0) + 1.0 / (sigma - 1.0).powi(2));
    Ok(LogDerivativeDiagnostic {
        s,
        numeric,
        b_series: b_series * 2.0,
        exact_series: exact_series * 2.0,
        terms: n_max,
        tail_bound: 2.0 * tail,
    })
}

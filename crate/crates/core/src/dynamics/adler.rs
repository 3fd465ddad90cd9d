use num_integer::Integer;

use super::ode::{integrate, OdeOptions};
use crate::arith::totient_of;
use crate::confrac::Rational;
use crate::{Error, Real, Result};

/// Adler phase equation `dΦ/dt = ω_LF − K sin Φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdlerParams<T> {
    /// Open-loop gain K (rad/s).
    pub k: T,
    /// Detuning ω_LF (rad/s).
    pub omega_lf: T,
    /// Initial phase (rad).
    pub phi0: T,
}

impl<T: Real> AdlerParams<T> {
    pub fn new(k: T, omega_lf: T, phi0: T) -> Result<Self> {
        if !(k >= T::zero()) || !k.is_finite() {
            return Err(Error::Parameter(format!("gain K = {k} must be finite and ≥ 0")));
        }
        if !omega_lf.is_finite() || !phi0.is_finite() {
            return Err(Error::Parameter("detuning and phase must be finite".into()));
        }
        Ok(Self { k, omega_lf, phi0 })
    }

    pub fn is_locked(&self) -> bool {
        self.omega_lf.abs() <= self.k
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime<T> {
    /// `|ω_LF| ≤ K`: phase settles; value wrapped to (−π, π].
    Locked { phase: T },
    /// Outside the locking zone: mean beat frequency ⟨dΦ/dt⟩.
    Unlocked { mean_frequency: T },
}

#[derive(Debug, Clone)]
pub struct AdlerOutcome<T> {
    pub times: Vec<T>,
    pub phase: Vec<T>,
    /// ⟨dΦ/dt⟩ over whole beat periods of the later part of the run.
    pub mean_frequency: T,
    pub regime: Option<Regime<T>>,
}

impl<T: Real> AdlerOutcome<T> {
    pub fn final_phase(&self) -> T {
        *self.phase.last().expect("non-empty trajectory")
    }
}

/// Beat frequency `√(ω_LF² − K²)` outside the locking zone.
pub fn beat_frequency<T: Real>(omega_lf: T, k: T) -> Result<T> {
    if omega_lf.abs() < k {
        return Err(Error::Domain(format!(
            "|ω_LF| = {} < K = {k}: locked regime has no beat",
            omega_lf.abs()
        )));
    }
    Ok((omega_lf * omega_lf - k * k).sqrt())
}

/// Factor `(1 + K²/ω̃²)^{1/2}` by which detuning jitter is magnified in the beat.
pub fn allan_magnification<T: Real>(omega_lf: T, k: T) -> Result<T> {
    if omega_lf.abs() <= k && k > T::zero() {
        return Err(Error::Domain(format!(
            "|ω_LF| = {} ≤ K = {k}: magnification diverges at and inside the locking zone",
            omega_lf.abs()
        )));
    }
    let beat = beat_frequency(omega_lf, k)?;
    Ok((T::one() + k * k / (beat * beat)).sqrt())
}

fn wrap<T: Real>(x: T) -> T {
    let two_pi = T::TAU();
    let mut y = x % two_pi;
    if y > T::PI() {
        y -= two_pi;
    } else if y <= -T::PI() {
        y += two_pi;
    }
    y
}

fn output_grid<T: Real>(t_end: T, fastest: T) -> Vec<T> {
    // ~64 samples per fastest period, bounded
    let periods = (t_end * fastest / T::TAU()).to_f64_lossy();
    let n = ((periods * 64.0).ceil() as usize).clamp(4096, 2_000_000);
    (0..=n)
        .map(|i| t_end * T::from_usize_lossy(i) / T::from_usize_lossy(n))
        .collect()
}

/// Mean slope between the first and last crossings of `Φ_ref + 2πm` after
/// `t_end/4`, located by cubic Hermite interpolation; falls back to the plain
/// second-half average when fewer than two crossings exist.
fn mean_frequency<T: Real>(times: &[T], phase: &[T], mut rate: impl FnMut(T, T) -> T) -> T {
    let n = times.len();
    let t_end = times[n - 1];
    let start = times.iter().position(|&t| t >= t_end / T::lit(4.0)).unwrap_or(0);
    let two_pi = T::TAU();
    let level_of = |x: T| (x / two_pi).floor();
    let mut first: Option<(T, T)> = None;
    let mut last: Option<(T, T)> = None;
    for i in start..n - 1 {
        let (l0, l1) = (level_of(phase[i]), level_of(phase[i + 1]));
        if l0 == l1 {
            continue;
        }
        let level = if l1 > l0 { l1 } else { l0 } * two_pi;
        let (t0, t1, y0, y1) = (times[i], times[i + 1], phase[i], phase[i + 1]);
        let h = t1 - t0;
        let (d0, d1) = (rate(t0, y0) * h, rate(t1, y1) * h);
        let hermite = |s: T| {
            let s2 = s * s;
            let s3 = s2 * s;
            let two = T::lit(2.0);
            let three = T::lit(3.0);
            (two * s3 - three * s2 + T::one()) * y0
                + (s3 - two * s2 + s) * d0
                + (-two * s3 + three * s2) * y1
                + (s3 - s2) * d1
        };
        // bisection on the interpolant, which is monotone across a crossing
        let (mut lo, mut hi) = (T::zero(), T::one());
        let rising = y1 > y0;
        for _ in 0..60 {
            let mid = (lo + hi) / T::lit(2.0);
            if (hermite(mid) < level) == rising {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let tc = t0 + h * (lo + hi) / T::lit(2.0);
        if first.is_none() {
            first = Some((tc, level));
        }
        last = Some((tc, level));
    }
    match (first, last) {
        (Some((ta, la)), Some((tb, lb))) if tb > ta => (lb - la) / (tb - ta),
        _ => {
            let mid = n / 2;
            (phase[n - 1] - phase[mid]) / (times[n - 1] - times[mid])
        }
    }
}

/// Integrates the Adler equation to `t_end` with the adaptive 5(4) scheme.
pub fn adler_integrate<T: Real>(params: AdlerParams<T>, t_end: T, tol: T) -> Result<AdlerOutcome<T>> {
    if !(tol > T::zero()) {
        return Err(Error::Parameter("tolerance must be positive".into()));
    }
    if !(t_end > T::zero()) {
        return Err(Error::Parameter("t_end must be positive".into()));
    }
    let AdlerParams { k, omega_lf, phi0 } = params;
    let rhs = move |_t: T, y: &[T; 1]| [omega_lf - k * y[0].sin()];
    let grid = output_grid(t_end, k.max(omega_lf.abs()));
    let traj = integrate(rhs, T::zero(), [phi0], &grid, &OdeOptions::with_tol(tol))?;
    let phase: Vec<T> = traj.y.iter().map(|y| y[0]).collect();
    let mean = mean_frequency(&traj.t, &phase, |_, y| omega_lf - k * y.sin());
    let regime = if params.is_locked() && k > T::zero() {
        Regime::Locked {
            phase: wrap(*phase.last().expect("grid non-empty")),
        }
    } else {
        Regime::Unlocked { mean_frequency: mean }
    };
    Ok(AdlerOutcome {
        times: traj.t,
        phase,
        mean_frequency: mean,
        regime: Some(regime),
    })
}

/// One harmonic `r/s` of the phase detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicTerm<T> {
    pub r: u64,
    pub s: u64,
    /// K(r, s) in rad/s.
    pub gain: T,
    /// Reference angle Φ₀(r, s).
    pub phase0: T,
}

impl<T: Real> HarmonicTerm<T> {
    pub fn new(r: u64, s: u64, gain: T, phase0: T) -> Result<Self> {
        if r == 0 || s == 0 || r.gcd(&s) != 1 {
            return Err(Error::Precondition(format!(
                "harmonic {r}/{s} must have positive coprime indices"
            )));
        }
        Ok(Self { r, s, gain, phase0 })
    }

    /// Gain `K/φ(s)`: each of the φ(s) harmonics with denominator `s` shares the
    /// coupling equally.
    pub fn with_default_gain(r: u64, s: u64, k: T) -> Result<Self> {
        let phi = T::from(totient_of(s)).unwrap_or_else(T::nan);
        Self::new(r, s, k / phi, T::zero())
    }
}

/// Loop transfer function H(P).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LoopFilter<T> {
    Identity,
    /// First-order low-pass `1/(1 + τP)`.
    LowPass { tau: T },
}

/// Phase equation at the harmonic `p/q` forced by every term in `terms`:
///
/// `dΦ/dt = ω_LF − q·H(P)·Σ K(r,s) sin((s/q)Φ − (ω₀t/q)(qr − ps) + Φ₀(r,s))`.
///
/// With `terms = [(p, q)]`, zero reference angle and `H = 1` this is the
/// Adler equation with gain `q·K(p, q)`.
#[allow(clippy::too_many_arguments)]
pub fn harmonic_adler_integrate<T: Real>(
    omega0: T,
    target: Rational<i64>,
    terms: &[HarmonicTerm<T>],
    omega_lf: T,
    phi0: T,
    t_end: T,
    tol: T,
    filter: LoopFilter<T>,
) -> Result<AdlerOutcome<T>> {
    if terms.is_empty() {
        return Err(Error::Precondition("at least one harmonic term is required".into()));
    }
    for term in terms {
        HarmonicTerm::new(term.r, term.s, term.gain, term.phase0)?;
    }
    if !(tol > T::zero()) || !(t_end > T::zero()) {
        return Err(Error::Parameter("tolerance and t_end must be positive".into()));
    }
    let p = target.numer();
    let q = target.denom();
    if p < 0 {
        return Err(Error::Parameter("target harmonic must be non-negative".into()));
    }
    let qf = T::from(q).unwrap_or_else(T::nan);
    let coeffs: Vec<(T, T, T, T)> = terms
        .iter()
        .map(|h| {
            let slip = (q as i128) * (h.r as i128) - (p as i128) * (h.s as i128);
            let s_over_q = T::from(h.s).unwrap_or_else(T::nan) / qf;
            let drive = omega0 * T::from(slip).unwrap_or_else(T::nan) / qf;
            (h.gain, s_over_q, drive, h.phase0)
        })
        .collect();
    let fastest = coeffs
        .iter()
        .map(|c| c.2.abs())
        .fold(omega_lf.abs(), T::max)
        .max(qf * terms.iter().map(|h| h.gain.abs()).fold(T::zero(), T::max));
    let forcing = move |t: T, phi: T| {
        coeffs
            .iter()
            .map(|&(g, sq, w, ph)| g * (sq * phi - w * t + ph).sin())
            .fold(T::zero(), |a, b| a + b)
    };
    let grid = output_grid(t_end, fastest);
    let opts = OdeOptions::with_tol(tol);

    let (times, phase) = match filter {
        LoopFilter::Identity => {
            let f = forcing.clone();
            let traj = integrate(
                move |t, y: &[T; 1]| [omega_lf - qf * f(t, y[0])],
                T::zero(),
                [phi0],
                &grid,
                &opts,
            )?;
            (traj.t, traj.y.iter().map(|y| y[0]).collect::<Vec<_>>())
        }
        LoopFilter::LowPass { tau } => {
            if !(tau > T::zero()) {
                return Err(Error::Parameter("low-pass time constant must be positive".into()));
            }
            let f = forcing.clone();
            let u0 = forcing(T::zero(), phi0);
            let traj = integrate(
                move |t, y: &[T; 2]| [omega_lf - qf * y[1], (f(t, y[0]) - y[1]) / tau],
                T::zero(),
                [phi0, u0],
                &grid,
                &opts,
            )?;
            (traj.t, traj.y.iter().map(|y| y[0]).collect::<Vec<_>>())
        }
    };
    // Hermite slopes from the unfiltered field; only used to place crossings.
    let mean = mean_frequency(&times, &phase, |t, y| omega_lf - qf * forcing(t, y));
    Ok(AdlerOutcome {
        times,
        phase,
        mean_frequency: mean,
        regime: None,
    })
}

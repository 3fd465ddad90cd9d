//! Bost–Connes partition function, KMS values and the operator actions.

use num_complex::Complex;
use num_integer::Integer;

use crate::arith::ArithTable;
use crate::{Error, Real, Result};

/// `Σ_{n≤N} n^{−β}` with integral bounds on the tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partition<T> {
    pub beta: T,
    pub n_max: u64,
    pub partial_sum: T,
    /// `∫_{N+1}^∞ x^{−β} dx ≤ tail ≤ ∫_N^∞ x^{−β} dx`.
    pub tail_lower: T,
    pub tail_upper: T,
    /// Partial sum plus the Euler–Maclaurin tail `N^{1−β}/(β−1) − N^{−β}/2`.
    pub estimate: T,
}

impl<T: Real> Partition<T> {
    pub fn lower(&self) -> T {
        self.partial_sum + self.tail_lower
    }

    pub fn upper(&self) -> T {
        self.partial_sum + self.tail_upper
    }
}

fn check_beta<T: Real>(beta: T) -> Result<()> {
    if !(beta > T::one()) || !beta.is_finite() {
        return Err(Error::Domain(format!(
            "β = {beta} ≤ 1: the partition function diverges at the pole of the Riemann zeta function"
        )));
    }
    Ok(())
}

pub fn bc_partition<T: Real>(beta: T, n_max: u64) -> Result<Partition<T>> {
    check_beta(beta)?;
    if n_max == 0 {
        return Err(Error::Parameter("n_max must be ≥ 1".into()));
    }
    let nf = |n: u64| T::from(n).unwrap_or_else(T::nan);
    // smallest terms first
    let partial_sum = (1..=n_max).rev().fold(T::zero(), |acc, n| acc + nf(n).powf(-beta));
    let bm1 = beta - T::one();
    let tail = |x: T| x.powf(-bm1) / bm1;
    let n = nf(n_max);
    Ok(Partition {
        beta,
        n_max,
        partial_sum,
        tail_lower: tail(n + T::one()),
        tail_upper: tail(n),
        estimate: partial_sum + tail(n) - n.powf(-beta) / T::lit(2.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KmsPoint<T> {
    pub q: u64,
    pub beta: T,
    pub value: T,
}

/// `q^{−β} Π_{p | q} (1 − p^{β−1})/(1 − p^{−1})`.
pub fn kms_expectation<T: Real>(table: &ArithTable, q: u64, beta: T) -> Result<KmsPoint<T>> {
    check_beta(beta)?;
    if q == 0 {
        return Err(Error::Parameter("q must be ≥ 1".into()));
    }
    let qf = T::from(q).unwrap_or_else(T::nan);
    let mut value = qf.powf(-beta);
    for (p, _) in table.factorize(q)? {
        let pf = T::from(p).unwrap_or_else(T::nan);
        // 1 − p^{β−1} = −expm1((β−1) ln p), exact to first order near β = 1
        let num = -((beta - T::one()) * pf.ln()).exp_m1();
        value *= num / (T::one() - pf.recip());
    }
    Ok(KmsPoint { q, beta, value })
}

/// `μ(q)/φ(q)`.
pub fn kms_low_temperature_limit(table: &ArithTable, q: u64) -> Result<f64> {
    Ok(table.moebius(q)? as f64 / table.totient(q)? as f64)
}

/// `KMS(q, 1+ε)·q/ε`, to be compared with `−Λ(q)`.
pub fn kms_near_pole_scaled(table: &ArithTable, q: u64, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::Parameter("ε must be positive".into()));
    }
    Ok(kms_expectation(table, q, 1.0 + eps)?.value * q as f64 / eps)
}

/// `μ_q|n⟩ = |qn⟩`.
pub fn shift_action(q: u64, n: u64) -> Result<u64> {
    if q == 0 {
        return Err(Error::Parameter("q must be ≥ 1".into()));
    }
    q.checked_mul(n).ok_or(Error::Overflow("shifted number state"))
}

/// Phase `e^{2πi pn/q}` picked up by `|n⟩` under `e_q^{(p)}`.
pub fn phase_action<T: Real>(q: u64, p: i64, n: u64) -> Result<Complex<T>> {
    if q == 0 {
        return Err(Error::Parameter("q must be ≥ 1".into()));
    }
    if p.unsigned_abs().gcd(&q) != 1 {
        return Err(Error::Precondition(format!("gcd({p}, {q}) ≠ 1")));
    }
    let r = (p.rem_euclid(q as i64) as u128 * n as u128 % q as u128) as u64;
    if r == 0 {
        return Ok(Complex::new(T::one(), T::zero()));
    }
    let angle = T::TAU() * T::from(r).unwrap_or_else(T::nan) / T::from(q).unwrap_or_else(T::nan);
    Ok(Complex::from_polar(T::one(), angle))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorAction<T> {
    pub shifted: u64,
    pub phase: Complex<T>,
}

pub fn operator_actions<T: Real>(q: u64, p: i64, n: u64) -> Result<OperatorAction<T>> {
    Ok(OperatorAction {
        shifted: shift_action(q, n)?,
        phase: phase_action(q, p, n)?,
    })
}

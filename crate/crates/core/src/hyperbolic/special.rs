//! Complex Gamma, Riemann zeta and the completed zeta ξ.

use num_complex::Complex;

use crate::{Error, Real, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn c<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

fn is_nonpositive_integer<T: Real>(s: Complex<T>) -> bool {
    s.im == T::zero() && s.re <= T::zero() && s.re == s.re.round()
}

/// ln Γ(s) for `Re s ≥ 1/2` (Lanczos, g = 7).
fn ln_gamma_right<T: Real>(s: Complex<T>) -> Complex<T> {
    let z = s - T::one();
    let mut a = c(T::lit(LANCZOS[0]));
    for (i, &coef) in LANCZOS.iter().enumerate().skip(1) {
        a += c(T::lit(coef)) / (z + T::from_usize_lossy(i));
    }
    let t = z + T::lit(LANCZOS_G + 0.5);
    let half_ln_2pi = T::lit(0.918_938_533_204_672_8);
    (z + T::lit(0.5)) * t.ln() - t + a.ln() + half_ln_2pi
}

/// Γ(s), with reflection `Γ(s)Γ(1−s) = π/sin(πs)` for `Re s < 1/2`.
pub fn gamma_complex<T: Real>(s: Complex<T>) -> Result<Complex<T>> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::Parameter(format!("Γ of non-finite argument {s}")));
    }
    if is_nonpositive_integer(s) {
        return Err(Error::Singularity(format!("Γ has a pole at {s}")));
    }
    if s.re >= T::lit(0.5) {
        return Ok(ln_gamma_right(s).exp());
    }
    let pi = T::PI();
    let sin = (s * pi).sin();
    if sin.norm() == T::zero() {
        return Err(Error::Singularity(format!("Γ has a pole at {s}")));
    }
    let one = c(T::one());
    Ok(c(pi) / (sin * ln_gamma_right(one - s).exp()))
}

/// Below this |1 − 2^{1−s}| the eta route loses too many digits.
const ETA_CONDITION: f64 = 1e-3;
/// Largest Borwein order before the d_k overflow double range.
const BORWEIN_MAX: usize = 380;

/// Borwein's accelerated alternating series for η(s), `n` terms.
fn eta_borwein<T: Real>(s: Complex<T>, n: usize) -> Complex<T> {
    // d_k = n Σ_{i≤k} (n+i−1)! 4^i / ((n−i)! (2i)!), built incrementally
    let nf = T::from_usize_lossy(n);
    let mut d = Vec::with_capacity(n + 1);
    let mut term = T::one();
    let mut sum = T::one();
    d.push(sum);
    for i in 0..n {
        let fi = T::from_usize_lossy(i);
        term = term * T::lit(4.0) * (nf + fi) * (nf - fi) / ((T::lit(2.0) * fi + T::one()) * (T::lit(2.0) * fi + T::lit(2.0)));
        sum += term;
        d.push(sum);
    }
    let dn = d[n];
    let mut acc = c(T::zero());
    for k in 0..n {
        let w = (d[k] - dn) / dn;
        let base = (-s * T::from_usize_lossy(k + 1).ln()).exp();
        if k % 2 == 0 {
            acc += base * w;
        } else {
            acc -= base * w;
        }
    }
    -acc
}

const BERNOULLI_2J: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Euler–Maclaurin summation of Σ n^{−s} with the tail integral and ten
/// Bernoulli corrections.
pub(crate) fn zeta_euler_maclaurin<T: Real>(s: Complex<T>) -> Complex<T> {
    let big_n = 30 + (2.0 * s.norm().to_f64_lossy()).ceil() as usize;
    let nf = T::from_usize_lossy(big_n);
    let ln_n = nf.ln();
    let mut acc = c(T::zero());
    for k in 1..big_n {
        acc += (-s * T::from_usize_lossy(k).ln()).exp();
    }
    let n_pow = (-s * ln_n).exp(); // N^{−s}
    acc = acc + n_pow * nf / (s - T::one()) + n_pow * T::lit(0.5);
    // B_{2j}/(2j)! · s(s+1)…(s+2j−2) · N^{−s−2j+1}
    let mut rising = s; // s(s+1)…(s+2j−2)
    let mut fact = T::lit(2.0); // (2j)!
    let mut npow = n_pow / nf; // N^{−s−2j+1}
    for (j, &b) in BERNOULLI_2J.iter().enumerate() {
        let jj = T::from_usize_lossy(j + 1);
        acc += rising * npow * (T::lit(b) / fact);
        let two_j = T::lit(2.0) * jj;
        rising = rising * (s + two_j - T::one()) * (s + two_j);
        fact = fact * (two_j + T::one()) * (two_j + T::lit(2.0));
        npow /= nf * nf;
    }
    acc
}

/// ζ(s) for `Re s ≥ 1/2`.
fn zeta_right<T: Real>(s: Complex<T>) -> Complex<T> {
    let one = c(T::one());
    let factor = one - (one - s).scale(T::LN_2()).exp(); // 1 − 2^{1−s}
    let n = 24 + (1.8 * s.im.abs().to_f64_lossy()).ceil() as usize;
    if factor.norm() < T::lit(ETA_CONDITION) || n > BORWEIN_MAX {
        return zeta_euler_maclaurin(s);
    }
    eta_borwein(s, n) / factor
}

/// Riemann ζ(s): accelerated eta series for `Re s ≥ 1/2`, functional equation
/// `ζ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s) ζ(1−s)` to the left.
pub fn zeta_complex<T: Real>(s: Complex<T>) -> Result<Complex<T>> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::Parameter(format!("ζ of non-finite argument {s}")));
    }
    let one = c(T::one());
    if s == one {
        return Err(Error::Singularity("ζ has a pole at s = 1".into()));
    }
    if s.re >= T::lit(0.5) {
        return Ok(zeta_right(s));
    }
    if s == c(T::zero()) {
        return Ok(c(T::lit(-0.5)));
    }
    if is_nonpositive_integer(s) && (s.re / T::lit(2.0)) == (s.re / T::lit(2.0)).round() {
        return Ok(c(T::zero())); // trivial zeros
    }
    let pi = T::PI();
    let two_s = (s * T::LN_2()).exp();
    let pi_s1 = ((s - T::one()) * pi.ln()).exp();
    let sin = (s * (pi / T::lit(2.0))).sin();
    Ok(two_s * pi_s1 * sin * gamma_complex(one - s)? * zeta_right(one - s))
}

/// Completed zeta `ξ(s) = π^{−s/2} Γ(s/2) ζ(s)`; poles at 0 and 1.
pub fn xi<T: Real>(s: Complex<T>) -> Result<Complex<T>> {
    let half = s / T::lit(2.0);
    let pi_part = (-half * T::PI().ln()).exp();
    Ok(pi_part * gamma_complex(half)? * zeta_complex(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type C = Complex<f64>;

    #[test]
    fn gamma_values() {
        assert!((gamma_complex(C::new(5.0, 0.0)).unwrap() - 24.0).norm() < 1e-12);
        assert!((gamma_complex(C::new(0.5, 0.0)).unwrap() - PI.sqrt()).norm() < 1e-14);
        assert!((gamma_complex(C::new(-0.5, 0.0)).unwrap() + 2.0 * PI.sqrt()).norm() < 1e-13);
        for k in 0..4 {
            assert!(matches!(gamma_complex(C::new(-(k as f64), 0.0)), Err(Error::Singularity(_))));
        }
    }

    #[test]
    fn gamma_reflection_and_recurrence() {
        for s in [C::new(0.3, 2.0), C::new(0.7, -11.0), C::new(-2.4, 30.0), C::new(0.1, 55.0)] {
            let lhs = gamma_complex(s).unwrap() * gamma_complex(C::new(1.0, 0.0) - s).unwrap();
            let rhs = C::new(PI, 0.0) / (s * PI).sin();
            assert!(((lhs - rhs) / rhs).norm() < 1e-10, "{s}");
            let g1 = gamma_complex(s + 1.0).unwrap();
            assert!(((g1 - s * gamma_complex(s).unwrap()) / g1).norm() < 1e-10, "{s}");
        }
    }

    #[test]
    fn f32_instantiation() {
        let g = gamma_complex(Complex::<f32>::new(4.0, 0.0)).unwrap();
        assert!((g.re - 6.0).abs() < 1e-4);
        let z = zeta_complex(Complex::<f32>::new(2.0, 0.0)).unwrap();
        assert!((z.re - 1.644_934).abs() < 1e-4);
    }

    #[test]
    fn zeta_values() {
        let z2 = zeta_complex(C::new(2.0, 0.0)).unwrap();
        assert!((z2.re - PI * PI / 6.0).abs() < 1e-13 && z2.im.abs() < 1e-15);
        let zh = zeta_complex(C::new(0.5, 0.0)).unwrap();
        assert!((zh.re + 1.460_354_508_809_586_8).abs() < 1e-12);
        assert!((zeta_complex(C::new(0.0, 0.0)).unwrap().re + 0.5).abs() < 1e-15);
        assert!((zeta_complex(C::new(-1.0, 0.0)).unwrap().re + 1.0 / 12.0).abs() < 1e-13);
        assert!(zeta_complex(C::new(-2.0, 0.0)).unwrap().norm() < 1e-15);
        assert!(matches!(zeta_complex(C::new(1.0, 0.0)), Err(Error::Singularity(_))));
        // first nontrivial zero
        assert!(zeta_complex(C::new(0.5, 14.134_725_141_734_693)).unwrap().norm() < 1e-10);
    }

    #[test]
    fn zeta_conjugate_symmetry() {
        let s = C::new(0.5, 14.0);
        let a = zeta_complex(s).unwrap();
        let b = zeta_complex(s.conj()).unwrap();
        assert!((a.conj() - b).norm() < 1e-10);
    }

    #[test]
    fn eta_and_euler_maclaurin_agree() {
        for s in [C::new(0.5, 3.0), C::new(1.0, 2.0), C::new(2.0, 40.0), C::new(0.6, 59.0), C::new(3.0, 0.0)] {
            let one = C::new(1.0, 0.0);
            let factor = one - (one - s).scale(std::f64::consts::LN_2).exp();
            let n = 24 + (1.8 * s.im.abs()).ceil() as usize;
            let a = eta_borwein(s, n) / factor;
            let b = zeta_euler_maclaurin(s);
            assert!((a - b).norm() < 1e-11 * b.norm().max(1.0), "{s}: {a} vs {b}");
        }
    }

    #[test]
    fn zeta_near_eta_factor_zero() {
        // 1 − 2^{1−s} vanishes at s = 1 + 2πi/ln 2; the fallback keeps ζ accurate
        let t = 2.0 * PI / std::f64::consts::LN_2;
        for dt in [0.0, 1e-5, 1e-4] {
            let s = C::new(1.0, t + dt);
            let z = zeta_complex(s).unwrap();
            assert!((z - zeta_euler_maclaurin(s)).norm() < 1e-12);
        }
    }

    #[test]
    fn xi_functional_equation() {
        for s in [C::new(0.3, 4.0), C::new(2.5, -7.0), C::new(0.5, 21.0)] {
            let a = xi(s).unwrap();
            let b = xi(C::new(1.0, 0.0) - s).unwrap();
            assert!((a - b).norm() < 1e-10 * a.norm().max(1e-30), "{s}");
        }
    }
}

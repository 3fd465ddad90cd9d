//! Continued fractions as the receiver sees them: expansion, convergents, the
//! diophantine bound, the low-pass truncation rule and the resulting basin
//! edges, plus Farey sequences and Ford circles.

mod rational;

pub use rational::{Int, Rational};

use crate::{Error, Real, Result};

/// `{a0; a1, …, an}` with `a_i ≥ 1` for `i ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction<I> {
    a0: I,
    quotients: Vec<I>,
    truncated: bool,
}

impl<I: Int> ContinuedFraction<I> {
    pub fn new(a0: I, quotients: Vec<I>) -> Result<Self> {
        if let Some(bad) = quotients.iter().find(|a| **a < I::one()) {
            return Err(Error::Parameter(format!("partial quotient {bad} must be ≥ 1")));
        }
        Ok(Self {
            a0,
            quotients,
            truncated: false,
        })
    }

    /// Exact expansion of a rational (Euclid). Always canonical: the last
    /// quotient is ≥ 2 unless the expansion is the single term `{a0;}`.
    pub fn from_rational(x: Rational<I>, max_terms: usize) -> Result<Self> {
        if max_terms == 0 {
            return Err(Error::Parameter("max_terms must be ≥ 1".into()));
        }
        let (mut p, mut q) = (x.numer(), x.denom());
        let a0 = p.div_floor(&q);
        let mut r = p - a0 * q;
        let mut quotients = Vec::new();
        while !r.is_zero() && quotients.len() + 1 < max_terms {
            p = q;
            q = r;
            let a = p / q;
            r = p - a * q;
            quotients.push(a);
        }
        Ok(Self {
            a0,
            quotients,
            truncated: !r.is_zero(),
        })
    }

    /// Expansion of a floating point number, stopping at `max_terms` or at the
    /// precision horizon, where the residual reciprocal exceeds 1/ε. Reaching
    /// either limit with a non-zero residual sets [`is_truncated`](Self::is_truncated).
    pub fn from_real<T: Real>(x: T, max_terms: usize) -> Result<Self> {
        if max_terms == 0 {
            return Err(Error::Parameter("max_terms must be ≥ 1".into()));
        }
        if !x.is_finite() {
            return Err(Error::Parameter("cannot expand a non-finite value".into()));
        }
        let to_int = |v: T| I::from(v).ok_or(Error::Overflow("partial quotient"));
        let eps = T::epsilon();
        let a0f = x.floor();
        let a0 = to_int(a0f)?;
        let mut frac = x - a0f;
        // running bound on the absolute error of `frac`; each reciprocal
        // amplifies it by about r²
        let mut err = T::lit(16.0) * eps * x.abs().max(T::one());
        let mut quotients: Vec<I> = Vec::new();
        let mut truncated = false;
        while frac > err {
            if quotients.len() + 1 >= max_terms {
                truncated = true;
                break;
            }
            let r = frac.recip();
            err = err * r * r / (T::one() - err * r).max(T::lit(0.5)) + eps * r;
            // a reciprocal within its error bound of an integer is that integer
            let nearest = r.round();
            if (r - nearest).abs() <= err && nearest >= T::one() {
                quotients.push(to_int(nearest)?);
                frac = T::zero();
                break;
            }
            let a = r.floor();
            quotients.push(to_int(a)?);
            frac = r - a;
        }
        if !truncated {
            if frac > T::zero() {
                truncated = true;
            }
            // fold a trailing 1 into its predecessor
            if !truncated && !quotients.is_empty() && quotients.last() == Some(&I::one()) {
                quotients.pop();
                match quotients.last_mut() {
                    Some(last) => *last = *last + I::one(),
                    None => {
                        return Ok(Self {
                            a0: a0 + I::one(),
                            quotients,
                            truncated,
                        })
                    }
                }
            }
        }
        Ok(Self {
            a0,
            quotients,
            truncated,
        })
    }

    pub fn a0(&self) -> I {
        self.a0
    }

    pub fn quotients(&self) -> &[I] {
        &self.quotients
    }

    /// Number of terms including `a0`.
    pub fn len(&self) -> usize {
        self.quotients.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// All terms `a0, a1, …`.
    pub fn terms(&self) -> Vec<I> {
        std::iter::once(self.a0).chain(self.quotients.iter().copied()).collect()
    }

    /// Convergent ladder from the 2×2 product `Π [[a_i, 1], [1, 0]]`.
    pub fn convergents(&self) -> Result<Vec<Rational<I>>> {
        let ov = || Error::Overflow("convergent recursion");
        let (mut p_prev, mut q_prev) = (I::one(), I::zero());
        let (mut p, mut q) = (self.a0, I::one());
        let mut out = vec![Rational::reduced(p, q)?];
        for &a in &self.quotients {
            let p_next = a.checked_mul(&p).and_then(|x| x.checked_add(&p_prev)).ok_or_else(ov)?;
            let q_next = a.checked_mul(&q).and_then(|x| x.checked_add(&q_prev)).ok_or_else(ov)?;
            p_prev = p;
            q_prev = q;
            p = p_next;
            q = q_next;
            out.push(Rational::reduced(p, q)?);
        }
        Ok(out)
    }

    /// Exact value of the (possibly truncated) expansion.
    pub fn value(&self) -> Result<Rational<I>> {
        Ok(*self.convergents()?.last().expect("at least a0"))
    }

    /// The other representation of the same rational: the last term `a_n`
    /// replaced by `a_n − 1, 1`.
    pub fn alternate(&self) -> Self {
        let mut terms = self.terms();
        let last = terms.last_mut().expect("non-empty");
        *last = *last - I::one();
        terms.push(I::one());
        Self::from_terms(&terms)
    }

    fn from_terms(terms: &[I]) -> Self {
        Self {
            a0: terms[0],
            quotients: terms[1..].to_vec(),
            truncated: false,
        }
    }

    fn with_appended(&self, a: I) -> Self {
        let mut terms = self.terms();
        terms.push(a);
        Self::from_terms(&terms)
    }
}

/// `|x − p/q| ≤ 1/(a·q²)` with `a` the next partial quotient.
///
/// A relative slack of a few ulps absorbs the rounding in `x` itself.
pub fn dioph_check<I: Int, T: Real>(x: T, conv: &Rational<I>, next_quotient: u64) -> bool {
    let q: T = T::from(conv.denom()).unwrap_or_else(T::nan);
    let err = (x - conv.to_real::<T>()).abs();
    let bound = (T::from(next_quotient).unwrap_or_else(T::nan) * q * q).recip();
    err <= bound * (T::one() + T::lit(8.0) * T::epsilon())
}

/// Partial-quotient threshold `⌊f0/(fc·q)⌋` at which the low-pass filter cuts
/// the expansion at denominator `q`.
pub fn filter_quotient<T: Real>(f0: T, fc: T, q: u64) -> Result<u64> {
    if !(f0 > T::zero()) || !(fc > T::zero()) || q == 0 {
        return Err(Error::Parameter("frequencies and denominator must be positive".into()));
    }
    let ratio = f0 / (fc * T::from(q).unwrap_or_else(T::nan));
    // ratios within rounding of an integer count as that integer
    let nearest = ratio.round();
    let v = if (ratio - nearest).abs() <= T::lit(4.0) * T::epsilon() * ratio {
        nearest
    } else {
        ratio.floor()
    };
    v.to_u64().ok_or(Error::Overflow("filter quotient"))
}

/// Edges of the V-shaped locking basin around `p/q` when the expansion is cut
/// by partial quotient `a_cut`, in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasinEdges<I> {
    pub lower: Rational<I>,
    pub upper: Rational<I>,
}

impl<I: Int> BasinEdges<I> {
    pub fn width<T: Real>(&self) -> T {
        self.upper.to_real::<T>() - self.lower.to_real::<T>()
    }
}

/// Appends `a_cut` to both continued-fraction representations of `p/q` and
/// evaluates them exactly.
pub fn basin_edges<I: Int>(p: I, q: I, a_cut: I) -> Result<BasinEdges<I>> {
    if a_cut < I::one() {
        return Err(Error::Parameter("a_cut must be ≥ 1".into()));
    }
    let frac = Rational::reduced(p, q)?;
    let canonical = ContinuedFraction::from_rational(frac, usize::MAX)?;
    let alternate = canonical.alternate();
    let e1 = canonical.with_appended(a_cut).value()?;
    let e2 = alternate.with_appended(a_cut).value()?;
    let (lower, upper) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
    Ok(BasinEdges { lower, upper })
}

/// Farey sequence F_Q: reduced fractions in [0, 1] with denominator ≤ Q.
pub fn farey_sequence<I: Int>(order: I) -> Result<Vec<Rational<I>>> {
    if order < I::one() {
        return Err(Error::Parameter("Farey order must be ≥ 1".into()));
    }
    let (mut a, mut b, mut c, mut d) = (I::zero(), I::one(), I::one(), order);
    let mut out = vec![Rational::reduced(a, b)?];
    if order.is_one() {
        out.push(Rational::integer(I::one()));
        return Ok(out);
    }
    while c <= order {
        let k = (order + b) / d;
        let (na, nb) = (c, d);
        let nc = k * c - a;
        let nd = k * d - b;
        a = na;
        b = nb;
        c = nc;
        d = nd;
        out.push(Rational::reduced(a, b)?);
        if a == b {
            break;
        }
    }
    Ok(out)
}

/// Circle tangent to the real axis at `p/q` with radius `1/(2q²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FordCircle<I, T> {
    pub fraction: Rational<I>,
    pub center: (T, T),
    pub radius: T,
}

pub fn ford<I: Int, T: Real>(frac: Rational<I>) -> FordCircle<I, T> {
    let q: T = T::from(frac.denom()).unwrap_or_else(T::nan);
    let radius = (T::lit(2.0) * q * q).recip();
    FordCircle {
        fraction: frac,
        center: (frac.to_real(), radius),
        radius,
    }
}

impl<I: Int, T: Real> FordCircle<I, T> {
    /// Distance between centres minus the sum of radii; zero when tangent.
    pub fn gap(&self, other: &Self) -> T {
        let dx = self.center.0 - other.center.0;
        let dy = self.center.1 - other.center.1;
        (dx * dx + dy * dy).sqrt() - (self.radius + other.radius)
    }
}

/// Exact tangency test `|p₁q₂ − p₂q₁| = 1`.
pub fn ford_tangent<I: Int, T: Real>(c1: &FordCircle<I, T>, c2: &FordCircle<I, T>) -> Result<bool> {
    Ok(c1.fraction.cross_determinant(&c2.fraction)?.is_one())
}

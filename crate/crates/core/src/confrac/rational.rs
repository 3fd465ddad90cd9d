use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::{CheckedNeg, PrimInt, Signed};

use crate::{Error, Real, Result};

/// Integer type usable as numerator/denominator.
pub trait Int: PrimInt + Integer + Signed + CheckedNeg + fmt::Debug + fmt::Display + Send + Sync + 'static {}

impl<T> Int for T where T: PrimInt + Integer + Signed + CheckedNeg + fmt::Debug + fmt::Display + Send + Sync + 'static {}

/// Reduced fraction `p/q` with `q > 0`. All arithmetic is overflow-checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational<I> {
    p: I,
    q: I,
}

impl<I: Int> Rational<I> {
    /// Reduces `p/q` to lowest terms with a positive denominator.
    pub fn new(p: I, q: I) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::Parameter("zero denominator".into()));
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / g, q / g);
        if q < I::zero() {
            p = p.checked_neg().ok_or(Error::Overflow("rational sign"))?;
            q = q.checked_neg().ok_or(Error::Overflow("rational sign"))?;
        }
        Ok(Self { p, q })
    }

    /// Accepts `p/q` only if it is already in lowest terms with `q > 0`.
    pub fn reduced(p: I, q: I) -> Result<Self> {
        if q <= I::zero() {
            return Err(Error::Precondition(format!("denominator {q} must be positive")));
        }
        if !p.gcd(&q).is_one() {
            return Err(Error::Precondition(format!("{p}/{q} is not in lowest terms")));
        }
        Ok(Self { p, q })
    }

    pub fn integer(a: I) -> Self {
        Self { p: a, q: I::one() }
    }

    pub fn numer(&self) -> I {
        self.p
    }

    pub fn denom(&self) -> I {
        self.q
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        let ov = || Error::Overflow("rational add");
        let num = self
            .p
            .checked_mul(&o.q)
            .and_then(|a| o.p.checked_mul(&self.q).and_then(|b| a.checked_add(&b)))
            .ok_or_else(ov)?;
        let den = self.q.checked_mul(&o.q).ok_or_else(ov)?;
        Self::new(num, den)
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        let neg = Self {
            p: o.p.checked_neg().ok_or(Error::Overflow("rational sub"))?,
            q: o.q,
        };
        self.checked_add(&neg)
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.q, self.p)
    }

    /// `|p₁q₂ − p₂q₁|`, equal to 1 exactly for Farey neighbours.
    pub fn cross_determinant(&self, o: &Self) -> Result<I> {
        let ov = || Error::Overflow("cross determinant");
        let a = self.p.checked_mul(&o.q).ok_or_else(ov)?;
        let b = o.p.checked_mul(&self.q).ok_or_else(ov)?;
        Ok(a.checked_sub(&b).ok_or_else(ov)?.abs())
    }

    pub fn to_real<T: Real>(&self) -> T {
        T::from(self.p).unwrap_or_else(T::nan) / T::from(self.q).unwrap_or_else(T::nan)
    }

    pub fn floor(&self) -> I {
        self.p.div_floor(&self.q)
    }
}

impl<I: Int> PartialOrd for Rational<I> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<I: Int> Ord for Rational<I> {
    fn cmp(&self, other: &Self) -> Ordering {
        // Compare by continued-fraction descent so no product can overflow.
        let (mut a, mut b) = (*self, *other);
        let mut flip = false;
        loop {
            let (fa, fb) = (a.floor(), b.floor());
            if fa != fb {
                let ord = fa.cmp(&fb);
                return if flip { ord.reverse() } else { ord };
            }
            let ra = a.p - fa * a.q;
            let rb = b.p - fb * b.q;
            match (ra.is_zero(), rb.is_zero()) {
                (true, true) => return Ordering::Equal,
                (true, false) => return if flip { Ordering::Greater } else { Ordering::Less },
                (false, true) => return if flip { Ordering::Less } else { Ordering::Greater },
                (false, false) => {
                    a = Self { p: a.q, q: ra };
                    b = Self { p: b.q, q: rb };
                    flip = !flip;
                }
            }
        }
    }
}

impl<I: Int> fmt::Display for Rational<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

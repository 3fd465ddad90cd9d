//! Upper half-plane geometry and the scattering of horizontal waves.

mod scatter;
mod special;

pub use scatter::{
    log_derivative_diagnostic, scattering_coefficient, scattering_phase, LogDerivativeDiagnostic, PhasePoint,
    Scattering,
};
pub use special::{gamma_complex, xi, zeta_complex};

use num_complex::Complex;
use num_integer::Integer;

use crate::confrac::Rational;
use crate::{Error, Real, Result};

/// Point `z = ν + iy` with `y > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint<T> {
    pub nu: T,
    pub y: T,
}

impl<T: Real> HalfPlanePoint<T> {
    pub fn new(nu: T, y: T) -> Result<Self> {
        if !(y > T::zero()) || !nu.is_finite() || !y.is_finite() {
            return Err(Error::Domain(format!("({nu}, {y}) is not in the upper half-plane")));
        }
        Ok(Self { nu, y })
    }

    /// Receiver coordinates: `y` is a beat frequency normalized by the filter
    /// cutoff and must lie in (0, 1).
    pub fn receiver(nu: T, y: T) -> Result<Self> {
        if !(y < T::one()) {
            return Err(Error::Domain(format!("receiver ordinate {y} must be below 1")));
        }
        Self::new(nu, y)
    }

    pub fn to_complex(self) -> Complex<T> {
        Complex::new(self.nu, self.y)
    }

    pub fn from_complex(z: Complex<T>) -> Result<Self> {
        Self::new(z.re, z.im)
    }
}

/// `z → (az + b)/(cz + d)` with `ad − bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MoebiusMap {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl MoebiusMap {
    pub const IDENTITY: Self = Self { a: 1, b: 0, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(Error::Precondition(format!("det [[{a}, {b}], [{c}, {d}]] = {det}, expected 1")));
        }
        Ok(Self { a, b, c, d })
    }

    /// `[[p_i, p_{i−1}], [q_i, q_{i−1}]]` from consecutive convergents. Their
    /// determinant alternates in sign; the odd-orientation pair is rejected.
    pub fn from_convergents(current: Rational<i64>, previous: Rational<i64>) -> Result<Self> {
        Self::new(current.numer(), previous.numer(), current.denom(), previous.denom())
    }

    /// Matrix product `self · other`, i.e. apply `other` first.
    pub fn compose(&self, o: &Self) -> Result<Self> {
        let ov = || Error::Overflow("Möbius composition");
        let mul = |x: i64, y: i64, u: i64, v: i64| -> Result<i64> {
            x.checked_mul(y)
                .and_then(|p| u.checked_mul(v).and_then(|q| p.checked_add(q)))
                .ok_or_else(ov)
        };
        Ok(Self {
            a: mul(self.a, o.a, self.b, o.c)?,
            b: mul(self.a, o.b, self.b, o.d)?,
            c: mul(self.c, o.a, self.d, o.c)?,
            d: mul(self.c, o.b, self.d, o.d)?,
        })
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// `cz + d`.
    pub fn denominator<T: Real>(&self, z: Complex<T>) -> Complex<T> {
        let c = T::from(self.c).unwrap_or_else(T::nan);
        let d = T::from(self.d).unwrap_or_else(T::nan);
        z * c + d
    }

    pub fn apply<T: Real>(&self, z: Complex<T>) -> Result<Complex<T>> {
        let den = self.denominator(z);
        if den.norm_sqr() == T::zero() {
            return Err(Error::Singularity(format!("z = {z} is the pole of the map")));
        }
        let a = T::from(self.a).unwrap_or_else(T::nan);
        let b = T::from(self.b).unwrap_or_else(T::nan);
        Ok((z * a + b) / den)
    }

    /// Image of a half-plane point. The imaginary part is computed as
    /// `y/|cz + d|²`, which stays positive even when the quotient rounds.
    pub fn apply_point<T: Real>(&self, z: HalfPlanePoint<T>) -> Result<HalfPlanePoint<T>> {
        let w = self.apply(z.to_complex())?;
        let im = z.y / self.denominator(z.to_complex()).norm_sqr();
        HalfPlanePoint::new(w.re, im)
    }
}

/// Which of the two horizontal waves to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    /// `y^s`.
    #[default]
    Incident,
    /// `y^{1−s}`.
    Reflected,
}

/// Horizontal wave `y^s` (or `y^{1−s}`), optionally transported by `m` to
/// `(Im m(z))^s = y^s/|cz + d|^{2s}`.
pub fn eigenwave<T: Real>(z: HalfPlanePoint<T>, s: Complex<T>, m: Option<&MoebiusMap>, branch: Branch) -> Complex<T> {
    let e = match branch {
        Branch::Incident => s,
        Branch::Reflected => Complex::new(T::one(), T::zero()) - s,
    };
    let y = match m {
        None => z.y,
        Some(m) => z.y / m.denominator(z.to_complex()).norm_sqr(),
    };
    real_pow(y, e)
}

/// `x^s` for real `x > 0`.
pub(crate) fn real_pow<T: Real>(x: T, s: Complex<T>) -> Complex<T> {
    (s * x.ln()).exp()
}

/// Five-point discretization of `y²(∂²_ν + ∂²_y)` at `z`.
pub fn laplacian_fd<T: Real, F>(f: F, z: HalfPlanePoint<T>, h: T) -> Result<Complex<T>>
where
    F: Fn(HalfPlanePoint<T>) -> Complex<T>,
{
    if !(h > T::zero()) || !(h < z.y) {
        return Err(Error::Parameter(format!("step h = {h} must lie in (0, y)")));
    }
    let at = |nu: T, y: T| f(HalfPlanePoint { nu, y });
    let sum = at(z.nu + h, z.y) + at(z.nu - h, z.y) + at(z.nu, z.y + h) + at(z.nu, z.y - h)
        - at(z.nu, z.y) * T::lit(4.0);
    Ok(sum * (z.y * z.y / (h * h)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EisensteinSum<T> {
    pub value: Complex<T>,
    /// Number of `(q, d)` pairs summed.
    pub terms: usize,
    /// `Re s > 1`; otherwise the value is only a partial sum of a divergent series.
    pub absolutely_convergent: bool,
}

/// `y^s (1 + Σ_{q ≤ Q} Σ_{0 ≤ d < q, gcd(q,d)=1} |qz + d|^{−2s})`.
pub fn eisenstein_partial<T: Real>(z: HalfPlanePoint<T>, s: Complex<T>, q_max: u64) -> Result<EisensteinSum<T>> {
    if q_max == 0 {
        return Err(Error::Parameter("Q must be at least 1".into()));
    }
    let zc = z.to_complex();
    let minus_s = -s;
    let mut acc = Complex::new(T::one(), T::zero());
    let mut terms = 0;
    for q in 1..=q_max {
        let qf = T::from(q).unwrap_or_else(T::nan);
        for d in 0..q {
            if q.gcd(&d) != 1 {
                continue;
            }
            let w = zc * qf + T::from(d).unwrap_or_else(T::nan);
            acc += real_pow(w.norm_sqr(), minus_s);
            terms += 1;
        }
    }
    Ok(EisensteinSum {
        value: real_pow(z.y, s) * acc,
        terms,
        absolutely_convergent: s.re > T::one(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavefrontCircle<T> {
    /// Point of tangency `−q_{i−1}/q_i` on the real axis.
    pub tangency: T,
    pub radius: T,
    pub level: T,
}

impl<T: Real> WavefrontCircle<T> {
    pub fn center(&self) -> (T, T) {
        (self.tangency, self.radius)
    }

    /// Point at angle `theta` measured from the center.
    pub fn point(&self, theta: T) -> (T, T) {
        (self.tangency + self.radius * theta.cos(), self.radius + self.radius * theta.sin())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wavefront<T> {
    Circle(WavefrontCircle<T>),
    /// `q_i = 0`: the level set is the horizontal line `y = c²`.
    Horizontal { height: T, level: T },
}

/// Level set `√y/|q_i z + q_{i−1}| = c`, equivalently `Im γ(z) = c²`.
pub fn wavefront<T: Real>(m: &MoebiusMap, level: T) -> Result<Wavefront<T>> {
    if !(level > T::zero()) || !level.is_finite() {
        return Err(Error::Parameter(format!("level c = {level} must be positive")));
    }
    let c2 = level * level;
    if m.c == 0 {
        // |d| = 1 by unimodularity
        return Ok(Wavefront::Horizontal { height: c2, level });
    }
    let q = T::from(m.c).unwrap_or_else(T::nan);
    let q_prev = T::from(m.d).unwrap_or_else(T::nan);
    Ok(Wavefront::Circle(WavefrontCircle {
        tangency: -q_prev / q,
        radius: T::one() / (T::lit(2.0) * c2 * q * q),
        level,
    }))
}

//! Phase-locking numerics at three levels.
//!
//! * [`dynamics`]: Adler and harmonic Adler phase equations, the Arnold circle
//!   map and its devil's staircase, Allan deviation and periodogram tooling.
//! * [`confrac`]: exact continued fractions, convergents, receiver filter
//!   truncation, basin edges, Farey sequences and Ford circles.
//! * [`hyperbolic`]: Möbius maps on the upper half-plane, Laplacian eigenwaves,
//!   Eisenstein partial sums, complex Gamma/zeta and the scattering phase.
//! * [`quantum`]: Pegg–Barnett and phase-lock operators, Susskind–Glogower and
//!   coherent states, Bost–Connes partition function and KMS values.
//! * [`arith`]: the sieve table that everything arithmetic is built on.
//!
//! Numerical code is generic over [`Real`] (`f32` or `f64`); the aliases below
//! pin the double-precision versions used by the CLI and the acceptance suite.

// `!(x > 0)` is the NaN-rejecting form used for parameter checks; index loops
// mirror the tableau and recurrence formulas
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod arith;
pub mod confrac;
pub mod dynamics;
mod error;
pub mod hyperbolic;
pub mod quantum;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub use num_complex::Complex;

/// Double-precision complex value.
pub type Complex64 = Complex<f64>;
/// Exact rational with 64-bit numerator and denominator.
pub type Rational64 = confrac::Rational<i64>;
/// Continued fraction with 64-bit partial quotients.
pub type ContinuedFraction64 = confrac::ContinuedFraction<i64>;
pub type HalfPlanePoint64 = hyperbolic::HalfPlanePoint<f64>;
pub type FordCircle64 = confrac::FordCircle<i64, f64>;
pub type TimeSeries64 = dynamics::TimeSeries<f64>;
pub type SpectralEstimate64 = dynamics::SpectralEstimate<f64>;
pub type StateVector64 = quantum::StateVector<f64>;
pub type PhaseOperatorMatrix64 = quantum::PhaseOperatorMatrix<f64>;

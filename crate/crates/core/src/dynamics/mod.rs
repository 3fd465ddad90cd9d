//! Phase-locking dynamics and the noise statistics that go with them.

mod adler;
mod allan;
mod arnold;
mod noise;
mod ode;
mod pll;
mod spectrum;

pub use adler::{
    adler_integrate, allan_magnification, beat_frequency, harmonic_adler_integrate, AdlerOutcome,
    AdlerParams, HarmonicTerm, LoopFilter, Regime,
};
pub use allan::allan_deviation;
pub use arnold::{staircase_scan, uniform_grid, winding_number, ArnoldParams, Plateau, Staircase, StaircaseOptions};
pub use noise::{power_law_noise, white_noise};
pub use ode::{integrate, integrate_fixed, OdeOptions, Trajectory};
pub use pll::{pll_noise_experiment, AllanRow, PllNoiseRun};
pub use spectrum::{psd_estimate, SpectralEstimate, WelchOptions};

use crate::{Error, Real, Result};

/// Uniformly sampled real series.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<T> {
    dt: T,
    samples: Vec<T>,
}

impl<T: Real> TimeSeries<T> {
    pub fn new(dt: T, samples: Vec<T>) -> Result<Self> {
        if !(dt > T::zero()) {
            return Err(Error::Parameter("sample interval must be positive".into()));
        }
        if samples.len() < 2 {
            return Err(Error::Length("a series needs at least 2 samples".into()));
        }
        Ok(Self { dt, samples })
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }
}

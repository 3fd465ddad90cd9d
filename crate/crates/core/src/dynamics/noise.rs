//! Seeded noise generators. Bit-reproducible for a fixed seed.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::{FftNum, FftPlanner};

use crate::{Error, Real, Result};

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn gaussians<T: Real>(rng: &mut ChaCha8Rng, n: usize, rms: T) -> Vec<T> {
    (0..n)
        .map(|_| {
            let g: f64 = StandardNormal.sample(rng);
            T::lit(g) * rms
        })
        .collect()
}

/// `n` independent N(0, rms²) samples.
pub fn white_noise<T: Real>(n: usize, rms: T, seed: u64) -> Vec<T> {
    gaussians(&mut rng(seed), n, rms)
}

/// Noise with power spectral density ∝ f^{−α}, made by shaping white noise in
/// the frequency domain (amplitude filter f^{−α/2}, DC removed) and scaled to
/// the requested rms.
pub fn power_law_noise<T: Real + FftNum>(n: usize, alpha: T, rms: T, seed: u64) -> Result<Vec<T>> {
    if n < 4 {
        return Err(Error::Length("power-law synthesis needs at least 4 samples".into()));
    }
    if !alpha.is_finite() || !(rms >= T::zero()) {
        return Err(Error::Parameter("α must be finite and rms non-negative".into()));
    }
    let white = white_noise(n, T::one(), seed);
    let mut buf: Vec<Complex<T>> = white.into_iter().map(|x| Complex::new(x, T::zero())).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let exponent = -alpha / T::lit(2.0);
    buf[0] = Complex::new(T::zero(), T::zero());
    for k in 1..n {
        // bin k and n−k share |f|, keeping the output real
        let f = T::from_usize_lossy(k.min(n - k));
        buf[k] *= f.powf(exponent);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let out: Vec<T> = buf.into_iter().map(|z| z.re).collect();
    let nf = T::from_usize_lossy(n);
    let mean = out.iter().fold(T::zero(), |a, &b| a + b) / nf;
    let var = out.iter().fold(T::zero(), |a, &b| a + (b - mean) * (b - mean)) / nf;
    let scale = if var > T::zero() { rms / var.sqrt() } else { T::zero() };
    Ok(out.into_iter().map(|x| (x - mean) * scale).collect())
}

//! Welch periodogram and log-log slope fit.

use num_complex::Complex;
use rustfft::{FftNum, FftPlanner};

use super::TimeSeries;
use crate::{Error, Real, Result};

pub const MIN_LEN: usize = 1 << 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelchOptions {
    /// Segment length; defaults to the largest power of two ≤ len/4 (≥ 256).
    pub segment_len: Option<usize>,
    /// Fractional overlap of consecutive segments, in [0, 1).
    pub overlap: f64,
}

impl Default for WelchOptions {
    fn default() -> Self {
        Self { segment_len: None, overlap: 0.5 }
    }
}

/// One-sided power spectral density (units²/Hz) without the DC bin, and the
/// least-squares slope of log PSD against log f inside the fit band.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralEstimate<T> {
    pub frequencies: Vec<T>,
    pub psd: Vec<T>,
    pub slope: T,
    pub slope_stderr: T,
    pub intercept: T,
    pub fit_band: (T, T),
    pub fit_points: usize,
    pub segment_len: usize,
    pub segments: usize,
}

fn default_segment(len: usize) -> usize {
    let quarter = (len / 4).max(1);
    (1usize << (usize::BITS - 1 - quarter.leading_zeros())).max(256).min(len)
}

/// Averaged, Hann-tapered periodogram with per-segment mean removal.
pub fn psd_estimate<T: Real + FftNum>(
    series: &TimeSeries<T>,
    fit_band: (T, T),
    opts: &WelchOptions,
) -> Result<SpectralEstimate<T>> {
    let x = series.samples();
    if x.len() < MIN_LEN {
        return Err(Error::Length(format!("periodogram needs ≥ {MIN_LEN} samples, got {}", x.len())));
    }
    let (f_lo, f_hi) = fit_band;
    if !(f_lo > T::zero()) || !(f_hi > f_lo) {
        return Err(Error::Parameter(format!("fit band ({f_lo}, {f_hi}) is empty")));
    }
    if !(0.0..1.0).contains(&opts.overlap) {
        return Err(Error::Parameter("overlap must lie in [0, 1)".into()));
    }
    let seg = opts.segment_len.unwrap_or_else(|| default_segment(x.len()));
    if seg < 8 || seg > x.len() {
        return Err(Error::Parameter(format!("segment length {seg} outside [8, {}]", x.len())));
    }
    let hop = (((1.0 - opts.overlap) * seg as f64).round() as usize).max(1);

    let segf = T::from_usize_lossy(seg);
    let window: Vec<T> = (0..seg)
        .map(|i| {
            let s = (T::PI() * T::from_usize_lossy(i) / segf).sin();
            s * s
        })
        .collect();
    let wss = window.iter().fold(T::zero(), |a, &w| a + w * w);
    let fs = T::one() / series.dt();

    let fft = FftPlanner::new().plan_fft_forward(seg);
    let n_bins = seg / 2;
    let mut acc = vec![T::zero(); n_bins];
    let mut buf = vec![Complex::new(T::zero(), T::zero()); seg];
    let mut segments = 0usize;
    let mut start = 0;
    while start + seg <= x.len() {
        let chunk = &x[start..start + seg];
        let mean = chunk.iter().fold(T::zero(), |a, &b| a + b) / segf;
        for ((b, &v), &w) in buf.iter_mut().zip(chunk).zip(&window) {
            *b = Complex::new((v - mean) * w, T::zero());
        }
        fft.process(&mut buf);
        for (k, a) in acc.iter_mut().enumerate() {
            *a += buf[k + 1].norm_sqr();
        }
        segments += 1;
        start += hop;
    }
    let scale = T::lit(2.0) / (fs * wss * T::from_usize_lossy(segments));
    let frequencies: Vec<T> = (1..=n_bins).map(|k| T::from_usize_lossy(k) * fs / segf).collect();
    let psd: Vec<T> = acc
        .iter()
        .enumerate()
        .map(|(i, &a)| if i + 1 == n_bins && seg.is_multiple_of(2) { a * scale / T::lit(2.0) } else { a * scale })
        .collect();

    let pts: Vec<(T, T)> = frequencies
        .iter()
        .zip(&psd)
        .filter(|(&f, &p)| f >= f_lo && f <= f_hi && p > T::zero())
        .map(|(&f, &p)| (f.log10(), p.log10()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::Parameter(format!(
            "fit band ({f_lo}, {f_hi}) holds {} usable bins; need at least 3",
            pts.len()
        )));
    }
    let (slope, intercept, slope_stderr) = ols(&pts);
    Ok(SpectralEstimate {
        frequencies,
        psd,
        slope,
        slope_stderr,
        intercept,
        fit_band,
        fit_points: pts.len(),
        segment_len: seg,
        segments,
    })
}

/// Ordinary least squares `y = a + b x`; returns (b, a, stderr of b).
fn ols<T: Real>(pts: &[(T, T)]) -> (T, T, T) {
    let n = T::from_usize_lossy(pts.len());
    let mx = pts.iter().fold(T::zero(), |a, p| a + p.0) / n;
    let my = pts.iter().fold(T::zero(), |a, p| a + p.1) / n;
    let sxx = pts.iter().fold(T::zero(), |a, p| a + (p.0 - mx) * (p.0 - mx));
    let sxy = pts.iter().fold(T::zero(), |a, p| a + (p.0 - mx) * (p.1 - my));
    let b = sxy / sxx;
    let a = my - b * mx;
    let rss = pts.iter().fold(T::zero(), |acc, p| {
        let r = p.1 - a - b * p.0;
        acc + r * r
    });
    let se = (rss / (n - T::lit(2.0)) / sxx).sqrt();
    (b, a, se)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::noise::{power_law_noise, white_noise};

    #[test]
    fn white_is_flat_with_correct_level() {
        let dt = 0.01;
        let x = white_noise(1 << 16, 1.0f64, 11);
        let s = TimeSeries::new(dt, x).unwrap();
        let est = psd_estimate(&s, (1.0, 45.0), &WelchOptions::default()).unwrap();
        assert!(est.slope.abs() < 0.2, "{}", est.slope);
        // one-sided density of unit white noise is 2·dt
        let mean = est.psd.iter().sum::<f64>() / est.psd.len() as f64;
        assert!((mean / (2.0 * dt) - 1.0).abs() < 0.05, "{mean}");
        assert!(est.frequencies.windows(2).all(|w| w[1] > w[0]));
        assert!(est.psd.iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn recovers_power_law_exponent() {
        for (alpha, seed) in [(0.5, 1u64), (1.0, 2), (1.5, 3)] {
            let x = power_law_noise(1 << 17, alpha, 1.0f64, seed).unwrap();
            let s = TimeSeries::new(1.0, x).unwrap();
            let est = psd_estimate(&s, (1e-3, 0.1), &WelchOptions::default()).unwrap();
            assert!((est.slope + alpha).abs() < 0.15, "α={alpha}: slope {}", est.slope);
        }
    }

    #[test]
    fn sinusoid_peak_lands_on_bin() {
        let n = 4096;
        let x: Vec<f64> = (0..n).map(|i| (2.0 * std::f64::consts::PI * 0.125 * i as f64).sin()).collect();
        let s = TimeSeries::new(1.0, x).unwrap();
        let est = psd_estimate(&s, (0.01, 0.4), &WelchOptions::default()).unwrap();
        let (imax, _) = est
            .psd
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap();
        assert!((est.frequencies[imax] - 0.125).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let s = TimeSeries::new(1.0, vec![0.0; 1000]).unwrap();
        assert!(matches!(psd_estimate(&s, (0.1, 0.2), &WelchOptions::default()), Err(Error::Length(_))));
        let s = TimeSeries::new(1.0, white_noise(2048, 1.0f64, 0)).unwrap();
        assert!(matches!(psd_estimate(&s, (0.2, 0.1), &WelchOptions::default()), Err(Error::Parameter(_))));
        assert!(matches!(
            psd_estimate(&s, (0.2001, 0.2002), &WelchOptions::default()),
            Err(Error::Parameter(_))
        ));
    }
}

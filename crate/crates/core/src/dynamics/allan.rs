use super::TimeSeries;
use crate::{Error, Real, Result};

const MIN_BINS: usize = 4;

/// Non-overlapping Allan deviation of a frequency series.
///
/// `σ²(τ) = ½⟨(ȳ_{k+1} − ȳ_k)²⟩` where `ȳ_k` averages the k-th block of
/// `τ/dt` samples. Each τ must be an integer multiple of `dt` and leave at
/// least four blocks.
pub fn allan_deviation<T: Real>(series: &TimeSeries<T>, taus: &[T]) -> Result<Vec<(T, T)>> {
    let dt = series.dt();
    let y = series.samples();
    taus.iter()
        .map(|&tau| {
            let ratio = tau / dt;
            let m = ratio.round();
            if !(m >= T::one()) || (ratio - m).abs() > T::lit(1e-6) * m {
                return Err(Error::Parameter(format!("τ = {tau} is not a positive multiple of dt = {dt}")));
            }
            let m = m.to_usize().ok_or(Error::Overflow("τ/dt"))?;
            let bins = y.len() / m;
            if bins < MIN_BINS {
                return Err(Error::Length(format!(
                    "τ = {tau} leaves {bins} averaging blocks; need at least {MIN_BINS}"
                )));
            }
            let inv_m = T::one() / T::from_usize_lossy(m);
            let means: Vec<T> = y
                .chunks_exact(m)
                .take(bins)
                .map(|c| c.iter().fold(T::zero(), |a, &b| a + b) * inv_m)
                .collect();
            let sum_sq = means
                .windows(2)
                .map(|w| (w[1] - w[0]) * (w[1] - w[0]))
                .fold(T::zero(), |a, b| a + b);
            let var = sum_sq / (T::lit(2.0) * T::from_usize_lossy(bins - 1));
            Ok((tau, var.sqrt()))
        })
        .collect()
}

/// τ values `dt·2^j` leaving at least four blocks.
pub(crate) fn octave_taus<T: Real>(dt: T, len: usize) -> Vec<T> {
    let mut out = Vec::new();
    let mut m = 1usize;
    while len / m >= MIN_BINS {
        out.push(dt * T::from_usize_lossy(m));
        m *= 2;
    }
    out
}

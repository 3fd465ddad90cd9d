//! Counter-level simulation of a jittered locking experiment: the detuning is
//! drawn once per gate interval and the counter records the beat frequency
//! `√(ω² − K²)/2π` (zero when a draw falls inside the locking zone).

use super::adler::{allan_magnification, beat_frequency, AdlerParams};
use super::allan::{allan_deviation, octave_taus};
use super::noise::{gaussians, rng};
use super::TimeSeries;
use crate::{Error, Real, Result};

/// Allan deviations of the input detuning (σ₀) and of the counted beat (σ),
/// both normalized by the nominal beat frequency so the ratio isolates the
/// magnification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AllanRow<T> {
    pub tau: T,
    pub sigma_input: T,
    pub sigma_beat: T,
}

#[derive(Debug, Clone)]
pub struct PllNoiseRun<T> {
    /// Input detuning per gate, in Hz.
    pub input: TimeSeries<T>,
    /// Counted beat frequency per gate, in Hz.
    pub beats: TimeSeries<T>,
    /// Nominal beat `ω̃/2π` at zero jitter.
    pub nominal_beat: T,
    pub allan: Vec<AllanRow<T>>,
    /// σ/σ₀ at the shortest τ; `None` when the input does not fluctuate.
    pub ratio: Option<T>,
    pub expected_ratio: T,
    /// Gates whose draw landed inside the locking zone.
    pub locked_gates: usize,
}

pub fn pll_noise_experiment<T: Real>(
    params: AdlerParams<T>,
    jitter_rms: T,
    seed: u64,
    n_counts: usize,
    gate: T,
) -> Result<PllNoiseRun<T>> {
    let (k, omega) = (params.k, params.omega_lf);
    if omega.abs() <= k {
        return Err(Error::Domain(format!(
            "|ω_LF| = {} ≤ K = {k}: the loop is locked and no beat is counted",
            omega.abs()
        )));
    }
    if !(jitter_rms >= T::zero()) || !(gate > T::zero()) {
        return Err(Error::Parameter("jitter must be ≥ 0 and the gate positive".into()));
    }
    if n_counts < 8 {
        return Err(Error::Length("need at least 8 counts".into()));
    }
    let expected = allan_magnification(omega, k)?;
    let nominal = beat_frequency(omega, k)? / T::TAU();
    let draws = gaussians(&mut rng(seed), n_counts, jitter_rms);
    let mut locked = 0;
    let mut input = Vec::with_capacity(n_counts);
    let mut beats = Vec::with_capacity(n_counts);
    for d in draws {
        let w = omega + d;
        input.push(w.abs() / T::TAU());
        beats.push(match beat_frequency(w, k) {
            Ok(b) => b / T::TAU(),
            Err(_) => {
                locked += 1;
                T::zero()
            }
        });
    }
    let input = TimeSeries::new(gate, input)?;
    let beats = TimeSeries::new(gate, beats)?;
    let taus = octave_taus(gate, n_counts);
    let s_in = allan_deviation(&input, &taus)?;
    let s_beat = allan_deviation(&beats, &taus)?;
    let allan: Vec<AllanRow<T>> = s_in
        .iter()
        .zip(&s_beat)
        .map(|(&(tau, a), &(_, b))| AllanRow {
            tau,
            sigma_input: a / nominal,
            sigma_beat: b / nominal,
        })
        .collect();
    let ratio = allan
        .first()
        .filter(|r| r.sigma_input > T::zero())
        .map(|r| r.sigma_beat / r.sigma_input);
    Ok(PllNoiseRun {
        input,
        beats,
        nominal_beat: nominal,
        allan,
        ratio,
        expected_ratio: expected,
        locked_gates: locked,
    })
}

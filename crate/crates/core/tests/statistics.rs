//! Estimator behaviour on long seeded series.

use phaselock::arith::{ArithTable, MangoldtSpec, SummatoryKind};
use phaselock::dynamics::{allan_deviation, power_law_noise, psd_estimate, white_noise, TimeSeries, WelchOptions};

/// Least-squares slope of log σ against log τ.
fn log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().map(|&(t, s)| (t.ln(), s.ln())).unzip();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn white_frequency_noise_allan_slope() {
    let series = TimeSeries::new(1.0, white_noise(1 << 16, 1.0, 11)).unwrap();
    // 1, 2, 4, …, 32: 1.5 decades
    let taus: Vec<f64> = (0..6).map(|k| f64::from(1u32 << k)).collect();
    let sigma = allan_deviation(&series, &taus).unwrap();
    let slope = log_slope(&sigma);
    assert!((slope + 0.5).abs() < 0.1, "slope {slope}");
}

#[test]
fn flicker_frequency_noise_allan_is_flat() {
    let series = TimeSeries::new(1.0, power_law_noise(1 << 18, 1.0, 1.0, 5).unwrap()).unwrap();
    let taus = [4.0, 8.0, 16.0, 32.0, 40.0];
    let sigma = allan_deviation(&series, &taus).unwrap();
    let mean = sigma.iter().map(|s| s.1).sum::<f64>() / sigma.len() as f64;
    for &(tau, s) in &sigma {
        assert!((s / mean - 1.0).abs() < 0.2, "τ={tau}: {s} vs mean {mean}");
    }
}

#[test]
fn mangoldt_error_term_has_red_spectrum() {
    let t_max = 100_000u64;
    let table = ArithTable::new(t_max as usize).unwrap();
    let kind = SummatoryKind::MangoldtGeneral(MangoldtSpec::plain());
    let eps = table.error_series(kind, t_max).unwrap();
    let opts = WelchOptions {
        segment_len: Some(1 << 14),
        overlap: 0.5,
    };
    let est = psd_estimate(&TimeSeries::new(1.0, eps).unwrap(), (1e-3, 1e-1), &opts).unwrap();
    // the qualitative claim is a red spectrum; the slope against the loose
    // [−1.5, −0.5] band is reported rather than asserted
    println!(
        "ε(t) periodogram slope {:.3} ± {:.3} (band [−1.5, −0.5]: {})",
        est.slope,
        est.slope_stderr,
        if (-1.5..=-0.5).contains(&est.slope) { "inside" } else { "outside" }
    );
    assert!(est.slope + 3.0 * est.slope_stderr < 0.0, "slope {}", est.slope);
}

#[test]
fn mangoldt_error_term_bound() {
    let table = ArithTable::new(100_000).unwrap();
    for t in [1_000u64, 10_000, 100_000] {
        let r = table
            .summatory_average(SummatoryKind::MangoldtGeneral(MangoldtSpec::plain()), t)
            .unwrap();
        let tf = t as f64;
        assert!(r.epsilon.abs() <= 5.0 * tf.powf(-0.5) * tf.ln().powi(2), "t={t}: {}", r.epsilon);
    }
}

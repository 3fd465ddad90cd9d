//! Acceptance criteria 1–10, one pass/fail line each.
//!
//! Runs without the libtest harness so every line is printed even when the
//! output of passing tests would otherwise be captured. Exits non-zero if any
//! criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use phaselock::arith::{ArithTable, MangoldtSpec, SummatoryKind};
use phaselock::dynamics::{
    pll_noise_experiment, psd_estimate, staircase_scan, uniform_grid, AdlerParams, StaircaseOptions, TimeSeries,
    WelchOptions,
};
use phaselock::hyperbolic::{gamma_complex, scattering_coefficient, xi, zeta_complex};
use phaselock::quantum::{
    expectation_locked_phase, kms_expectation, kms_low_temperature_limit, lock_projector, lock_projector_integer,
    susskind_e, IndexRange,
};
use phaselock::{Complex64, Rational64};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

type Check = fn() -> Outcome;

fn main() -> ExitCode {
    let criteria: [(&str, Duration, Check); 10] = [
        ("ramanujan closed form vs brute force", Duration::from_secs(10), c1_ramanujan),
        ("generalized mangoldt average", Duration::from_secs(5), c2_average),
        ("unit-modulus scattering", Duration::from_secs(30), c3_scattering),
        ("locked-phase peaks at prime powers", Duration::from_secs(60), c4_peaks),
        ("kms limits", Duration::from_secs(1), c5_kms),
        ("arnold tongue widths", Duration::from_secs(120), c6_tongues),
        ("allan magnification", Duration::from_secs(30), c7_allan),
        ("spectral exponent of the error term", Duration::from_secs(60), c8_spectrum),
        ("zeta and gamma kernels", Duration::from_secs(10), c9_kernels),
        ("projector algebra", Duration::from_secs(60), c10_projector),
    ];
    let mut failed = Vec::new();
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let pass = o.pass && in_time;
        let timing = if in_time {
            format!("{:.2}s", elapsed.as_secs_f64())
        } else {
            format!("{:.2}s over budget {}s", elapsed.as_secs_f64(), budget.as_secs())
        };
        println!(
            "criterion {:>2} {}: {name} [{timing}] {}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}

fn c1_ramanujan() -> Outcome {
    let t = ArithTable::new(200).unwrap();
    let mut worst_round = 0.0f64;
    let mut mismatches = 0;
    for q in 1..=200u64 {
        let coprime: Vec<u64> = (1..=q).filter(|&a| num_integer::gcd(a, q) == 1).collect();
        for n in -200i64..=200 {
            let s: f64 = coprime
                .iter()
                .map(|&a| (2.0 * PI * ((a as i64 * n).rem_euclid(q as i64)) as f64 / q as f64).cos())
                .sum();
            worst_round = worst_round.max((s - s.round()).abs());
            if s.round() as i64 != t.ramanujan_sum(q, n).unwrap() {
                mismatches += 1;
            }
        }
    }
    outcome(
        mismatches == 0 && worst_round < 1e-6,
        format!("mismatches {mismatches}, worst pre-rounding deviation {worst_round:.2e}"),
    )
}

fn c2_average() -> Outcome {
    let t_max = 100_000u64;
    let table = ArithTable::new(t_max as usize).unwrap();
    let tf = t_max as f64;
    let bound = 5.0 * tf.powf(-0.5) * tf.ln().powi(2);
    let mut worst: f64 = 0.0;
    for q in 1..=10u64 {
        for a in (0..q).filter(|&a| num_integer::gcd(a, q) == 1) {
            let spec = MangoldtSpec::new(a, q).unwrap();
            let r = table.summatory_average(SummatoryKind::MangoldtGeneral(spec), t_max).unwrap();
            worst = worst.max(r.epsilon.abs());
        }
    }
    outcome(worst <= bound, format!("worst |avg − 1/φ(q)| {worst:.3e}, bound {bound:.3e}"))
}

fn c3_scattering() -> Outcome {
    let ks = (0..100).map(|i| 0.5 + 29.5 * i as f64 / 99.0);
    let (mut modulus, mut gap) = (0.0f64, 0.0f64);
    for k in ks {
        let s = scattering_coefficient(Complex64::new(0.5, k)).unwrap();
        modulus = modulus.max((s.value().norm() - 1.0).abs());
        gap = gap.max(s.route_gap());
    }
    outcome(
        modulus < 1e-8 && gap < 1e-8,
        format!("max ||S| − 1| {modulus:.2e}, max route gap {gap:.2e}"),
    )
}

fn c4_peaks() -> Outcome {
    let table = ArithTable::new(64).unwrap();
    let at = |q: u64, beta: f64| expectation_locked_phase(&table, q, beta).unwrap().value();
    let pp = |q: u64| table.is_prime_power(q).unwrap();
    let mut not_peaks = Vec::new();
    let mut not_squeezed = Vec::new();
    for q in (2..=50u64).filter(|&q| pp(q)) {
        let v = at(q, 1.0);
        let beaten = [q - 1, q + 1]
            .into_iter()
            .filter(|&n| (2..=50).contains(&n) && !pp(n))
            .any(|n| at(n, 1.0) >= v);
        if beaten {
            not_peaks.push(q);
        }
        if at(q, 0.0).abs() >= v.abs() {
            not_squeezed.push(q);
        }
    }
    outcome(
        not_peaks.is_empty() && not_squeezed.is_empty(),
        format!("prime powers not strict local maxima {not_peaks:?}; not squeezed at β=0 {not_squeezed:?}"),
    )
}

fn c5_kms() -> Outcome {
    let table = ArithTable::new(64).unwrap();
    let mut low_t: f64 = 0.0;
    let mut worst_pole: f64 = 0.0;
    let mut worst_beyond_one: f64 = 0.0;
    let mut bad = Vec::new();
    let eps = 1e-3;
    for q in 1..=50u64 {
        let v = kms_expectation(&table, q, 8.0).unwrap().value;
        low_t = low_t.max((v - kms_low_temperature_limit(&table, q).unwrap()).abs());
        let lambda = table.mangoldt(q).unwrap();
        let scaled = kms_expectation(&table, q, 1.0 + eps).unwrap().value * q as f64 / eps;
        let rel = (scaled + lambda).abs() / lambda.max(0.1);
        worst_pole = worst_pole.max(rel);
        if q > 1 {
            worst_beyond_one = worst_beyond_one.max(rel);
        }
        if rel >= 0.05 {
            bad.push(q);
        }
    }
    outcome(
        low_t < 1e-2 && bad.is_empty(),
        format!(
            "max |KMS(q,8) − μ/φ| {low_t:.2e}; worst near-pole relative error {:.1}% ({:.1}% for q ≥ 2; failing q {bad:?})",
            worst_pole * 100.0,
            worst_beyond_one * 100.0
        ),
    )
}

fn c6_tongues() -> Outcome {
    let grid = uniform_grid(-0.2, 0.6, 1e-4);
    let opts = StaircaseOptions::default();
    let ratios = [Rational64::reduced(0, 1), Rational64::reduced(1, 2), Rational64::reduced(1, 3)].map(Result::unwrap);
    let mut widths = Vec::new();
    let mut worst_rel: f64 = 0.0;
    for c in [0.3, 0.6, 0.9] {
        let sc = staircase_scan(c, &grid, &opts).unwrap();
        let w: Vec<f64> = ratios.iter().map(|&r| sc.plateau_width(r)).collect();
        worst_rel = worst_rel.max((w[0] - c / PI).abs() / (c / PI));
        widths.push(w);
    }
    let monotone = (0..ratios.len()).all(|j| widths.windows(2).all(|p| p[1][j] > p[0][j]));
    let table: Vec<String> = widths
        .iter()
        .map(|w| format!("[{:.4}, {:.4}, {:.4}]", w[0], w[1], w[2]))
        .collect();
    outcome(
        worst_rel < 0.05 && monotone,
        format!(
            "worst 0/1 deviation from c/π {:.2}%; widths (0/1, 1/2, 1/3) at c = 0.3, 0.6, 0.9: {}",
            worst_rel * 100.0,
            table.join(" ")
        ),
    )
}

fn c7_allan() -> Outcome {
    let k = 1.0f64;
    let mut worst: f64 = 0.0;
    let mut rows = Vec::new();
    for (i, r) in [1.0 / 3.0, 0.5, 1.0].into_iter().enumerate() {
        let beat = r * k;
        let omega = (beat * beat + k * k).sqrt();
        let params = AdlerParams::new(k, omega, 0.0).unwrap();
        let run = pll_noise_experiment(params, 1e-3, 1_618_033_988 + i as u64, 10_000, 1.0).unwrap();
        let ratio = run.ratio.unwrap_or(f64::NAN);
        let rel = (ratio / run.expected_ratio - 1.0).abs();
        worst = worst.max(if rel.is_nan() { f64::INFINITY } else { rel });
        rows.push(format!("ω̃/K={r:.3}: {ratio:.3} vs {:.3}", run.expected_ratio));
    }
    outcome(worst < 0.10, format!("worst relative error {:.1}% ({})", worst * 100.0, rows.join(", ")))
}

fn c8_spectrum() -> Outcome {
    let t_max = 100_000u64;
    let table = ArithTable::new(t_max as usize).unwrap();
    let eps = table.error_series(SummatoryKind::MangoldtModified, t_max).unwrap();
    let series = TimeSeries::new(1.0, eps).unwrap();
    let opts = WelchOptions {
        segment_len: Some(1 << 14),
        overlap: 0.5,
    };
    let est = psd_estimate(&series, (1e-3, 1e-1), &opts).unwrap();
    let target = -1.236;
    outcome(
        (est.slope - target).abs() <= 0.3,
        format!(
            "slope {:.3} ± {:.3} over {} bins, target {target} ± 0.3",
            est.slope, est.slope_stderr, est.fit_points
        ),
    )
}

/// η(s) by repeated averaging of alternating partial sums (Euler transform).
fn eta_oracle(s: Complex64) -> Complex64 {
    let n = 60;
    let mut partial = Vec::with_capacity(n);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 1..=n {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        acc += sign * (-s * (k as f64).ln()).exp();
        partial.push(acc);
    }
    while partial.len() > 1 {
        partial = partial.windows(2).map(|w| (w[0] + w[1]) * 0.5).collect();
    }
    partial[0]
}

fn c9_kernels() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut note = |name: &str, got: Complex64, want: Complex64, log: &mut Vec<String>| {
        let e = (got - want).norm() / want.norm().max(1.0);
        worst = worst.max(e);
        if e >= 1e-8 {
            log.push(format!("{name} off by {e:.2e}"));
        }
    };
    let mut log = Vec::new();
    let c = |re: f64, im: f64| Complex64::new(re, im);
    // ζ(2): partial sum with Euler–Maclaurin tail
    let n = 10_000.0f64;
    let partial: f64 = (1..10_000).rev().map(|k| 1.0 / (k as f64 * k as f64)).sum();
    let zeta2 = partial + 1.0 / n + 0.5 / (n * n) + 1.0 / (6.0 * n * n * n);
    note("ζ(2) vs series", zeta_complex(c(2.0, 0.0)).unwrap(), c(zeta2, 0.0), &mut log);
    note("ζ(2) vs π²/6", zeta_complex(c(2.0, 0.0)).unwrap(), c(PI * PI / 6.0, 0.0), &mut log);
    for s in [c(0.5, 0.0), c(0.5, 14.0), c(0.3, 3.0)] {
        let want = eta_oracle(s) / (c(1.0, 0.0) - (c(1.0, 0.0) - s).scale(2f64.ln()).exp());
        note(&format!("ζ({s}) vs η series"), zeta_complex(s).unwrap(), want, &mut log);
    }
    note("Γ(1/2)", gamma_complex(c(0.5, 0.0)).unwrap(), c(PI.sqrt(), 0.0), &mut log);
    for s in [c(0.3, 0.0), c(0.25, 1.5), c(-1.7, 0.4)] {
        let lhs = gamma_complex(s).unwrap() * gamma_complex(c(1.0, 0.0) - s).unwrap();
        let rhs = c(PI, 0.0) / (s * PI).sin();
        note(&format!("Γ reflection at {s}"), lhs, rhs, &mut log);
        let lhs = xi(s).unwrap();
        let rhs = xi(c(1.0, 0.0) - s).unwrap();
        note(&format!("ξ reflection at {s}"), lhs, rhs, &mut log);
    }
    outcome(worst < 1e-8, format!("worst relative error {worst:.2e} {}", log.join("; ")))
}

fn c10_projector() -> Outcome {
    let table = ArithTable::new(64).unwrap();
    let (mut idem, mut herm) = (0.0f64, 0.0f64);
    let mut trace_bad = Vec::new();
    for q in 1..=60u64 {
        let p = lock_projector::<f64>(q, IndexRange::Full).unwrap();
        idem = idem.max(p.idempotency_defect());
        herm = herm.max(p.hermiticity_defect());
        let int = lock_projector_integer(&table, q).unwrap();
        let phi = table.totient(q).unwrap();
        // entries are exact integers over q, so the trace is exact in integers
        let entries_exact = (0..q as usize).all(|n| {
            (0..q as usize).all(|l| (p.entry(n, l).re * q as f64 - int[(n, l)] as f64).abs() < 1e-9)
        });
        if int.trace() != (q * phi) as i64 || !entries_exact {
            trace_bad.push(q);
        }
    }
    let mut susskind_exact = true;
    for q in 2..=60u64 {
        let e = susskind_e::<f64>(q).unwrap();
        let ete = e.adjoint() * e.matrix();
        let d = q as usize;
        for i in 0..d {
            for j in 0..d {
                let want = if i == j && i != 0 { 1.0 } else { 0.0 };
                if ete[(i, j)] != Complex64::new(want, 0.0) {
                    susskind_exact = false;
                }
            }
        }
    }
    outcome(
        idem < 1e-10 && herm < 1e-12 && trace_bad.is_empty() && susskind_exact,
        format!(
            "idempotency {idem:.1e}, hermiticity {herm:.1e}, trace mismatches {trace_bad:?}, E†E exact {susskind_exact}"
        ),
    )
}

//! One pipeline per subcommand; each returns a finished table.

use std::f64::consts::PI;

use phaselock::arith::{ArithTable, SummatoryKind};
use phaselock::confrac::{basin_edges, farey_sequence};
use phaselock::dynamics::{
    adler_integrate, pll_noise_experiment, power_law_noise, psd_estimate, staircase_scan, uniform_grid, white_noise,
    AdlerParams, Regime, StaircaseOptions, TimeSeries, WelchOptions,
};
use phaselock::hyperbolic::{eisenstein_partial, scattering_coefficient, scattering_phase, HalfPlanePoint};
use phaselock::quantum::{expectation_locked_phase, kms_expectation, kms_low_temperature_limit};
use phaselock::Complex64;

use crate::output::{format_number, Table};
use crate::{ArithFn, CliError, Command, Context, Source};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn table_upto(limit: u64) -> Result<ArithTable, CliError> {
    ArithTable::new(limit.max(2) as usize).context(|| "building the arithmetic table".into())
}

fn check_qmax(qmax: u64) -> Result<(), CliError> {
    if qmax == 0 {
        return Err(usage("--qmax must be at least 1"));
    }
    Ok(())
}

fn linspace(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if points < 2 || !(hi > lo) {
        return Err(usage("need at least 2 points on a nonempty interval"));
    }
    Ok((0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect())
}

pub fn run(cmd: &Command, seed: u64) -> Result<Table, CliError> {
    match *cmd {
        Command::Arith { function, n, upto, q } => arith(function, n, upto, q),
        Command::Basins { order, a_cut } => basins(order, a_cut),
        Command::Staircase {
            c,
            lo,
            hi,
            step,
            transient,
            iterations,
            plateaus,
        } => staircase(c, lo, hi, step, transient, iterations, plateaus),
        Command::Adler {
            k,
            omega,
            phi0,
            t_end,
            tol,
            samples,
        } => adler(k, omega, phi0, t_end, tol, samples),
        Command::PllNoise {
            k,
            beat_ratio,
            jitter,
            counts,
            gate,
        } => pll_noise(k, beat_ratio, jitter, counts, gate, seed),
        Command::Scatter { kmin, kmax, points } => scatter(kmin, kmax, points),
        Command::Eisenstein {
            nu,
            y,
            s_re,
            s_im,
            qmax,
        } => eisenstein(nu, y, Complex64::new(s_re, s_im), qmax),
        Command::Qphase { qmax, beta } => qphase(qmax, beta),
        Command::Kms { beta, qmax } | Command::Fig4 { beta, qmax } => kms(beta, qmax),
        Command::Spectrum {
            source,
            n,
            alpha,
            segment,
            f_lo,
            f_hi,
        } => spectrum(source, n, alpha, segment, (f_lo, f_hi), seed),
        Command::Fig2 { kmin, kmax, points } => fig2(kmin, kmax, points),
        Command::Fig3 { qmax, beta } => fig3(qmax, beta),
        Command::Fig5 { eps, qmax } => fig5(eps, qmax),
    }
}

fn arith(f: ArithFn, n: Option<i64>, upto: Option<u64>, q: Option<u64>) -> Result<Table, CliError> {
    let args: Vec<i64> = match (n, upto) {
        (Some(n), None) => vec![n],
        (None, Some(m)) => (1..=m as i64).collect(),
        _ => return Err(usage("give exactly one of --n and --upto")),
    };
    let limit = args.iter().map(|a| a.unsigned_abs()).max().unwrap_or(1).max(q.unwrap_or(1));
    let t = table_upto(limit)?;
    let positive = |a: i64| -> Result<u64, CliError> {
        u64::try_from(a)
            .ok()
            .filter(|&a| a > 0)
            .ok_or_else(|| usage(format!("argument {a} must be positive")))
    };
    let mut values = Vec::with_capacity(args.len());
    let series = match f {
        ArithFn::ErrorModified => Some(
            t.error_series(SummatoryKind::MangoldtModified, limit)
                .context(|| "error term series".into())?,
        ),
        _ => None,
    };
    for &a in &args {
        let ctx = || format!("{f:?} at {a}");
        let v = match f {
            ArithFn::Totient => t.totient(positive(a)?).context(ctx)? as f64,
            ArithFn::Moebius => t.moebius(positive(a)?).context(ctx)? as f64,
            ArithFn::Mangoldt => t.mangoldt(positive(a)?).context(ctx)?,
            ArithFn::MangoldtModified => t.mangoldt_modified(positive(a)?).context(ctx)?,
            ArithFn::Ramanujan => {
                let q = q.ok_or_else(|| usage("the Ramanujan sum needs --q"))?;
                t.ramanujan_sum(q, a).context(ctx)? as f64
            }
            ArithFn::ErrorModified => series.as_ref().expect("computed above")[positive(a)? as usize - 1],
        };
        values.push(v);
    }
    let mut out = if n.is_some() {
        Table::new(&["value"])
    } else {
        Table::new(&["n", "value"])
    };
    for (a, v) in args.into_iter().zip(values) {
        out.push(if n.is_some() { vec![v] } else { vec![a as f64, v] });
    }
    if let Some(q) = q {
        out.note("q", q);
    }
    Ok(out)
}

fn basins(order: i64, a_cut: i64) -> Result<Table, CliError> {
    let fracs = farey_sequence(order).context(|| format!("Farey sequence of order {order}"))?;
    let mut out = Table::new(&["p", "q", "lower_p", "lower_q", "upper_p", "upper_q", "lower", "upper", "width"]);
    // the endpoints 0/1 and 1/1 have one-sided basins and are left out
    for f in fracs.into_iter().filter(|f| f.numer() > 0 && f.numer() < f.denom()) {
        let e = basin_edges(f.numer(), f.denom(), a_cut).context(|| format!("basin edges of {f}"))?;
        out.push(vec![
            f.numer() as f64,
            f.denom() as f64,
            e.lower.numer() as f64,
            e.lower.denom() as f64,
            e.upper.numer() as f64,
            e.upper.denom() as f64,
            e.lower.to_real(),
            e.upper.to_real(),
            e.width(),
        ]);
    }
    Ok(out)
}

fn staircase(
    c: f64,
    lo: f64,
    hi: f64,
    step: f64,
    transient: usize,
    iterations: usize,
    plateaus: bool,
) -> Result<Table, CliError> {
    if !(step > 0.0) || !(hi > lo) {
        return Err(usage("need --step > 0 and --hi > --lo"));
    }
    let opts = StaircaseOptions {
        n_transient: transient,
        n_iter: iterations,
        ..StaircaseOptions::default()
    };
    let grid = uniform_grid(lo, hi, step);
    let sc = staircase_scan(c, &grid, &opts).context(|| format!("staircase at c = {c}"))?;
    let mut out;
    if plateaus {
        out = Table::new(&["p", "q", "omega_lo", "omega_hi", "width"]);
        for p in &sc.plateaus {
            out.push(vec![
                p.ratio.numer() as f64,
                p.ratio.denom() as f64,
                p.omega_lo,
                p.omega_hi,
                p.width(),
            ]);
        }
    } else {
        out = Table::new(&["omega", "winding"]);
        for &(omega, nu) in &sc.points {
            out.push(vec![omega, nu]);
        }
    }
    if sc.overlap_warning {
        out.note("warning", "c ≥ 1: tongues may overlap and the map is not invertible");
    }
    Ok(out)
}

fn adler(k: f64, omega: f64, phi0: f64, t_end: f64, tol: f64, samples: usize) -> Result<Table, CliError> {
    if samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let params = AdlerParams::new(k, omega, phi0).context(|| "Adler parameters".into())?;
    let run = adler_integrate(params, t_end, tol).context(|| "Adler integration".into())?;
    let len = run.times.len();
    let stride = len.div_ceil(samples).max(1);
    let mut out = Table::new(&["t", "phase"]);
    for i in (0..len).step_by(stride) {
        out.push(vec![run.times[i], run.phase[i]]);
    }
    if (len - 1) % stride != 0 {
        out.push(vec![run.times[len - 1], run.phase[len - 1]]);
    }
    out.note("mean_frequency", format_number(run.mean_frequency));
    match run.regime {
        Some(Regime::Locked { phase }) => out.note("regime", format!("locked at {}", format_number(phase))),
        Some(Regime::Unlocked { mean_frequency }) => {
            out.note("regime", format!("unlocked, beat {}", format_number(mean_frequency)))
        }
        None => out.note("regime", "undetermined"),
    }
    Ok(out)
}

fn pll_noise(k: f64, beat_ratio: f64, jitter: f64, counts: usize, gate: f64, seed: u64) -> Result<Table, CliError> {
    if !(beat_ratio > 0.0) {
        return Err(usage("--beat-ratio must be positive"));
    }
    let beat = beat_ratio * k;
    let params = AdlerParams::new(k, (beat * beat + k * k).sqrt(), 0.0).context(|| "loop parameters".into())?;
    let run = pll_noise_experiment(params, jitter, seed, counts, gate).context(|| "noise experiment".into())?;
    let mut out = Table::new(&["tau", "sigma_input", "sigma_beat", "ratio"]);
    for r in &run.allan {
        out.push(vec![r.tau, r.sigma_input, r.sigma_beat, r.sigma_beat / r.sigma_input]);
    }
    out.note("expected_ratio", format_number(run.expected_ratio));
    out.note("measured_ratio", run.ratio.map_or("undefined".into(), format_number));
    out.note("nominal_beat", format_number(run.nominal_beat));
    out.note("locked_gates", run.locked_gates);
    Ok(out)
}

fn scatter(kmin: f64, kmax: f64, points: usize) -> Result<Table, CliError> {
    let mut out = Table::new(&["k", "s_re", "s_im", "s_modulus", "route_gap"]);
    for k in linspace(kmin, kmax, points)? {
        let s = scattering_coefficient(Complex64::new(0.5, k)).context(|| format!("S(1/2 + {k}i)"))?;
        let v = s.value();
        out.push(vec![k, v.re, v.im, v.norm(), s.route_gap()]);
    }
    Ok(out)
}

fn eisenstein(nu: f64, y: f64, s: Complex64, qmax: u64) -> Result<Table, CliError> {
    check_qmax(qmax)?;
    let z = HalfPlanePoint::new(nu, y).context(|| "evaluation point".into())?;
    let mut out = Table::new(&["q_max", "re", "im", "terms"]);
    let mut convergent = true;
    for q in 1..=qmax {
        let e = eisenstein_partial(z, s, q).context(|| format!("partial sum to Q = {q}"))?;
        convergent = e.absolutely_convergent;
        out.push(vec![q as f64, e.value.re, e.value.im, e.terms as f64]);
    }
    if !convergent {
        out.note("warning", "Re s ≤ 1: partial sums of a divergent series");
    }
    Ok(out)
}

fn qphase(qmax: u64, beta: f64) -> Result<Table, CliError> {
    check_qmax(qmax)?;
    let t = table_upto(qmax)?;
    let mut out = Table::new(&["q", "dense", "ramanujan", "exact", "route_gap"]);
    for q in 1..=qmax {
        let e = expectation_locked_phase(&t, q, beta).context(|| format!("expectation at q = {q}"))?;
        out.push(vec![q as f64, e.dense, e.ramanujan, e.exact, e.route_gap()]);
    }
    Ok(out)
}

fn kms(beta: f64, qmax: u64) -> Result<Table, CliError> {
    check_qmax(qmax)?;
    let t = table_upto(qmax)?;
    let mut out = Table::new(&["q", "kms", "mu_over_phi"]);
    for q in 1..=qmax {
        let v = kms_expectation(&t, q, beta).context(|| format!("KMS at q = {q}"))?;
        let lim = kms_low_temperature_limit(&t, q).context(|| format!("μ/φ at q = {q}"))?;
        out.push(vec![q as f64, v.value, lim]);
    }
    Ok(out)
}

fn spectrum(source: Source, n: usize, alpha: f64, segment: usize, band: (f64, f64), seed: u64) -> Result<Table, CliError> {
    let samples = match source {
        Source::ErrorModified | Source::ErrorMangoldt => {
            let t = table_upto(n as u64)?;
            let kind = match source {
                Source::ErrorModified => SummatoryKind::MangoldtModified,
                _ => SummatoryKind::MangoldtGeneral(phaselock::arith::MangoldtSpec::plain()),
            };
            t.error_series(kind, n as u64).context(|| "error term series".into())?
        }
        Source::White => white_noise(n, 1.0, seed),
        Source::PowerLaw => power_law_noise(n, alpha, 1.0, seed).context(|| "power-law noise".into())?,
    };
    let series = TimeSeries::new(1.0, samples).context(|| "time series".into())?;
    let opts = WelchOptions {
        segment_len: Some(segment),
        ..WelchOptions::default()
    };
    let est = psd_estimate(&series, band, &opts).context(|| "periodogram".into())?;
    let mut out = Table::new(&["frequency", "psd"]);
    for (&f, &p) in est.frequencies.iter().zip(&est.psd) {
        out.push(vec![f, p]);
    }
    out.note("slope", format_number(est.slope));
    out.note("slope_stderr", format_number(est.slope_stderr));
    out.note("intercept", format_number(est.intercept));
    out.note("fit_points", est.fit_points);
    out.note("segments", est.segments);
    Ok(out)
}

fn fig2(kmin: f64, kmax: f64, points: usize) -> Result<Table, CliError> {
    let grid = linspace(kmin, kmax, points)?;
    let phase = scattering_phase(&grid).context(|| "scattering phase".into())?;
    let mut out = Table::new(&["k", "kappa", "kappa_prime", "a_phase", "kappa_exact"]);
    for p in phase {
        out.push(vec![p.k, p.kappa, p.kappa_prime, p.a_phase, p.kappa_exact]);
    }
    Ok(out)
}

/// `πΛ(q)/ln q`, taken as 0 where Λ vanishes (including q = 1).
fn mangoldt_ref(t: &ArithTable, q: u64) -> Result<f64, CliError> {
    let l = t.mangoldt(q).context(|| format!("Λ({q})"))?;
    Ok(if l == 0.0 { 0.0 } else { PI * l / (q as f64).ln() })
}

fn fig3(qmax: u64, beta: Option<f64>) -> Result<Table, CliError> {
    check_qmax(qmax)?;
    let t = table_upto(qmax)?;
    let at = |q: u64, b: f64| -> Result<f64, CliError> {
        Ok(expectation_locked_phase(&t, q, b)
            .context(|| format!("expectation at q = {q}"))?
            .value())
    };
    let mut out = match beta {
        Some(_) => Table::new(&["q", "expectation", "mangoldt_ref"]),
        None => Table::new(&["q", "expectation_beta0", "expectation_beta1", "mangoldt_ref"]),
    };
    for q in 1..=qmax {
        let r = mangoldt_ref(&t, q)?;
        out.push(match beta {
            Some(b) => vec![q as f64, at(q, b)?, r],
            None => vec![q as f64, at(q, 0.0)?, at(q, 1.0)?, r],
        });
    }
    Ok(out)
}

fn fig5(eps: f64, qmax: u64) -> Result<Table, CliError> {
    check_qmax(qmax)?;
    if !(eps > 0.0) {
        return Err(usage("--eps must be positive"));
    }
    let t = table_upto(qmax)?;
    let mut out = Table::new(&["q", "kms", "mangoldt_ref"]);
    for q in 1..=qmax {
        let v = kms_expectation(&t, q, 1.0 + eps).context(|| format!("KMS at q = {q}"))?;
        let l = t.mangoldt(q).context(|| format!("Λ({q})"))?;
        out.push(vec![q as f64, v.value, -l * eps / q as f64]);
    }
    Ok(out)
}

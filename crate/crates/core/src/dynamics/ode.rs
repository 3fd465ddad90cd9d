//! Dormand–Prince 5(4) with adaptive step control and the 4th-order continuous
//! extension for output on an arbitrary grid.

use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions<T> {
    pub rtol: T,
    pub atol: T,
    /// Initial step; picked from the tolerance when `None`.
    pub h_init: Option<T>,
    pub h_max: Option<T>,
    pub max_steps: usize,
}

impl<T: Real> OdeOptions<T> {
    pub fn with_tol(tol: T) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            h_init: None,
            h_max: None,
            max_steps: 50_000_000,
        }
    }
}

/// States sampled on the requested output grid.
#[derive(Debug, Clone)]
pub struct Trajectory<T, const N: usize> {
    pub t: Vec<T>,
    pub y: Vec<[T; N]>,
    pub accepted: usize,
    pub rejected: usize,
}

struct Tableau<T> {
    c: [T; 7],
    a: [[T; 6]; 7],
    b: [T; 7],
    e: [T; 7],
    d: [T; 7],
}

impl<T: Real> Tableau<T> {
    fn new() -> Self {
        let l = T::lit;
        let z = T::zero();
        Self {
            c: [z, l(0.2), l(0.3), l(0.8), l(8.0 / 9.0), T::one(), T::one()],
            a: [
                [z; 6],
                [l(0.2), z, z, z, z, z],
                [l(3.0 / 40.0), l(9.0 / 40.0), z, z, z, z],
                [l(44.0 / 45.0), l(-56.0 / 15.0), l(32.0 / 9.0), z, z, z],
                [
                    l(19372.0 / 6561.0),
                    l(-25360.0 / 2187.0),
                    l(64448.0 / 6561.0),
                    l(-212.0 / 729.0),
                    z,
                    z,
                ],
                [
                    l(9017.0 / 3168.0),
                    l(-355.0 / 33.0),
                    l(46732.0 / 5247.0),
                    l(49.0 / 176.0),
                    l(-5103.0 / 18656.0),
                    z,
                ],
                [
                    l(35.0 / 384.0),
                    z,
                    l(500.0 / 1113.0),
                    l(125.0 / 192.0),
                    l(-2187.0 / 6784.0),
                    l(11.0 / 84.0),
                ],
            ],
            b: [
                l(35.0 / 384.0),
                z,
                l(500.0 / 1113.0),
                l(125.0 / 192.0),
                l(-2187.0 / 6784.0),
                l(11.0 / 84.0),
                z,
            ],
            e: [
                l(71.0 / 57600.0),
                z,
                l(-71.0 / 16695.0),
                l(71.0 / 1920.0),
                l(-17253.0 / 339200.0),
                l(22.0 / 525.0),
                l(-1.0 / 40.0),
            ],
            d: [
                l(-12715105075.0 / 11282082432.0),
                z,
                l(87487479700.0 / 32700410799.0),
                l(-10690763975.0 / 1880347072.0),
                l(701980252875.0 / 199316789632.0),
                l(-1453857185.0 / 822651844.0),
                l(69997945.0 / 29380423.0),
            ],
        }
    }
}

struct Step<T, const N: usize> {
    k: [[T; N]; 7],
    y_new: [T; N],
    err: [T; N],
}

fn dp_step<T: Real, const N: usize, F>(tab: &Tableau<T>, f: &mut F, t: T, y: &[T; N], k1: [T; N], h: T) -> Step<T, N>
where
    F: FnMut(T, &[T; N]) -> [T; N],
{
    let mut k = [[T::zero(); N]; 7];
    k[0] = k1;
    for s in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = tab.a[s][j];
            if a != T::zero() {
                for i in 0..N {
                    ys[i] += h * a * kj[i];
                }
            }
        }
        k[s] = f(t + tab.c[s] * h, &ys);
    }
    let mut y_new = *y;
    let mut err = [T::zero(); N];
    for s in 0..7 {
        for i in 0..N {
            y_new[i] += h * tab.b[s] * k[s][i];
            err[i] += h * tab.e[s] * k[s][i];
        }
    }
    Step { k, y_new, err }
}

fn dense<T: Real, const N: usize>(tab: &Tableau<T>, y0: &[T; N], st: &Step<T, N>, h: T, theta: T) -> [T; N] {
    let mut out = [T::zero(); N];
    let one = T::one();
    for i in 0..N {
        let r2 = st.y_new[i] - y0[i];
        let r3 = h * st.k[0][i] - r2;
        let r4 = r2 - h * st.k[6][i] - r3;
        let mut r5 = T::zero();
        for s in 0..7 {
            r5 += tab.d[s] * st.k[s][i];
        }
        r5 *= h;
        out[i] = y0[i] + theta * (r2 + (one - theta) * (r3 + theta * (r4 + (one - theta) * r5)));
    }
    out
}

fn finite<T: Real, const N: usize>(y: &[T; N]) -> bool {
    y.iter().all(|v| v.is_finite())
}

const TRACE_LEN: usize = 16;

fn push_trace(trace: &mut Vec<(f64, f64)>, t: f64, h: f64) {
    if trace.len() == TRACE_LEN {
        trace.remove(0);
    }
    trace.push((t, h));
}

/// Integrates `y' = f(t, y)` from `t0` and samples the solution at each of
/// `outputs` (non-decreasing, all `≥ t0`).
pub fn integrate<T: Real, const N: usize, F>(
    mut f: F,
    t0: T,
    y0: [T; N],
    outputs: &[T],
    opts: &OdeOptions<T>,
) -> Result<Trajectory<T, N>>
where
    F: FnMut(T, &[T; N]) -> [T; N],
{
    if !(opts.rtol > T::zero()) || !(opts.atol > T::zero()) {
        return Err(Error::Parameter("tolerances must be positive".into()));
    }
    if outputs.windows(2).any(|w| w[1] < w[0]) || outputs.first().is_some_and(|&t| t < t0) {
        return Err(Error::Parameter("output times must be non-decreasing and ≥ t0".into()));
    }
    if !finite(&y0) {
        return Err(Error::Parameter("initial state is not finite".into()));
    }
    let tab = Tableau::new();
    let t_end = outputs.last().copied().unwrap_or(t0);
    let mut traj = Trajectory {
        t: Vec::with_capacity(outputs.len()),
        y: Vec::with_capacity(outputs.len()),
        accepted: 0,
        rejected: 0,
    };
    let mut next_out = 0;
    while next_out < outputs.len() && outputs[next_out] == t0 {
        traj.t.push(t0);
        traj.y.push(y0);
        next_out += 1;
    }
    if next_out == outputs.len() {
        return Ok(traj);
    }

    let span = t_end - t0;
    let h_max = opts.h_max.unwrap_or(span);
    let mut h = opts
        .h_init
        .unwrap_or_else(|| (span * T::lit(1e-3)).min(opts.rtol.powf(T::lit(0.2)) * T::lit(0.1)))
        .min(h_max);
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut trace: Vec<(f64, f64)> = Vec::with_capacity(TRACE_LEN);
    let safety = T::lit(0.9);
    let h_min = T::lit(16.0) * T::epsilon() * span.abs().max(T::one());

    while next_out < outputs.len() {
        if traj.accepted + traj.rejected >= opts.max_steps {
            return Err(Error::Integration {
                t: t.to_f64_lossy(),
                reason: "step budget exhausted".into(),
                trace,
            });
        }
        if t + h > t_end {
            h = t_end - t;
        }
        let st = dp_step(&tab, &mut f, t, &y, k1, h);
        if !finite(&st.y_new) {
            if h <= h_min {
                return Err(Error::Integration {
                    t: t.to_f64_lossy(),
                    reason: "state became non-finite".into(),
                    trace,
                });
            }
            h *= T::lit(0.25);
            traj.rejected += 1;
            continue;
        }
        let mut acc = T::zero();
        for i in 0..N {
            let scale = opts.atol + opts.rtol * y[i].abs().max(st.y_new[i].abs());
            let r = st.err[i] / scale;
            acc += r * r;
        }
        let err = (acc / T::from_usize_lossy(N.max(1))).sqrt();
        let factor = if err == T::zero() {
            T::lit(5.0)
        } else {
            (safety * err.powf(T::lit(-0.2))).max(T::lit(0.2)).min(T::lit(5.0))
        };
        if err <= T::one() {
            let t_new = t + h;
            while next_out < outputs.len() && outputs[next_out] <= t_new {
                let theta = if h > T::zero() { (outputs[next_out] - t) / h } else { T::one() };
                let yo = if theta >= T::one() { st.y_new } else { dense(&tab, &y, &st, h, theta) };
                traj.t.push(outputs[next_out]);
                traj.y.push(yo);
                next_out += 1;
            }
            push_trace(&mut trace, t_new.to_f64_lossy(), h.to_f64_lossy());
            t = t_new;
            y = st.y_new;
            k1 = st.k[6];
            traj.accepted += 1;
            h = (h * factor).min(h_max);
        } else {
            traj.rejected += 1;
            h *= factor.min(T::one());
            if h < h_min {
                return Err(Error::Integration {
                    t: t.to_f64_lossy(),
                    reason: "step size underflow".into(),
                    trace,
                });
            }
        }
    }
    Ok(traj)
}

/// Same tableau with a fixed step `h`, keeping every step.
pub fn integrate_fixed<T: Real, const N: usize, F>(
    mut f: F,
    t0: T,
    y0: [T; N],
    h: T,
    n_steps: usize,
) -> Result<Trajectory<T, N>>
where
    F: FnMut(T, &[T; N]) -> [T; N],
{
    if !(h > T::zero()) {
        return Err(Error::Parameter("step must be positive".into()));
    }
    let tab = Tableau::new();
    let mut traj = Trajectory {
        t: Vec::with_capacity(n_steps + 1),
        y: Vec::with_capacity(n_steps + 1),
        accepted: 0,
        rejected: 0,
    };
    let mut y = y0;
    traj.t.push(t0);
    traj.y.push(y);
    let mut trace = Vec::new();
    for n in 0..n_steps {
        let t = t0 + T::from_usize_lossy(n) * h;
        let k1 = f(t, &y);
        y = dp_step(&tab, &mut f, t, &y, k1, h).y_new;
        if !finite(&y) {
            return Err(Error::Integration {
                t: t.to_f64_lossy(),
                reason: "state became non-finite".into(),
                trace,
            });
        }
        push_trace(&mut trace, t.to_f64_lossy(), h.to_f64_lossy());
        traj.t.push(t0 + T::from_usize_lossy(n + 1) * h);
        traj.y.push(y);
        traj.accepted += 1;
    }
    Ok(traj)
}

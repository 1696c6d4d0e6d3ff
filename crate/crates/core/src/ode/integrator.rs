//! Dormand-Prince 5(4) with PI step-size control (Hairer, Norsett & Wanner, DOPRI5).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: Option<f64>,
    pub h_max: f64,
    pub max_steps: usize,
    /// Clamp components undershooting into `(-10 abs_tol, 0)` to zero and
    /// fail on anything further below.
    pub nonnegative: bool,
}

impl Options {
    pub fn new(rel_tol: f64, abs_tol: f64) -> Self {
        Options {
            rel_tol,
            abs_tol,
            h_init: None,
            h_max: f64::INFINITY,
            max_steps: 5_000_000,
            nonnegative: true,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

#[derive(Debug, Clone)]
pub struct Solution<const N: usize> {
    pub t: Vec<f64>,
    pub y: Vec<[f64; N]>,
    /// Vector field at each stored point, for Hermite interpolation.
    pub dy: Vec<[f64; N]>,
    pub stats: Stats,
    pub stopped_early: bool,
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const H_UNDERFLOW: f64 = 1e-14;
const BLOWUP: f64 = 1e12;

#[inline]
fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

fn err_norm<const N: usize>(err: &[f64; N], y0: &[f64; N], y1: &[f64; N], o: &Options) -> f64 {
    let mut sum = 0.0;
    for i in 0..N {
        let sk = o.abs_tol + o.rel_tol * y0[i].abs().max(y1[i].abs());
        sum += (err[i] / sk).powi(2);
    }
    (sum / N as f64).sqrt()
}

fn initial_step<const N: usize, F>(f: &F, y0: &[f64; N], f0: &[f64; N], span: f64, o: &Options) -> f64
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    let sk: Vec<f64> = y0.iter().map(|v| o.abs_tol + o.rel_tol * v.abs()).collect();
    let dnf: f64 = (0..N).map(|i| (f0[i] / sk[i]).powi(2)).sum::<f64>() / N as f64;
    let dny: f64 = (0..N).map(|i| (y0[i] / sk[i]).powi(2)).sum::<f64>() / N as f64;
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
        1e-6
    } else {
        (dny / dnf).sqrt() * 0.01
    };
    h = h.min(o.h_max).min(span);
    let y1 = axpy(y0, h, &[(1.0, f0)]);
    let f1 = f(&y1);
    let der2 = ((0..N).map(|i| ((f1[i] - f0[i]) / sk[i]).powi(2)).sum::<f64>() / N as f64).sqrt() / h;
    let der12 = der2.max(dnf.sqrt());
    let h1 = if der12 <= 1e-15 {
        (h * 1e-3).max(1e-6)
    } else {
        (0.01 / der12).powf(0.2)
    };
    (100.0 * h).min(h1).min(o.h_max).min(span)
}

/// Integrates `y' = f(y)` from `t = 0` to `t_end`. `stop` is consulted after
/// every accepted step and ends the run early when it returns `true`.
pub fn dopri5<const N: usize, F, S>(f: F, y0: [f64; N], t_end: f64, o: &Options, mut stop: S) -> Result<Solution<N>>
where
    F: Fn(&[f64; N]) -> [f64; N],
    S: FnMut(f64, &[f64; N]) -> bool,
{
    let mut stats = Stats::default();
    let mut t = 0.0;
    let mut y = y0;
    let mut k1 = f(&y);
    stats.rhs_evals += 1;

    let mut sol = Solution {
        t: vec![t],
        y: vec![y],
        dy: vec![k1],
        stats,
        stopped_early: false,
    };
    if t_end <= 0.0 {
        return Ok(sol);
    }

    let mut h = match o.h_init {
        Some(h) => h,
        None => {
            stats.rhs_evals += 1;
            initial_step(&f, &y, &k1, t_end, o)
        }
    };
    let mut facold: f64 = 1e-4;
    let mut last_rejected = false;
    let expo = 0.2 - BETA * 0.75;

    loop {
        if stats.accepted + stats.rejected >= o.max_steps {
            return Err(Error::StepLimit(o.max_steps));
        }
        if h < H_UNDERFLOW * t.abs().max(1.0) {
            return Err(Error::Stiffness { t, h });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        let k2 = f(&axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(&axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(&axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(&axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(&axpy(
            &y,
            h,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ));
        let mut y1 = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f(&y1);
        stats.rhs_evals += 6;

        let mut err = [0.0; N];
        for i in 0..N {
            err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let en = err_norm(&err, &y, &y1, o);
        if !en.is_finite() {
            stats.rejected += 1;
            h *= FAC_MIN;
            last_rejected = true;
            continue;
        }
        let fac11 = en.powf(expo);

        if en <= 1.0 {
            let mut k_next = k7;
            if o.nonnegative {
                let mut clamped = false;
                for (i, v) in y1.iter_mut().enumerate() {
                    if *v < 0.0 {
                        if *v > -10.0 * o.abs_tol {
                            *v = 0.0;
                            clamped = true;
                        } else {
                            return Err(Error::NegativeState {
                                t: t + h,
                                component: i,
                                value: *v,
                            });
                        }
                    }
                }
                if clamped {
                    k_next = f(&y1);
                    stats.rhs_evals += 1;
                }
            }
            let big = y1.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if !big.is_finite() || big > BLOWUP {
                return Err(Error::Divergence { t: t + h, value: big });
            }

            stats.accepted += 1;
            t = if last { t_end } else { t + h };
            y = y1;
            k1 = k_next;
            sol.t.push(t);
            sol.y.push(y);
            sol.dy.push(k1);

            if stop(t, &y) {
                sol.stopped_early = !last;
                break;
            }
            if last {
                break;
            }

            let fac = (fac11 / facold.powf(BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            facold = en.max(1e-4);
            let mut h_new = (h / fac).min(o.h_max);
            if last_rejected {
                h_new = h_new.min(h);
            }
            last_rejected = false;
            h = h_new;
        } else {
            stats.rejected += 1;
            last_rejected = true;
            h /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
        }
    }
    sol.stats = stats;
    Ok(sol)
}

/// Cubic Hermite interpolation between two stored points.
pub fn hermite<const N: usize>(
    t0: f64,
    y0: &[f64; N],
    d0: &[f64; N],
    t1: f64,
    y1: &[f64; N],
    d1: &[f64; N],
    t: f64,
) -> [f64; N] {
    let h = t1 - t0;
    let s = (t - t0) / h;
    let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    let h10 = s * (1.0 - s) * (1.0 - s);
    let h01 = s * s * (3.0 - 2.0 * s);
    let h11 = s * s * (s - 1.0);
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = h00 * y0[i] + h10 * h * d0[i] + h01 * y1[i] + h11 * h * d1[i];
    }
    out
}

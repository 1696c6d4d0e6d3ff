//! Linearly implicit (Rosenbrock, ode23s-type) time stepping of the
//! semi-discrete reaction-diffusion system. The stage matrix
//! `I - h d J` is block tridiagonal with 2x2 blocks and is factored once
//! per step.

use crate::error::{Error, Result};
use crate::model::{jacobian_k, kinetics_k, Jacobian2, ModelParams};

type Mat = Jacobian2;

/// Semi-discrete system on nodes `0..=n`, states interleaved as
/// `[u0, v0, u1, v1, ...]`.
pub(crate) struct Semi<'a> {
    pub p: &'a ModelParams,
    pub k: &'a [f64],
    pub d: [f64; 2],
    pub inv_h2: f64,
    /// Set to false to leave only diffusion.
    pub reaction: bool,
}

impl Semi<'_> {
    fn nodes(&self) -> usize {
        self.k.len()
    }

    pub fn rhs(&self, y: &[f64], out: &mut [f64]) {
        let n = self.nodes() - 1;
        for j in 0..=n {
            let l = if j == 0 { 1 } else { j - 1 };
            let r = if j == n { n - 1 } else { j + 1 };
            for c in 0..2 {
                out[2 * j + c] = self.d[c] * self.inv_h2 * (y[2 * l + c] - 2.0 * y[2 * j + c] + y[2 * r + c]);
            }
            if self.reaction {
                let f = kinetics_k(self.p, self.k[j], &[y[2 * j], y[2 * j + 1]]);
                out[2 * j] += f[0];
                out[2 * j + 1] += f[1];
            }
        }
    }

    /// Factors `W = I - gamma J(y)`.
    fn factor(&self, y: &[f64], gamma: f64) -> Result<Factor> {
        let n = self.nodes() - 1;
        let off = [gamma * self.d[0] * self.inv_h2, gamma * self.d[1] * self.inv_h2];
        let mut dinv = Vec::with_capacity(n + 1);
        let mut upper: Vec<Mat> = Vec::with_capacity(n + 1);
        let mut lower = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let jk = if self.reaction {
                jacobian_k(self.p, self.k[j], &[y[2 * j], y[2 * j + 1]])
            } else {
                [[0.0; 2]; 2]
            };
            let mut dm = [
                [1.0 - gamma * jk[0][0] + 2.0 * off[0], -gamma * jk[0][1]],
                [-gamma * jk[1][0], 1.0 - gamma * jk[1][1] + 2.0 * off[1]],
            ];
            // coupling to j - 1 and j + 1; mirrored ghosts double the inner one at the ends
            let lw = if j == n { 2.0 } else { 1.0 };
            let up = if j == 0 { 2.0 } else { 1.0 };
            let l = [-off[0] * lw, -off[1] * lw];
            if j > 0 {
                let cp: &Mat = &upper[j - 1];
                for r in 0..2 {
                    for c in 0..2 {
                        dm[r][c] -= l[r] * cp[r][c];
                    }
                }
            }
            let inv = inverse(&dm)?;
            let u = [-off[0] * up, -off[1] * up];
            upper.push([
                [inv[0][0] * u[0], inv[0][1] * u[1]],
                [inv[1][0] * u[0], inv[1][1] * u[1]],
            ]);
            dinv.push(inv);
            lower.push(l);
        }
        Ok(Factor { dinv, upper, lower })
    }
}

fn inverse(m: &Mat) -> Result<Mat> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det == 0.0 || !det.is_finite() {
        return Err(Error::Numerical("singular block in the stage matrix".into()));
    }
    Ok([[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]])
}

struct Factor {
    dinv: Vec<Mat>,
    /// `D'_j^{-1} U_j`.
    upper: Vec<Mat>,
    /// Diagonal of `L_j`.
    lower: Vec<[f64; 2]>,
}

impl Factor {
    /// Overwrites `x` with `W^{-1} x`.
    fn solve(&self, x: &mut [f64]) {
        let n = self.dinv.len() - 1;
        let mut prev = [0.0; 2];
        for j in 0..=n {
            let l = self.lower[j];
            let r = [x[2 * j] - l[0] * prev[0], x[2 * j + 1] - l[1] * prev[1]];
            let m = &self.dinv[j];
            let g = [m[0][0] * r[0] + m[0][1] * r[1], m[1][0] * r[0] + m[1][1] * r[1]];
            x[2 * j] = g[0];
            x[2 * j + 1] = g[1];
            prev = g;
        }
        for j in (0..n).rev() {
            let c = &self.upper[j];
            let (a, b) = (x[2 * j + 2], x[2 * j + 3]);
            x[2 * j] -= c[0][0] * a + c[0][1] * b;
            x[2 * j + 1] -= c[1][0] * a + c[1][1] * b;
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct StepOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
    /// Any component above this aborts the run.
    pub ceiling: f64,
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

/// Advances `y` from `t = 0` through the sorted `times`, calling `record`
/// with the state at each of them.
pub(crate) fn rosenbrock(
    sys: &Semi,
    y: &mut Vec<f64>,
    times: &[f64],
    opts: &StepOptions,
    mut record: impl FnMut(f64, &[f64]),
) -> Result<StepStats> {
    let d = 1.0 / (2.0 + std::f64::consts::SQRT_2);
    let e32 = 6.0 + std::f64::consts::SQRT_2;
    let len = y.len();
    let mut f0 = vec![0.0; len];
    let mut f1 = vec![0.0; len];
    let mut f2 = vec![0.0; len];
    let mut k1 = vec![0.0; len];
    let mut k2 = vec![0.0; len];
    let mut k3 = vec![0.0; len];
    let mut tmp = vec![0.0; len];
    let mut ynew = vec![0.0; len];
    let mut stats = StepStats::default();

    let mut t = 0.0;
    let mut h = opts.h_init.min(opts.h_max);
    sys.rhs(y, &mut f0);

    for &target in times {
        while t < target {
            if stats.accepted + stats.rejected >= opts.max_steps {
                return Err(Error::StepLimit(opts.max_steps));
            }
            let hmin = 1e-14 * t.abs().max(1.0);
            if h < hmin {
                return Err(Error::Stiffness { t, h });
            }
            let last = t + h >= target - hmin;
            let hs = if last { target - t } else { h };

            let w = sys.factor(y, hs * d)?;
            k1.copy_from_slice(&f0);
            w.solve(&mut k1);
            for i in 0..len {
                tmp[i] = y[i] + 0.5 * hs * k1[i];
            }
            sys.rhs(&tmp, &mut f1);
            for i in 0..len {
                k2[i] = f1[i] - k1[i];
            }
            w.solve(&mut k2);
            for i in 0..len {
                k2[i] += k1[i];
                ynew[i] = y[i] + hs * k2[i];
            }
            sys.rhs(&ynew, &mut f2);
            for i in 0..len {
                k3[i] = f2[i] - e32 * (k2[i] - f1[i]) - 2.0 * (k1[i] - f0[i]);
            }
            w.solve(&mut k3);

            let mut err = 0.0f64;
            let mut floor = 0.0f64;
            for i in 0..len {
                let e = hs / 6.0 * (k1[i] - 2.0 * k2[i] + k3[i]);
                let sc = opts.abs_tol + opts.rel_tol * y[i].abs().max(ynew[i].abs());
                err = err.max(e.abs() / sc);
                floor = floor.min(ynew[i]);
            }
            if !err.is_finite() {
                err = 1e10;
            }
            let negative = floor < -10.0 * opts.abs_tol;
            if err > 1.0 || negative {
                stats.rejected += 1;
                let fac = if negative {
                    0.5
                } else {
                    (0.8 * err.powf(-1.0 / 3.0)).max(0.1)
                };
                h = hs * fac;
                continue;
            }

            stats.accepted += 1;
            let mut clamped = false;
            for v in ynew.iter_mut() {
                if *v < 0.0 {
                    *v = 0.0;
                    clamped = true;
                }
                if *v > opts.ceiling {
                    return Err(Error::Divergence { t: t + hs, value: *v });
                }
            }
            std::mem::swap(y, &mut ynew);
            if clamped {
                sys.rhs(y, &mut f0);
            } else {
                std::mem::swap(&mut f0, &mut f2);
            }
            t = if last { target } else { t + hs };
            let fac = if err == 0.0 {
                5.0
            } else {
                (0.8 * err.powf(-1.0 / 3.0)).clamp(0.1, 5.0)
            };
            // a step shortened to land on a snapshot does not shrink the next one
            h = (hs.max(if last { h } else { 0.0 }) * fac).min(opts.h_max);
        }
        record(t, y);
    }
    Ok(stats)
}

//! Trajectories of the planar system and the phase-plane tools built on them.

pub mod integrator;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibria::{all_equilibria, Equilibrium, Label};
use crate::error::{Error, Result};
use crate::model::{eigenvalues, jacobian, kinetics, thresholds, ModelParams, State2};
use integrator::{dopri5, hermite, Options, Stats};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State2>,
    pub stats: Stats,
    #[serde(skip)]
    pub velocities: Vec<State2>,
}

impl Trajectory {
    pub fn final_state(&self) -> State2 {
        *self.states.last().expect("trajectory has at least the initial point")
    }

    /// State at time `t` from the Hermite interpolant of the stored steps.
    pub fn sample(&self, t: f64) -> State2 {
        let i = self.times.partition_point(|s| *s <= t);
        if i == 0 {
            return self.states[0];
        }
        if i >= self.times.len() {
            return self.final_state();
        }
        hermite(
            self.times[i - 1],
            &self.states[i - 1],
            &self.velocities[i - 1],
            self.times[i],
            &self.states[i],
            &self.velocities[i],
            t,
        )
    }

    /// First time after which the state moves by less than `1e-6` (sup-norm)
    /// per unit of time for 50 consecutive unit intervals.
    pub fn transient_end(&self) -> Option<f64> {
        const QUIET: usize = 50;
        let t_end = *self.times.last()?;
        let mut run = 0usize;
        let mut prev = self.states[0];
        let mut t = 1.0;
        let mut i = 1usize;
        while t <= t_end {
            let s = self.sample(t);
            let d = (s[0] - prev[0]).abs().max((s[1] - prev[1]).abs());
            if d < 1e-6 {
                run += 1;
                if run == QUIET {
                    return Some((i - QUIET) as f64);
                }
            } else {
                run = 0;
            }
            prev = s;
            i += 1;
            t = i as f64;
        }
        None
    }

    /// Minimum of each component over `t >= t0`.
    pub fn min_after(&self, t0: f64) -> State2 {
        self.fold_after(t0, f64::INFINITY, f64::min)
    }

    /// Maximum of each component over `t >= t0`.
    pub fn max_after(&self, t0: f64) -> State2 {
        self.fold_after(t0, f64::NEG_INFINITY, f64::max)
    }

    fn fold_after(&self, t0: f64, init: f64, op: fn(f64, f64) -> f64) -> State2 {
        let mut acc = [init, init];
        for (t, s) in self.times.iter().zip(&self.states) {
            if *t >= t0 {
                acc = [op(acc[0], s[0]), op(acc[1], s[1])];
            }
        }
        acc
    }
}

fn check_tol(rel_tol: f64, abs_tol: f64) -> Result<()> {
    for (name, v) in [("rel_tol", rel_tol), ("abs_tol", abs_tol)] {
        if !(v > 0.0 && v <= 1e-2) {
            return Err(Error::Domain {
                name,
                value: v,
                reason: "tolerances must lie in (0, 1e-2]",
            });
        }
    }
    Ok(())
}

pub(crate) fn integrate_with(
    p: &ModelParams,
    init: State2,
    t_end: f64,
    opts: &Options,
    stop: impl FnMut(f64, &State2) -> bool,
) -> Result<Trajectory> {
    let sol = dopri5(|s: &State2| kinetics(p, s), init, t_end, opts, stop)?;
    Ok(Trajectory {
        times: sol.t,
        states: sol.y,
        stats: sol.stats,
        velocities: sol.dy,
    })
}

pub fn integrate(p: &ModelParams, init: State2, t_end: f64, rel_tol: f64, abs_tol: f64) -> Result<Trajectory> {
    p.validate()?;
    check_tol(rel_tol, abs_tol)?;
    for (name, v) in [("x0", init[0]), ("y0", init[1])] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::Domain {
                name,
                value: v,
                reason: "initial state must be nonnegative",
            });
        }
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::Domain {
            name: "t_end",
            value: t_end,
            reason: "must be finite and > 0",
        });
    }
    integrate_with(p, init, t_end, &Options::new(rel_tol, abs_tol), |_, _| false)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PermanenceBounds {
    pub upper: f64,
    /// Lower bound `l = min{1 - c, (1/(1+k) - a)/(1 + m)}`.
    pub lower: f64,
    pub certified: bool,
}

pub fn permanence_bounds(p: &ModelParams) -> PermanenceBounds {
    let lower = (1.0 - p.c).min((1.0 / (1.0 + p.k) - p.a) / (1.0 + p.m));
    let k_star = thresholds(p).k_star;
    let certified = p.k > 0.0 && p.k < k_star && p.c > 0.0 && p.c < 1.0 && lower > 0.0;
    PermanenceBounds {
        upper: 1.0,
        lower,
        certified,
    }
}

/// Divergence of `(F, G)/(x y)`.
pub fn dulac(p: &ModelParams, x: f64, y: f64) -> f64 {
    -p.b / y + (-p.m * x - 1.0) / x
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DulacReport {
    pub max_value: f64,
    pub argmax: State2,
    pub points: usize,
    pub negative: bool,
}

pub fn dulac_audit(p: &ModelParams, x_range: (f64, f64), y_range: (f64, f64), n: usize) -> Result<DulacReport> {
    let ok = |r: (f64, f64)| r.0 > 0.0 && r.1 >= r.0 && r.1.is_finite();
    if !ok(x_range) || !ok(y_range) || n < 2 {
        return Err(Error::Precondition(
            "Dulac grid needs ranges inside (0, inf) and n >= 2".into(),
        ));
    }
    let at = |r: (f64, f64), i: usize| r.0 + (r.1 - r.0) * i as f64 / (n - 1) as f64;
    let mut best = (f64::NEG_INFINITY, [0.0, 0.0]);
    for i in 0..n {
        let x = at(x_range, i);
        for j in 0..n {
            let y = at(y_range, j);
            let d = dulac(p, x, y);
            if d > best.0 {
                best = (d, [x, y]);
            }
        }
    }
    Ok(DulacReport {
        max_value: best.0,
        argmax: best.1,
        points: n * n,
        negative: best.0 < 0.0,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Branch {
    pub points: Vec<State2>,
    pub arc_length: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Separatrix {
    pub saddle: Equilibrium,
    /// Unit stable eigenvector; branch 0 leaves along `+`, branch 1 along `-`.
    pub stable_vector: State2,
    pub branches: [Branch; 2],
}

const SEPARATRIX_OFFSET: f64 = 1e-6;
const SEPARATRIX_BOX: f64 = 4.0;

/// Unit eigenvector of the stable eigenvalue at a saddle.
pub fn stable_eigenvector(p: &ModelParams, at: &State2) -> Result<(f64, State2)> {
    let j = jacobian(p, at)?;
    let ev = eigenvalues(&j);
    if ev[0].im != 0.0 || !(ev[0].re < 0.0 && ev[1].re > 0.0) {
        return Err(Error::Numerical(format!(
            "not a hyperbolic saddle: eigenvalues {} and {}",
            ev[0], ev[1]
        )));
    }
    let lam = ev[0].re;
    let [[a, b], [c, d]] = j;
    // null vector of J - lam I from whichever row is better conditioned
    let r0 = [a - lam, b];
    let r1 = [c, d - lam];
    let n0 = r0[0].hypot(r0[1]);
    let n1 = r1[0].hypot(r1[1]);
    let v = if n0 >= n1 { [-r0[1], r0[0]] } else { [-r1[1], r1[0]] };
    let norm = v[0].hypot(v[1]);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::Numerical("defective stable eigenvector".into()));
    }
    Ok((lam, [v[0] / norm, v[1] / norm]))
}

/// Both branches of the stable manifold of `saddle`, traced in reversed time
/// for `span` or until they leave `[0, 4]^2`.
pub fn trace_separatrix(p: &ModelParams, saddle: &Equilibrium, span: f64) -> Result<Separatrix> {
    if !saddle.kind.is_saddle() {
        return Err(Error::Precondition(format!(
            "separatrix needs a saddle, got {:?} at {}",
            saddle.kind, saddle.label
        )));
    }
    if !(span > 0.0) {
        return Err(Error::Domain {
            name: "span",
            value: span,
            reason: "must be > 0",
        });
    }
    let (_, e) = stable_eigenvector(p, &saddle.point)?;
    let mut opts = Options::new(1e-10, 1e-12);
    opts.nonnegative = false;
    let outside = |s: &State2| s[0] < 0.0 || s[1] < 0.0 || s[0] > SEPARATRIX_BOX || s[1] > SEPARATRIX_BOX;

    let branch = |sign: f64| -> Result<Branch> {
        let start = [
            saddle.point[0] + sign * SEPARATRIX_OFFSET * e[0],
            saddle.point[1] + sign * SEPARATRIX_OFFSET * e[1],
        ];
        let sol = dopri5(
            |s: &State2| {
                let f = kinetics(p, s);
                [-f[0], -f[1]]
            },
            start,
            span,
            &opts,
            |_, s| outside(s),
        )?;
        let mut points = sol.y;
        if points.len() > 1 && outside(points.last().unwrap()) {
            points.pop();
        }
        let mut arc_length = Vec::with_capacity(points.len());
        let mut acc = 0.0;
        for (i, q) in points.iter().enumerate() {
            if i > 0 {
                let r = points[i - 1];
                acc += (q[0] - r[0]).hypot(q[1] - r[1]);
            }
            arc_length.push(acc);
        }
        Ok(Branch { points, arc_length })
    };

    Ok(Separatrix {
        saddle: saddle.clone(),
        stable_vector: e,
        branches: [branch(1.0)?, branch(-1.0)?],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasinLabel {
    Attractor(Label),
    Undecided,
}

/// Attractor reached by the forward trajectory from `init`, where reaching
/// means staying within `tol` of it for the last 5% of `[0, t_end]`.
pub fn classify_one(p: &ModelParams, attractors: &[Equilibrium], init: State2, t_end: f64, tol: f64) -> BasinLabel {
    let Ok(tr) = integrate_with(p, init, t_end, &Options::new(1e-9, 1e-11), |_, _| false) else {
        return BasinLabel::Undecided;
    };
    let settle = 0.95 * t_end;
    for a in attractors {
        let dist = |s: &State2| (s[0] - a.point[0]).hypot(s[1] - a.point[1]);
        let mut last_out = f64::NEG_INFINITY;
        for (t, s) in tr.times.iter().zip(&tr.states) {
            if dist(s) >= tol {
                last_out = *t;
            }
        }
        if last_out < settle {
            return BasinLabel::Attractor(a.label);
        }
    }
    BasinLabel::Undecided
}

pub fn basin_classify(p: &ModelParams, grid: &[State2], t_end: f64, tol: f64) -> Result<Vec<BasinLabel>> {
    p.validate()?;
    if grid
        .iter()
        .any(|s| !(0.0..=2.0).contains(&s[0]) || !(0.0..=2.0).contains(&s[1]))
    {
        return Err(Error::Precondition("basin grid must lie in [0, 2]^2".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain {
            name: "tol",
            value: tol,
            reason: "must be > 0",
        });
    }
    let attractors: Vec<Equilibrium> = all_equilibria(p)
        .into_iter()
        .filter(|e| e.kind.is_attractor())
        .collect();
    Ok(grid
        .par_iter()
        .map(|s| classify_one(p, &attractors, *s, t_end, tol))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Recurrence {
    pub t_reference: f64,
    pub t_return: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub cycle_detected: bool,
    pub references_checked: usize,
    /// Closest same-heading return to any reference point, if the
    /// trajectory ever came back to a reference's transversal.
    pub closest_return: Option<Recurrence>,
}

const RECURRENCE_TOL: f64 = 1e-6;
const LEAVE_RADIUS: f64 = 1e-3;
const MOVING_SPEED: f64 = 1e-4;
const MAX_REFERENCES: usize = 400;

/// Looks for a return of the curve to an earlier moving point: it has to
/// leave a `1e-3` ball, then cross the transversal through the reference in
/// the same direction, within `tol`. Crossings are located on the cubic
/// Hermite interpolant between stored points.
pub fn find_recurrence(times: &[f64], states: &[State2], velocities: &[State2], tol: f64) -> CycleReport {
    let moving: Vec<usize> = (0..states.len())
        .filter(|&i| velocities[i][0].hypot(velocities[i][1]) > MOVING_SPEED)
        .collect();
    let stride = (moving.len() / MAX_REFERENCES).max(1);
    let refs: Vec<usize> = moving.iter().copied().step_by(stride).collect();

    let mut best: Option<Recurrence> = None;
    for &i in &refs {
        let s0 = states[i];
        let f0 = velocities[i];
        let speed = f0[0].hypot(f0[1]);
        let n = [f0[0] / speed, f0[1] / speed];
        let g = |s: &State2| (s[0] - s0[0]) * n[0] + (s[1] - s0[1]) * n[1];
        let mut left = false;
        for j in i + 1..states.len() {
            let sj = states[j];
            if !left {
                left = (sj[0] - s0[0]).hypot(sj[1] - s0[1]) > LEAVE_RADIUS;
                continue;
            }
            let (ga, gb) = (g(&states[j - 1]), g(&sj));
            if !(ga < 0.0 && gb >= 0.0) {
                continue;
            }
            let interp = |t: f64| {
                hermite(
                    times[j - 1],
                    &states[j - 1],
                    &velocities[j - 1],
                    times[j],
                    &sj,
                    &velocities[j],
                    t,
                )
            };
            let (mut lo, mut hi) = (times[j - 1], times[j]);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if g(&interp(mid)) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let tc = 0.5 * (lo + hi);
            let sc = interp(tc);
            let d = (sc[0] - s0[0]).hypot(sc[1] - s0[1]);
            if best.is_none_or(|b| d < b.distance) {
                best = Some(Recurrence {
                    t_reference: times[i],
                    t_return: tc,
                    distance: d,
                });
            }
        }
    }
    CycleReport {
        cycle_detected: best.is_some_and(|b| b.distance < tol),
        references_checked: refs.len(),
        closest_return: best,
    }
}

pub fn limit_cycle_probe(p: &ModelParams, init: State2, t_end: f64) -> Result<CycleReport> {
    if !(init[0] > 0.0 && init[1] > 0.0) {
        return Err(Error::Precondition(
            "cycle probe needs a strictly positive start".into(),
        ));
    }
    let mut opts = Options::new(1e-10, 1e-12);
    opts.h_max = 0.5;
    let tr = integrate_with(p, init, t_end, &opts, |_, _| false)?;
    Ok(find_recurrence(&tr.times, &tr.states, &tr.velocities, RECURRENCE_TOL))
}

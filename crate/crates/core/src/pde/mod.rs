//! One-dimensional reaction-diffusion version of the model on `[0, L]` with
//! zero-flux boundaries and a spatially varying fear level, solved by the
//! method of lines.

pub mod field;
mod stepper;

use serde::{Deserialize, Serialize};

use crate::equilibria::{interior_equilibria, Equilibrium, Label};
use crate::error::{Error, Result};
use crate::model::{cubic, thresholds, ModelParams, State2};
use crate::ode::{trace_separatrix, Branch};
pub use field::{constant_like, make_fear_field, FearField, FearSpec};
use stepper::{rosenbrock, Semi, StepOptions};

/// Constant in the sandwich allowance `1e-6 + C h^2`. Halving the cell on
/// the figure configurations moves node values by at most `0.0032 h^2`.
pub const SANDWICH_C: f64 = 0.01;
/// A run aborts once a component exceeds this multiple of `max(1, sup init)`,
/// a bound the exact solution never leaves.
pub const BLOW_UP: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialData {
    Flat {
        u: f64,
        v: f64,
    },
    /// Node values, one per grid point.
    Sampled {
        u: Vec<f64>,
        v: Vec<f64>,
    },
}

impl InitialData {
    fn interleaved(&self, nodes: usize) -> Result<Vec<f64>> {
        let mut y = Vec::with_capacity(2 * nodes);
        match self {
            InitialData::Flat { u, v } => {
                for _ in 0..nodes {
                    y.push(*u);
                    y.push(*v);
                }
            }
            InitialData::Sampled { u, v } => {
                if u.len() != nodes || v.len() != nodes {
                    return Err(Error::Precondition(format!(
                        "sampled initial data needs {nodes} values per component"
                    )));
                }
                for (a, b) in u.iter().zip(v) {
                    y.push(*a);
                    y.push(*b);
                }
            }
        }
        if let Some(bad) = y.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::Domain {
                name: "initial data",
                value: *bad,
                reason: "must be finite and nonnegative",
            });
        }
        Ok(y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for PdeOptions {
    fn default() -> Self {
        PdeOptions {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            h_init: 1e-4,
            h_max: 5.0,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdeState {
    pub t: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl PdeState {
    /// `(max - min)` of each component over the grid.
    pub fn oscillation(&self) -> State2 {
        let spread = |w: &[f64]| {
            let (lo, hi) = w
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| (l.min(*x), h.max(*x)));
            hi - lo
        };
        [spread(&self.u), spread(&self.v)]
    }

    pub fn mean(&self) -> State2 {
        let n = self.u.len() as f64;
        [self.u.iter().sum::<f64>() / n, self.v.iter().sum::<f64>() / n]
    }

    /// Trapezoidal integrals of `u` and `v` over the domain with node spacing `h`.
    pub fn mass(&self, h: f64) -> State2 {
        let trap = |w: &[f64]| {
            let inner: f64 = w.iter().sum();
            h * (inner - 0.5 * (w[0] + w[w.len() - 1]))
        };
        [trap(&self.u), trap(&self.v)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdeRun {
    pub xs: Vec<f64>,
    pub snapshots: Vec<PdeState>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl PdeRun {
    pub fn terminal(&self) -> &PdeState {
        self.snapshots.last().expect("a run records at least its end time")
    }
}

/// `count + 1` evenly spaced snapshot times on `[0, t_end]`.
pub fn snapshot_grid(t_end: f64, count: usize) -> Vec<f64> {
    let count = count.max(1);
    (0..=count).map(|i| t_end * i as f64 / count as f64).collect()
}

fn check_diffusion(d: [f64; 2]) -> Result<()> {
    for (name, v) in [("d1", d[0]), ("d2", d[1])] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain {
                name,
                value: v,
                reason: "diffusion coefficients must be finite and > 0",
            });
        }
    }
    Ok(())
}

fn prepare_times(t_end: f64, snapshots: &[f64]) -> Result<Vec<f64>> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::Domain {
            name: "t_end",
            value: t_end,
            reason: "must be finite and > 0",
        });
    }
    let mut times: Vec<f64> = snapshots.iter().copied().filter(|t| *t >= 0.0 && *t <= t_end).collect();
    times.push(t_end);
    times.sort_by(|a, b| a.total_cmp(b));
    times.dedup();
    Ok(times)
}

#[allow(clippy::too_many_arguments)]
fn run(
    p: &ModelParams,
    field: &FearField,
    d: [f64; 2],
    init: &InitialData,
    t_end: f64,
    snapshots: &[f64],
    opts: &PdeOptions,
    reaction: bool,
) -> Result<PdeRun> {
    check_diffusion(d)?;
    let times = prepare_times(t_end, snapshots)?;
    let nodes = field.xs.len();
    let mut y = init.interleaved(nodes)?;
    let ceiling = BLOW_UP * y.iter().copied().fold(1.0, f64::max);
    let h = field.cell();
    let sys = Semi {
        p,
        k: &field.k,
        d,
        inv_h2: 1.0 / (h * h),
        reaction,
    };
    let step = StepOptions {
        rel_tol: opts.rel_tol,
        abs_tol: opts.abs_tol,
        h_init: opts.h_init,
        h_max: opts.h_max,
        max_steps: opts.max_steps,
        ceiling,
    };
    let mut out = Vec::with_capacity(times.len());
    let record = |t: f64, y: &[f64]| {
        out.push(PdeState {
            t,
            u: y.iter().step_by(2).copied().collect(),
            v: y.iter().skip(1).step_by(2).copied().collect(),
        })
    };
    let stats = rosenbrock(&sys, &mut y, &times, &step, record)?;
    Ok(PdeRun {
        xs: field.xs.clone(),
        snapshots: out,
        accepted_steps: stats.accepted,
        rejected_steps: stats.rejected,
    })
}

/// Integrates the reaction-diffusion system with fear level `field` (the
/// `k` in `p` is ignored), diffusion `[d1, d2]`, recording the state at each
/// of `snapshots` that lies in `[0, t_end]` and at `t_end`.
pub fn integrate_pde(
    p: &ModelParams,
    field: &FearField,
    diffusion: [f64; 2],
    init: &InitialData,
    t_end: f64,
    snapshots: &[f64],
    opts: &PdeOptions,
) -> Result<PdeRun> {
    p.with(crate::model::Param::K, field.k_hat.max(0.0)).validate()?;
    run(p, field, diffusion, init, t_end, snapshots, opts, true)
}

/// Pure diffusion on the same grid; the reaction terms are switched off.
pub fn integrate_diffusion(
    field: &FearField,
    diffusion: [f64; 2],
    init: &InitialData,
    t_end: f64,
    snapshots: &[f64],
    opts: &PdeOptions,
) -> Result<PdeRun> {
    let p = ModelParams {
        a: 1.0,
        b: 1.0,
        c: 1.0,
        k: 0.0,
        m: 0.0,
    };
    run(&p, field, diffusion, init, t_end, snapshots, opts, false)
}

/// Allowed violation of the pointwise comparison for cell size `h`.
pub fn sandwich_tolerance(h: f64) -> f64 {
    1e-6 + SANDWICH_C * h * h
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub times: Vec<f64>,
    /// `max (v_tilde - v)` over all snapshots and nodes.
    pub max_tilde_excess: f64,
    /// `max (v - v_hat)` over all snapshots and nodes.
    pub max_hat_excess: f64,
    pub tolerance: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Triplet {
    pub report: ComparisonReport,
    pub heterogeneous: PdeRun,
    /// Constant fear level `k_hat`.
    pub hat: PdeRun,
    /// Constant fear level `k_tilde`.
    pub tilde: PdeRun,
}

/// Runs the heterogeneous system and its two constant-fear bounding
/// systems from the same flat data and checks `v_tilde <= v <= v_hat`.
pub fn comparison_triplet(
    p: &ModelParams,
    field: &FearField,
    diffusion: [f64; 2],
    init: State2,
    t_end: f64,
    snapshots: &[f64],
    opts: &PdeOptions,
) -> Result<Triplet> {
    let data = InitialData::Flat { u: init[0], v: init[1] };
    let hat_field = constant_like(field, field.k_hat);
    let tilde_field = constant_like(field, field.k_tilde);
    let go = |f: &FearField| integrate_pde(p, f, diffusion, &data, t_end, snapshots, opts);
    let (het, (hat, tilde)) = rayon::join(|| go(field), || rayon::join(|| go(&hat_field), || go(&tilde_field)));
    let (het, hat, tilde) = (het?, hat?, tilde?);

    let mut tilde_excess = f64::NEG_INFINITY;
    let mut hat_excess = f64::NEG_INFINITY;
    for ((s, sh), st) in het.snapshots.iter().zip(&hat.snapshots).zip(&tilde.snapshots) {
        for j in 0..s.v.len() {
            tilde_excess = tilde_excess.max(st.v[j] - s.v[j]);
            hat_excess = hat_excess.max(s.v[j] - sh.v[j]);
        }
    }
    let tolerance = sandwich_tolerance(field.cell());
    Ok(Triplet {
        report: ComparisonReport {
            times: het.snapshots.iter().map(|s| s.t).collect(),
            max_tilde_excess: tilde_excess,
            max_hat_excess: hat_excess,
            tolerance,
            holds: tilde_excess <= tolerance && hat_excess <= tolerance,
        },
        heterogeneous: het,
        hat,
        tilde,
    })
}

/// A homogeneous target state, or a box of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub name: String,
    pub lo: State2,
    pub hi: State2,
}

impl Candidate {
    pub fn point(name: &str, s: State2) -> Self {
        Candidate {
            name: name.into(),
            lo: s,
            hi: s,
        }
    }

    fn distance(&self, s: State2) -> f64 {
        let gap = |x: f64, lo: f64, hi: f64| (lo - x).max(x - hi).max(0.0);
        gap(s[0], self.lo[0], self.hi[0]).max(gap(s[1], self.lo[1], self.hi[1]))
    }
}

fn stable_interior(p: &ModelParams, k: f64) -> Option<State2> {
    interior_equilibria(&p.with(crate::model::Param::K, k))
        .into_iter()
        .find(|e| e.kind.is_attractor())
        .map(|e| e.point)
}

/// `(1,0)`, `(0,1)` and, when the kinetic systems at `k_hat` and `k_tilde`
/// have stable interior equilibria, the box spanned by them.
pub fn candidates(p: &ModelParams, field: &FearField) -> Vec<Candidate> {
    let mut out = vec![
        Candidate::point("(1,0)", [1.0, 0.0]),
        Candidate::point("(0,1)", [0.0, 1.0]),
    ];
    let pts: Vec<State2> = [field.k_hat, field.k_tilde]
        .iter()
        .filter_map(|k| stable_interior(p, *k))
        .collect();
    if let Some(first) = pts.first() {
        let mut lo = *first;
        let mut hi = *first;
        for q in &pts {
            for c in 0..2 {
                lo[c] = lo[c].min(q[c]);
                hi[c] = hi[c].max(q[c]);
            }
        }
        out.push(Candidate {
            name: "interior".into(),
            lo,
            hi,
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateDistance {
    pub name: String,
    /// Sup over the grid of the distance to the candidate.
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub t: f64,
    pub oscillation: State2,
    pub mean: State2,
    pub distances: Vec<CandidateDistance>,
    pub verdict: Option<String>,
}

/// Names the candidate the terminal snapshot has settled on, if exactly one
/// lies within `tol` of every node and the spatial oscillation is below `tol`.
pub fn detect_convergence(series: &[PdeState], candidates: &[Candidate], tol: f64) -> Result<ConvergenceReport> {
    let last = series
        .last()
        .ok_or_else(|| Error::Precondition("empty snapshot series".into()))?;
    if !(tol > 0.0) {
        return Err(Error::Domain {
            name: "tol",
            value: tol,
            reason: "must be > 0",
        });
    }
    let oscillation = last.oscillation();
    let distances: Vec<CandidateDistance> = candidates
        .iter()
        .map(|c| CandidateDistance {
            name: c.name.clone(),
            distance: last
                .u
                .iter()
                .zip(&last.v)
                .map(|(u, v)| c.distance([*u, *v]))
                .fold(0.0, f64::max),
        })
        .collect();
    let flat = oscillation[0] < tol && oscillation[1] < tol;
    let hits: Vec<&CandidateDistance> = distances.iter().filter(|d| d.distance < tol).collect();
    let verdict = match (flat, hits.as_slice()) {
        (true, [one]) => Some(one.name.clone()),
        _ => None,
    };
    Ok(ConvergenceReport {
        t: last.t,
        oscillation,
        mean: last.mean(),
        distances,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Restriction {
    pub k: f64,
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// The strong-competition inequalities at fear level `k`. The lower bound
/// on `m` appears in two forms (`-k+1` and `-k-1` in the numerator); both
/// are listed.
pub fn strong_competition_restrictions(p: &ModelParams, k: f64) -> Vec<Restriction> {
    let q = p.with(crate::model::Param::K, k);
    let th = thresholds(&q);
    let u = cubic(&q);
    let (a, c, m) = (p.a, p.c, p.m);
    let u_e = u.x_v2().map(|x| u.eval(x)).unwrap_or(f64::NAN);
    let r = |name: &str, lhs: f64, rhs: f64, holds: bool| Restriction {
        k,
        name: name.into(),
        lhs,
        rhs,
        holds,
    };
    vec![
        r("m > 1 - ac - k", m, th.m1, m > th.m1),
        r("c > 1", c, 1.0, c > 1.0),
        r("u(E) < 0", u_e, 0.0, u_e < 0.0),
        {
            let rhs = (2.0 * a * c * k + a * c - k + 1.0) / (1.0 + k);
            r("m > (2ack + ac - k + 1)/(1 + k)", m, rhs, m > rhs)
        },
        r("m > (2ack + ac - k - 1)/(1 + k)", m, th.m2, m > th.m2),
        r("k >= 1/a - 1", k, th.k_star, k >= th.k_star),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub init: State2,
    pub expected: String,
    pub report: ConvergenceReport,
    pub reproduced: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WedgeReport {
    pub restrictions: Vec<Restriction>,
    /// Interior saddle of the kinetic system at `k_hat`.
    pub saddle_hat: State2,
    /// Interior saddle of the kinetic system at `k_tilde`.
    pub saddle_tilde: State2,
    pub v_ordered: bool,
    /// Horizontal levels at which both separatrices were compared.
    pub levels: usize,
    /// `max (S_tilde(v) - S_hat(v))` over the levels; `<= 0` when ordered.
    pub max_ordering_gap: f64,
    pub ordered: bool,
    pub probes: Vec<Probe>,
    pub holds: bool,
}

fn interior_saddle(p: &ModelParams, k: f64) -> Result<Equilibrium> {
    interior_equilibria(&p.with(crate::model::Param::K, k))
        .into_iter()
        .find(|e| e.label == Label::E1Star && e.kind.is_saddle())
        .ok_or_else(|| Error::Precondition(format!("no interior saddle at k = {k}")))
}

/// Concatenates both separatrix branches into one polyline through the saddle.
fn polyline(branches: &[Branch; 2], saddle: State2) -> Vec<State2> {
    let mut pts: Vec<State2> = branches[0].points.iter().rev().copied().collect();
    pts.push(saddle);
    pts.extend(branches[1].points.iter().copied());
    pts
}

/// Smallest `u` at which `curve` crosses the level `v`.
fn crossing(curve: &[State2], v: f64) -> Option<f64> {
    curve
        .windows(2)
        .filter_map(|w| {
            let (a, b) = (w[0], w[1]);
            if (a[1] - v) * (b[1] - v) > 0.0 || a[1] == b[1] {
                return None;
            }
            let s = (v - a[1]) / (b[1] - a[1]);
            Some(a[0] + s * (b[0] - a[0]))
        })
        .reduce(f64::min)
}

fn v_range(curve: &[State2]) -> (f64, f64) {
    curve.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| {
        (l.min(p[1]), h.max(p[1]))
    })
}

/// Checks the strong-competition wedge: the kinetic separatrices at
/// `k_hat` and `k_tilde` are ordered, and the two probe initial data (one on
/// each side of the wedge) reach the matching exclusion states.
pub fn wedge_check(
    p: &ModelParams,
    field: &FearField,
    diffusion: [f64; 2],
    probes: &[(State2, &str)],
    t_end: f64,
    opts: &PdeOptions,
) -> Result<WedgeReport> {
    let mut restrictions = strong_competition_restrictions(p, field.k_hat);
    restrictions.extend(strong_competition_restrictions(p, field.k_tilde));
    if let Some(bad) = restrictions.iter().find(|r| !r.holds) {
        return Err(Error::Precondition(format!(
            "strong-competition restriction fails at k = {}: {} ({} vs {})",
            bad.k, bad.name, bad.lhs, bad.rhs
        )));
    }

    let hat = interior_saddle(p, field.k_hat)?;
    let tilde = interior_saddle(p, field.k_tilde)?;
    let sep_hat = trace_separatrix(&p.with(crate::model::Param::K, field.k_hat), &hat, 200.0)?;
    let sep_tilde = trace_separatrix(&p.with(crate::model::Param::K, field.k_tilde), &tilde, 200.0)?;
    let curve_hat = polyline(&sep_hat.branches, hat.point);
    let curve_tilde = polyline(&sep_tilde.branches, tilde.point);

    let (lo_h, hi_h) = v_range(&curve_hat);
    let (lo_t, hi_t) = v_range(&curve_tilde);
    let (lo, hi) = (lo_h.max(lo_t), hi_h.min(hi_t));
    const LEVELS: usize = 400;
    let mut gap = f64::NEG_INFINITY;
    let mut levels = 0;
    for i in 1..LEVELS {
        let v = lo + (hi - lo) * i as f64 / LEVELS as f64;
        if let (Some(sh), Some(st)) = (crossing(&curve_hat, v), crossing(&curve_tilde, v)) {
            gap = gap.max(st - sh);
            levels += 1;
        }
    }
    let ordered = levels > 0 && gap <= 1e-9;

    let cands = candidates(p, field);
    let mut out = Vec::with_capacity(probes.len());
    for (init, expected) in probes {
        let data = InitialData::Flat { u: init[0], v: init[1] };
        let r = integrate_pde(p, field, diffusion, &data, t_end, &[], opts)?;
        let report = detect_convergence(&r.snapshots, &cands, 1e-3)?;
        out.push(Probe {
            init: *init,
            expected: (*expected).into(),
            reproduced: report.verdict.as_deref() == Some(*expected),
            report,
        });
    }

    let v_ordered = tilde.point[1] > hat.point[1];
    let holds = v_ordered && ordered && out.iter().all(|p| p.reproduced);
    Ok(WedgeReport {
        restrictions,
        saddle_hat: hat.point,
        saddle_tilde: tilde.point,
        v_ordered,
        levels,
        max_ordering_gap: gap,
        ordered,
        probes: out,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::integrate;
    use std::f64::consts::PI;

    fn sine(base: f64, amplitude: f64) -> FearSpec {
        FearSpec::ShiftedSine {
            base,
            amplitude,
            frequency: 10.0,
        }
    }

    fn params(a: f64, b: f64, c: f64, m: f64) -> ModelParams {
        ModelParams { a, b, c, k: 0.0, m }
    }

    #[test]
    fn diffusion_conserves_mass() {
        let field = make_fear_field(&FearSpec::Constant { value: 1.0 }, PI, 200).unwrap();
        let u: Vec<f64> = field.xs.iter().map(|x| 1.0 + (3.0 * x).cos() + 0.3 * x).collect();
        let v: Vec<f64> = field.xs.iter().map(|x| (x * x).sin().abs()).collect();
        let init = InitialData::Sampled { u, v };
        let r = integrate_diffusion(&field, [1.0, 0.3], &init, 2.0, &[1.0], &PdeOptions::default()).unwrap();
        let h = field.cell();
        let m0 = r.snapshots[0].mass(h);
        for s in &r.snapshots {
            let m = s.mass(h);
            for c in 0..2 {
                assert!(
                    (m[c] - m0[c]).abs() < 1e-10 * s.t.max(1.0),
                    "{c}: {} vs {}",
                    m[c],
                    m0[c]
                );
            }
        }
        // snapshot 0 is t = 1 here; compare against the initial mass too
        let init_mass = {
            let InitialData::Sampled { u, v } = &init else {
                unreachable!()
            };
            PdeState {
                t: 0.0,
                u: u.clone(),
                v: v.clone(),
            }
            .mass(h)
        };
        assert!((init_mass[0] - r.terminal().mass(h)[0]).abs() < 2e-10);
    }

    #[test]
    fn flat_data_follow_the_kinetics() {
        let p = params(0.3, 0.2, 1.1, 0.15).with(crate::model::Param::K, 1.1);
        let field = make_fear_field(&FearSpec::Constant { value: 1.1 }, PI, 64).unwrap();
        let init = InitialData::Flat { u: 0.5, v: 0.5 };
        let r = integrate_pde(&p, &field, [1.0, 1.0], &init, 10.0, &[1.0], &PdeOptions::default()).unwrap();
        let ode = integrate(&p, [0.5, 0.5], 10.0, 1e-11, 1e-13).unwrap();
        for s in &r.snapshots {
            let e = ode.sample(s.t);
            let osc = s.oscillation();
            assert!(osc[0] < 1e-12 && osc[1] < 1e-12);
            assert!(
                (s.u[0] - e[0]).abs() < 1e-6 && (s.v[0] - e[1]).abs() < 1e-6,
                "{} {:?} {:?}",
                s.t,
                s.mean(),
                e
            );
        }
    }

    #[test]
    fn constant_field_triplet_is_degenerate() {
        let p = params(0.3, 0.2, 1.1, 0.15);
        let field = make_fear_field(&FearSpec::Constant { value: 3.0 }, PI, 32).unwrap();
        let tr = comparison_triplet(
            &p,
            &field,
            [1.0, 1.0],
            [2.0, 0.4],
            5.0,
            &[1.0, 2.0],
            &PdeOptions::default(),
        )
        .unwrap();
        for (a, b) in tr.heterogeneous.snapshots.iter().zip(&tr.hat.snapshots) {
            assert_eq!(a, b);
        }
        assert!(tr.report.max_hat_excess.abs() < 1e-10 && tr.report.max_tilde_excess.abs() < 1e-10);
        assert!(tr.report.holds);
    }

    #[test]
    fn fig13_setting_excludes_v() {
        let p = params(0.3, 0.2, 1.1, 0.15);
        let field = make_fear_field(&sine(3.0, 1.0), PI, 200).unwrap();
        let tr = comparison_triplet(
            &p,
            &field,
            [1.0, 1.0],
            [2.0, 0.4],
            500.0,
            &snapshot_grid(500.0, 20),
            &PdeOptions::default(),
        )
        .unwrap();
        assert!(tr.report.holds, "{:?}", tr.report);
        let r = detect_convergence(&tr.heterogeneous.snapshots, &candidates(&p, &field), 1e-3).unwrap();
        assert_eq!(r.verdict.as_deref(), Some("(1,0)"), "{r:?}");
    }

    #[test]
    fn detect_convergence_requires_flatness() {
        let s = PdeState {
            t: 1.0,
            u: vec![1.0, 1.0, 0.99],
            v: vec![0.0; 3],
        };
        let c = [Candidate::point("(1,0)", [1.0, 0.0])];
        assert_eq!(
            detect_convergence(std::slice::from_ref(&s), &c, 1e-3).unwrap().verdict,
            None
        );
        assert_eq!(
            detect_convergence(&[s], &c, 0.1).unwrap().verdict.as_deref(),
            Some("(1,0)")
        );
        assert!(detect_convergence(&[], &c, 0.1).is_err());
    }

    #[test]
    fn negative_initial_data_are_rejected() {
        let p = params(0.3, 0.2, 1.1, 0.15);
        let field = make_fear_field(&sine(3.0, 1.0), PI, 32).unwrap();
        let init = InitialData::Flat { u: -0.1, v: 0.4 };
        assert!(integrate_pde(&p, &field, [1.0, 1.0], &init, 1.0, &[], &PdeOptions::default()).is_err());
        let init = InitialData::Flat { u: 0.1, v: 0.4 };
        assert!(integrate_pde(&p, &field, [0.0, 1.0], &init, 1.0, &[], &PdeOptions::default()).is_err());
    }

    #[test]
    fn wedge_restrictions_are_named() {
        let p = params(0.2, 0.2, 0.9, 0.15);
        let field = make_fear_field(&sine(4.0, 1.0), PI, 32).unwrap();
        let err = wedge_check(&p, &field, [1.0, 1.0], &[], 1.0, &PdeOptions::default()).unwrap_err();
        assert!(err.to_string().contains("c > 1"), "{err}");
    }
}

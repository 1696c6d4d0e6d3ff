//! Transversality (Sotomayor) checks for the transcritical and saddle-node
//! bifurcations, the saddle-node threshold curve, and one-parameter scans
//! with event detection.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibria::{all_equilibria, count_near, Equilibrium, Kind, Label, EPS_DEG};
use crate::error::{Error, Result};
use crate::model::{
    hessian, jacobian, jacobian_param_derivative, mat_vec, param_derivative, thresholds, transpose, Jacobian2,
    ModelParams, Param, State2,
};

/// Scalars below this in magnitude count as zero in a verdict.
pub const EPS_TRANSVERSAL: f64 = 1e-9;
/// Bracket width at which event bisection stops.
pub const EVENT_WIDTH: f64 = 1e-8;
/// Abscissa window used to count branches meeting at a boundary equilibrium.
const BRANCH_RADIUS: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BifurcationKind {
    Transcritical,
    SaddleNode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Satisfied,
    /// First two conditions hold but the quadratic coefficient vanishes.
    DegenerateToPitchfork,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransversalityReport {
    pub kind: BifurcationKind,
    pub parameter: Param,
    pub point: State2,
    /// Right null vector of the Jacobian.
    pub v: State2,
    /// Left null vector of the Jacobian.
    pub w: State2,
    /// `W.F_mu`, `W.(DF_mu V)`, `W.D^2F(V, V)`.
    pub scalars: [f64; 3],
    /// The same three scalars from closed-form expressions.
    pub closed_form: [f64; 3],
    pub verdict: Verdict,
}

/// Scales `v` so its second component is 1, or its first when the second is 0.
fn normalize(v: State2) -> State2 {
    if v[1].abs() > 1e-14 * v[0].abs().max(1e-300) {
        [v[0] / v[1], 1.0]
    } else {
        [1.0, v[1] / v[0]]
    }
}

/// Null vector of a (numerically) singular 2x2 matrix.
fn null_vector(j: &Jacobian2) -> Result<State2> {
    let (r0, r1) = (j[0], j[1]);
    let n0 = r0[0].hypot(r0[1]);
    let n1 = r1[0].hypot(r1[1]);
    let r = if n0 >= n1 { r0 } else { r1 };
    if r[0] == 0.0 && r[1] == 0.0 {
        return Err(Error::Numerical(
            "Jacobian vanishes identically; null space is 2-D".into(),
        ));
    }
    Ok(normalize([-r[1], r[0]]))
}

fn dot(a: &State2, b: &State2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// The three Sotomayor scalars at `x0` for parameter `mu`.
pub fn sotomayor_scalars(p: &ModelParams, mu: Param, x0: &State2) -> Result<(State2, State2, [f64; 3])> {
    let j = jacobian(p, x0)?;
    let v = null_vector(&j)?;
    let w = null_vector(&transpose(&j))?;
    let s1 = dot(&w, &param_derivative(p, mu, x0));
    let s2 = dot(&w, &mat_vec(&jacobian_param_derivative(p, mu, x0), &v));
    let h = hessian(p, x0);
    let quad = |m: &Jacobian2| m[0][0] * v[0] * v[0] + 2.0 * m[0][1] * v[0] * v[1] + m[1][1] * v[1] * v[1];
    let s3 = w[0] * quad(&h[0]) + w[1] * quad(&h[1]);
    Ok((v, w, [s1, s2, s3]))
}

fn transcritical_verdict(s: &[f64; 3]) -> Verdict {
    let zero = |x: f64| x.abs() <= EPS_TRANSVERSAL;
    match (zero(s[0]), zero(s[1]), zero(s[2])) {
        (true, false, false) => Verdict::Satisfied,
        (true, false, true) => Verdict::DegenerateToPitchfork,
        _ => Verdict::Failed,
    }
}

/// Transcritical bifurcation at `E1 = (1, 0)` with `k` as the parameter.
/// Requires `k` within `1e-12` of `k* = 1/a - 1`.
pub fn transversality_e1(p: &ModelParams) -> Result<TransversalityReport> {
    let k_star = thresholds(p).k_star;
    if (p.k - k_star).abs() > 1e-12 {
        return Err(Error::Precondition(format!("k = {} is not at k* = {k_star}", p.k)));
    }
    let x0 = [1.0, 0.0];
    let (v, w, scalars) = sotomayor_scalars(p, Param::K, &x0)?;
    let (a, c, m) = (p.a, p.c, p.m);
    let closed_form = [0.0, -a * a, (-2.0 * a * a + 4.0 * a) * c - 2.0 * m - 2.0];
    Ok(TransversalityReport {
        kind: BifurcationKind::Transcritical,
        parameter: Param::K,
        point: x0,
        v,
        w,
        verdict: transcritical_verdict(&scalars),
        scalars,
        closed_form,
    })
}

/// Transcritical bifurcation at `E2 = (0, 1)` with `c` as the parameter.
/// Requires `c` within `1e-12` of 1.
pub fn transversality_e2(p: &ModelParams) -> Result<TransversalityReport> {
    if (p.c - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!("c = {} is not 1", p.c)));
    }
    let x0 = [0.0, 1.0];
    let (v, w, scalars) = sotomayor_scalars(p, Param::C, &x0)?;
    let s = p.a + p.k + p.m;
    let closed_form = [0.0, p.b / s, 2.0 * p.b * (s - 1.0) / (s * s)];
    Ok(TransversalityReport {
        kind: BifurcationKind::Transcritical,
        parameter: Param::C,
        point: x0,
        v,
        w,
        verdict: transcritical_verdict(&scalars),
        scalars,
        closed_form,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddleNodeThreshold {
    pub e: f64,
    pub m_sn: f64,
    pub a1: f64,
    /// The `c` at which the quadratic coefficient vanishes for this `(k, E)`.
    pub c_excluded: f64,
}

/// `m_SN` and `a1`: the `(m, a)` that make `x = E` a double root of the
/// interior cubic for the given `k` and `c`.
pub fn saddle_node_threshold(k: f64, c: f64, e: f64) -> Result<SaddleNodeThreshold> {
    if !(e > 0.0 && e < 1.0) {
        return Err(Error::Domain {
            name: "E",
            value: e,
            reason: "must lie in (0, 1)",
        });
    }
    let ek = e * k;
    let q = (ek + 1.0) * (ek + 1.0);
    let m_sn = (-ek * ek + 2.0 * e * c * k - 2.0 * ek + c - 1.0) / (e * e * q);
    let (e2, e3, e4) = (e * e, e * e * e, e * e * e * e);
    let a1 =
        (e4 * k * k - 2.0 * e3 * k * k + 2.0 * e3 * k + 3.0 * e2 * c * k + e2 * k * k - 4.0 * e2 * k - 2.0 * e * c * k
            + e2
            + 2.0 * e * c
            + 2.0 * e * k
            - 2.0 * e
            - c
            + 1.0)
            / (c * e2 * q);
    let c_excluded = (ek + 1.0).powi(3) / (3.0 * ek * ek + 3.0 * ek + 1.0);
    Ok(SaddleNodeThreshold {
        e,
        m_sn,
        a1,
        c_excluded,
    })
}

/// Abscissas `E` in `(0, 1)` where `a1(E) = a` with `m_SN(E) >= 0`, i.e.
/// the double roots reachable by tuning `m` with `a, c, k` fixed.
pub fn saddle_node_points(a: f64, c: f64, k: f64) -> Vec<SaddleNodeThreshold> {
    const GRID: usize = 10_000;
    let g = |e: f64| saddle_node_threshold(k, c, e).map(|t| t.a1 - a).unwrap_or(f64::NAN);
    let mut out = Vec::new();
    let mut prev_e = 1.0 / GRID as f64;
    let mut prev = g(prev_e);
    for i in 2..GRID {
        let e = i as f64 / GRID as f64;
        let cur = g(e);
        if prev.is_finite() && cur.is_finite() && (prev == 0.0 || prev.signum() != cur.signum()) {
            let (mut lo, mut hi, mut flo) = (prev_e, e, prev);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = g(mid);
                if (fm > 0.0) == (flo > 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            let root = 0.5 * (lo + hi);
            if let Ok(t) = saddle_node_threshold(k, c, root) {
                if t.m_sn >= 0.0 {
                    out.push(t);
                }
            }
        }
        prev_e = e;
        prev = cur;
    }
    out
}

/// Saddle-node transversality at the double root `E` with `m` as the
/// parameter. `p.m` and `p.a` must equal `m_SN(E)` and `a1(E)` to `1e-10`.
pub fn transversality_sn(p: &ModelParams, e: f64) -> Result<TransversalityReport> {
    let th = saddle_node_threshold(p.k, p.c, e)?;
    if (p.m - th.m_sn).abs() > 1e-10 || (p.a - th.a1).abs() > 1e-10 {
        return Err(Error::Precondition(format!(
            "(m, a) = ({}, {}) is not on the saddle-node curve ({}, {}) at E = {e}",
            p.m, p.a, th.m_sn, th.a1
        )));
    }
    let x0 = [e, (1.0 - e) / p.c];
    let (v, w, scalars) = sotomayor_scalars(p, Param::M, &x0)?;
    let (c, k) = (p.c, p.k);
    let ek1 = e * k + 1.0;
    let s1 = -e * (1.0 - e) * (1.0 - e) / (c * c);
    let s3 =
        2.0 * (e - 1.0) * (e.powi(3) * k.powi(3) - 3.0 * k * k * (c - 1.0) * e * e - 3.0 * k * (c - 1.0) * e - c + 1.0)
            / (ek1.powi(3) * e * e);
    let zero = |x: f64| x.abs() <= EPS_TRANSVERSAL;
    let verdict = if !zero(scalars[0]) && !zero(scalars[2]) {
        Verdict::Satisfied
    } else {
        Verdict::Failed
    };
    Ok(TransversalityReport {
        kind: BifurcationKind::SaddleNode,
        parameter: Param::M,
        point: x0,
        v,
        w,
        scalars,
        closed_form: [s1, f64::NAN, s3],
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    SaddleNode,
    TranscriticalE1,
    TranscriticalE2,
    PitchforkE1,
    PitchforkE2,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub value: f64,
    pub bracket: [f64; 2],
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramEquilibrium {
    pub label: Label,
    pub x: f64,
    pub y: f64,
    pub kind: Kind,
    pub multiplicity: u8,
}

impl From<&Equilibrium> for DiagramEquilibrium {
    fn from(e: &Equilibrium) -> Self {
        DiagramEquilibrium {
            label: e.label,
            x: e.point[0],
            y: e.point[1],
            kind: e.kind,
            multiplicity: e.multiplicity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub value: f64,
    pub equilibria: Vec<DiagramEquilibrium>,
}

impl Sample {
    /// Interior equilibria counted once each (a double root counts once).
    pub fn interior_count(&self) -> usize {
        self.equilibria
            .iter()
            .filter(|e| !matches!(e.label, Label::E0 | Label::E1 | Label::E2))
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifurcationDiagram {
    pub parameter: Param,
    pub samples: Vec<Sample>,
    pub events: Vec<Event>,
}

#[derive(Debug, Clone, PartialEq)]
struct Signature {
    interior: Vec<Kind>,
    e1: i8,
    e2: i8,
}

fn sign_eps(x: f64) -> i8 {
    if x.abs() <= EPS_DEG {
        0
    } else if x > 0.0 {
        1
    } else {
        -1
    }
}

fn signature(p: &ModelParams) -> Signature {
    let eq = all_equilibria(p);
    Signature {
        interior: eq[3..].iter().map(|e| e.kind).collect(),
        e1: sign_eps(1.0 / (1.0 + p.k) - p.a),
        e2: sign_eps(p.b * (1.0 - p.c)),
    }
}

fn classify_event(lo: &ModelParams, hi: &ModelParams, s_lo: &Signature, s_hi: &Signature) -> EventKind {
    let boundary = |which: Label, pitch: EventKind, trans: EventKind| {
        let a = count_near(lo, which, BRANCH_RADIUS) as i64;
        let b = count_near(hi, which, BRANCH_RADIUS) as i64;
        if (a - b).abs() == 2 {
            pitch
        } else {
            trans
        }
    };
    if s_lo.e1 != s_hi.e1 {
        boundary(Label::E1, EventKind::PitchforkE1, EventKind::TranscriticalE1)
    } else if s_lo.e2 != s_hi.e2 {
        boundary(Label::E2, EventKind::PitchforkE2, EventKind::TranscriticalE2)
    } else {
        let n_lo = s_lo.interior.len() as i64;
        let n_hi = s_hi.interior.len() as i64;
        let has_sn = |s: &Signature| s.interior.contains(&Kind::InteriorSaddleNode);
        if (n_lo - n_hi).abs() == 2 || has_sn(s_lo) != has_sn(s_hi) {
            EventKind::SaddleNode
        } else {
            EventKind::Other
        }
    }
}

/// Samples `param` on `n` evenly spaced values in `[lo, hi]`, records the
/// equilibrium inventory at each, and locates every change of the
/// inventory's qualitative signature to within [`EVENT_WIDTH`].
pub fn scan(p: &ModelParams, param: Param, lo: f64, hi: f64, n: usize) -> Result<BifurcationDiagram> {
    if !(lo < hi) || n < 2 {
        return Err(Error::Precondition("scan needs lo < hi and n >= 2".into()));
    }
    let values: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    for v in [lo, hi] {
        p.with(param, v).validate()?;
    }

    let samples: Vec<(Sample, Signature)> = values
        .par_iter()
        .map(|v| {
            let q = p.with(param, *v);
            let eq = all_equilibria(&q);
            (
                Sample {
                    value: *v,
                    equilibria: eq.iter().map(DiagramEquilibrium::from).collect(),
                },
                signature(&q),
            )
        })
        .collect();

    let mut events: Vec<Event> = samples
        .par_windows(2)
        .filter(|w| w[0].1 != w[1].1)
        .map(|w| {
            let (mut a, mut b) = (w[0].0.value, w[1].0.value);
            let sig_a = w[0].1.clone();
            let mut sig_b = w[1].1.clone();
            while b - a > EVENT_WIDTH {
                let mid = 0.5 * (a + b);
                let s = signature(&p.with(param, mid));
                if s == sig_a {
                    a = mid;
                } else {
                    b = mid;
                    sig_b = s;
                }
            }
            let kind = classify_event(&p.with(param, a), &p.with(param, b), &sig_a, &sig_b);
            Event {
                value: 0.5 * (a + b),
                bracket: [a, b],
                kind,
            }
        })
        .collect();

    // a sample landing on a threshold splits one crossing into two events
    events.dedup_by(|later, earlier| later.kind == earlier.kind && (later.value - earlier.value).abs() < 1e-6);

    Ok(BifurcationDiagram {
        parameter: param,
        samples: samples.into_iter().map(|(s, _)| s).collect(),
        events,
    })
}

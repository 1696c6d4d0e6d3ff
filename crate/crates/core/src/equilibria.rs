//! Boundary and interior equilibria, their local type, and the existence table.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::model::{cubic, eigenvalues, jacobian_k, kinetics, thresholds, Cubic, ModelParams, State2};

/// Eigenvalues (and `v(x)` at interior roots) within this of zero are degenerate.
pub const EPS_DEG: f64 = 1e-9;
/// `|u(x)|` at or below this counts as a root.
pub const EPS_ROOT: f64 = 1e-10;
/// Threshold comparisons (`m` vs `m1`, `k` vs `k*`, ...) treat gaps below this as equality.
pub const EPS_CMP: f64 = 1e-9;

const BISECT_WIDTH: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    E0,
    E1,
    E2,
    #[serde(rename = "E1*")]
    E1Star,
    #[serde(rename = "E2*")]
    E2Star,
    #[serde(rename = "E3*")]
    E3Star,
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Label::E0 => "E0",
            Label::E1 => "E1",
            Label::E2 => "E2",
            Label::E1Star => "E1*",
            Label::E2Star => "E2*",
            Label::E3Star => "E3*",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Source,
    HyperbolicSaddle,
    HyperbolicStableNode,
    NonhyperbolicSaddle,
    AttractingSaddleNodeParabolicUpper,
    AttractingSaddleNodeParabolicLower,
    DegenerateStableNode,
    ParabolicRight,
    ParabolicLeft,
    InteriorSaddle,
    InteriorStableNode,
    InteriorSaddleNode,
}

impl Kind {
    /// Attracts an open set of the closed quadrant (the degenerate kinds only
    /// algebraically).
    pub fn is_attractor(self) -> bool {
        matches!(
            self,
            Kind::HyperbolicStableNode
                | Kind::InteriorStableNode
                | Kind::DegenerateStableNode
                | Kind::AttractingSaddleNodeParabolicUpper
                | Kind::AttractingSaddleNodeParabolicLower
        )
    }

    pub fn is_saddle(self) -> bool {
        matches!(self, Kind::HyperbolicSaddle | Kind::InteriorSaddle)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub label: Label,
    pub point: State2,
    pub kind: Kind,
    #[serde(with = "complex_pair")]
    pub eigenvalues: [Complex64; 2],
    pub multiplicity: u8,
    /// Max-norm of the vector field at `point`.
    pub residual: f64,
    /// Set when the classification relies on a stability result whose hypotheses fail
    /// (degenerate `E1` with `m* <= 0`).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub outside_proved_regime: bool,
}

mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64; 2], s: S) -> Result<S::Ok, S::Error> {
        [[v[0].re, v[0].im], [v[1].re, v[1].im]].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[Complex64; 2], D::Error> {
        let raw = <[[f64; 2]; 2]>::deserialize(d)?;
        Ok([
            Complex64::new(raw[0][0], raw[0][1]),
            Complex64::new(raw[1][0], raw[1][1]),
        ])
    }
}

fn residual(p: &ModelParams, s: &State2) -> f64 {
    let f = kinetics(p, s);
    f[0].abs().max(f[1].abs())
}

fn make(p: &ModelParams, label: Label, point: State2, kind: Kind) -> Equilibrium {
    Equilibrium {
        label,
        point,
        kind,
        eigenvalues: eigenvalues(&jacobian_k(p, p.k, &point)),
        multiplicity: 1,
        residual: residual(p, &point),
        outside_proved_regime: false,
    }
}

/// `E0 = (0,0)`, `E1 = (1,0)`, `E2 = (0,1)` with their local type.
pub fn boundary_equilibria(p: &ModelParams) -> [Equilibrium; 3] {
    let th = thresholds(p);

    let e0 = make(p, Label::E0, [0.0, 0.0], Kind::Source);

    let lam1 = 1.0 / (1.0 + p.k) - p.a;
    let e1_kind = if lam1.abs() <= EPS_DEG {
        let gap = p.m - th.m_star;
        if gap.abs() <= EPS_DEG {
            Kind::NonhyperbolicSaddle
        } else if gap > 0.0 {
            Kind::AttractingSaddleNodeParabolicUpper
        } else {
            Kind::AttractingSaddleNodeParabolicLower
        }
    } else if lam1 < 0.0 {
        Kind::HyperbolicStableNode
    } else {
        Kind::HyperbolicSaddle
    };
    let mut e1 = make(p, Label::E1, [1.0, 0.0], e1_kind);
    e1.outside_proved_regime = lam1.abs() <= EPS_DEG && th.m_star <= 0.0;

    let lam2 = p.b * (1.0 - p.c);
    let e2_kind = if lam2.abs() <= EPS_DEG {
        let gap = p.m - th.m_star_star;
        if gap.abs() <= EPS_DEG {
            Kind::DegenerateStableNode
        } else if gap < 0.0 {
            Kind::ParabolicRight
        } else {
            Kind::ParabolicLeft
        }
    } else if lam2 < 0.0 {
        Kind::HyperbolicStableNode
    } else {
        Kind::HyperbolicSaddle
    };
    let e2 = make(p, Label::E2, [0.0, 1.0], e2_kind);

    [e0, e1, e2]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub x: f64,
    pub multiplicity: u8,
}

fn sign_of(v: f64) -> i8 {
    if v.abs() <= EPS_ROOT {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    }
}

fn bisect(u: &Cubic, mut lo: f64, mut hi: f64) -> f64 {
    let s_lo = u.eval(lo) > 0.0;
    while hi - lo > BISECT_WIDTH {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (u.eval(mid) > 0.0) == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    let d = u.deriv(mid);
    if d != 0.0 {
        let polished = mid - u.eval(mid) / d;
        if polished >= lo && polished <= hi && u.eval(polished).abs() <= u.eval(mid).abs() {
            return polished;
        }
    }
    mid
}

/// Real roots of `u` in the open interval `(lo, hi)`, ascending.
///
/// The interval is split at the critical points of `u` so every piece is
/// monotone; a sign change on a piece is refined by bisection, and a critical
/// point where `|u| <= EPS_ROOT` is reported once as a multiple root.
pub fn real_roots_in(u: &Cubic, lo: f64, hi: f64) -> Vec<Root> {
    if u.degree() == 0 {
        return Vec::new();
    }
    let crit: Vec<f64> = u.critical_points().into_iter().filter(|x| *x > lo && *x < hi).collect();
    let mut bps = Vec::with_capacity(crit.len() + 2);
    bps.push(lo);
    bps.extend_from_slice(&crit);
    bps.push(hi);
    let signs: Vec<i8> = bps.iter().map(|x| sign_of(u.eval(*x))).collect();

    let mut roots = Vec::new();
    for i in 0..bps.len() {
        let interior_bp = i > 0 && i + 1 < bps.len();
        if interior_bp && signs[i] == 0 {
            let mult = if u.deriv2(bps[i]).abs() <= EPS_DEG { 3 } else { 2 };
            roots.push(Root {
                x: bps[i],
                multiplicity: mult,
            });
        }
        if i + 1 < bps.len() && signs[i] * signs[i + 1] < 0 {
            roots.push(Root {
                x: bisect(u, bps[i], bps[i + 1]),
                multiplicity: 1,
            });
        }
    }
    roots.sort_by(|a, b| a.x.total_cmp(&b.x));
    roots
}

/// Roots of the interior cubic in `(0, 1)`.
pub fn interior_roots(p: &ModelParams) -> Vec<Root> {
    real_roots_in(&cubic(p), 0.0, 1.0)
}

/// Interior equilibria `(x, (1 - x)/c)` classified by the sign of `v(x)`,
/// which carries the sign of `det J` there.
pub fn interior_equilibria(p: &ModelParams) -> Vec<Equilibrium> {
    let u = cubic(p);
    interior_roots(p)
        .into_iter()
        .map(|r| {
            let point = [r.x, (1.0 - r.x) / p.c];
            let v = u.deriv(r.x);
            let (label, kind) = if r.multiplicity > 1 || v.abs() <= EPS_DEG {
                (Label::E3Star, Kind::InteriorSaddleNode)
            } else if v < 0.0 {
                (Label::E1Star, Kind::InteriorSaddle)
            } else {
                (Label::E2Star, Kind::InteriorStableNode)
            };
            let mut e = make(p, label, point, kind);
            e.multiplicity = r.multiplicity.max(if kind == Kind::InteriorSaddleNode { 2 } else { 1 });
            e
        })
        .collect()
}

/// Boundary equilibria followed by the interior ones.
pub fn all_equilibria(p: &ModelParams) -> Vec<Equilibrium> {
    let mut all = boundary_equilibria(p).to_vec();
    all.extend(interior_equilibria(p));
    all
}

/// Equilibria of the full real plane (any sign) lying on the line
/// `x + c y = 1` or at the given boundary point, whose abscissa is within
/// `radius` of that point. Used to count branches meeting at `E1` or `E2`.
pub fn count_near(p: &ModelParams, which: Label, radius: f64) -> usize {
    let x0 = match which {
        Label::E1 => 1.0,
        Label::E2 => 0.0,
        _ => return 0,
    };
    let u = cubic(p);
    let bound = u.root_bound() + 1.0;
    let mut pts: Vec<f64> = real_roots_in(&u, -bound, bound).into_iter().map(|r| r.x).collect();
    // roots sitting on the boundary point itself are that point
    pts.retain(|x| (x - x0).abs() < radius && (x - x0).abs() > 1e-9);
    1 + pts.len()
}

/// Outcome of a threshold comparison at tolerance [`EPS_CMP`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Less,
    Equal,
    Greater,
}

fn cmp_eps(a: f64, b: f64) -> Side {
    if (a - b).abs() <= EPS_CMP {
        Side::Equal
    } else if a < b {
        Side::Less
    } else {
        Side::Greater
    }
}

/// Which branch of the existence analysis produced the label set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "source", content = "row")]
pub enum CaseRow {
    /// A row of the existence table, numbered top to bottom from 1.
    Table(u8),
    /// `c > 1` and the local minimum of `u` is positive (or `u` has no
    /// critical point): `u > 0` on `(0, 1)`.
    NoCrossing,
    /// Not covered by the table; labels come from the signs of `u` at `0`,
    /// `1` and its critical points.
    SignChart,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExistenceCase {
    pub m_vs_m1: Side,
    pub c_vs_one: Side,
    /// `u(x_v2)`, when `x_v2` exists.
    pub u_at_e: Option<f64>,
    pub m_vs_m2: Side,
    pub k_vs_k_star: Side,
    pub row: CaseRow,
    /// Predicted interior labels, ordered by abscissa where known.
    pub labels: Vec<Label>,
}

fn sign_chart(u: &Cubic) -> Vec<Label> {
    let mut bps = vec![0.0];
    bps.extend(u.critical_points().into_iter().filter(|x| *x > 0.0 && *x < 1.0));
    bps.push(1.0);
    let signs: Vec<i8> = bps.iter().map(|x| sign_of(u.eval(*x))).collect();
    let mut labels = Vec::new();
    for i in 0..bps.len() {
        if i > 0 && i + 1 < bps.len() && signs[i] == 0 {
            labels.push(Label::E3Star);
        }
        if i + 1 < bps.len() && signs[i] * signs[i + 1] < 0 {
            labels.push(if signs[i] > 0 { Label::E1Star } else { Label::E2Star });
        }
    }
    labels
}

/// Walks the existence table for `p`. When no row applies the labels are
/// derived from a sign chart of `u`, which is what the table rows encode.
pub fn existence_case(p: &ModelParams) -> ExistenceCase {
    use Side::*;
    let th = thresholds(p);
    let u = cubic(p);
    let m_vs_m1 = cmp_eps(p.m, th.m1);
    let c_vs_one = cmp_eps(p.c, 1.0);
    let m_vs_m2 = cmp_eps(p.m, th.m2);
    let k_vs_k_star = cmp_eps(p.k, th.k_star);
    let u_at_e = u.x_v2().map(|x| u.eval(x));
    let ue = u_at_e.map(sign_of);
    let k_below = k_vs_k_star == Less;

    let row = match (m_vs_m1, c_vs_one) {
        (Equal, Less) if k_below => Some(1),
        (Greater, Greater) => match (ue, m_vs_m2) {
            (Some(0), Greater) => Some(2),
            (Some(-1), Greater) if !k_below => Some(3),
            (Some(-1), Greater) => Some(4),
            (Some(-1), Equal) => Some(5),
            (Some(-1), Less) if k_vs_k_star == Greater => Some(6),
            _ => None,
        },
        (Greater, Less | Equal) if k_below => Some(7),
        (Less, Less) if k_below => Some(8),
        _ => None,
    };

    let (row, labels) = match row {
        Some(r) => {
            let labels = match r {
                2 => vec![Label::E3Star],
                3 | 5 | 6 => vec![Label::E1Star],
                4 => vec![Label::E1Star, Label::E2Star],
                _ => vec![Label::E2Star],
            };
            (CaseRow::Table(r), labels)
        }
        None if c_vs_one == Greater && u.a1 > 0.0 && ue.is_none_or(|s| s > 0) => (CaseRow::NoCrossing, Vec::new()),
        None => (CaseRow::SignChart, sign_chart(&u)),
    };

    ExistenceCase {
        m_vs_m1,
        c_vs_one,
        u_at_e,
        m_vs_m2,
        k_vs_k_star,
        row,
        labels,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::jacobian;

    fn p(a: f64, b: f64, c: f64, k: f64, m: f64) -> ModelParams {
        ModelParams::new(a, b, c, k, m).unwrap()
    }

    #[test]
    fn example_7_1_unique_interior_root() {
        let roots = interior_roots(&p(0.8, 0.5, 0.5, 0.2, 0.5));
        assert_eq!(roots.len(), 1);
        assert!((roots[0].x - 0.9836955225).abs() < 1e-9);
        assert!(interior_roots(&p(0.8, 0.5, 0.5, 0.4, 0.5)).is_empty());
    }

    #[test]
    fn two_roots_above_the_saddle_node_value_none_below() {
        let two = interior_roots(&p(0.3, 0.5, 1.1, 1.1, 0.2));
        assert_eq!(two.len(), 2);
        assert!((two[0].x - 0.2146).abs() < 1e-3 && (two[1].x - 0.5292).abs() < 1e-3);
        assert!(interior_roots(&p(0.3, 0.5, 1.1, 1.1, 0.1)).is_empty());
        assert!(interior_roots(&p(0.3, 0.5, 1.1, 1.1, 0.12)).is_empty());
        assert_eq!(interior_roots(&p(0.3, 0.5, 1.1, 1.1, 0.13)).len(), 2);
    }

    #[test]
    fn roots_satisfy_the_cubic() {
        let q = p(0.3, 0.5, 1.1, 1.1, 0.15);
        let u = cubic(&q);
        for r in interior_roots(&q) {
            assert!(u.eval(r.x).abs() < 1e-10);
        }
    }

    #[test]
    fn double_root_reported_once() {
        // x = 0.35 is a double root when m and a sit on the saddle-node curve
        let (k, c, e) = (1.1, 1.1, 0.35_f64);
        let m_sn =
            (-e * e * k * k + 2.0 * e * c * k - 2.0 * e * k + c - 1.0) / (e * e * (e * e * k * k + 2.0 * e * k + 1.0));
        let a1 =
            (e.powi(4) * k * k - 2.0 * e.powi(3) * k * k + 2.0 * e.powi(3) * k + 3.0 * e * e * c * k + e * e * k * k
                - 4.0 * e * e * k
                - 2.0 * e * c * k
                + e * e
                + 2.0 * e * c
                + 2.0 * e * k
                - 2.0 * e
                - c
                + 1.0)
                / (c * e * e * (e * e * k * k + 2.0 * e * k + 1.0));
        let q = p(a1, 0.5, c, k, m_sn);
        let eq = interior_equilibria(&q);
        assert_eq!(eq.len(), 1);
        assert_eq!(eq[0].kind, Kind::InteriorSaddleNode);
        assert_eq!(eq[0].multiplicity, 2);
        assert!((eq[0].point[0] - e).abs() < 1e-9);
    }

    #[test]
    fn example_7_2_bistable_inventory() {
        let eq = interior_equilibria(&p(0.3, 0.5, 1.1, 1.1, 0.15));
        let labels: Vec<_> = eq.iter().map(|e| e.label).collect();
        assert_eq!(labels, vec![Label::E1Star, Label::E2Star]);
        assert!((eq[0].point[0] - 0.26545).abs() < 1e-4);
        assert!((eq[1].point[0] - 0.44857).abs() < 1e-4);
    }

    #[test]
    fn boundary_eigenvalues_closed_form() {
        let q = p(0.3, 0.7, 1.4, 0.9, 0.2);
        let [e0, e1, e2] = boundary_equilibria(&q);
        assert_eq!(e0.kind, Kind::Source);
        let mut ev1 = [e1.eigenvalues[0].re, e1.eigenvalues[1].re];
        let mut want1 = [-q.b, 1.0 / (1.0 + q.k) - q.a];
        ev1.sort_by(f64::total_cmp);
        want1.sort_by(f64::total_cmp);
        for i in 0..2 {
            assert!((ev1[i] - want1[i]).abs() < 1e-12);
        }
        let mut ev2 = [e2.eigenvalues[0].re, e2.eigenvalues[1].re];
        let mut want2 = [q.b * (1.0 - q.c), -1.0];
        ev2.sort_by(f64::total_cmp);
        want2.sort_by(f64::total_cmp);
        for i in 0..2 {
            assert!((ev2[i] - want2[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn e1_kinds_across_k_star() {
        let a = 0.5; // k* = 1
        assert_eq!(
            boundary_equilibria(&p(a, 1.0, 1.5, 0.5, 0.3))[1].kind,
            Kind::HyperbolicSaddle
        );
        assert_eq!(
            boundary_equilibria(&p(a, 1.0, 1.5, 2.0, 0.3))[1].kind,
            Kind::HyperbolicStableNode
        );
        // m* = -1 + 0.75 c = 0.125 for c = 1.5
        let at = |m| boundary_equilibria(&p(a, 1.0, 1.5, 1.0, m))[1].clone();
        assert_eq!(at(0.3).kind, Kind::AttractingSaddleNodeParabolicUpper);
        assert_eq!(at(0.1).kind, Kind::AttractingSaddleNodeParabolicLower);
        assert_eq!(at(0.125).kind, Kind::NonhyperbolicSaddle);
        assert!(!at(0.125).outside_proved_regime);
        // c = 1 gives m* = -0.25
        let low = boundary_equilibria(&p(a, 1.0, 1.0, 1.0, 0.0))[1].clone();
        assert!(low.outside_proved_regime);
    }

    #[test]
    fn e2_kinds_at_c_equal_one() {
        // m** = 1 - a - k = 0.6
        let at = |m| boundary_equilibria(&p(0.2, 0.2, 1.0, 0.2, m))[2].kind;
        assert_eq!(at(0.3), Kind::ParabolicRight);
        assert_eq!(at(0.9), Kind::ParabolicLeft);
        assert_eq!(at(0.6), Kind::DegenerateStableNode);
    }

    #[test]
    fn table_examples() {
        // m = m1 = 1 - 0.4 - 0.2
        let case = existence_case(&p(0.8, 0.5, 0.5, 0.2, 0.4));
        assert_eq!(case.row, CaseRow::Table(1));
        assert_eq!(case.labels, vec![Label::E2Star]);
        let case = existence_case(&p(0.3, 0.5, 1.1, 4.0, 0.15));
        assert_eq!(case.row, CaseRow::Table(3));
        assert_eq!(case.labels, vec![Label::E1Star]);
        let case = existence_case(&p(0.3, 0.5, 1.1, 1.1, 0.1));
        assert_eq!(case.row, CaseRow::NoCrossing);
        assert!(case.labels.is_empty());
    }

    #[test]
    fn stable_nodes_have_negative_trace() {
        let q = p(0.3, 0.5, 1.1, 1.1, 0.15);
        for e in interior_equilibria(&q) {
            let j = jacobian(&q, &e.point).unwrap();
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            match e.kind {
                Kind::InteriorStableNode => assert!(det > 0.0 && j[0][0] + j[1][1] < 0.0),
                Kind::InteriorSaddle => assert!(det < 0.0),
                _ => {}
            }
        }
    }

    #[test]
    fn pitchfork_counts_near_e2() {
        let at = |c| count_near(&p(0.2, 0.2, c, 0.2, 0.6), Label::E2, 0.5);
        assert_eq!((at(0.9), at(1.0), at(1.1)), (3, 1, 1));
    }
}

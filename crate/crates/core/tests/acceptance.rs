//! Acceptance suite. Each criterion is measured with the library and judged
//! against reference values computed here. Prints one PASS/FAIL line per
//! criterion and exits nonzero when a criterion fails that is not listed in
//! `KNOWN_FAILURES`.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use allelofear::bifurcation::{saddle_node_points, scan, transversality_e1, transversality_e2, EventKind};
use allelofear::equilibria::{count_near, interior_roots, Label};
use allelofear::model::{jacobian, ModelParams, Param};
use allelofear::ode::{integrate, limit_cycle_probe};
use allelofear::pde::{
    comparison_triplet, integrate_pde, make_fear_field, snapshot_grid, wedge_check, FearSpec, InitialData, PdeOptions,
    PdeState,
};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// The count near `E2` comes out as 3, 1, 1 for `c = 0.9, 1.0, 1.1`: the
/// two extra roots exist only for `c < 1`.
const KNOWN_FAILURES: [u8; 1] = [3];

const TOL_M_SN: f64 = 1e-7;
const TOL_EVENT: f64 = 1e-6;
const TOL_SCALAR: f64 = 1e-8;
const TOL_TERMINAL: f64 = 1e-3;
const TOL_FLAT: f64 = 1e-5;
const TOL_SADDLE: f64 = 5e-3;
const TOL_ROOT: f64 = 1e-9;
const TOL_JAC: f64 = 1e-6;
const SANDWICH_C: f64 = 0.01;
const NEAR_E2: f64 = 0.5;

struct Verdict {
    measured: String,
    expected: String,
    tolerance: String,
    ok: bool,
}

fn fig9() -> ModelParams {
    ModelParams::new(0.3, 0.2, 1.1, 1.1, 0.15).unwrap()
}

/// `m` as a function of the abscissa of an interior equilibrium.
fn m_of(p: &ModelParams, x: f64) -> f64 {
    let q = p.with(Param::M, 0.0);
    nullcline_residual(&q, x) / (x * (1.0 - x) * (1.0 + p.k * x))
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let a = hi - r * (hi - lo);
        let b = lo + r * (hi - lo);
        if f(a) < f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

fn c1_saddle_node() -> Verdict {
    let p = fig9();
    let (_, oracle) = golden_min(|x| m_of(&p, x), 0.01, 0.99);
    let lib = saddle_node_points(p.a, p.c, p.k);
    let m_sn = lib.first().map_or(f64::NAN, |t| t.m_sn);
    let count = |m: f64| interior_points(&p.with(Param::M, m), 1e-5).len();
    let counts = [count(oracle - 1e-3), count(oracle + 1e-3)];
    let d = scan(&p, Param::M, 0.1, 0.15, 51).unwrap();
    let events: Vec<f64> = d
        .events
        .iter()
        .filter(|e| e.kind == EventKind::SaddleNode)
        .map(|e| e.value)
        .collect();
    let offset = match events.as_slice() {
        [v] => (v - m_sn).abs(),
        _ => f64::INFINITY,
    };
    let below = d
        .samples
        .iter()
        .filter(|s| s.value < m_sn)
        .all(|s| s.interior_count() == 0);
    let above = d
        .samples
        .iter()
        .filter(|s| s.value > m_sn)
        .all(|s| s.interior_count() == 2);
    Verdict {
        measured: format!(
            "m_SN {m_sn:.10}, reference {oracle:.10}, counts either side {counts:?}, scan 0 below / 2 above {}, event offset {offset:.1e}",
            below && above
        ),
        expected: "0.1262554731, 2 -> 1 -> 0".into(),
        tolerance: format!("{TOL_M_SN:e} on m_SN, {TOL_EVENT:e} on the event"),
        ok: lib.len() == 1
            && (m_sn - 0.1262554731).abs() < TOL_M_SN
            && (m_sn - oracle).abs() < TOL_M_SN
            && counts == [0, 2]
            && below
            && above
            && offset < TOL_EVENT,
    }
}

fn c2_transcritical() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7c);
    let (mut worst_event, mut worst_scalar) = (0f64, 0f64);
    let mut bad_kind = 0;
    let mut drawn = 0;
    while drawn < 10 {
        let a = rng.gen_range(0.15..0.85);
        let b = rng.gen_range(0.1..1.0);
        let c = rng.gen_range(0.3..1.8);
        let m = rng.gen_range(0.05..1.0);
        let k_star = 1.0 / a - 1.0;
        let p = ModelParams::new(a, b, c, k_star, m).unwrap();
        let m_star = -1.0 + (2.0 * a - a * a) * c;
        if (m - m_star).abs() < 0.05 {
            continue;
        }
        drawn += 1;
        let r = transversality_e1(&p).unwrap();
        let closed = [0.0, -a * a, (-2.0 * a * a + 4.0 * a) * c - 2.0 * m - 2.0];
        for (got, want) in r.scalars.iter().zip(closed) {
            worst_scalar = worst_scalar.max((got - want).abs());
        }
        let d = scan(&p, Param::K, 0.8 * k_star, 1.2 * k_star, 41).unwrap();
        let near = d
            .events
            .iter()
            .min_by(|x, y| (x.value - k_star).abs().total_cmp(&(y.value - k_star).abs()));
        match near {
            Some(e) => {
                worst_event = worst_event.max((e.value - k_star).abs());
                bad_kind += usize::from(e.kind != EventKind::TranscriticalE1);
            }
            None => worst_event = f64::INFINITY,
        }
    }
    drawn = 0;
    while drawn < 10 {
        let a: f64 = rng.gen_range(0.05..0.9);
        let b = rng.gen_range(0.1..1.0);
        let k = rng.gen_range(0.05..3.0);
        let m = rng.gen_range(0.05..1.0);
        if (m - (1.0 - a - k)).abs() < 0.05 {
            continue;
        }
        drawn += 1;
        let p = ModelParams::new(a, b, 1.0, k, m).unwrap();
        let s = a + k + m;
        let r = transversality_e2(&p).unwrap();
        let closed = [0.0, b / s, 2.0 * b * (s - 1.0) / (s * s)];
        for (got, want) in r.scalars.iter().zip(closed) {
            worst_scalar = worst_scalar.max((got - want).abs());
        }
        let d = scan(&p, Param::C, 0.9, 1.1, 41).unwrap();
        let near = d
            .events
            .iter()
            .min_by(|x, y| (x.value - 1.0).abs().total_cmp(&(y.value - 1.0).abs()));
        match near {
            Some(e) => {
                worst_event = worst_event.max((e.value - 1.0).abs());
                bad_kind += usize::from(e.kind != EventKind::TranscriticalE2);
            }
            None => worst_event = f64::INFINITY,
        }
    }
    Verdict {
        measured: format!(
            "worst event offset {worst_event:.1e}, worst scalar gap {worst_scalar:.1e}, misnamed events {bad_kind}"
        ),
        expected: "events at k* and c = 1, scalars equal to the closed forms".into(),
        tolerance: format!("{TOL_EVENT:e} on events, {TOL_SCALAR:e} on scalars"),
        ok: worst_event < TOL_EVENT && worst_scalar < TOL_SCALAR && bad_kind == 0,
    }
}

fn c3_pitchfork() -> Verdict {
    let base = ModelParams::new(0.2, 0.2, 1.0, 0.2, 0.6).unwrap();
    let cs = [0.9, 1.0, 1.1];
    let lib: Vec<usize> = cs
        .iter()
        .map(|c| count_near(&base.with(Param::C, *c), Label::E2, NEAR_E2))
        .collect();
    // E2 itself plus the other real roots of the interior condition nearby
    let reference: Vec<usize> = cs
        .iter()
        .map(|c| {
            let p = base.with(Param::C, *c);
            let roots = scan_roots(&|x| nullcline_residual(&p, x), -NEAR_E2, NEAR_E2, 1e-6);
            1 + roots.iter().filter(|x| x.abs() > 1e-6).count()
        })
        .collect();
    Verdict {
        measured: format!("library {lib:?}, reference {reference:?}"),
        expected: "[1, 1, 3] at c = 0.9, 1.0, 1.1".into(),
        tolerance: format!("exact, window {NEAR_E2} in x"),
        ok: lib == reference && lib == [1, 1, 3],
    }
}

const EXAMPLES: [(f64, f64, f64, f64, f64, f64); 3] = [
    (0.8, 0.5, 0.5, 0.5, 0.2, 0.4),
    (0.3, 0.5, 1.1, 0.15, 1.1, 4.0),
    (0.8, 0.5, 0.5, 0.1, 0.2, 0.3),
];

fn c4_examples() -> Verdict {
    let (mut coexist, mut y_end, mut vs_rk4) = (0f64, 0f64, 0f64);
    for (a, b, c, m, k_lo, k_hi) in EXAMPLES {
        for (k, coexisting) in [(k_lo, true), (k_hi, false)] {
            let p = ModelParams::new(a, b, c, k, m).unwrap();
            let end = integrate(&p, [0.5, 0.5], 1000.0, 1e-10, 1e-12).unwrap().final_state();
            vs_rk4 = vs_rk4.max(sup_dist(end, rk4(&p, [0.5, 0.5], 1000.0, 0.01)));
            if coexisting {
                let target = interior_points(&p, 1e-5).into_iter().find(|q| is_stable(&p, *q));
                coexist = coexist.max(target.map_or(f64::INFINITY, |t| sup_dist(end, t)));
            } else {
                y_end = y_end.max(end[1]);
            }
        }
    }
    Verdict {
        measured: format!(
            "distance to E2* {coexist:.1e}, terminal y above threshold {y_end:.1e}, gap to RK4 {vs_rk4:.1e}"
        ),
        expected: "coexistence below k*, y-extinction above".into(),
        tolerance: format!("{TOL_TERMINAL:e} at t = 1000"),
        ok: coexist < TOL_TERMINAL && y_end < TOL_TERMINAL && vs_rk4 < TOL_TERMINAL,
    }
}

fn c5_global_stability() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x75);
    let draws: Vec<(ModelParams, Vec<P2>)> = (0..10)
        .map(|_| {
            let a = rng.gen_range(0.1..0.9);
            let k = rng.gen_range(0.0..1.0 / a - 1.0);
            let p = ModelParams::new(
                a,
                rng.gen_range(0.1..1.0),
                rng.gen_range(0.05..0.95),
                k,
                rng.gen_range(0.0..1.0),
            )
            .unwrap();
            let inits = (0..20)
                .map(|_| [rng.gen_range(0.01..2.0), rng.gen_range(0.01..2.0)])
                .collect();
            (p, inits)
        })
        .collect();
    let results: Vec<(usize, f64)> = draws
        .par_iter()
        .map(|(p, inits)| {
            let eq = interior_points(p, 1e-5);
            let worst = inits
                .iter()
                .map(|x0| match (eq.as_slice(), integrate(p, *x0, 1000.0, 1e-10, 1e-12)) {
                    ([e], Ok(tr)) => sup_dist(tr.final_state(), *e),
                    _ => f64::INFINITY,
                })
                .fold(0.0, f64::max);
            (eq.len(), worst)
        })
        .collect();
    let unique = results.iter().all(|r| r.0 == 1);
    let worst = results.iter().map(|r| r.1).fold(0.0, f64::max);
    Verdict {
        measured: format!("unique interior equilibrium in every draw {unique}, worst terminal distance {worst:.1e}"),
        expected: "all 200 trajectories reach it".into(),
        tolerance: format!("{TOL_TERMINAL:e} at t = 1000"),
        ok: unique && worst < TOL_TERMINAL,
    }
}

fn c6_no_cycles() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x76);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..100 {
        let p = ModelParams::new(
            rng.gen_range(0.05..2.0),
            rng.gen_range(0.05..2.0),
            rng.gen_range(0.05..3.0),
            rng.gen_range(0.0..5.0),
            rng.gen_range(0.0..2.0),
        )
        .unwrap();
        for i in 0..100 {
            for j in 0..100 {
                let x = 0.01 + 0.99 * i as f64 / 99.0;
                let y = 0.01 + 0.99 * j as f64 / 99.0;
                worst = worst.max(fd_dulac(&p, x, y, 1e-6));
            }
        }
    }
    let runs: Vec<ModelParams> = EXAMPLES
        .iter()
        .flat_map(|&(a, b, c, m, k1, k2)| [k1, k2].map(|k| ModelParams::new(a, b, c, k, m).unwrap()))
        .collect();
    let cycles = runs
        .par_iter()
        .filter(|p| limit_cycle_probe(p, [0.5, 0.5], 500.0).map_or(true, |r| r.cycle_detected))
        .count();
    Verdict {
        measured: format!("max Dulac divergence {worst:.3}, cycles {cycles} of {}", runs.len()),
        expected: "negative divergence, no cycle".into(),
        tolerance: "strict sign".into(),
        ok: worst < 0.0 && cycles == 0,
    }
}

fn c7_flat() -> Verdict {
    let cases = [
        (ModelParams::new(0.3, 0.2, 1.1, 3.0, 0.15).unwrap(), [2.0, 0.4]),
        (ModelParams::new(0.8, 0.5, 0.5, 0.2, 0.5).unwrap(), [0.5, 0.5]),
    ];
    let times = [1.0, 10.0, 100.0];
    let mut worst = 0f64;
    for (p, init) in cases {
        let f = make_fear_field(&FearSpec::Constant { value: p.k }, PI, 1000).unwrap();
        let run = integrate_pde(
            &p,
            &f,
            [1.0, 1.0],
            &InitialData::Flat { u: init[0], v: init[1] },
            100.0,
            &times,
            &PdeOptions::default(),
        )
        .unwrap();
        for s in &run.snapshots {
            let ode = rk4(&p, init, s.t, 1e-3);
            for j in 0..s.u.len() {
                worst = worst.max(sup_dist([s.u[j], s.v[j]], ode));
            }
        }
    }
    Verdict {
        measured: format!("sup-norm gap to the kinetic ODE {worst:.1e}"),
        expected: "flat data stays on the ODE trajectory".into(),
        tolerance: format!("{TOL_FLAT:e} at t = 1, 10, 100, n = 1000"),
        ok: worst < TOL_FLAT,
    }
}

struct Fig {
    name: &'static str,
    abcm: [f64; 4],
    base: f64,
    amp: f64,
    init: P2,
    expected: &'static str,
}

const FIGS: [Fig; 10] = [
    Fig {
        name: "13a",
        abcm: [0.3, 0.2, 1.1, 0.15],
        base: 3.0,
        amp: 1.0,
        init: [2.0, 0.4],
        expected: "(1,0)",
    },
    Fig {
        name: "13b",
        abcm: [0.3, 0.2, 1.1, 0.15],
        base: 4.0,
        amp: 1.0,
        init: [1.2, 0.4],
        expected: "(1,0)",
    },
    Fig {
        name: "14a",
        abcm: [0.4, 0.2, 2.1, 0.4],
        base: 1.5,
        amp: 1.0,
        init: [0.4, 2.0],
        expected: "(0,1)",
    },
    Fig {
        name: "14b",
        abcm: [0.4, 0.2, 2.1, 0.4],
        base: 2.0,
        amp: 1.0,
        init: [0.4, 1.2],
        expected: "(0,1)",
    },
    Fig {
        name: "15",
        abcm: [0.2, 0.2, 1.1, 0.15],
        base: 4.0,
        amp: 1.0,
        init: [0.01, 1.5],
        expected: "(0,1)",
    },
    Fig {
        name: "15",
        abcm: [0.2, 0.2, 1.1, 0.15],
        base: 4.0,
        amp: 1.0,
        init: [1.5, 0.5],
        expected: "(1,0)",
    },
    Fig {
        name: "17",
        abcm: [0.2, 0.2, 0.9, 1.6],
        base: 0.0,
        amp: 0.1,
        init: [4.0, 4.0],
        expected: "interior",
    },
    Fig {
        name: "17",
        abcm: [0.2, 0.2, 0.9, 1.6],
        base: 0.0,
        amp: 0.1,
        init: [0.1, 0.1],
        expected: "interior",
    },
    Fig {
        name: "18",
        abcm: [0.3, 0.2, 1.1, 0.5],
        base: 1.5,
        amp: 0.1,
        init: [0.05, 2.0],
        expected: "(0,1)",
    },
    Fig {
        name: "18",
        abcm: [0.3, 0.2, 1.1, 0.5],
        base: 1.5,
        amp: 0.1,
        init: [2.0, 2.0],
        expected: "interior",
    },
];

/// Name of the homogeneous state the final snapshot sits on, if any. The
/// interior target is the box spanned by the stable interior equilibria of
/// the two bounding systems.
fn terminal_state(p: &ModelParams, k_lo: f64, k_hi: f64, s: &PdeState, tol: f64) -> Option<&'static str> {
    let stable: Vec<P2> = [k_lo, k_hi]
        .iter()
        .flat_map(|k| {
            let q = p.with(Param::K, *k);
            interior_points(&q, 1e-5).into_iter().filter(move |e| is_stable(&q, *e))
        })
        .collect();
    let in_box = |u: f64, v: f64| {
        if stable.is_empty() {
            return f64::INFINITY;
        }
        let gap = |z: f64, i: usize| {
            let lo = stable.iter().map(|e| e[i]).fold(f64::INFINITY, f64::min);
            let hi = stable.iter().map(|e| e[i]).fold(f64::NEG_INFINITY, f64::max);
            (lo - z).max(z - hi).max(0.0)
        };
        gap(u, 0).max(gap(v, 1))
    };
    let sup = |d: &dyn Fn(f64, f64) -> f64| (0..s.u.len()).map(|j| d(s.u[j], s.v[j])).fold(0.0, f64::max);
    let hits: Vec<&str> = [
        ("(1,0)", sup(&|u, v| sup_dist([u, v], [1.0, 0.0]))),
        ("(0,1)", sup(&|u, v| sup_dist([u, v], [0.0, 1.0]))),
        ("interior", sup(&in_box)),
    ]
    .into_iter()
    .filter(|(_, d)| *d < tol)
    .map(|(n, _)| n)
    .collect();
    match hits.as_slice() {
        [one] => Some(one),
        _ => None,
    }
}

fn c8_sandwich() -> Verdict {
    let n = 1000;
    let h = PI / n as f64;
    let tol = 1e-6 + SANDWICH_C * h * h;
    let results: Vec<(f64, Option<&str>)> = FIGS
        .par_iter()
        .map(|f| {
            let [a, b, c, m] = f.abcm;
            let p = ModelParams::new(a, b, c, 0.0, m).unwrap();
            let spec = FearSpec::ShiftedSine {
                base: f.base,
                amplitude: f.amp,
                frequency: 10.0,
            };
            let field = make_fear_field(&spec, PI, n).unwrap();
            let tr = comparison_triplet(
                &p,
                &field,
                [1.0, 1.0],
                f.init,
                500.0,
                &snapshot_grid(500.0, 50),
                &PdeOptions::default(),
            )
            .unwrap();
            let mut excess = f64::NEG_INFINITY;
            for ((s, hi), lo) in tr
                .heterogeneous
                .snapshots
                .iter()
                .zip(&tr.hat.snapshots)
                .zip(&tr.tilde.snapshots)
            {
                for j in 0..s.v.len() {
                    excess = excess.max(lo.v[j] - s.v[j]).max(s.v[j] - hi.v[j]);
                }
            }
            let last = tr.heterogeneous.snapshots.last().unwrap();
            let osc = (0..2).map(|i| {
                let col = if i == 0 { &last.u } else { &last.v };
                col.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                    - col.iter().cloned().fold(f64::INFINITY, f64::min)
            });
            let flat = osc.fold(0.0, f64::max) < TOL_TERMINAL;
            let (k_lo, k_hi) = (f.base, f.base + f.amp);
            let state = if flat {
                terminal_state(&p, k_lo, k_hi, last, TOL_TERMINAL)
            } else {
                None
            };
            (excess, state)
        })
        .collect();
    let worst = results.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
    let misses: Vec<String> = FIGS
        .iter()
        .zip(&results)
        .filter(|(f, r)| r.1 != Some(f.expected))
        .map(|(f, r)| format!("{} {:?} -> {:?}", f.name, f.init, r.1))
        .collect();
    Verdict {
        measured: format!(
            "worst comparison excess {worst:.1e}, {} of 10 reach the stated state {misses:?}",
            10 - misses.len()
        ),
        expected: "v_tilde <= v <= v_hat and the stated terminal states".into(),
        tolerance: format!("{tol:.3e} = 1e-6 + {SANDWICH_C} h^2; terminal {TOL_TERMINAL:e} at t = 500"),
        ok: worst <= tol && misses.is_empty(),
    }
}

fn c9_wedge() -> Verdict {
    let p = ModelParams::new(0.2, 0.2, 1.1, 0.0, 0.15).unwrap();
    let saddle = |k: f64| {
        let q = p.with(Param::K, k);
        interior_points(&q, 1e-5).into_iter().find(|e| is_saddle(&q, *e))
    };
    let (Some(hat), Some(tilde)) = (saddle(4.0), saddle(5.0)) else {
        return Verdict {
            measured: "no interior saddle".into(),
            expected: "two saddles".into(),
            tolerance: "-".into(),
            ok: false,
        };
    };
    let spec = FearSpec::ShiftedSine {
        base: 4.0,
        amplitude: 1.0,
        frequency: 10.0,
    };
    let field = make_fear_field(&spec, PI, 1000).unwrap();
    let probes = [([0.01, 1.5], "(0,1)"), ([1.5, 0.5], "(1,0)")];
    let lib = wedge_check(&p, &field, [1.0, 1.0], &probes, 500.0, &PdeOptions::default()).unwrap();
    let agree = sup_dist(lib.saddle_hat, hat).max(sup_dist(lib.saddle_tilde, tilde));
    let probes_ok = probes.iter().all(|(init, target)| {
        let run = integrate_pde(
            &p,
            &field,
            [1.0, 1.0],
            &InitialData::Flat { u: init[0], v: init[1] },
            500.0,
            &[500.0],
            &PdeOptions::default(),
        )
        .unwrap();
        let s = run.snapshots.last().unwrap();
        let goal = if *target == "(1,0)" { [1.0, 0.0] } else { [0.0, 1.0] };
        (0..s.u.len()).all(|j| sup_dist([s.u[j], s.v[j]], goal) < TOL_TERMINAL)
    });
    let ok = sup_dist(hat, [0.029, 0.882]) < TOL_SADDLE
        && sup_dist(tilde, [0.022, 0.888]) < TOL_SADDLE
        && tilde[1] > hat[1]
        && agree < 1e-8
        && lib.holds
        && probes_ok;
    Verdict {
        measured: format!(
            "E1* ({:.4}, {:.4}), E1** ({:.4}, {:.4}), library agrees to {agree:.0e}, wedge {}, probes reproduced {probes_ok}",
            hat[0], hat[1], tilde[0], tilde[1], lib.holds
        ),
        expected: "(0.029, 0.882), (0.022, 0.888), v(E1**) > v(E1*)".into(),
        tolerance: format!("{TOL_SADDLE:e} on the saddles"),
        ok,
    }
}

fn c10_oracles() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x710);
    let draws: Vec<ModelParams> = (0..1000)
        .map(|_| {
            ModelParams::new(
                rng.gen_range(0.01..2.0),
                rng.gen_range(0.01..2.0),
                rng.gen_range(0.01..3.0),
                rng.gen_range(0.0..5.0),
                rng.gen_range(0.0..2.0),
            )
            .unwrap()
        })
        .collect();
    let (mismatch, worst_root) = draws
        .par_iter()
        .map(|p| {
            let lib = interior_roots(p);
            let reference = scan_roots(&|x| nullcline_residual(p, x), 0.0, 1.0, 1e-5);
            let reference: Vec<f64> = reference.into_iter().filter(|x| *x > 0.0 && *x < 1.0).collect();
            if lib.len() != reference.len() {
                // a sign scan cannot see a double root
                let tangent = lib.iter().any(|r| r.multiplicity > 1);
                return (usize::from(!tangent), 0.0);
            }
            let d = lib
                .iter()
                .zip(&reference)
                .map(|(a, b)| (a.x - b).abs())
                .fold(0.0, f64::max);
            (0, d)
        })
        .reduce(|| (0, 0.0), |a, b| (a.0 + b.0, a.1.max(b.1)));
    let mut worst_jac = 0f64;
    for _ in 0..100 {
        let p = draws[rng.gen_range(0..draws.len())];
        let s = [rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0)];
        let j = jacobian(&p, &s).unwrap();
        let fd = fd_jacobian(&p, s, 1e-6);
        for r in 0..2 {
            for c in 0..2 {
                worst_jac = worst_jac.max((j[r][c] - fd[r][c]).abs());
            }
        }
    }
    Verdict {
        measured: format!(
            "count mismatches {mismatch}, worst root gap {worst_root:.1e}, worst Jacobian gap {worst_jac:.1e}"
        ),
        expected: "roots and Jacobian agree with the references".into(),
        tolerance: format!("{TOL_ROOT:e} on roots, {TOL_JAC:e} on entries"),
        ok: mismatch == 0 && worst_root < TOL_ROOT && worst_jac < TOL_JAC,
    }
}

type Check = (u8, &'static str, f64, fn() -> Verdict);

const CHECKS: [Check; 10] = [
    (1, "saddle-node threshold", 5.0, c1_saddle_node),
    (2, "transcritical thresholds", 30.0, c2_transcritical),
    (3, "pitchfork count signature", 5.0, c3_pitchfork),
    (4, "time courses of the three examples", 30.0, c4_examples),
    (5, "global stability for c < 1, k < k*", 60.0, c5_global_stability),
    (6, "no limit cycles", 30.0, c6_no_cycles),
    (7, "PDE flat-data equivalence", 60.0, c7_flat),
    (8, "sandwich certification", 600.0, c8_sandwich),
    (9, "strong-competition wedge", 60.0, c9_wedge),
    (10, "oracle equivalence", 30.0, c10_oracles),
];

fn main() -> ExitCode {
    let mut unexpected = Vec::new();
    for (id, title, budget, check) in CHECKS {
        let start = Instant::now();
        let v = check();
        let secs = start.elapsed().as_secs_f64();
        let passed = v.ok && secs <= budget;
        println!(
            "{} criterion {id:>2} {title}: measured {} | expected {} | tol {} | {secs:.2}s of {budget}s",
            if passed { "PASS" } else { "FAIL" },
            v.measured,
            v.expected,
            v.tolerance
        );
        if !passed && !KNOWN_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: no unexpected failures (known: {KNOWN_FAILURES:?})");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failures {unexpected:?}");
        ExitCode::FAILURE
    }
}

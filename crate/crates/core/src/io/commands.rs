//! The four analyses behind the command-line front end. Each returns a
//! report envelope plus the artifacts to write; nothing touches the disk
//! until [`Output::write`].

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::json;

use super::config::{Analysis, Format, RunConfig, SimMode, SimulateConfig, Suite};
use super::output::{field_csv, num, snapshots_csv, trajectory_csv, write_atomic};
use super::report::{Check, ReportEnvelope, Summary};
use crate::bifurcation::{
    saddle_node_points, scan, transversality_e1, transversality_e2, transversality_sn, BifurcationDiagram, Event,
    EventKind, TransversalityReport,
};
use crate::equilibria::{all_equilibria, existence_case, interior_equilibria};
use crate::error::{Error, Result};
use crate::model::{thresholds, ModelParams, Param, State2};
use crate::ode::{integrate, permanence_bounds};
use crate::pde::{
    candidates, comparison_triplet, detect_convergence, integrate_pde, make_fear_field, snapshot_grid, PdeOptions,
};
use crate::verify;

/// A file produced by a command, named relative to the output directory.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

#[derive(Debug, Clone)]
pub struct Output {
    pub envelope: ReportEnvelope,
    pub artifacts: Vec<Artifact>,
}

impl Output {
    /// Writes `report.json` and the artifacts allowed by `formats` into `dir`.
    pub fn write(&self, dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        let report = dir.join("report.json");
        write_atomic(&report, self.envelope.to_json().as_bytes())?;
        written.push(report);
        for a in &self.artifacts {
            let fmt = if a.name.ends_with(".csv") {
                Format::Csv
            } else {
                Format::Json
            };
            if formats.contains(&fmt) {
                let path = dir.join(&a.name);
                write_atomic(&path, a.contents.as_bytes())?;
                written.push(path);
            }
        }
        Ok(written)
    }

    /// True unless the envelope carries a failed check.
    pub fn passed(&self) -> bool {
        self.envelope.summary.as_ref().is_none_or(Summary::all_passed)
    }
}

/// Runs whichever analysis `cfg` selects.
pub fn run_config(cfg: &RunConfig) -> Result<Output> {
    match cfg.validate()? {
        Analysis::Equilibria => cmd_equilibria(cfg),
        Analysis::Simulate => cmd_simulate(cfg),
        Analysis::Bifurcation => cmd_bifurcation(cfg),
        Analysis::Verify => cmd_verify(Some(cfg), cfg.verify.as_ref().map_or(Suite::All, |v| v.suite)),
    }
}

pub fn cmd_equilibria(cfg: &RunConfig) -> Result<Output> {
    let p = cfg.model_params()?;
    let body = json!({
        "params": p,
        "thresholds": thresholds(&p),
        "equilibria": all_equilibria(&p),
        "existence_case": existence_case(&p),
    });
    Ok(Output {
        envelope: ReportEnvelope::new("equilibria", Some(cfg), body, None),
        artifacts: Vec::new(),
    })
}

/// Long-run outcome of an ODE trajectory ending at `s`.
pub fn ode_outcome(p: &ModelParams, s: State2) -> &'static str {
    const TOL: f64 = 1e-3;
    match (s[0] < TOL, s[1] < TOL) {
        (true, true) => "collapse",
        (false, true) => "y-extinction",
        (true, false) => "x-extinction",
        (false, false) => {
            let near = interior_equilibria(p)
                .iter()
                .any(|e| (e.point[0] - s[0]).abs().max((e.point[1] - s[1]).abs()) < TOL);
            if near {
                "coexistence"
            } else {
                "undetermined"
            }
        }
    }
}

fn sim_tolerances(sim: &SimulateConfig, rel: f64, abs: f64) -> (f64, f64) {
    (
        sim.rel_tol.as_ref().map_or(rel, |d| d.value()),
        sim.abs_tol.as_ref().map_or(abs, |d| d.value()),
    )
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<Output> {
    let p = cfg.model_params()?;
    let sim = cfg
        .simulate
        .as_ref()
        .ok_or_else(|| Error::Config("missing `simulate` section".into()))?;
    let t_end = sim.t_end.value();
    match sim.mode {
        SimMode::Ode => {
            let init = sim
                .init
                .as_ref()
                .map(|i| [i[0].value(), i[1].value()])
                .ok_or_else(|| Error::Config("ODE simulation needs `init`".into()))?;
            let (rel, abs) = sim_tolerances(sim, 1e-10, 1e-12);
            let tr = integrate(&p, init, t_end, rel, abs)?;
            let end = tr.final_state();
            let outcome = ode_outcome(&p, end);
            let body = json!({
                "mode": "ode",
                "final_state": end,
                "outcome": outcome,
                "transient_end": tr.transient_end(),
                "permanence": permanence_bounds(&p),
                "stats": tr.stats,
            });
            Ok(Output {
                envelope: ReportEnvelope::new("simulate", Some(cfg), body, None),
                artifacts: vec![Artifact {
                    name: "trajectory.csv".into(),
                    contents: trajectory_csv(&tr.times, &tr.states),
                }],
            })
        }
        SimMode::Pde => {
            let spec = sim.fear_spec()?;
            let length = sim.length.as_ref().map_or(PI, |d| d.value());
            let n = sim.intervals.unwrap_or(1000);
            let field = make_fear_field(&spec, length, n)?;
            let d = [
                sim.d1.as_ref().map_or(1.0, |v| v.value()),
                sim.d2.as_ref().map_or(1.0, |v| v.value()),
            ];
            let init = sim.initial_data()?;
            let snaps: Vec<f64> = match &sim.snapshots {
                Some(s) => s.iter().map(|d| d.value()).collect(),
                None => snapshot_grid(t_end, 50),
            };
            let defaults = PdeOptions::default();
            let (rel, abs) = sim_tolerances(sim, defaults.rel_tol, defaults.abs_tol);
            let opts = PdeOptions {
                rel_tol: rel,
                abs_tol: abs,
                ..defaults
            };
            let cands = candidates(&p, &field);

            let (run, comparison) = match (sim.comparison.unwrap_or(false), &init) {
                (true, crate::pde::InitialData::Flat { u, v }) => {
                    let tr = comparison_triplet(&p, &field, d, [*u, *v], t_end, &snaps, &opts)?;
                    (tr.heterogeneous, Some(tr.report))
                }
                (true, _) => {
                    return Err(Error::Config("the comparison runs need flat initial data".into()));
                }
                (false, _) => (integrate_pde(&p, &field, d, &init, t_end, &snaps, &opts)?, None),
            };
            let conv = detect_convergence(&run.snapshots, &cands, 1e-3)?;
            let outcome = match &conv.verdict {
                Some(v) => format!("{v} uniform"),
                None => "not settled".into(),
            };
            let body = json!({
                "mode": "pde",
                "intervals": n,
                "k_hat": field.k_hat,
                "k_tilde": field.k_tilde,
                "outcome": outcome,
                "convergence": conv,
                "comparison": comparison,
                "accepted_steps": run.accepted_steps,
                "rejected_steps": run.rejected_steps,
            });
            let summary = comparison.as_ref().map(|c| {
                Summary::new(vec![Check {
                    name: "sandwich".into(),
                    measured: format!("{:e} / {:e}", c.max_tilde_excess, c.max_hat_excess),
                    expected: "v_tilde <= v <= v_hat".into(),
                    tolerance: format!("{:e}", c.tolerance),
                    passed: c.holds,
                }])
            });
            Ok(Output {
                envelope: ReportEnvelope::new("simulate", Some(cfg), body, summary),
                artifacts: vec![
                    Artifact {
                        name: "snapshots.csv".into(),
                        contents: snapshots_csv(&run.xs, &run.snapshots),
                    },
                    Artifact {
                        name: "field.csv".into(),
                        contents: field_csv(&field),
                    },
                ],
            })
        }
    }
}

/// Transversality report for a scan event, evaluated at the exact threshold.
fn event_report(p: &ModelParams, param: Param, e: &Event) -> Option<TransversalityReport> {
    let q = p.with(param, e.value);
    match e.kind {
        EventKind::TranscriticalE1 | EventKind::PitchforkE1 => {
            let k_star = 1.0 / q.a - 1.0;
            transversality_e1(&q.with(Param::K, k_star)).ok()
        }
        EventKind::TranscriticalE2 | EventKind::PitchforkE2 => transversality_e2(&q.with(Param::C, 1.0)).ok(),
        EventKind::SaddleNode if param == Param::M => saddle_node_points(q.a, q.c, q.k)
            .into_iter()
            .min_by(|a, b| (a.m_sn - e.value).abs().total_cmp(&(b.m_sn - e.value).abs()))
            .and_then(|t| transversality_sn(&q.with(Param::M, t.m_sn).with(Param::A, t.a1), t.e).ok()),
        _ => None,
    }
}

fn diagram_csv(d: &BifurcationDiagram) -> (String, String) {
    let mut samples = String::from("value,label,x,y,kind,multiplicity\n");
    for s in &d.samples {
        for e in &s.equilibria {
            let kind = serde_json::to_value(e.kind).ok();
            let kind = kind.as_ref().and_then(|v| v.as_str()).unwrap_or("");
            let _ = writeln!(
                samples,
                "{},{},{},{},{kind},{}",
                num(s.value),
                e.label,
                num(e.x),
                num(e.y),
                e.multiplicity
            );
        }
    }
    let mut events = String::from("value,lo,hi,kind\n");
    for e in &d.events {
        let kind = serde_json::to_value(e.kind).ok();
        let kind = kind.as_ref().and_then(|v| v.as_str()).unwrap_or("");
        let _ = writeln!(
            events,
            "{},{},{},{kind}",
            num(e.value),
            num(e.bracket[0]),
            num(e.bracket[1])
        );
    }
    (samples, events)
}

pub fn cmd_bifurcation(cfg: &RunConfig) -> Result<Output> {
    let p = cfg.model_params()?;
    let b = cfg
        .bifurcation
        .as_ref()
        .ok_or_else(|| Error::Config("missing `bifurcation` section".into()))?;
    let d = scan(&p, b.parameter, b.lo.value(), b.hi.value(), b.samples)?;
    let reports: Vec<_> = d
        .events
        .iter()
        .map(|e| json!({ "event": e, "transversality": event_report(&p, b.parameter, e) }))
        .collect();
    let body = json!({
        "parameter": d.parameter,
        "events": reports,
        "samples": d.samples.len(),
    });
    let (samples, events) = diagram_csv(&d);
    let diagram = serde_json::to_string_pretty(&d)? + "\n";
    Ok(Output {
        envelope: ReportEnvelope::new("bifurcation", Some(cfg), body, None),
        artifacts: vec![
            Artifact {
                name: "diagram.json".into(),
                contents: diagram,
            },
            Artifact {
                name: "samples.csv".into(),
                contents: samples,
            },
            Artifact {
                name: "events.csv".into(),
                contents: events,
            },
        ],
    })
}

/// Runs a verification suite; `on_line` receives each criterion's line as
/// soon as it finishes.
pub fn cmd_verify_with(cfg: Option<&RunConfig>, suite: Suite, mut on_line: impl FnMut(&str)) -> Result<Output> {
    let mut results = Vec::new();
    for id in suite.criteria() {
        let c = verify::run(*id);
        on_line(&c.line());
        results.push(c);
    }
    let checks = results
        .iter()
        .map(|c| Check {
            name: format!("criterion {} {}", c.id, c.title),
            measured: c.measured.clone(),
            expected: c.expected.clone(),
            tolerance: c.tolerance.clone(),
            passed: c.passed,
        })
        .collect();
    let body = json!({ "suite": suite, "criteria": results });
    Ok(Output {
        envelope: ReportEnvelope::new("verify", cfg, body, Some(Summary::new(checks))),
        artifacts: Vec::new(),
    })
}

pub fn cmd_verify(cfg: Option<&RunConfig>, suite: Suite) -> Result<Output> {
    cmd_verify_with(cfg, suite, |_| {})
}

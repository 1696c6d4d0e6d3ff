//! Run configuration: a single JSON document with lower_snake_case keys and
//! real numbers written as decimal strings, which are echoed verbatim.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{nondimensionalize, ModelParams, Param, RawParams};
use crate::pde::{FearSpec, InitialData};

/// A real number kept as the exact decimal text it was written as.
#[derive(Debug, Clone, PartialEq)]
pub struct Decimal {
    text: String,
    value: f64,
}

impl Decimal {
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

impl std::str::FromStr for Decimal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let ok = !t.is_empty()
            && t.chars()
                .all(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E'));
        let value: f64 = if ok { t.parse().ok() } else { None }
            .ok_or_else(|| Error::Config(format!("`{s}` is not a decimal number")))?;
        if !value.is_finite() {
            return Err(Error::Config(format!("`{s}` is not finite")));
        }
        Ok(Decimal {
            text: s.to_string(),
            value,
        })
    }
}

impl From<f64> for Decimal {
    fn from(v: f64) -> Self {
        Decimal {
            text: format!("{v:?}"),
            value: v,
        }
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub a: Decimal,
    pub b: Decimal,
    pub c: Decimal,
    pub k: Decimal,
    pub m: Decimal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub r1: Decimal,
    pub r2: Decimal,
    pub alpha1: Decimal,
    pub alpha2: Decimal,
    pub beta1: Decimal,
    pub beta2: Decimal,
    pub eta: Decimal,
    pub xi: Decimal,
    /// Defaults to `r1 / alpha1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k1: Option<Decimal>,
    /// Defaults to `r2 / alpha2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k2: Option<Decimal>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquilibriaConfig {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimMode {
    Ode,
    Pde,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldConfig {
    Constant {
        value: Decimal,
    },
    ShiftedSine {
        base: Decimal,
        amplitude: Decimal,
        frequency: Decimal,
    },
    /// CSV file with header `x,k`.
    Tabulated {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitConfig {
    Flat {
        u: Decimal,
        v: Decimal,
    },
    /// CSV file with header `x,u,v`, one row per grid node.
    Sampled {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub mode: SimMode,
    pub t_end: Decimal,
    /// ODE initial state `[x, y]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<[Decimal; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<Decimal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<Decimal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fear_field: Option<FieldConfig>,
    /// Domain length; defaults to pi.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<Decimal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intervals: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d1: Option<Decimal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d2: Option<Decimal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pde_init: Option<InitConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshots: Option<Vec<Decimal>>,
    /// Also run the constant-fear bounding systems.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BifurcationConfig {
    pub parameter: Param,
    pub lo: Decimal,
    pub hi: Decimal,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Thresholds,
    Ode,
    Pde,
    Sandwich,
    Wedge,
    Oracles,
    All,
}

impl Suite {
    /// Criterion numbers covered by the suite.
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Thresholds => &[1, 2, 3],
            Suite::Ode => &[4, 5, 6],
            Suite::Pde => &[7],
            Suite::Sandwich => &[8],
            Suite::Wedge => &[9],
            Suite::Oracles => &[10],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::Config(format!("unknown verification suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub suite: Suite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formats: Option<Vec<Format>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    Equilibria,
    Simulate,
    Bifurcation,
    Verify,
}

impl Analysis {
    pub fn name(self) -> &'static str {
        match self {
            Analysis::Equilibria => "equilibria",
            Analysis::Simulate => "simulate",
            Analysis::Bifurcation => "bifurcation",
            Analysis::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_params: Option<RawConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equilibria: Option<EquilibriaConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulate: Option<SimulateConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bifurcation: Option<BifurcationConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

fn positive(name: &str, d: &Decimal) -> Result<f64> {
    if d.value() > 0.0 {
        Ok(d.value())
    } else {
        Err(Error::Config(format!("`{name}` must be > 0, got {d}")))
    }
}

/// Reads a CSV file with a header row into named numeric columns.
pub(crate) fn read_columns(path: &Path, names: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut rdr =
        csv::Reader::from_path(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let headers = rdr
        .headers()
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        .clone();
    let idx: Vec<usize> = names
        .iter()
        .map(|n| {
            headers
                .iter()
                .position(|h| h.trim() == *n)
                .ok_or_else(|| Error::Config(format!("{} has no `{n}` column", path.display())))
        })
        .collect::<Result<_>>()?;
    let mut cols = vec![Vec::new(); names.len()];
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        for (c, i) in idx.iter().enumerate() {
            let cell = rec.get(*i).unwrap_or("").trim();
            let v: f64 = cell
                .parse()
                .map_err(|_| Error::Config(format!("{} row {}: `{cell}` is not a number", path.display(), line + 2)))?;
            cols[c].push(v);
        }
    }
    Ok(cols)
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text)?;
        // relative data paths are taken from the config file's directory
        if let Some(dir) = path.parent() {
            cfg.resolve_paths(dir);
        }
        Ok(cfg)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(sim) = self.simulate.as_mut() {
            if let Some(FieldConfig::Tabulated { path }) = sim.fear_field.as_mut() {
                fix(path);
            }
            if let Some(InitConfig::Sampled { path }) = sim.pde_init.as_mut() {
                fix(path);
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// The single analysis the config selects.
    pub fn analysis(&self) -> Result<Analysis> {
        let present: Vec<Analysis> = [
            (self.equilibria.is_some(), Analysis::Equilibria),
            (self.simulate.is_some(), Analysis::Simulate),
            (self.bifurcation.is_some(), Analysis::Bifurcation),
            (self.verify.is_some(), Analysis::Verify),
        ]
        .into_iter()
        .filter(|(on, _)| *on)
        .map(|(_, a)| a)
        .collect();
        match present.as_slice() {
            [one] => Ok(*one),
            [] => Err(Error::Config(
                "no analysis selected: add one of `equilibria`, `simulate`, `bifurcation`, `verify`".into(),
            )),
            _ => Err(Error::Config(format!(
                "exactly one analysis may be selected, found {}",
                present.iter().map(|a| a.name()).collect::<Vec<_>>().join(", ")
            ))),
        }
    }

    /// Nondimensional parameters, validated.
    pub fn model_params(&self) -> Result<ModelParams> {
        let p = match (&self.params, &self.raw_params) {
            (Some(p), None) => ModelParams {
                a: p.a.value(),
                b: p.b.value(),
                c: p.c.value(),
                k: p.k.value(),
                m: p.m.value(),
            },
            (None, Some(r)) => {
                let raw = RawParams {
                    r1: r.r1.value(),
                    r2: r.r2.value(),
                    alpha1: r.alpha1.value(),
                    alpha2: r.alpha2.value(),
                    beta1: r.beta1.value(),
                    beta2: r.beta2.value(),
                    eta: r.eta.value(),
                    xi: r.xi.value(),
                    k1: r.k1.as_ref().map_or(r.r1.value() / r.alpha1.value(), |d| d.value()),
                    k2: r.k2.as_ref().map_or(r.r2.value() / r.alpha2.value(), |d| d.value()),
                };
                return nondimensionalize(&raw).map_err(|e| Error::Config(e.to_string()));
            }
            (Some(_), Some(_)) => return Err(Error::Config("give either `params` or `raw_params`, not both".into())),
            (None, None) => return Err(Error::Config("missing `params` (or `raw_params`)".into())),
        };
        p.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(p)
    }

    pub fn output_dir(&self) -> Option<&Path> {
        self.output.as_ref().and_then(|o| o.dir.as_deref())
    }

    pub fn formats(&self) -> Vec<Format> {
        self.output
            .as_ref()
            .and_then(|o| o.formats.clone())
            .unwrap_or_else(|| vec![Format::Json, Format::Csv])
    }

    /// Full validation: selector, parameters, analysis options and the
    /// existence of every referenced file.
    pub fn validate(&self) -> Result<Analysis> {
        let analysis = self.analysis()?;
        if analysis != Analysis::Verify {
            self.model_params()?;
        }
        if let Some(sim) = &self.simulate {
            positive("simulate.t_end", &sim.t_end)?;
            for (name, tol) in [("rel_tol", &sim.rel_tol), ("abs_tol", &sim.abs_tol)] {
                if let Some(t) = tol {
                    let v = positive(name, t)?;
                    if v > 1e-2 {
                        return Err(Error::Config(format!("`{name}` must be <= 1e-2, got {t}")));
                    }
                }
            }
            match sim.mode {
                SimMode::Ode => {
                    let init = sim
                        .init
                        .as_ref()
                        .ok_or_else(|| Error::Config("ODE simulation needs `init`".into()))?;
                    for d in init {
                        if d.value() < 0.0 {
                            return Err(Error::Config(format!("`init` must be nonnegative, got {d}")));
                        }
                    }
                }
                SimMode::Pde => {
                    if sim.fear_field.is_none() || sim.pde_init.is_none() {
                        return Err(Error::Config("PDE simulation needs `fear_field` and `pde_init`".into()));
                    }
                    for (name, d) in [("length", &sim.length), ("d1", &sim.d1), ("d2", &sim.d2)] {
                        if let Some(d) = d {
                            positive(name, d)?;
                        }
                    }
                    if let Some(FieldConfig::Tabulated { path }) = &sim.fear_field {
                        if !path.is_file() {
                            return Err(Error::Config(format!("fear field file {} not found", path.display())));
                        }
                    }
                    if let Some(InitConfig::Sampled { path }) = &sim.pde_init {
                        if !path.is_file() {
                            return Err(Error::Config(format!("initial data file {} not found", path.display())));
                        }
                    }
                }
            }
        }
        if let Some(b) = &self.bifurcation {
            if !(b.lo.value() < b.hi.value()) {
                return Err(Error::Config("bifurcation `lo` must be below `hi`".into()));
            }
            if b.samples < 2 {
                return Err(Error::Config("bifurcation `samples` must be at least 2".into()));
            }
        }
        Ok(analysis)
    }
}

impl SimulateConfig {
    pub fn fear_spec(&self) -> Result<FearSpec> {
        Ok(match self.fear_field.as_ref() {
            Some(FieldConfig::Constant { value }) => FearSpec::Constant { value: value.value() },
            Some(FieldConfig::ShiftedSine {
                base,
                amplitude,
                frequency,
            }) => FearSpec::ShiftedSine {
                base: base.value(),
                amplitude: amplitude.value(),
                frequency: frequency.value(),
            },
            Some(FieldConfig::Tabulated { path }) => {
                let mut cols = read_columns(path, &["x", "k"])?;
                let k = cols.pop().unwrap_or_default();
                let x = cols.pop().unwrap_or_default();
                FearSpec::Tabulated { x, k }
            }
            None => return Err(Error::Config("missing `fear_field`".into())),
        })
    }

    pub fn initial_data(&self) -> Result<InitialData> {
        Ok(match self.pde_init.as_ref() {
            Some(InitConfig::Flat { u, v }) => InitialData::Flat {
                u: u.value(),
                v: v.value(),
            },
            Some(InitConfig::Sampled { path }) => {
                let mut cols = read_columns(path, &["u", "v"])?;
                let v = cols.pop().unwrap_or_default();
                let u = cols.pop().unwrap_or_default();
                InitialData::Sampled { u, v }
            }
            None => return Err(Error::Config("missing `pde_init`".into())),
        })
    }
}

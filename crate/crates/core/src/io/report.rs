//! Report envelope shared by all commands.

use serde::{Deserialize, Serialize};

use super::config::RunConfig;

pub const TOOL: &str = "allelofear";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: String,
    pub expected: String,
    pub tolerance: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

impl Summary {
    pub fn new(checks: Vec<Check>) -> Self {
        let passed = checks.iter().filter(|c| c.passed).count();
        Summary {
            passed,
            failed: checks.len() - passed,
            checks,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub tool: String,
    pub version: String,
    pub timestamp: String,
    pub analysis: String,
    pub config: Option<RunConfig>,
    pub payload: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<Summary>,
}

impl ReportEnvelope {
    pub fn new(
        analysis: &str,
        config: Option<&RunConfig>,
        payload: serde_json::Value,
        summary: Option<Summary>,
    ) -> Self {
        ReportEnvelope {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            analysis: analysis.into(),
            config: config.cloned(),
            payload,
            summary,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("envelope serializes");
        s.push('\n');
        s
    }
}

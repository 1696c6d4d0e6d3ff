use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter `{name}` = {value} is outside its domain: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("singular point at x = {x} (1 + kx vanishes)")]
    Singularity { x: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("step size underflow at t = {t} (h = {h:e}); system is too stiff for this integrator")]
    Stiffness { t: f64, h: f64 },

    #[error("component {component} went negative ({value:e}) at t = {t}")]
    NegativeState { t: f64, component: usize, value: f64 },

    #[error("state diverged (|state| = {value:e}) at t = {t}")]
    Divergence { t: f64, value: f64 },

    #[error("step budget of {0} exhausted")]
    StepLimit(usize),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("fear field violates assumption ({assumption}): {detail}")]
    Assumption { assumption: &'static str, detail: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain { .. }
            | Error::Config(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::Assumption { .. }
            | Error::Precondition(_) => 2,
            _ => 3,
        }
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {family} parameters: {reason}")]
    InvalidParameter { family: &'static str, reason: String },

    #[error("cannot parse distribution literal `{literal}`: {reason}")]
    Parse { literal: String, reason: String },

    #[error("{dist} cannot be used as {role}: {reason}")]
    InvalidRole {
        role: &'static str,
        dist: String,
        reason: &'static str,
    },

    #[error("time {t} is outside the path horizon [0, {horizon}]")]
    OutOfHorizon { t: f64, horizon: f64 },

    #[error("ratio estimation needs at least 2 cycles, got {n}")]
    DegenerateCycles { n: usize },

    #[error("invalid costs: preventive cost {c} must satisfy 0 < c < c_f = {c_f}")]
    InvalidCosts { c: f64, c_f: f64 },

    #[error("queue is unstable: traffic intensity {rho} >= 1")]
    Unstable { rho: f64 },

    #[error("a regeneration cycle exceeded the cap of {cap} customers")]
    NonConvergence { cap: usize },

    #[error("queue trace has no complete regeneration cycle")]
    EmptyTrace,

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },
}

impl Error {
    /// Stable name used in CLI diagnostics and JSON error objects.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::Parse { .. } => "Parse",
            Error::InvalidRole { .. } => "InvalidRole",
            Error::OutOfHorizon { .. } => "OutOfHorizon",
            Error::DegenerateCycles { .. } => "DegenerateCycles",
            Error::InvalidCosts { .. } => "InvalidCosts",
            Error::Unstable { .. } => "Unstable",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::EmptyTrace => "EmptyTrace",
            Error::InvalidArgument { .. } => "InvalidArgument",
        }
    }

    pub(crate) fn arg(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }
}

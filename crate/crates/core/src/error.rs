use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An inverse-trig argument left [-1, 1] by more than roundoff.
    #[error("domain error in {context}: argument {value} is outside [-1, 1]")]
    Domain { context: &'static str, value: f64 },

    #[error("invalid {field}: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("UE position ({x:.3}, {y:.3}) is not inside the eNB-blocked region")]
    OutsideBlockedRegion { x: f64, y: f64 },

    #[error("region is unbounded; area is undefined")]
    UnboundedRegion,

    #[error("blocked area {blocked} exceeds visible area {visible}")]
    InconsistentAreas { blocked: f64, visible: f64 },

    #[error("load {load} cannot be served within {max_servers} servers at capacity {capacity}")]
    Infeasible {
        load: f64,
        capacity: f64,
        max_servers: usize,
    },

    #[error("malformed sequence template: {0}")]
    Template(String),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

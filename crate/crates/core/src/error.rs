use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid set: {0}")]
    InvalidSet(String),
    #[error("more than {limit} crossings along a ray")]
    CrossingOverflow { limit: usize },
    #[error("grid too large: extent/h = {ratio} exceeds {limit}")]
    GridTooLarge { ratio: f64, limit: f64 },
    #[error("no front found at level {level}")]
    FrontNotFound { level: f64 },
    #[error("front at level {level} touches the domain boundary")]
    FrontOpen { level: f64 },
    #[error("radial primitive diverges at a = 0 for s = {s}")]
    DivergentPrimitive { s: f64 },
    #[error("tail integral diverges for s = {s}")]
    DivergentTail { s: f64 },
    #[error("cell weight requested for the centre cell")]
    CenterCell,
    #[error("point is not on the boundary: {0}")]
    NonBoundaryPoint(String),
    #[error("{kind} is not available on grids")]
    UnsupportedOnGrid { kind: String },
    #[error("superlevel set not sign-constant beyond cutoff {cutoff}")]
    CutoffTooSmall { cutoff: f64 },
    #[error("unsupported kind for this operation: {0}")]
    UnsupportedKind(String),
    #[error("flow stalled: max |H| = {max_speed}")]
    StalledFlow { max_speed: f64 },
    #[error("errors not monotone over the final rows")]
    NonMonotoneErrors,
    #[error("io failure: {0}")]
    Io(String),
    #[error("malformed grid file: {0}")]
    GridFormat(String),
}

impl Error {
    /// Stable short name for machine-readable reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::InvalidSet(_) => "InvalidSet",
            Error::CrossingOverflow { .. } => "CrossingOverflow",
            Error::GridTooLarge { .. } => "GridTooLarge",
            Error::FrontNotFound { .. } => "FrontNotFound",
            Error::FrontOpen { .. } => "FrontOpen",
            Error::DivergentPrimitive { .. } => "DivergentPrimitive",
            Error::DivergentTail { .. } => "DivergentTail",
            Error::CenterCell => "CenterCell",
            Error::NonBoundaryPoint(_) => "NonBoundaryPoint",
            Error::UnsupportedOnGrid { .. } => "UnsupportedOnGrid",
            Error::CutoffTooSmall { .. } => "CutoffTooSmall",
            Error::UnsupportedKind(_) => "UnsupportedKind",
            Error::StalledFlow { .. } => "StalledFlow",
            Error::NonMonotoneErrors => "NonMonotoneErrors",
            Error::Io(_) => "IoFailure",
            Error::GridFormat(_) => "GridFormat",
        }
    }

    /// True for errors caused by bad input rather than numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::InvalidSet(_)
                | Error::GridTooLarge { .. }
                | Error::UnsupportedOnGrid { .. }
                | Error::UnsupportedKind(_)
                | Error::NonBoundaryPoint(_)
                | Error::CenterCell
                | Error::GridFormat(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

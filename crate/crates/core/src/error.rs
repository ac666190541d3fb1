use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("malformed rational `{0}`")]
    MalformedRational(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degenerate interval: lower bound must be strictly below upper bound on every axis")]
    DegenerateInterval,
    #[error("malformed box `{0}`")]
    MalformedBox(String),
    #[error("set has empty interior")]
    EmptyInterior,
    #[error("cell lies outside the bounding box")]
    OutsideBoundingBox,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PartitionError {
    #[error("bisection passed depth cap {depth_cap} without accepting a cell")]
    DepthExceeded { depth_cap: u32 },
    #[error("redirected tag for item {index} violates gauge fineness")]
    RedirectViolatesFineness { index: usize },
    #[error("malformed partition text at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DivisionError {
    #[error("host has empty interior")]
    EmptyInterior,
    #[error("division covers nothing")]
    CoversNothing,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrationError {
    #[error("partition generator exceeded depth cap {depth_cap}")]
    DepthExceeded { depth_cap: u32 },
    #[error("no convergence after {levels} levels (last value norm {last_norm:.6e}, error estimate {error_estimate:.3e}): {reason}")]
    NoConvergence {
        levels: u32,
        last_norm: f64,
        error_estimate: f64,
        reason: String,
    },
    #[error("integrand has dimension {integrand}, interval has dimension {interval}")]
    DimensionMismatch { integrand: usize, interval: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FunctionError {
    #[error("tail not certifiable: no per-cell bound available")]
    TailNotCertifiable,
    #[error("Dunford-function precondition not established")]
    PreconditionNotEstablished,
    #[error("interval function evaluation failed: {0}")]
    Integration(#[from] IntegrationError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ApiError {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("per-cell integration failed on division cell {index}: {source}")]
    CellFailure {
        index: usize,
        #[source]
        source: IntegrationError,
    },
    #[error(transparent)]
    Integration(#[from] IntegrationError),
    #[error(transparent)]
    Division(#[from] DivisionError),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

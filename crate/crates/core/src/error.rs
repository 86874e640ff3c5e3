use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("{name} must be at least 1, got {value}")]
    EmptyAxis { name: &'static str, value: usize },
    #[error("{name} must be strictly positive and finite, got {value}")]
    NonPositiveSpacing { name: &'static str, value: f64 },
    #[error("nz*dz = {actual} mm does not match the configured cell length {expected} mm")]
    CellLengthMismatch { expected: f64, actual: f64 },
    #[error("dt = {dt} us exceeds the stability bound {limit} us")]
    Unstable { dt: f64, limit: f64 },
    #[error("shape mismatch: expected {expected} samples, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("non-finite spin wave at t = {t} us (pixel {pixel}, z index {iz})")]
    NonFinite { t: f64, pixel: usize, iz: usize },
    #[error("non-finite echo output at t = {t} us (pixel {pixel})")]
    NonFiniteEcho { t: f64, pixel: usize },
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("invalid medium: {0}")]
    Medium(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Optics(#[from] OpticsError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OpticsError {
    #[error("diffusion kernel (5 sigma = {reach} mm) is wider than half the domain ({half_domain} mm)")]
    KernelTooWide { reach: f64, half_domain: f64 },
    #[error("boundary at x = {x} mm lies outside the domain [{min}, {max}] mm")]
    BoundaryOutsideDomain { x: f64, min: f64, max: f64 },
    #[error("zone boundaries must be sorted in increasing order")]
    UnsortedBoundaries,
    #[error("expected {expected} read windows for {boundaries} boundaries, got {actual}")]
    WindowCount {
        expected: usize,
        boundaries: usize,
        actual: usize,
    },
    #[error("pattern period {period_px:.2} px is below the 4 pixel minimum")]
    Unresolvable { period_px: f64 },
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("requested rate {rate} is not reachable below the saturated limit {limit}")]
    RateUnreachable { rate: f64, limit: f64 },
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("visibility is undefined: peak and valley are both zero after background subtraction")]
    UndefinedVisibility,
    #[error("argument {value} outside the domain of {function}")]
    Domain { function: &'static str, value: f64 },
    #[error("sample position {x} mm is outside the profile [{min}, {max}] mm")]
    OutOfProfile { x: f64, min: f64, max: f64 },
    #[error("oracle grid under-resolved: {0}")]
    UnderResolved(String),
    #[error("empty selection: {0}")]
    Empty(String),
    #[error("input energy is zero")]
    ZeroInput,
    #[error("invalid parameter: {0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum PgmError {
    #[error("malformed PGM header: {0}")]
    Header(String),
    #[error("unsupported PGM max value {0}; only 8-bit (255) is accepted")]
    Depth(u32),
    #[error("PGM payload truncated: expected {expected} bytes, found {actual}")]
    Truncated { expected: usize, actual: usize },
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Pgm(#[from] PgmError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Optics(#[from] OpticsError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Top-level error used by the scenario layer and the command line.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Optics(#[from] OpticsError),
    #[error(transparent)]
    Pgm(#[from] PgmError),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code: 1 for configuration problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Engine(EngineError::NonFinite { .. })
            | Error::Engine(EngineError::NonFiniteEcho { .. }) => 2,
            Error::Config(ConfigError::Engine(EngineError::NonFinite { .. })) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

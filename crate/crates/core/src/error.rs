use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: expected exactly two vertex tokens, found {found}")]
    MalformedLine { line: usize, found: usize },

    #[error("line {line}: self-loop on vertex '{vertex}'")]
    SelfLoop { line: usize, vertex: String },

    #[error("edge list is empty")]
    EmptyEdgeSet,

    #[error("graph violates standing hypotheses: {0}")]
    InvalidGraph(String),

    #[error("series has nonzero constant term")]
    NonzeroConstantTerm,

    #[error("series has zero linear coefficient; no compositional inverse exists")]
    ZeroLinearCoefficient,

    #[error("requested order {requested} exceeds available order {available}")]
    OrderTooLarge { requested: usize, available: usize },

    #[error("enumeration guard exceeded: estimated {estimate} steps > limit {limit}")]
    GuardExceeded { estimate: f64, limit: f64 },

    #[error("unknown symbol index {0}")]
    UnknownSymbol(usize),

    #[error("x = {x} outside domain [0, {radius})")]
    Domain { x: f64, radius: f64 },

    #[error("Perron root routes disagree: power iteration {power}, polynomial root {poly}")]
    PerronDisagreement { power: f64, poly: f64 },

    #[error("root finding failed: {0}")]
    RootNotFound(String),

    #[error("parameter out of window: {0}")]
    ParamOutOfWindow(String),

    #[error("strict window is empty: x1 = {x1} >= x0 = {x0}")]
    EmptyStrictWindow { x0: f64, x1: f64 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("no interior sign change of s'(p): s'(lo) = {lo}, s'(hi) = {hi}")]
    NoInteriorMaximum { lo: f64, hi: f64 },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("loop at vertex {vertex} ({location})")]
    LoopRejected { vertex: usize, location: String },
    #[error("duplicate edge {u}-{v} ({location})")]
    DuplicateEdge { u: usize, v: usize, location: String },
    #[error("vertex set is empty")]
    EmptySet,
    #[error("blowup multiplicity of vertex {vertex} is zero")]
    ZeroMultiplicity { vertex: usize },
    #[error("{what} is {got}, limit is {limit}")]
    TooLarge {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("graph is disconnected or a join; decompose by components/co-components first")]
    NotPrimeEligible,
    #[error("pattern has {0} vertices, limit is 8")]
    PatternTooLarge(usize),
    #[error("graph is not prime")]
    NotPrime,
    #[error("coloring has {got} entries, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("color {color} outside palette 1..={k}")]
    ColorOutOfRange { color: u8, k: u8 },
    #[error("state space exceeds budget: counted {count} colorings (budget {budget})")]
    StateSpaceTooLarge { count: u64, budget: u64 },
    #[error("endpoint coloring is not a proper coloring")]
    ImproperEndpoint,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("subgraph on {vertices:?} admits no path with palette {palette:?}")]
    SubgraphNotMixing {
        vertices: Vec<usize>,
        palette: Vec<u8>,
    },
    #[error("palette of size {0} is too small for this operation")]
    PaletteTooSmall(u8),
    #[error("search budget exhausted after {0} stored colorings")]
    BudgetExhausted(u64),
    #[error("no path exists ({0})")]
    NoPath(String),
    #[error("invalid schedule at step {step}: {reason}")]
    InvalidSchedule { step: usize, reason: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

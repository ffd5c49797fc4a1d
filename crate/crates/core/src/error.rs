use thiserror::Error;

/// Errors produced by graph construction, model fitting and testing.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph must have at least {min} nodes, got {n}")]
    TooFewNodes { n: usize, min: usize },

    #[error("adjacency matrix must be square: row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("adjacency entry ({i}, {j}) is {value}, expected 0 or 1")]
    NonBinaryEntry { i: usize, j: usize, value: u8 },

    #[error("adjacency matrix is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },

    #[error("self-loop at node {node}")]
    SelfLoop { node: usize },

    #[error("duplicate edge ({i}, {j})")]
    DuplicateEdge { i: usize, j: usize },

    #[error("node index {index} out of range for {n} nodes")]
    NodeOutOfRange { index: usize, n: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("covariate label {label} at node {node} is not below category count {k}")]
    LabelOutOfRange { node: usize, label: usize, k: usize },

    #[error("operation requires binary covariates (k <= 2), got k = {k}")]
    NonBinaryCovariates { k: usize },

    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("degree sequence has odd sum {0}")]
    OddDegreeSum(usize),

    #[error("degree sequence is not graphical")]
    NotGraphical,

    #[error("sequential sampler reached a state with no admissible partner for node {node}")]
    SamplerStuck { node: usize },

    #[error("exhaustive search limited to {limit} nodes, graph has {n}")]
    ExhaustiveLimit { n: usize, limit: usize },

    #[error("symmetric eigen-solver did not converge")]
    EigenFailure,

    #[error("degenerate contingency table: {0}")]
    DegenerateTable(String),

    #[error("degenerate importance weights: {0}")]
    DegenerateWeights(String),

    #[error("replicate count must be at least 1")]
    NoReplicates,

    #[error("empty sample")]
    EmptySample,

    #[error("statistic failed on replicate {replicate}: {source}")]
    Replicate {
        replicate: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown dataset '{0}'")]
    UnknownDataset(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

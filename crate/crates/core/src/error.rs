use thiserror::Error;

/// Errors raised across the simulator, loss model and experiment runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown qubit label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate qubit label `{0}`")]
    DuplicateLabel(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("operator is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("Kraus operators are not trace preserving (max deviation {0:e})")]
    NotTracePreserving(f64),

    #[error("projectors are not a complete orthogonal set: {0}")]
    IncompleteProjectors(String),

    #[error("{name} must lie in {range}, got {value}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("partition must name at least one qubit")]
    EmptyPartition,

    #[error("no route between `{0}` and `{1}`")]
    NoRoute(String, String),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("{source_name}:{line}: {msg}")]
    Parse {
        source_name: String,
        line: usize,
        msg: String,
    },

    #[error("distillation round succeeded with probability {0:e}")]
    DegenerateRound(f64),

    #[error("fidelity {0} is not above 1/2, the state cannot be distilled")]
    NotDistillable(f64),

    #[error("crossover is undefined: EDSS rate at unit gate probability is zero")]
    UndefinedCrossover,

    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

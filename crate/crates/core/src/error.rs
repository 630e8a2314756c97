use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by front-ends to map errors onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed input: bad literals, inconsistent generator lists, bad parameters.
    Invalid,
    /// A check or target does not fit the device limits.
    Infeasible,
    /// The engines disagree with the target; indicates a bug, not user error.
    Verification,
    /// Misuse of the simulation API (busy device, impossible forced outcome, ...).
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("length mismatch: {left} vs {right} qubits")]
    LengthMismatch { left: usize, right: usize },

    #[error("operator {0} is not Hermitian")]
    NotHermitian(String),

    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("a state needs at least one qubit")]
    NoQubits,

    #[error("generators {first} and {second} do not commute")]
    NonCommuting { first: usize, second: usize },

    #[error("generator {0} is dependent on the preceding generators")]
    DependentGenerator(usize),

    #[error("expected {expected} generators, found {found}")]
    GeneratorCount { expected: usize, found: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate generator {0}: all-identity operators cannot be checked")]
    DegenerateGenerator(usize),

    #[error(
        "coherence budget exceeded for check {check}: weight {weight} > max weight {max_weight}"
    )]
    CoherenceBudget {
        check: String,
        weight: usize,
        max_weight: usize,
    },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("module {0} is busy")]
    DeviceBusy(usize),

    #[error("pulse separation {dt} us must exceed module transit time {transit} us")]
    PulseSeparation { dt: f64, transit: f64 },

    #[error("state has {qubits} qubits, above the dense cap of {cap}")]
    CapExceeded { qubits: usize, cap: usize },

    #[error("dimension mismatch: {0} vs {1} amplitudes")]
    DimensionMismatch(usize, usize),

    #[error("sampled a zero-probability branch (p = {0:e})")]
    DegenerateBranch(f64),

    #[error("outcome {requested} is impossible for {operator}")]
    ImpossibleOutcome { operator: String, requested: i8 },

    #[error("sub-state on photons {0:?} is not GHZ-class")]
    NotGhz(Vec<usize>),

    #[error("verification failed:\n{0}")]
    Verification(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse { .. }
            | Error::LengthMismatch { .. }
            | Error::NotHermitian(_)
            | Error::QubitOutOfRange { .. }
            | Error::NoQubits
            | Error::NonCommuting { .. }
            | Error::DependentGenerator(_)
            | Error::GeneratorCount { .. }
            | Error::InvalidGraph(_)
            | Error::InvalidParameter(_)
            | Error::DegenerateGenerator(_)
            | Error::PulseSeparation { .. }
            | Error::NotGhz(_)
            | Error::DimensionMismatch(..) => ErrorClass::Invalid,
            Error::CoherenceBudget { .. } | Error::Infeasible(_) | Error::CapExceeded { .. } => {
                ErrorClass::Infeasible
            }
            Error::Verification(_) => ErrorClass::Verification,
            Error::DeviceBusy(_) | Error::DegenerateBranch(_) | Error::ImpossibleOutcome { .. } => {
                ErrorClass::Internal
            }
        }
    }
}

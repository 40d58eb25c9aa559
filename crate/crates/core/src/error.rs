use thiserror::Error;

/// Errors produced anywhere in the simulator, circuit layer, or estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter outside its documented range (qubit counts, shots, probabilities, config fields).
    #[error("configuration error: {0}")]
    Config(String),

    #[error("qubit index {index} out of range for {num_qubits}-qubit register")]
    QubitIndex { index: usize, num_qubits: usize },

    #[error("control and target must differ (both are qubit {0})")]
    SameQubit(usize),

    #[error("gate matrix is not unitary (max deviation {0:.3e})")]
    InvalidGate(f64),

    /// An instruction that cannot be placed in the circuit it is appended to.
    #[error("circuit construction error: {0}")]
    Construction(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    /// Kitaev post-processing saw C_k = S_k = 0 and cannot recover an angle.
    #[error("degenerate cos/sin statistics at round k = {k}")]
    Degenerate { k: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn construction(msg: impl Into<String>) -> Self {
        Error::Construction(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Every failure the library can report.
///
/// [`SwfError::category`] sorts them into the three classes the command-line
/// front end maps onto exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SwfError {
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("constraint error on {key}: {message}")]
    Constraint { key: String, message: String },

    #[error("data is not admissible: {0}")]
    Inadmissible(String),

    #[error("boundary does not square to zero: {0}")]
    SquareNonzero(String),

    #[error("short sequence is not exact at degree {degree}: {message}")]
    NonExact { degree: i64, message: String },

    #[error("long exact sequence fails at degree {degree}")]
    ExactnessFailure { degree: i64 },

    #[error("not a cycle: {0}")]
    NonCycle(String),

    #[error("connecting chase did not terminate after {rounds} rounds")]
    NonTermination { rounds: usize },

    #[error("no reducible orbit present")]
    MissingReducible,

    #[error("generation failed after {attempts} attempts: {message}")]
    GenerationFailure { attempts: usize, message: String },

    #[error("no stable tail in certified range {0}")]
    NoTail(String),

    #[error("degree {degree} is outside the certified range")]
    Uncertified { degree: i64 },

    #[error("path endpoint t = {t} lies on a wall")]
    EndpointOnWall { t: f64 },

    #[error("spectral flow not resolved on [{t0}, {t1}] within the refinement budget")]
    Resolution { t0: f64, t1: f64 },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("degenerate local model: {0}")]
    DegenerateModel(String),

    #[error("crossing solver infeasible: {0}")]
    Infeasible(String),
}

/// Coarse classification used for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Malformed input or schema violation.
    Input,
    /// Well-formed input that fails an identity the theory requires.
    Validation,
    /// A computation that could not be completed.
    Computation,
}

impl SwfError {
    pub fn category(&self) -> ErrorCategory {
        use SwfError::*;
        match self {
            Parse { .. } | Constraint { .. } | InvalidPath(_) => ErrorCategory::Input,
            Inadmissible(_)
            | SquareNonzero(_)
            | NonExact { .. }
            | ExactnessFailure { .. }
            | NonCycle(_)
            | MissingReducible => ErrorCategory::Validation,
            _ => ErrorCategory::Computation,
        }
    }

    /// Variant name, as reported by the command-line front end.
    pub fn kind(&self) -> &'static str {
        use SwfError::*;
        match self {
            Parse { .. } => "Parse",
            Constraint { .. } => "Constraint",
            Inadmissible(_) => "Inadmissible",
            SquareNonzero(_) => "SquareNonzero",
            NonExact { .. } => "NonExact",
            ExactnessFailure { .. } => "ExactnessFailure",
            NonCycle(_) => "NonCycle",
            NonTermination { .. } => "NonTermination",
            MissingReducible => "MissingReducible",
            GenerationFailure { .. } => "GenerationFailure",
            NoTail(_) => "NoTail",
            Uncertified { .. } => "Uncertified",
            EndpointOnWall { .. } => "EndpointOnWall",
            Resolution { .. } => "Resolution",
            InvalidPath(_) => "InvalidPath",
            DegenerateModel(_) => "DegenerateModel",
            Infeasible(_) => "Infeasible",
        }
    }

    pub(crate) fn constraint(key: impl Into<String>, message: impl Into<String>) -> Self {
        SwfError::Constraint {
            key: key.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, SwfError>;

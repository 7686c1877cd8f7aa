//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong in path construction, validation, Darboux
/// iteration, monodromy fitting, and serialization.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A Möbius map with zero determinant was requested or produced.
    #[error("singular Möbius map (zero determinant)")]
    SingularMap,

    /// Three-point Möbius interpolation received coincident points or images.
    #[error("degenerate Möbius fit: {0}")]
    DegenerateFit(String),

    /// Sign sequence does not sum to zero, so the path cannot close up.
    #[error("inconsistent sign sequence: entries sum to {sum}, expected 0")]
    InconsistentSequence { sum: i64 },

    /// The Darboux step direction is undefined: the frame tip coincides with
    /// the next path vertex.
    #[error("undefined Darboux step direction: frame tip equals the next vertex")]
    UndefinedDirection,

    /// The frame handed to a Darboux step does not have the declared length.
    #[error("inconsistent Darboux input: |frame|^2 differs from the declared leg length squared")]
    InconsistentFrame,

    /// An edge admits no nondegenerate circle map for the given leg length.
    #[error("degenerate edge {index}: {reason}")]
    DegenerateEdge { index: usize, reason: String },

    /// Error at a specific step of an iterated transformation.
    #[error("darboux step {index} failed: {source}")]
    StepFailed {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    /// The area baseline y = -c does not lie strictly below the paths.
    #[error("baseline violation: c = {c} must exceed max |y| = {max_abs_y}")]
    BaselineViolation { c: String, max_abs_y: String },

    /// Sign-sequence enumeration would produce too many tuples.
    #[error("enumeration too large: n = {n} exceeds cap {cap}")]
    TooLarge { n: usize, cap: usize },

    /// An operation needs the leg length itself, but the parameters were
    /// built from a squared length with no exact square root.
    #[error("leg length required: parameters carry only a squared length with no exact square root")]
    LengthRequired,

    /// Text or JSON input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Wrap an error with the index of the iteration step that produced it.
    pub fn at_step(self, index: usize) -> Error {
        Error::StepFailed {
            index,
            source: Box::new(self),
        }
    }
}

use thiserror::Error;

/// Errors produced by the episodic memory pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation that needs at least one stored sequence got none.
    #[error("empty database")]
    EmptyDatabase,

    /// An operation that needs at least one event got an empty sequence.
    #[error("empty sequence")]
    EmptySequence,

    /// Minimum support must satisfy 0 < minsup <= 1.
    #[error("invalid minsup {0}: must be in (0, 1]")]
    InvalidMinsup(String),

    /// A stimulus mapped to zero candidate coalitions.
    #[error("stimulus {0:?} maps to no candidate coalitions")]
    NoCandidates(String),

    /// Events must be recorded with strictly increasing cycle numbers.
    #[error("cycle {cycle} is not greater than the last recorded cycle {last}")]
    NonMonotonicCycle { cycle: u64, last: u64 },

    /// Mining generated more candidates than the configured safety cap.
    #[error("candidate cap of {cap} exceeded during mining")]
    CandidateCapExceeded { cap: usize },

    /// Time constraints violate min <= max.
    #[error("invalid time constraints: {0}")]
    InvalidConstraints(String),

    /// A sequence, pattern, or event violated a structural invariant.
    #[error("invalid data: {0}")]
    InvalidData(String),

    /// Malformed JSON-lines input.
    #[error("parse error at line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

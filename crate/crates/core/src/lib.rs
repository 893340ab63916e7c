//! Episodic memory for a broadcast-cycle cognitive agent.
//!
//! The crate is organized around a record → consolidate → remember loop:
//!
//! * [`sequence_model`] — timestamped event sequences with coalition,
//!   emotional-valence and behavior items, plus the strict-offset
//!   containment relation and relative support that everything else is
//!   built on.
//! * [`pattern_miner`] — consolidation: extracts all frequent (optionally
//!   closed) event-sequence patterns from a trace database under time
//!   constraints, averaging emotion values across supporting occurrences.
//! * [`episodic_learner`] — remembering: matches the recent broadcast
//!   history against mined patterns and scores broadcast candidates by the
//!   strength of the strongest and weakest matching patterns.
//! * [`agent_core`] — a minimal cognitive cycle: perception stub, emotional
//!   infusion, attention with episodic override, broadcast, behavior
//!   execution and per-cycle event recording.
//! * [`scenario_sim`] — a deterministic tutoring-dialogue scenario driver
//!   used for end-to-end runs and batch benchmarking.
//!
//! All core types are immutable plain data once constructed and safe to
//! share across threads; mining and scoring are pure functions over
//! database/pattern-set snapshots.

pub mod agent_core;
pub mod demo;
pub mod episodic_learner;
mod error;
pub mod fraction;
pub mod pattern_miner;
pub mod scenario_sim;
pub mod sequence_model;

pub use error::Error;
pub use fraction::Fraction;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

//! Remembering: scoring broadcast candidates against consolidated patterns.
//!
//! The recent broadcast history is replayed against every mined pattern:
//! when some suffix of the history occurs inside a pattern and a candidate
//! coalition appears strictly after that occurrence, the pattern votes for
//! the candidate with its strength (support times the sum of its emotional
//! valences). Each candidate is scored by the strongest plus the weakest
//! matching pattern, and the highest sum wins the broadcast.

use std::collections::{BTreeSet, VecDeque};

use crate::pattern_miner::Pattern;
use crate::sequence_model::{contains, contains_relaxed, Event, EventsSequence};
use crate::{Error, Result};

pub const DEFAULT_HISTORY_CAPACITY: usize = 10;

/// The last n broadcast coalitions with their cycle numbers.
#[derive(Debug, Clone)]
pub struct BroadcastHistory {
    entries: VecDeque<(u64, String)>,
    capacity: usize,
}

impl Default for BroadcastHistory {
    fn default() -> Self {
        Self::new(DEFAULT_HISTORY_CAPACITY)
    }
}

impl BroadcastHistory {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "history capacity must be positive");
        BroadcastHistory { entries: VecDeque::with_capacity(capacity), capacity }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, &str)> {
        self.entries.iter().map(|(c, id)| (*c, id.as_str()))
    }

    /// Records a broadcast. Cycles must be strictly increasing; the oldest
    /// entry is evicted at capacity.
    pub fn push(&mut self, cycle: u64, coalition: impl Into<String>) -> Result<()> {
        if let Some(&(last, _)) = self.entries.back() {
            if cycle <= last {
                return Err(Error::NonMonotonicCycle { cycle, last });
            }
        }
        if self.entries.len() == self.capacity {
            self.entries.pop_front();
        }
        self.entries.push_back((cycle, coalition.into()));
        Ok(())
    }

    /// The last `k` broadcasts as a coalition-only events sequence with
    /// the recorded cycle timestamps.
    fn suffix(&self, k: usize) -> EventsSequence {
        let events = self
            .entries
            .iter()
            .skip(self.entries.len() - k)
            .map(|(cycle, id)| Event::at(*cycle).with_coalition(id.clone()))
            .collect();
        EventsSequence::new("history", events)
    }
}

/// Matching configuration for history-against-pattern checks.
#[derive(Debug, Clone, Copy, Default)]
pub struct LearnerConfig {
    /// Downgrade suffix matching from strict-offset containment to
    /// order-only subsequence inclusion.
    pub relaxed_match: bool,
}

/// Where a broadcast decision came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Provenance {
    /// Chosen by the episodic learner from matched patterns.
    Episodic,
    /// Fallback to the attention mechanism's most energetic coalition.
    Attention,
}

/// Per-candidate score: strongest plus weakest matching pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateScore {
    pub coalition: String,
    pub best_strength: f64,
    pub worst_strength: f64,
    pub total: f64,
    pub matched_pattern_ids: BTreeSet<String>,
}

/// Support times the sum of all emotional valences in the pattern. A
/// pattern without emotion items has strength 0.
pub fn sequence_strength(p: &Pattern) -> f64 {
    p.support.to_f64() * p.valence_sum()
}

/// True when some history suffix of length `k >= 2` occurs in the pattern
/// and an event strictly after that occurrence holds the candidate.
pub fn pattern_matches(
    history: &BroadcastHistory,
    p: &Pattern,
    candidate: &str,
    config: &LearnerConfig,
) -> bool {
    for k in 2..=history.len() {
        let suffix = history.suffix(k);
        let occurrence = if config.relaxed_match {
            contains_relaxed(&suffix, &p.sequence)
        } else {
            contains(&suffix, &p.sequence)
        };
        let Some(indices) = occurrence else { continue };
        let last = *indices.last().expect("non-empty occurrence");
        if p.sequence.events[last + 1..]
            .iter()
            .any(|e| e.coalition.as_deref() == Some(candidate))
        {
            return true;
        }
    }
    false
}

/// Scores every candidate with at least one matching pattern. Candidates
/// without matches are absent from the result. Sorted by total descending,
/// then coalition id.
pub fn score_candidates(
    history: &BroadcastHistory,
    candidates: &BTreeSet<String>,
    patterns: &[Pattern],
    config: &LearnerConfig,
) -> Vec<CandidateScore> {
    let mut scores = Vec::new();
    for candidate in candidates {
        let mut best: Option<f64> = None;
        let mut worst: Option<f64> = None;
        let mut matched = BTreeSet::new();
        for p in patterns {
            if pattern_matches(history, p, candidate, config) {
                let strength = sequence_strength(p);
                best = Some(best.map_or(strength, |b: f64| b.max(strength)));
                worst = Some(worst.map_or(strength, |w: f64| w.min(strength)));
                matched.insert(p.id.clone());
            }
        }
        if let (Some(best), Some(worst)) = (best, worst) {
            scores.push(CandidateScore {
                coalition: candidate.clone(),
                best_strength: best,
                worst_strength: worst,
                total: best + worst,
                matched_pattern_ids: matched,
            });
        }
    }
    scores.sort_by(|a, b| {
        b.total
            .partial_cmp(&a.total)
            .expect("finite totals")
            .then_with(|| a.coalition.cmp(&b.coalition))
    });
    scores
}

/// Picks the candidate with the highest total (provenance `Episodic`),
/// breaking ties toward the lexicographically smallest coalition id. An
/// empty score list falls back to the attention choice.
pub fn select(scores: &[CandidateScore], fallback: &str) -> (String, Provenance) {
    let winner = scores.iter().fold(None::<&CandidateScore>, |acc, s| match acc {
        None => Some(s),
        Some(best) => {
            if s.total > best.total || (s.total == best.total && s.coalition < best.coalition) {
                Some(s)
            } else {
                Some(best)
            }
        }
    });
    match winner {
        Some(s) => (s.coalition.clone(), Provenance::Episodic),
        None => (fallback.to_string(), Provenance::Attention),
    }
}

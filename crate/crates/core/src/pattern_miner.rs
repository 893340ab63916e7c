//! Memory consolidation: frequent closed events-sequence mining.
//!
//! Patterns grow over a canonical extension tree: every normalized pattern
//! is reachable exactly once by adding items to the last event in
//! increasing item order or appending a new event at an admissible gap.
//! Because containment requires exact timestamp offsets, an occurrence in
//! a database sequence is fully determined by its anchor (the event
//! matching the pattern head), so each candidate carries a per-sequence
//! anchor projection that extension filters cheaply.
//!
//! Closed-only mining prunes a whole subtree when some item or event is
//! present at every anchor of every supporting sequence but can no longer
//! be added canonically from the current prefix: every descendant would be
//! absorbed, at identical support, by a pattern generated on another
//! branch. Without that pruning, databases whose sequences share a long
//! run of broadcasts make exhaustive mining visit every subset of the run.
//! A final containment post-filter guarantees the closed property
//! regardless of pruning.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::sequence_model::{
    contains, Event, EventsSequence, ItemKey, SequenceDatabase, TimeConstraints,
};
use crate::{Error, Fraction, Result};

/// A mined pattern: a normalized events sequence whose emotion items carry
/// occurrence-averaged values, plus its support and supporters.
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    /// Identifier assigned in output order (`P1`, `P2`, ...).
    pub id: String,
    /// Normalized sequence (first timestamp 0), emotion values averaged
    /// over the earliest occurrence in each supporting sequence.
    pub sequence: EventsSequence,
    /// Supporting-sequence count over database size, unreduced.
    pub support: Fraction,
    pub supporting_ids: BTreeSet<String>,
}

impl Pattern {
    /// Number of events.
    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    /// Total item count; the "size" of the pattern.
    pub fn item_count(&self) -> usize {
        self.sequence.item_count()
    }

    /// Sum of all emotion values across all events.
    pub fn valence_sum(&self) -> f64 {
        self.sequence
            .events
            .iter()
            .flat_map(|e| e.emotions.values())
            .sum()
    }

    fn key_form(&self) -> Vec<(u64, Vec<ItemKey>)> {
        self.sequence
            .events
            .iter()
            .map(|e| (e.timestamp, e.item_keys()))
            .collect()
    }
}

/// The output of one mining generation.
#[derive(Debug, Clone)]
pub struct PatternSet {
    pub patterns: Vec<Pattern>,
    pub minsup: Fraction,
    pub constraints: TimeConstraints,
    pub db_size: usize,
    pub generation: u64,
}

impl PatternSet {
    pub fn empty() -> Self {
        PatternSet {
            patterns: Vec::new(),
            minsup: Fraction::one(),
            constraints: TimeConstraints::none(),
            db_size: 0,
            generation: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Pattern> {
        self.patterns.iter().find(|p| p.id == id)
    }

    /// Mean item count per pattern; 0 for an empty set.
    pub fn mean_pattern_size(&self) -> f64 {
        if self.patterns.is_empty() {
            return 0.0;
        }
        self.patterns.iter().map(|p| p.item_count() as f64).sum::<f64>() / self.patterns.len() as f64
    }
}

/// Mining parameters. `minsup` and `constraints` are required inputs; the
/// rest are knobs with conservative defaults.
#[derive(Debug, Clone)]
pub struct MineParams {
    pub minsup: Fraction,
    pub constraints: TimeConstraints,
    /// Keep only closed patterns (no superpattern with equal support).
    pub closed_only: bool,
    /// Abort with [`Error::CandidateCapExceeded`] after visiting this many
    /// frequent candidates. Mainly a guard for non-closed mining.
    pub max_candidates: Option<usize>,
    /// Optional minimum event count for output patterns, for callers that
    /// read "length" as an event count rather than a time span.
    pub min_events: Option<usize>,
    /// Generation stamp copied into the output set.
    pub generation: u64,
}

impl MineParams {
    pub fn new(minsup: Fraction) -> Self {
        MineParams {
            minsup,
            constraints: TimeConstraints::none(),
            closed_only: true,
            max_candidates: None,
            min_events: None,
            generation: 0,
        }
    }

    pub fn with_constraints(mut self, constraints: TimeConstraints) -> Self {
        self.constraints = constraints;
        self
    }

    pub fn closed(mut self, closed_only: bool) -> Self {
        self.closed_only = closed_only;
        self
    }

    pub fn capped(mut self, max_candidates: usize) -> Self {
        self.max_candidates = Some(max_candidates);
        self
    }
}

/// True when a normalized sequence satisfies the span and adjacent-gap
/// windows. Single-event sequences have span 0 and no gaps.
pub fn satisfies_constraints(p: &EventsSequence, c: &TimeConstraints) -> bool {
    let span = p.span();
    if span < c.min_span {
        return false;
    }
    if let Some(max_span) = c.max_span {
        if span > max_span {
            return false;
        }
    }
    p.events.windows(2).all(|pair| {
        let gap = pair[1].timestamp - pair[0].timestamp;
        gap >= c.min_gap && c.max_gap.map_or(true, |mg| gap <= mg)
    })
}

/// Replaces each emotion value in the skeleton by the mean of the values
/// at the matched event of each supporting occurrence. Coalition and
/// behavior items pass through unchanged.
///
/// Each occurrence is the list of matched events, aligned index-for-index
/// with the skeleton (the earliest occurrence in one supporting sequence).
pub fn average_valences(skeleton: &EventsSequence, occurrences: &[Vec<&Event>]) -> EventsSequence {
    let mut out = skeleton.clone();
    for (idx, event) in out.events.iter_mut().enumerate() {
        for (kind, value) in event.emotions.iter_mut() {
            let mut sum = 0.0;
            let mut count = 0usize;
            for occurrence in occurrences {
                if let Some(v) = occurrence.get(idx).and_then(|e| e.emotions.get(kind)) {
                    sum += *v;
                    count += 1;
                }
            }
            if count > 0 {
                *value = sum / count as f64;
            }
        }
    }
    out
}

/// Removes every pattern contained in another pattern of the same list
/// with equal support. The survivors are the closed set.
pub fn close_filter(patterns: &[Pattern]) -> Vec<Pattern> {
    let keys: Vec<_> = patterns.iter().map(Pattern::key_form).collect();
    patterns
        .iter()
        .enumerate()
        .filter(|(i, p)| {
            !patterns.iter().enumerate().any(|(j, q)| {
                *i != j
                    && p.support == q.support
                    && keys[*i] != keys[j]
                    && contains(&p.sequence, &q.sequence).is_some()
            })
        })
        .map(|(_, p)| p.clone())
        .collect()
}

/// Mines all frequent (closed, when flagged) patterns from `db`.
///
/// Pattern supports are exact fractions over the database size; emotion
/// values in output patterns are averaged over the earliest occurrence in
/// each supporting sequence. Output ordering is deterministic: support
/// descending, size descending, then canonical form.
pub fn mine(db: &SequenceDatabase, params: &MineParams) -> Result<PatternSet> {
    if db.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    if params.minsup.num == 0 || params.minsup > Fraction::one() {
        return Err(Error::InvalidMinsup(params.minsup.to_string()));
    }
    params.constraints.validate()?;

    let mut miner = Miner::prepare(db, params);
    miner.run()?;
    let mut patterns = miner.into_patterns();

    if params.closed_only {
        patterns = close_filter(&patterns);
    }

    patterns.sort_by(|a, b| {
        b.support
            .cmp(&a.support)
            .then_with(|| b.item_count().cmp(&a.item_count()))
            .then_with(|| b.len().cmp(&a.len()))
            .then_with(|| a.key_form().cmp(&b.key_form()))
    });
    for (idx, p) in patterns.iter_mut().enumerate() {
        p.id = format!("P{}", idx + 1);
    }

    Ok(PatternSet {
        patterns,
        minsup: params.minsup,
        constraints: params.constraints,
        db_size: db.len(),
        generation: params.generation,
    })
}

// ---------------------------------------------------------------------------
// Internal mining machinery.

/// Item vocabulary interned to dense ids; id order equals `ItemKey` order,
/// which is the canonical item order of the extension tree.
struct Interner {
    keys: Vec<ItemKey>,
}

impl Interner {
    fn build(db: &SequenceDatabase) -> Self {
        let mut set: BTreeSet<ItemKey> = BTreeSet::new();
        for seq in db.sequences() {
            for event in &seq.events {
                set.extend(event.item_keys());
            }
        }
        Interner { keys: set.into_iter().collect() }
    }

    fn id_of(&self, key: &ItemKey) -> u32 {
        self.keys.binary_search(key).expect("interned key") as u32
    }

    fn key_of(&self, id: u32) -> &ItemKey {
        &self.keys[id as usize]
    }
}

struct PreparedSeq {
    timestamps: Vec<u64>,
    itemsets: Vec<Vec<u32>>,
    by_time: HashMap<u64, usize>,
}

impl PreparedSeq {
    fn event_index_at(&self, t: u64) -> Option<usize> {
        self.by_time.get(&t).copied()
    }
}

/// A pattern under construction: strictly increasing offsets from the
/// anchor, each with a sorted itemset.
#[derive(Clone)]
struct Proto {
    offsets: Vec<u64>,
    itemsets: Vec<Vec<u32>>,
}

impl Proto {
    fn span(&self) -> u64 {
        *self.offsets.last().expect("non-empty proto")
    }

    fn last_max_item(&self) -> u32 {
        *self
            .itemsets
            .last()
            .and_then(|s| s.last())
            .expect("non-empty itemsets")
    }
}

/// Anchors (event indices of the pattern head) per supporting sequence.
type Projection = Vec<(usize, Vec<usize>)>;

/// A candidate one-step extension of a proto.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Ext {
    /// Add an item to the last event (canonical: id greater than all
    /// items already there).
    Item(u32),
    /// Append a new single-item event `gap` cycles after the last event.
    Event(u64, u32),
}

struct Miner<'a> {
    db: &'a SequenceDatabase,
    params: &'a MineParams,
    interner: Interner,
    seqs: Vec<PreparedSeq>,
    min_count: usize,
    visited: usize,
    /// Accepted output: proto plus its projection at acceptance time.
    accepted: Vec<(Proto, Projection)>,
}

impl<'a> Miner<'a> {
    fn prepare(db: &'a SequenceDatabase, params: &'a MineParams) -> Self {
        let interner = Interner::build(db);
        let seqs = db
            .sequences()
            .iter()
            .map(|seq| {
                let timestamps: Vec<u64> = seq.events.iter().map(|e| e.timestamp).collect();
                let itemsets = seq
                    .events
                    .iter()
                    .map(|e| {
                        let mut ids: Vec<u32> =
                            e.item_keys().iter().map(|k| interner.id_of(k)).collect();
                        ids.sort_unstable();
                        ids
                    })
                    .collect();
                let by_time = timestamps.iter().enumerate().map(|(i, t)| (*t, i)).collect();
                PreparedSeq { timestamps, itemsets, by_time }
            })
            .collect();

        let total = db.len() as u128;
        let num = params.minsup.num as u128;
        let den = params.minsup.den as u128;
        let min_count = ((num * total + den - 1) / den) as usize;

        Miner {
            db,
            params,
            interner,
            seqs,
            min_count: min_count.max(1),
            visited: 0,
            accepted: Vec::new(),
        }
    }

    fn run(&mut self) -> Result<()> {
        // Seed: frequent single-item, single-event patterns.
        let mut seeds: BTreeMap<u32, Projection> = BTreeMap::new();
        for (seq_idx, seq) in self.seqs.iter().enumerate() {
            for (event_idx, itemset) in seq.itemsets.iter().enumerate() {
                for &item in itemset {
                    push_anchor(seeds.entry(item).or_default(), seq_idx, event_idx);
                }
            }
        }
        for (item, projection) in seeds {
            if projection.len() >= self.min_count {
                let proto = Proto { offsets: vec![0], itemsets: vec![vec![item]] };
                self.explore(proto, projection)?;
            }
        }
        Ok(())
    }

    fn explore(&mut self, proto: Proto, projection: Projection) -> Result<()> {
        self.visited += 1;
        if let Some(cap) = self.params.max_candidates {
            if self.visited > cap {
                return Err(Error::CandidateCapExceeded { cap });
            }
        }

        if self.params.closed_only && self.backward_witness_exists(&proto, &projection) {
            // Some item or event is present at every anchor but cannot be
            // added canonically from here: every descendant is absorbed,
            // at equal support, by a pattern on another branch.
            return Ok(());
        }

        let extensions = self.enumerate_extensions(&proto, &projection);

        let same_support_ext = extensions.values().any(|prj| prj.len() == projection.len());
        let span_ok = proto.span() >= self.params.constraints.min_span;
        let events_ok = self
            .params
            .min_events
            .map_or(true, |m| proto.offsets.len() >= m);
        let output_ok = span_ok && events_ok && !(self.params.closed_only && same_support_ext);
        if output_ok {
            self.accepted.push((proto.clone(), projection));
        }

        for (ext, child_projection) in extensions {
            if child_projection.len() < self.min_count {
                continue;
            }
            let mut child = proto.clone();
            match ext {
                Ext::Item(item) => child.itemsets.last_mut().expect("non-empty").push(item),
                Ext::Event(gap, item) => {
                    child.offsets.push(child.span() + gap);
                    child.itemsets.push(vec![item]);
                }
            }
            self.explore(child, child_projection)?;
        }
        Ok(())
    }

    /// Enumerates every admissible one-step extension together with the
    /// anchors that survive it, by scanning actual events in supporting
    /// sequences (offsets that occur nowhere cannot be frequent).
    fn enumerate_extensions(&self, proto: &Proto, projection: &Projection) -> BTreeMap<Ext, Projection> {
        let mut exts: BTreeMap<Ext, Projection> = BTreeMap::new();
        let span = proto.span();
        let max_item = proto.last_max_item();
        let c = &self.params.constraints;

        for &(seq_idx, ref anchors) in projection {
            let seq = &self.seqs[seq_idx];
            for &anchor in anchors {
                let t_anchor = seq.timestamps[anchor];
                let t_last = t_anchor + span;
                let last_idx = seq.event_index_at(t_last).expect("projection invariant");

                for &item in &seq.itemsets[last_idx] {
                    if item > max_item {
                        push_anchor(exts.entry(Ext::Item(item)).or_default(), seq_idx, anchor);
                    }
                }

                let lo = t_last + c.min_gap;
                let hi_gap = c.max_gap.map(|g| t_last + g);
                let hi_span = c.max_span.map(|ms| t_anchor + ms);
                let hi = match (hi_gap, hi_span) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (Some(a), None) => Some(a),
                    (None, Some(b)) => Some(b),
                    (None, None) => None,
                };
                let start = seq.timestamps.partition_point(|&t| t < lo);
                for idx in start..seq.timestamps.len() {
                    let t = seq.timestamps[idx];
                    if hi.map_or(false, |h| t > h) {
                        break;
                    }
                    let gap = t - t_last;
                    for &item in &seq.itemsets[idx] {
                        push_anchor(exts.entry(Ext::Event(gap, item)).or_default(), seq_idx, anchor);
                    }
                }
            }
        }
        exts
    }

    /// Closure pruning test: is there an `(offset, item)` augmentation,
    /// not canonically addable from this proto, that holds at every anchor
    /// of every supporting sequence and keeps any descendant inside the
    /// constraint language?
    fn backward_witness_exists(&self, proto: &Proto, projection: &Projection) -> bool {
        let c = &self.params.constraints;
        let span = proto.span();
        let mut candidates: Option<HashSet<(i64, u32)>> = None;

        for &(seq_idx, ref anchors) in projection {
            let seq = &self.seqs[seq_idx];
            for &anchor in anchors {
                let t_anchor = seq.timestamps[anchor];
                let found = self.anchor_witnesses(proto, seq, t_anchor, span, c);
                match candidates.as_mut() {
                    None => candidates = Some(found),
                    Some(set) => set.retain(|w| found.contains(w)),
                }
                if candidates.as_ref().map_or(false, HashSet::is_empty) {
                    return false;
                }
            }
        }
        candidates.map_or(false, |set| !set.is_empty())
    }

    /// Witness candidates visible from a single anchor.
    fn anchor_witnesses(
        &self,
        proto: &Proto,
        seq: &PreparedSeq,
        t_anchor: u64,
        span: u64,
        c: &TimeConstraints,
    ) -> HashSet<(i64, u32)> {
        let mut found = HashSet::new();

        // Events strictly before the anchor: prepend witnesses. Prepending
        // grows the span of every descendant, so this is only decidable
        // when the span is unbounded; the gap to the current head must fit
        // the gap window.
        if c.max_span.is_none() {
            if let Some(hi) = t_anchor.checked_sub(c.min_gap) {
                let lo = c.max_gap.and_then(|g| t_anchor.checked_sub(g)).unwrap_or(0);
                let start = seq.timestamps.partition_point(|&t| t < lo);
                for idx in start..seq.timestamps.len() {
                    let t = seq.timestamps[idx];
                    if t > hi {
                        break;
                    }
                    let d = t as i64 - t_anchor as i64;
                    for &item in &seq.itemsets[idx] {
                        found.insert((d, item));
                    }
                }
            }
        }

        // Events between the anchor and the pattern tail: items missing
        // from an existing event, or whole events at an interior offset
        // whose insertion respects the minimum gap on both sides.
        let t_tail = t_anchor + span;
        let start = seq.timestamps.partition_point(|&t| t < t_anchor);
        for idx in start..seq.timestamps.len() {
            let t = seq.timestamps[idx];
            if t > t_tail {
                break;
            }
            let d = t - t_anchor;
            match proto.offsets.binary_search(&d) {
                Ok(pos) => {
                    let existing = &proto.itemsets[pos];
                    let is_tail = pos + 1 == proto.offsets.len();
                    let tail_max = proto.last_max_item();
                    for &item in &seq.itemsets[idx] {
                        if existing.binary_search(&item).is_err()
                            && (!is_tail || item < tail_max)
                        {
                            found.insert((d as i64, item));
                        }
                    }
                }
                Err(pos) => {
                    // Interior offset between offsets[pos-1] and offsets[pos].
                    debug_assert!(pos > 0 && pos < proto.offsets.len());
                    let before = proto.offsets[pos - 1];
                    let after = proto.offsets[pos];
                    if d - before >= c.min_gap && after - d >= c.min_gap {
                        for &item in &seq.itemsets[idx] {
                            found.insert((d as i64, item));
                        }
                    }
                }
            }
        }
        found
    }

    /// Materializes accepted protos into [`Pattern`]s with averaged
    /// emotion values.
    fn into_patterns(self) -> Vec<Pattern> {
        let mut patterns = Vec::with_capacity(self.accepted.len());
        let total = self.db.len() as u64;
        for (proto, projection) in &self.accepted {
            let mut events = Vec::with_capacity(proto.offsets.len());
            for (offset, itemset) in proto.offsets.iter().zip(&proto.itemsets) {
                let mut event = Event::at(*offset);
                for &id in itemset {
                    match self.interner.key_of(id) {
                        ItemKey::Coalition(c) => event.coalition = Some(c.clone()),
                        ItemKey::Emotion(kind) => {
                            event.emotions.insert(*kind, 0.0);
                        }
                        ItemKey::Behavior(b) => event.behavior = Some(b.clone()),
                    }
                }
                events.push(event);
            }
            let skeleton = EventsSequence::new(String::new(), events);

            // Earliest occurrence per supporting sequence, aligned with the
            // skeleton events.
            let mut occurrences: Vec<Vec<&Event>> = Vec::with_capacity(projection.len());
            let mut supporting_ids = BTreeSet::new();
            for &(seq_idx, ref anchors) in projection {
                let seq = &self.db.sequences()[seq_idx];
                supporting_ids.insert(seq.id.clone());
                let prepared = &self.seqs[seq_idx];
                let t_anchor = prepared.timestamps[anchors[0]];
                let matched = proto
                    .offsets
                    .iter()
                    .map(|off| {
                        let idx = prepared
                            .event_index_at(t_anchor + off)
                            .expect("projection invariant");
                        &seq.events[idx]
                    })
                    .collect();
                occurrences.push(matched);
            }

            let sequence = average_valences(&skeleton, &occurrences);
            patterns.push(Pattern {
                id: String::new(),
                sequence,
                support: Fraction::new(projection.len() as u64, total),
                supporting_ids,
            });
        }
        patterns
    }
}

fn push_anchor(projection: &mut Projection, seq_idx: usize, anchor: usize) {
    match projection.last_mut() {
        Some((idx, anchors)) if *idx == seq_idx => anchors.push(anchor),
        _ => projection.push((seq_idx, vec![anchor])),
    }
}

// ---------------------------------------------------------------------------
// JSON-lines pattern export/import.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PatternLine {
    seq: Vec<Event>,
    support: Fraction,
    supporting: Vec<String>,
}

/// Writes patterns as JSON-lines.
pub fn write_patterns<W: Write>(mut out: W, patterns: &[Pattern]) -> Result<()> {
    for p in patterns {
        let line = PatternLine {
            seq: p.sequence.events.clone(),
            support: p.support,
            supporting: p.supporting_ids.iter().cloned().collect(),
        };
        serde_json::to_writer(&mut out, &line).map_err(|e| Error::InvalidData(e.to_string()))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads JSON-lines patterns, assigning `P1..` ids in file order.
pub fn read_patterns<R: BufRead>(input: R) -> Result<Vec<Pattern>> {
    let mut patterns = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: PatternLine =
            serde_json::from_str(&line).map_err(|source| Error::Parse { line: idx + 1, source })?;
        let sequence = EventsSequence::new(String::new(), parsed.seq);
        sequence.validate()?;
        if sequence.is_empty() {
            return Err(Error::EmptySequence);
        }
        patterns.push(Pattern {
            id: format!("P{}", idx + 1),
            sequence,
            support: parsed.support,
            supporting_ids: parsed.supporting.into_iter().collect(),
        });
    }
    Ok(patterns)
}

//! Event sequences, strict-offset containment, and relative support.
//!
//! An [`Event`] is one cognitive cycle: the broadcast coalition, up to four
//! signed emotional valences, and optionally the behavior executed that
//! cycle. An [`EventsSequence`] is the timestamped trace of one execution.
//! Containment between sequences requires per-event item inclusion *and*
//! exact preservation of timestamp offsets relative to the first matched
//! event, which is what makes mined patterns replayable against a live
//! broadcast history.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Fraction, Result};

/// The four emotional valence kinds carried by broadcasts.
///
/// Stable codes 1..4 map to the wire labels `e1`..`e4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EmotionKind {
    HighThreat,
    MediumFear,
    LowThreat,
    Compassion,
}

impl EmotionKind {
    pub const ALL: [EmotionKind; 4] = [
        EmotionKind::HighThreat,
        EmotionKind::MediumFear,
        EmotionKind::LowThreat,
        EmotionKind::Compassion,
    ];

    pub fn code(self) -> u8 {
        match self {
            EmotionKind::HighThreat => 1,
            EmotionKind::MediumFear => 2,
            EmotionKind::LowThreat => 3,
            EmotionKind::Compassion => 4,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            1 => Some(EmotionKind::HighThreat),
            2 => Some(EmotionKind::MediumFear),
            3 => Some(EmotionKind::LowThreat),
            4 => Some(EmotionKind::Compassion),
            _ => None,
        }
    }

    /// Wire label, `e1`..`e4`.
    pub fn label(self) -> &'static str {
        match self {
            EmotionKind::HighThreat => "e1",
            EmotionKind::MediumFear => "e2",
            EmotionKind::LowThreat => "e3",
            EmotionKind::Compassion => "e4",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        match label {
            "e1" => Some(EmotionKind::HighThreat),
            "e2" => Some(EmotionKind::MediumFear),
            "e3" => Some(EmotionKind::LowThreat),
            "e4" => Some(EmotionKind::Compassion),
            _ => None,
        }
    }
}

impl fmt::Display for EmotionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for EmotionKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for EmotionKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let label = String::deserialize(deserializer)?;
        EmotionKind::from_label(&label)
            .ok_or_else(|| D::Error::custom(format!("unknown emotion key {label:?}, expected e1..e4")))
    }
}

/// One item of an event: the broadcast coalition, an emotional valence, or
/// an executed behavior.
#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Coalition(String),
    Emotion { kind: EmotionKind, value: f64 },
    Behavior(String),
}

/// Value-blind identity of an item, used for matching and mining. Emotion
/// items compare by kind only; their numeric value is a payload that gets
/// averaged at pattern extraction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ItemKey {
    Coalition(String),
    Emotion(EmotionKind),
    Behavior(String),
}

impl Item {
    pub fn key(&self) -> ItemKey {
        match self {
            Item::Coalition(id) => ItemKey::Coalition(id.clone()),
            Item::Emotion { kind, .. } => ItemKey::Emotion(*kind),
            Item::Behavior(id) => ItemKey::Behavior(id.clone()),
        }
    }
}

impl fmt::Display for ItemKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ItemKey::Coalition(id) | ItemKey::Behavior(id) => f.write_str(id),
            ItemKey::Emotion(kind) => f.write_str(kind.label()),
        }
    }
}

/// Items match by identity, except emotions, which match on kind alone.
pub fn item_matches(a: &Item, b: &Item) -> bool {
    match (a, b) {
        (Item::Coalition(x), Item::Coalition(y)) => x == y,
        (Item::Behavior(x), Item::Behavior(y)) => x == y,
        (Item::Emotion { kind: ka, .. }, Item::Emotion { kind: kb, .. }) => ka == kb,
        _ => false,
    }
}

/// One cognitive cycle: a timestamp plus the items observed that cycle.
///
/// The representation enforces the per-event cardinality rules directly:
/// at most one coalition, at most one value per emotion kind, at most one
/// behavior. Emptiness is checked by [`Event::validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Event {
    #[serde(rename = "t")]
    pub timestamp: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coalition: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub emotions: BTreeMap<EmotionKind, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub behavior: Option<String>,
}

impl Event {
    pub fn at(timestamp: u64) -> Self {
        Event { timestamp, coalition: None, emotions: BTreeMap::new(), behavior: None }
    }

    pub fn with_coalition(mut self, id: impl Into<String>) -> Self {
        self.coalition = Some(id.into());
        self
    }

    pub fn with_emotion(mut self, kind: EmotionKind, value: f64) -> Self {
        self.emotions.insert(kind, value);
        self
    }

    pub fn with_behavior(mut self, id: impl Into<String>) -> Self {
        self.behavior = Some(id.into());
        self
    }

    pub fn is_empty(&self) -> bool {
        self.coalition.is_none() && self.emotions.is_empty() && self.behavior.is_none()
    }

    pub fn items(&self) -> Vec<Item> {
        let mut items = Vec::new();
        if let Some(id) = &self.coalition {
            items.push(Item::Coalition(id.clone()));
        }
        for (kind, value) in &self.emotions {
            items.push(Item::Emotion { kind: *kind, value: *value });
        }
        if let Some(id) = &self.behavior {
            items.push(Item::Behavior(id.clone()));
        }
        items
    }

    pub fn item_keys(&self) -> Vec<ItemKey> {
        self.items().iter().map(Item::key).collect()
    }

    pub fn item_count(&self) -> usize {
        self.coalition.iter().count() + self.emotions.len() + self.behavior.iter().count()
    }

    pub fn contains_key(&self, key: &ItemKey) -> bool {
        match key {
            ItemKey::Coalition(id) => self.coalition.as_deref() == Some(id.as_str()),
            ItemKey::Emotion(kind) => self.emotions.contains_key(kind),
            ItemKey::Behavior(id) => self.behavior.as_deref() == Some(id.as_str()),
        }
    }

    /// True when every item of `self` matches an item of `other`
    /// (value-blind for emotions).
    pub fn is_subset_of(&self, other: &Event) -> bool {
        if let Some(id) = &self.coalition {
            if other.coalition.as_deref() != Some(id.as_str()) {
                return false;
            }
        }
        if let Some(id) = &self.behavior {
            if other.behavior.as_deref() != Some(id.as_str()) {
                return false;
            }
        }
        self.emotions.keys().all(|k| other.emotions.contains_key(k))
    }

    pub fn validate(&self) -> Result<()> {
        if self.is_empty() {
            return Err(Error::InvalidData(format!(
                "event at t={} has no items",
                self.timestamp
            )));
        }
        for (kind, value) in &self.emotions {
            if !(-1.0..=1.0).contains(value) || !value.is_finite() {
                return Err(Error::InvalidData(format!(
                    "emotion {} value {} outside [-1, 1] at t={}",
                    kind, value, self.timestamp
                )));
            }
        }
        Ok(())
    }
}

/// The timestamped trace of one agent execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventsSequence {
    pub id: String,
    pub events: Vec<Event>,
}

impl EventsSequence {
    pub fn new(id: impl Into<String>, events: Vec<Event>) -> Self {
        EventsSequence { id: id.into(), events }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Total item count across all events.
    pub fn item_count(&self) -> usize {
        self.events.iter().map(Event::item_count).sum()
    }

    /// Last timestamp minus first; 0 for single-event sequences.
    pub fn span(&self) -> u64 {
        match (self.events.first(), self.events.last()) {
            (Some(first), Some(last)) => last.timestamp - first.timestamp,
            _ => 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut last: Option<u64> = None;
        for event in &self.events {
            event.validate()?;
            if let Some(prev) = last {
                if event.timestamp <= prev {
                    return Err(Error::InvalidData(format!(
                        "sequence {}: timestamps not strictly increasing ({} after {})",
                        self.id, event.timestamp, prev
                    )));
                }
            }
            last = Some(event.timestamp);
        }
        Ok(())
    }

    /// Index of the event at `timestamp`, if any. Events are ordered, so
    /// this is a binary search.
    pub fn event_at(&self, timestamp: u64) -> Option<&Event> {
        self.events
            .binary_search_by_key(&timestamp, |e| e.timestamp)
            .ok()
            .map(|i| &self.events[i])
    }
}

/// Outcome of a containment check: the 0-based indices of the earliest
/// occurrence when one exists.
pub type ContainmentResult = Option<Vec<usize>>;

/// Strict-offset containment: `sa` is contained in `sb` when there are
/// strictly increasing indices matching every event of `sa` to a superset
/// event of `sb` with timestamp offsets from the first matched event equal
/// to `sa`'s internal offsets.
///
/// Returns the lexicographically earliest index list (the one with the
/// smallest anchor; with exact offsets the anchor determines the rest).
pub fn contains(sa: &EventsSequence, sb: &EventsSequence) -> ContainmentResult {
    let first = sa.events.first()?;
    let base = first.timestamp;
    'anchors: for (k1, b_first) in sb.events.iter().enumerate() {
        if !first.is_subset_of(b_first) {
            continue;
        }
        let mut indices = Vec::with_capacity(sa.events.len());
        indices.push(k1);
        let anchor = b_first.timestamp;
        for a_event in &sa.events[1..] {
            let offset = a_event.timestamp - base;
            let target = match anchor.checked_add(offset) {
                Some(t) => t,
                None => continue 'anchors,
            };
            match sb.events.binary_search_by_key(&target, |e| e.timestamp) {
                Ok(idx) if a_event.is_subset_of(&sb.events[idx]) => indices.push(idx),
                _ => continue 'anchors,
            }
        }
        return Some(indices);
    }
    None
}

/// Order-only subsequence containment: item inclusion per event with
/// strictly increasing indices, ignoring timestamp offsets.
pub fn contains_relaxed(sa: &EventsSequence, sb: &EventsSequence) -> ContainmentResult {
    if sa.events.is_empty() {
        return None;
    }
    let mut indices = Vec::with_capacity(sa.events.len());
    let mut from = 0usize;
    for a_event in &sa.events {
        let found = sb.events[from..]
            .iter()
            .position(|b_event| a_event.is_subset_of(b_event))?;
        indices.push(from + found);
        from += found + 1;
    }
    Some(indices)
}

/// Relative support of `sa` in `db`: the fraction of database sequences
/// that contain it. Occurrence multiplicity within one sequence never
/// inflates the count.
pub fn support(sa: &EventsSequence, db: &SequenceDatabase) -> Result<Fraction> {
    if db.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    let count = db
        .sequences()
        .iter()
        .filter(|sb| contains(sa, sb).is_some())
        .count() as u64;
    Ok(Fraction::new(count, db.len() as u64))
}

/// Shifts timestamps so the first event sits at 0, preserving offsets.
pub fn normalize(sa: &EventsSequence) -> Result<EventsSequence> {
    let first = sa.events.first().ok_or(Error::EmptySequence)?;
    let base = first.timestamp;
    let events = sa
        .events
        .iter()
        .map(|e| {
            let mut shifted = e.clone();
            shifted.timestamp -= base;
            shifted
        })
        .collect();
    Ok(EventsSequence::new(sa.id.clone(), events))
}

/// Append-only collection of recorded sequences. Appends never mutate
/// previously returned snapshots (snapshots are plain clones).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SequenceDatabase {
    sequences: Vec<EventsSequence>,
    next_sequence_id: u64,
}

impl SequenceDatabase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_sequences(sequences: Vec<EventsSequence>) -> Result<Self> {
        let mut db = Self::new();
        for seq in sequences {
            db.append(seq)?;
        }
        Ok(db)
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn sequences(&self) -> &[EventsSequence] {
        &self.sequences
    }

    pub fn get(&self, id: &str) -> Option<&EventsSequence> {
        self.sequences.iter().find(|s| s.id == id)
    }

    /// Next unused auto-generated sequence ID, `S1`, `S2`, ...
    pub fn fresh_id(&mut self) -> String {
        loop {
            self.next_sequence_id += 1;
            let id = format!("S{}", self.next_sequence_id);
            if self.get(&id).is_none() {
                return id;
            }
        }
    }

    pub fn append(&mut self, sequence: EventsSequence) -> Result<()> {
        sequence.validate()?;
        if sequence.is_empty() {
            return Err(Error::EmptySequence);
        }
        if self.get(&sequence.id).is_some() {
            return Err(Error::InvalidData(format!(
                "duplicate sequence id {:?}",
                sequence.id
            )));
        }
        self.sequences.push(sequence);
        Ok(())
    }
}

/// Time-window requirements a mined pattern must satisfy: span between the
/// head and tail events, and gap between adjacent events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeConstraints {
    /// Minimum span (last timestamp minus first). Default 0.
    pub min_span: u64,
    /// Maximum span; `None` means unbounded.
    pub max_span: Option<u64>,
    /// Minimum gap between adjacent events. Default 1 (distinct cycles).
    pub min_gap: u64,
    /// Maximum gap between adjacent events; `None` means unbounded.
    pub max_gap: Option<u64>,
}

impl Default for TimeConstraints {
    fn default() -> Self {
        TimeConstraints { min_span: 0, max_span: None, min_gap: 1, max_gap: None }
    }
}

impl TimeConstraints {
    /// No constraints at all (beyond the structural gap of 1 cycle).
    pub fn none() -> Self {
        Self::default()
    }

    /// Span within `[min_span, max_span]`, adjacent gaps at most `max_gap`.
    pub fn new(min_span: u64, max_span: Option<u64>, min_gap: u64, max_gap: Option<u64>) -> Result<Self> {
        let c = TimeConstraints { min_span, max_span, min_gap, max_gap };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_gap == 0 {
            return Err(Error::InvalidConstraints("min_gap must be at least 1".into()));
        }
        if let Some(max_span) = self.max_span {
            if self.min_span > max_span {
                return Err(Error::InvalidConstraints(format!(
                    "min_span {} > max_span {}",
                    self.min_span, max_span
                )));
            }
        }
        if let Some(max_gap) = self.max_gap {
            if self.min_gap > max_gap {
                return Err(Error::InvalidConstraints(format!(
                    "min_gap {} > max_gap {}",
                    self.min_gap, max_gap
                )));
            }
        }
        Ok(())
    }
}

/// Writes sequences as JSON-lines, one per line.
pub fn write_sequences<W: Write>(mut out: W, sequences: &[EventsSequence]) -> Result<()> {
    for seq in sequences {
        serde_json::to_writer(&mut out, seq).map_err(|e| Error::InvalidData(e.to_string()))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads and validates JSON-lines sequences. Unknown fields and emotion
/// keys outside e1..e4 are rejected.
pub fn read_sequences<R: BufRead>(input: R) -> Result<Vec<EventsSequence>> {
    let mut sequences = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let seq: EventsSequence =
            serde_json::from_str(&line).map_err(|source| Error::Parse { line: idx + 1, source })?;
        seq.validate()?;
        sequences.push(seq);
    }
    Ok(sequences)
}

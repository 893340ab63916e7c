//! Shared test kit: a brute-force mining oracle and random databases.
//!
//! The oracle enumerates every subsequence of every database sequence
//! directly — no candidate tree, no projections, no pruning — so it shares
//! nothing with the miner's search path. Supports come from
//! `sequence_model::support`, constraint and closure filtering are
//! reimplemented inline.

// Not every test binary uses every helper.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use epmem_core::sequence_model::{
    contains, support, EmotionKind, Event, EventsSequence, ItemKey, SequenceDatabase,
    TimeConstraints,
};
use epmem_core::Fraction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Canonical, value-blind form of a normalized pattern.
pub type Shape = Vec<(u64, Vec<ItemKey>)>;

pub fn shape_of(seq: &EventsSequence) -> Shape {
    let base = seq.events.first().map_or(0, |e| e.timestamp);
    seq.events
        .iter()
        .map(|e| {
            let mut keys = e.item_keys();
            keys.sort();
            (e.timestamp - base, keys)
        })
        .collect()
}

fn sequence_from_shape(shape: &Shape) -> EventsSequence {
    let events = shape
        .iter()
        .map(|(t, keys)| {
            let mut event = Event::at(*t);
            for key in keys {
                match key {
                    ItemKey::Coalition(id) => event.coalition = Some(id.clone()),
                    ItemKey::Emotion(kind) => {
                        event.emotions.insert(*kind, 0.0);
                    }
                    ItemKey::Behavior(id) => event.behavior = Some(id.clone()),
                }
            }
            event
        })
        .collect();
    EventsSequence::new("oracle", events)
}

fn shape_meets_constraints(shape: &Shape, c: &TimeConstraints, min_events: Option<usize>) -> bool {
    if let Some(m) = min_events {
        if shape.len() < m {
            return false;
        }
    }
    let span = shape.last().map_or(0, |(t, _)| *t);
    if span < c.min_span || c.max_span.is_some_and(|ms| span > ms) {
        return false;
    }
    shape.windows(2).all(|w| {
        let gap = w[1].0 - w[0].0;
        gap >= c.min_gap && c.max_gap.map_or(true, |mg| gap <= mg)
    })
}

/// Every normalized subsequence shape of one sequence: all non-empty
/// subsets of events crossed with all non-empty subsets of each chosen
/// event's items.
fn subsequence_shapes(seq: &EventsSequence) -> BTreeSet<Shape> {
    let mut shapes = BTreeSet::new();
    let n = seq.events.len();
    assert!(n <= 16, "oracle enumeration is exponential in events");
    for event_mask in 1u32..(1 << n) {
        let chosen: Vec<usize> = (0..n).filter(|i| event_mask & (1 << i) != 0).collect();
        let base = seq.events[chosen[0]].timestamp;
        // Item subsets per chosen event, then the cross product.
        let mut partial: Vec<Shape> = vec![Vec::new()];
        for &idx in &chosen {
            let mut keys = seq.events[idx].item_keys();
            keys.sort();
            let offset = seq.events[idx].timestamp - base;
            let mut next = Vec::new();
            for item_mask in 1u32..(1 << keys.len()) {
                let subset: Vec<ItemKey> = (0..keys.len())
                    .filter(|i| item_mask & (1 << i) != 0)
                    .map(|i| keys[i].clone())
                    .collect();
                for prefix in &partial {
                    let mut shape = prefix.clone();
                    shape.push((offset, subset.clone()));
                    next.push(shape);
                }
            }
            partial = next;
        }
        shapes.extend(partial);
    }
    shapes
}

/// Brute-force reference mining: enumerate, dedup, support via
/// `support()`, filter by minsup and constraints, then (optionally) keep
/// only shapes not contained in another kept shape at equal support.
pub fn oracle_mine(
    db: &SequenceDatabase,
    minsup: Fraction,
    constraints: &TimeConstraints,
    min_events: Option<usize>,
    closed_only: bool,
) -> BTreeMap<Shape, Fraction> {
    let mut shapes: BTreeSet<Shape> = BTreeSet::new();
    for seq in db.sequences() {
        shapes.extend(subsequence_shapes(seq));
    }
    let mut frequent: Vec<(Shape, Fraction, EventsSequence)> = Vec::new();
    for shape in shapes {
        if !shape_meets_constraints(&shape, constraints, min_events) {
            continue;
        }
        let seq = sequence_from_shape(&shape);
        let sup = support(&seq, db).expect("non-empty database");
        if sup >= minsup {
            frequent.push((shape, sup, seq));
        }
    }
    let kept: Vec<&(Shape, Fraction, EventsSequence)> = if closed_only {
        frequent
            .iter()
            .filter(|(shape, sup, seq)| {
                !frequent.iter().any(|(other_shape, other_sup, other_seq)| {
                    other_shape != shape
                        && other_sup == sup
                        && contains(seq, other_seq).is_some()
                })
            })
            .collect()
    } else {
        frequent.iter().collect()
    };
    kept.into_iter()
        .map(|(shape, sup, _)| (shape.clone(), *sup))
        .collect()
}

/// A small random database: at most `max_seqs` sequences of at most
/// `max_events` events over an alphabet of five item keys (three
/// coalitions, one emotion kind, one behavior).
pub fn random_database(rng: &mut ChaCha8Rng, max_seqs: usize, max_events: usize) -> SequenceDatabase {
    let coalitions = ["a", "b", "c"];
    let n_seqs = rng.gen_range(2..=max_seqs.max(2));
    let mut db = SequenceDatabase::new();
    for i in 0..n_seqs {
        let n_events = rng.gen_range(1..=max_events.max(1));
        let mut t = rng.gen_range(0..3u64);
        let mut events = Vec::new();
        for _ in 0..n_events {
            let mut event = Event::at(t);
            if rng.gen_bool(0.8) {
                event.coalition = Some(coalitions[rng.gen_range(0..coalitions.len())].to_string());
            }
            if rng.gen_bool(0.35) {
                event
                    .emotions
                    .insert(EmotionKind::HighThreat, (rng.gen::<f64>() * 2.0) - 1.0);
            }
            if rng.gen_bool(0.3) {
                event.behavior = Some("x".to_string());
            }
            if event.is_empty() {
                event.coalition = Some(coalitions[0].to_string());
            }
            events.push(event);
            t += rng.gen_range(1..=3u64);
        }
        db.append(EventsSequence::new(format!("S{}", i + 1), events))
            .expect("random sequence is valid");
    }
    db
}

/// One random sequence, shaped like the database sequences above.
pub fn random_sequence(rng: &mut ChaCha8Rng, max_events: usize) -> EventsSequence {
    let db = random_database(rng, 2, max_events);
    db.sequences()[0].clone()
}

/// A sequence contained in `seq` by construction: a non-empty subset of
/// its events with non-empty item subsets, timestamps shifted by a
/// constant (offsets preserved).
pub fn random_subsequence(rng: &mut ChaCha8Rng, seq: &EventsSequence) -> EventsSequence {
    let n = seq.events.len();
    let count = rng.gen_range(1..=n);
    let mut indices: Vec<usize> = (0..n).collect();
    for i in (1..indices.len()).rev() {
        indices.swap(i, rng.gen_range(0..=i));
    }
    let mut chosen = indices[..count].to_vec();
    chosen.sort_unstable();

    let shift = rng.gen_range(0..5u64);
    let events: Vec<Event> = chosen
        .iter()
        .map(|&idx| {
            let source = &seq.events[idx];
            let keys = source.item_keys();
            let keep = rng.gen_range(1..=keys.len());
            let mut order: Vec<usize> = (0..keys.len()).collect();
            for i in (1..order.len()).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            let mut event = Event::at(source.timestamp + shift);
            for &k in &order[..keep] {
                match &keys[k] {
                    ItemKey::Coalition(id) => event.coalition = Some(id.clone()),
                    ItemKey::Emotion(kind) => {
                        event.emotions.insert(*kind, *source.emotions.get(kind).unwrap());
                    }
                    ItemKey::Behavior(id) => event.behavior = Some(id.clone()),
                }
            }
            event
        })
        .collect();
    EventsSequence::new("sub", events)
}

pub fn random_minsup(rng: &mut ChaCha8Rng, db_size: usize) -> Fraction {
    if rng.gen_bool(0.5) {
        Fraction::new(rng.gen_range(1..=db_size as u64), db_size as u64)
    } else {
        Fraction::new(rng.gen_range(10..=100), 100)
    }
}

/// Least-squares R² of y against x.
pub fn r_squared(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = points.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|(x, _)| (x - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let syy: f64 = points.iter().map(|(_, y)| (y - mean_y).powi(2)).sum();
    if sxx == 0.0 || syy == 0.0 {
        return 1.0;
    }
    (sxy * sxy) / (sxx * syy)
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

//! Small built-in databases used by examples, benchmarks, and tests.

use crate::sequence_model::{EmotionKind, Event, EventsSequence, SequenceDatabase};

/// A six-sequence demo database small enough to mine by hand.
///
/// Spot supports at a 32 % threshold: `c1 e1` appears in four of six
/// sequences (with e1 values 0.8, 0.8, 0.6, 0.6 averaging 0.7), `c4 b4`
/// followed one cycle later by `c5` in three, and `c3` followed two cycles
/// later by `c5 b3` in two.
pub fn demo_database() -> SequenceDatabase {
    use EmotionKind::{HighThreat, MediumFear};
    let sequences = vec![
        EventsSequence::new(
            "S1",
            vec![
                Event::at(0).with_coalition("c1").with_emotion(HighThreat, 0.8),
                Event::at(1)
                    .with_coalition("c2")
                    .with_emotion(MediumFear, 0.3)
                    .with_behavior("b1"),
            ],
        ),
        EventsSequence::new(
            "S2",
            vec![
                Event::at(0).with_coalition("c1").with_emotion(HighThreat, 0.8),
                Event::at(1).with_coalition("c3"),
                Event::at(2).with_coalition("c4").with_behavior("b4"),
                Event::at(3).with_coalition("c5").with_behavior("b3"),
            ],
        ),
        EventsSequence::new(
            "S3",
            vec![
                Event::at(0).with_coalition("c2").with_emotion(MediumFear, 0.3),
                Event::at(1).with_coalition("c3"),
                Event::at(2).with_coalition("c4"),
                Event::at(3).with_coalition("c5").with_behavior("b3"),
            ],
        ),
        EventsSequence::new(
            "S4",
            vec![
                Event::at(0).with_coalition("c3"),
                Event::at(1)
                    .with_coalition("c1")
                    .with_emotion(HighThreat, 0.6)
                    .with_behavior("b4"),
                Event::at(2).with_coalition("c3"),
            ],
        ),
        EventsSequence::new(
            "S5",
            vec![
                Event::at(0).with_coalition("c4").with_behavior("b4"),
                Event::at(1).with_coalition("c5"),
                Event::at(2).with_coalition("c6"),
            ],
        ),
        EventsSequence::new(
            "S6",
            vec![
                Event::at(1)
                    .with_coalition("c1")
                    .with_emotion(HighThreat, 0.6)
                    .with_behavior("b4"),
                Event::at(2).with_coalition("c4").with_behavior("b4"),
                Event::at(3).with_coalition("c5"),
            ],
        ),
    ];
    SequenceDatabase::from_sequences(sequences).expect("demo database is valid")
}

/// Four sequences sharing a long run of common broadcasts at identical
/// offsets. Exhaustive (non-closed) mining over this database must visit
/// every event subset of the shared run, which explodes combinatorially;
/// closed mining collapses it to a handful of patterns. Useful for
/// exercising candidate caps and closure pruning.
pub fn shared_run_database(run_len: usize) -> SequenceDatabase {
    let mut sequences = Vec::new();
    for i in 0..4u64 {
        let mut events = Vec::new();
        // Per-sequence unique lead-in so the sequences are not identical.
        events.push(Event::at(0).with_coalition(format!("u{i}")));
        for (j, t) in (0..run_len).zip(1..) {
            events.push(Event::at(t as u64).with_coalition(format!("r{j}")));
        }
        events.push(Event::at(run_len as u64 + 1).with_coalition(format!("v{i}")));
        sequences.push(EventsSequence::new(format!("S{}", i + 1), events));
    }
    SequenceDatabase::from_sequences(sequences).expect("shared-run database is valid")
}

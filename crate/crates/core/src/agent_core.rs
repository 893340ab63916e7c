//! A minimal cognitive cycle with episodic override.
//!
//! Each cycle: a stimulus maps to candidate coalitions (perception stub),
//! the pseudo-amygdala rules infuse emotional valences and activation,
//! attention picks the most energetic coalition as fallback, the episodic
//! learner may override it from consolidated patterns, the winning
//! coalition is broadcast, a behavior node with a satisfied precondition
//! fires, and exactly one event is appended to the execution trace.
//!
//! Perception and codelet dynamics are deliberately fixed-constant stubs;
//! the loop exists to drive recording and consolidation.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::episodic_learner::{
    score_candidates, select, BroadcastHistory, LearnerConfig, Provenance,
    DEFAULT_HISTORY_CAPACITY,
};
use crate::pattern_miner::{mine, MineParams, PatternSet};
use crate::sequence_model::{
    EmotionKind, Event, EventsSequence, SequenceDatabase, TimeConstraints,
};
use crate::{Error, Fraction, Result};

/// A bundle of information codelets competing for the broadcast.
#[derive(Debug, Clone, PartialEq)]
pub struct Coalition {
    pub id: String,
    pub info_codelets: BTreeSet<String>,
    pub activation: f64,
    pub valences: BTreeMap<EmotionKind, f64>,
}

impl Coalition {
    pub fn new(id: impl Into<String>, activation: f64) -> Self {
        Coalition {
            id: id.into(),
            info_codelets: BTreeSet::new(),
            activation,
            valences: BTreeMap::new(),
        }
    }

    pub fn with_codelet(mut self, label: impl Into<String>) -> Self {
        self.info_codelets.insert(label.into());
        self
    }
}

/// Coalitions present this cycle plus labels persisting from earlier ones.
#[derive(Debug, Clone, Default)]
pub struct WorkingMemory {
    pub coalitions: Vec<Coalition>,
    pub residual: BTreeSet<String>,
}

impl WorkingMemory {
    fn load(&mut self, coalitions: Vec<Coalition>) -> Result<()> {
        let mut ids = BTreeSet::new();
        for c in &coalitions {
            if !ids.insert(c.id.clone()) {
                return Err(Error::InvalidData(format!(
                    "duplicate coalition id {:?} in working memory",
                    c.id
                )));
            }
        }
        self.coalitions = coalitions;
        Ok(())
    }

    fn retain_residual(&mut self, broadcast: &Coalition) {
        self.residual = broadcast.info_codelets.clone();
    }
}

/// A precondition-gated node of the behavior network.
#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorNode {
    pub id: String,
    /// Broadcast coalition that triggers this node.
    pub precondition: String,
    pub action: String,
    pub base_activation: f64,
    pub threshold: f64,
    pub successors: Vec<String>,
}

/// Directed graph of behavior nodes with named streams (partial plans).
#[derive(Debug, Clone, Default)]
pub struct BehaviorNetwork {
    nodes: BTreeMap<String, BehaviorNode>,
    streams: BTreeMap<String, Vec<String>>,
}

impl BehaviorNetwork {
    pub fn new(nodes: Vec<BehaviorNode>, streams: BTreeMap<String, Vec<String>>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for node in nodes {
            if map.insert(node.id.clone(), node).is_some() {
                return Err(Error::InvalidData("duplicate behavior node id".into()));
            }
        }
        for (name, path) in &streams {
            let mut seen = BTreeSet::new();
            for node_id in path {
                if !map.contains_key(node_id) {
                    return Err(Error::InvalidData(format!(
                        "stream {name:?} references unknown node {node_id:?}"
                    )));
                }
                if !seen.insert(node_id) {
                    return Err(Error::InvalidData(format!(
                        "stream {name:?} repeats node {node_id:?} (streams must be acyclic paths)"
                    )));
                }
            }
        }
        Ok(BehaviorNetwork { nodes: map, streams })
    }

    pub fn node(&self, id: &str) -> Option<&BehaviorNode> {
        self.nodes.get(id)
    }

    pub fn streams(&self) -> &BTreeMap<String, Vec<String>> {
        &self.streams
    }

    /// The node fired by a broadcast: precondition matches and activation
    /// clears the threshold. Ties resolve to the smallest node id.
    pub fn fire_for(&self, broadcast: &str) -> Option<&BehaviorNode> {
        self.nodes
            .values()
            .find(|n| n.precondition == broadcast && n.base_activation >= n.threshold)
    }
}

/// Maps a context tag of the cycle outcome to an emotional valence.
#[derive(Debug, Clone, PartialEq)]
pub struct EmotionRule {
    /// Context tag this rule reacts to, e.g. `answer_correct`.
    pub trigger: String,
    pub kind: EmotionKind,
    pub value: f64,
}

impl EmotionRule {
    pub fn new(trigger: impl Into<String>, kind: EmotionKind, value: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&value) {
            return Err(Error::InvalidData(format!(
                "emotion rule value {value} outside [-1, 1]"
            )));
        }
        Ok(EmotionRule { trigger: trigger.into(), kind, value })
    }
}

/// Applies every rule whose trigger is present in the context: the valence
/// is set and the coalition gains `gain * |value|` activation.
pub fn infuse_emotion(
    mut coalition: Coalition,
    rules: &[EmotionRule],
    context: &BTreeSet<String>,
    gain: f64,
) -> Coalition {
    for rule in rules {
        if context.contains(&rule.trigger) {
            coalition.valences.insert(rule.kind, rule.value);
            coalition.activation += gain * rule.value.abs();
        }
    }
    coalition
}

/// Appends one event for the cycle: the broadcast coalition, every nonzero
/// valence, and the executed behavior if any.
pub fn record_event(
    trace: &mut Vec<Event>,
    cycle: u64,
    broadcast: &str,
    valences: &BTreeMap<EmotionKind, f64>,
    behavior: Option<&str>,
) -> Result<()> {
    if let Some(last) = trace.last() {
        if cycle <= last.timestamp {
            return Err(Error::NonMonotonicCycle { cycle, last: last.timestamp });
        }
    }
    let mut event = Event::at(cycle).with_coalition(broadcast);
    for (kind, value) in valences {
        if *value != 0.0 {
            event.emotions.insert(*kind, *value);
        }
    }
    if let Some(b) = behavior {
        event.behavior = Some(b.to_string());
    }
    trace.push(event);
    Ok(())
}

/// When consolidation re-mines the trace database.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConsolidationSchedule {
    PerCycle,
    #[default]
    PerExecution,
    /// Only when the caller invokes [`Agent::consolidate`] explicitly.
    Manual,
}

/// Consolidation settings: threshold, time windows, and schedule.
#[derive(Debug, Clone)]
pub struct ConsolidationConfig {
    pub minsup: Fraction,
    pub constraints: TimeConstraints,
    pub schedule: ConsolidationSchedule,
}

impl Default for ConsolidationConfig {
    fn default() -> Self {
        ConsolidationConfig {
            minsup: Fraction::new(25, 100),
            constraints: TimeConstraints::none(),
            schedule: ConsolidationSchedule::PerExecution,
        }
    }
}

/// Static agent configuration.
#[derive(Debug, Clone)]
pub struct AgentConfig {
    /// Perception stub: stimulus token to candidate coalitions.
    pub stimulus_map: BTreeMap<String, Vec<Coalition>>,
    pub emotion_rules: Vec<EmotionRule>,
    /// Activation gained per unit of absolute valence.
    pub emotion_gain: f64,
    pub network: BehaviorNetwork,
    pub learner: LearnerConfig,
    pub history_capacity: usize,
    pub consolidation: ConsolidationConfig,
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig {
            stimulus_map: BTreeMap::new(),
            emotion_rules: Vec::new(),
            emotion_gain: 1.0,
            network: BehaviorNetwork::default(),
            learner: LearnerConfig::default(),
            history_capacity: DEFAULT_HISTORY_CAPACITY,
            consolidation: ConsolidationConfig::default(),
        }
    }
}

/// A stimulus presented to the agent for one cycle.
#[derive(Debug, Clone)]
pub struct Stimulus {
    pub token: String,
    /// Context tags matched against emotion rule triggers.
    pub context: BTreeSet<String>,
    /// Perception-level activation adjustments per coalition id.
    pub boosts: BTreeMap<String, f64>,
}

impl Stimulus {
    pub fn new(token: impl Into<String>) -> Self {
        Stimulus { token: token.into(), context: BTreeSet::new(), boosts: BTreeMap::new() }
    }

    pub fn with_context(mut self, tag: impl Into<String>) -> Self {
        self.context.insert(tag.into());
        self
    }

    pub fn with_boost(mut self, coalition: impl Into<String>, boost: f64) -> Self {
        self.boosts.insert(coalition.into(), boost);
        self
    }
}

/// Everything produced by one cognitive cycle.
#[derive(Debug, Clone)]
pub struct CycleOutcome {
    pub cycle: u64,
    pub broadcast: String,
    pub provenance: Provenance,
    /// Winning episodic total when the learner overrode attention.
    pub score: Option<f64>,
    pub behavior: Option<String>,
    pub event: Event,
    /// Time spent scoring and selecting.
    pub decision_time: Duration,
}

/// One line of the per-cycle decision log.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub cycle: u64,
    pub broadcast: String,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub score: Option<f64>,
}

/// The agent: configuration plus mutable cycle state, trace store, and
/// pattern snapshot.
#[derive(Debug, Clone)]
pub struct Agent {
    config: AgentConfig,
    patterns: PatternSet,
    history: BroadcastHistory,
    wm: WorkingMemory,
    trace: Vec<Event>,
    cycle: u64,
    db: SequenceDatabase,
    decisions: Vec<DecisionRecord>,
}

impl Agent {
    pub fn new(config: AgentConfig) -> Self {
        let history = BroadcastHistory::new(config.history_capacity);
        Agent {
            config,
            patterns: PatternSet::empty(),
            history,
            wm: WorkingMemory::default(),
            trace: Vec::new(),
            cycle: 0,
            db: SequenceDatabase::new(),
            decisions: Vec::new(),
        }
    }

    pub fn config(&self) -> &AgentConfig {
        &self.config
    }

    pub fn patterns(&self) -> &PatternSet {
        &self.patterns
    }

    /// Replaces the pattern snapshot (e.g. with an externally mined or
    /// hand-injected set).
    pub fn install_patterns(&mut self, patterns: PatternSet) {
        self.patterns = patterns;
    }

    pub fn database(&self) -> &SequenceDatabase {
        &self.db
    }

    pub fn history(&self) -> &BroadcastHistory {
        &self.history
    }

    pub fn working_memory(&self) -> &WorkingMemory {
        &self.wm
    }

    pub fn trace(&self) -> &[Event] {
        &self.trace
    }

    pub fn decisions(&self) -> &[DecisionRecord] {
        &self.decisions
    }

    /// Runs one full cognitive cycle against a stimulus.
    pub fn run_cycle(&mut self, stimulus: &Stimulus) -> Result<CycleOutcome> {
        // Perception stub: stimulus to candidate coalitions, plus boosts.
        let mut candidates = self
            .config
            .stimulus_map
            .get(&stimulus.token)
            .cloned()
            .unwrap_or_default();
        if candidates.is_empty() {
            return Err(Error::NoCandidates(stimulus.token.clone()));
        }
        for c in &mut candidates {
            if let Some(boost) = stimulus.boosts.get(&c.id) {
                c.activation += boost;
            }
        }

        // Emotional infusion.
        let candidates: Vec<Coalition> = candidates
            .into_iter()
            .map(|c| infuse_emotion(c, &self.config.emotion_rules, &stimulus.context, self.config.emotion_gain))
            .collect();
        self.wm.load(candidates)?;

        // Attention: most energetic coalition, smallest id on ties.
        let fallback = self
            .wm
            .coalitions
            .iter()
            .fold(None::<&Coalition>, |acc, c| match acc {
                None => Some(c),
                Some(best) => {
                    if c.activation > best.activation
                        || (c.activation == best.activation && c.id < best.id)
                    {
                        Some(c)
                    } else {
                        Some(best)
                    }
                }
            })
            .expect("non-empty candidates")
            .id
            .clone();

        // Episodic override.
        let started = Instant::now();
        let candidate_ids: BTreeSet<String> =
            self.wm.coalitions.iter().map(|c| c.id.clone()).collect();
        let scores = score_candidates(
            &self.history,
            &candidate_ids,
            &self.patterns.patterns,
            &self.config.learner,
        );
        let (broadcast, provenance) = select(&scores, &fallback);
        let decision_time = started.elapsed();
        let score = match provenance {
            Provenance::Episodic => scores
                .iter()
                .find(|s| s.coalition == broadcast)
                .map(|s| s.total),
            Provenance::Attention => None,
        };

        // Broadcast and behavior.
        let cycle = self.cycle;
        self.history.push(cycle, broadcast.clone())?;
        let winner = self
            .wm
            .coalitions
            .iter()
            .find(|c| c.id == broadcast)
            .expect("broadcast is one of the candidates")
            .clone();
        self.wm.retain_residual(&winner);
        let behavior = self
            .config
            .network
            .fire_for(&broadcast)
            .map(|n| n.id.clone());

        record_event(&mut self.trace, cycle, &broadcast, &winner.valences, behavior.as_deref())?;
        let event = self.trace.last().expect("just recorded").clone();
        self.decisions.push(DecisionRecord {
            cycle,
            broadcast: broadcast.clone(),
            provenance,
            score,
        });
        self.cycle += 1;

        if self.config.consolidation.schedule == ConsolidationSchedule::PerCycle && !self.db.is_empty()
        {
            self.consolidate()?;
        }

        Ok(CycleOutcome { cycle, broadcast, provenance, score, behavior, event, decision_time })
    }

    /// Flushes the current trace into the database as a finished sequence.
    pub fn finish_execution(&mut self) -> Result<EventsSequence> {
        if self.trace.is_empty() {
            return Err(Error::EmptySequence);
        }
        let id = self.db.fresh_id();
        let sequence = EventsSequence::new(id, std::mem::take(&mut self.trace));
        self.db.append(sequence.clone())?;
        Ok(sequence)
    }

    /// Re-mines the trace database and swaps in the new pattern set.
    pub fn consolidate(&mut self) -> Result<&PatternSet> {
        let params = MineParams {
            minsup: self.config.consolidation.minsup,
            constraints: self.config.consolidation.constraints,
            closed_only: true,
            max_candidates: None,
            min_events: None,
            generation: self.patterns.generation + 1,
        };
        self.patterns = mine(&self.db, &params)?;
        Ok(&self.patterns)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern_miner::Pattern;

    fn two_path_network() -> BehaviorNetwork {
        let nodes = vec![
            BehaviorNode {
                id: "b1".into(),
                precondition: "c16".into(),
                action: "give_solution".into(),
                base_activation: 1.0,
                threshold: 0.5,
                successors: vec!["b2".into()],
            },
            BehaviorNode {
                id: "b2".into(),
                precondition: "c20".into(),
                action: "evaluate_answer".into(),
                base_activation: 1.0,
                threshold: 0.5,
                successors: vec![],
            },
            BehaviorNode {
                id: "b3".into(),
                precondition: "c18".into(),
                action: "give_hint".into(),
                base_activation: 1.0,
                threshold: 0.5,
                successors: vec!["b4".into()],
            },
            BehaviorNode {
                id: "b4".into(),
                precondition: "c19".into(),
                action: "evaluate_answer".into(),
                base_activation: 1.0,
                threshold: 0.5,
                successors: vec![],
            },
        ];
        let streams = BTreeMap::from([
            ("scenario1".to_string(), vec!["b1".to_string(), "b2".to_string()]),
            ("scenario2".to_string(), vec!["b3".to_string(), "b4".to_string()]),
        ]);
        BehaviorNetwork::new(nodes, streams).unwrap()
    }

    fn decision_config() -> AgentConfig {
        let mut stimulus_map = BTreeMap::new();
        stimulus_map.insert(
            "intervention".to_string(),
            vec![Coalition::new("c16", 1.0), Coalition::new("c18", 1.0)],
        );
        stimulus_map.insert("problem".to_string(), vec![Coalition::new("c11", 1.0)]);
        AgentConfig {
            stimulus_map,
            emotion_rules: vec![
                EmotionRule::new("answer_correct", EmotionKind::Compassion, 0.8).unwrap(),
                EmotionRule::new("answer_incorrect", EmotionKind::MediumFear, -0.4).unwrap(),
            ],
            network: two_path_network(),
            ..AgentConfig::default()
        }
    }

    #[test]
    fn fallback_is_highest_activation() {
        let mut config = decision_config();
        config
            .stimulus_map
            .insert("intervention".into(), vec![
                Coalition::new("c16", 2.0),
                Coalition::new("c18", 1.0),
            ]);
        let mut agent = Agent::new(config);
        agent.run_cycle(&Stimulus::new("problem")).unwrap();
        let outcome = agent.run_cycle(&Stimulus::new("intervention")).unwrap();
        assert_eq!(outcome.broadcast, "c16");
        assert_eq!(outcome.provenance, Provenance::Attention);
        assert_eq!(outcome.behavior.as_deref(), Some("b1"));
    }

    #[test]
    fn equal_activation_breaks_ties_lexicographically() {
        let mut agent = Agent::new(decision_config());
        agent.run_cycle(&Stimulus::new("problem")).unwrap();
        let outcome = agent.run_cycle(&Stimulus::new("intervention")).unwrap();
        assert_eq!(outcome.broadcast, "c16");
    }

    fn path_pattern(id: &str, entry: &str, eval: &str, kind: EmotionKind, value: f64, num: u64) -> Pattern {
        Pattern {
            id: id.into(),
            sequence: EventsSequence::new(
                "",
                vec![
                    Event::at(0).with_coalition("c10"),
                    Event::at(1).with_coalition("c11"),
                    Event::at(2).with_coalition(entry),
                    Event::at(3).with_coalition(eval).with_emotion(kind, value),
                ],
            ),
            support: Fraction::new(num, 10),
            supporting_ids: BTreeSet::new(),
        }
    }

    #[test]
    fn patterns_override_attention() {
        let mut config = decision_config();
        config
            .stimulus_map
            .insert("lead".into(), vec![Coalition::new("c10", 1.0)]);
        let mut agent = Agent::new(config);

        let mut set = PatternSet::empty();
        set.patterns
            .push(path_pattern("P1", "c18", "c19", EmotionKind::Compassion, 0.8, 4));
        agent.install_patterns(set);

        agent.run_cycle(&Stimulus::new("lead")).unwrap();
        agent.run_cycle(&Stimulus::new("problem")).unwrap();
        // History suffix (c10, c11) sits at the pattern head with c18
        // following: the hint coalition wins despite the tie-break
        // favoring c16.
        let outcome = agent.run_cycle(&Stimulus::new("intervention")).unwrap();
        assert_eq!(outcome.broadcast, "c18");
        assert_eq!(outcome.provenance, Provenance::Episodic);
        assert_eq!(outcome.behavior.as_deref(), Some("b3"));
        assert!(outcome.score.is_some());
        assert_eq!(agent.trace().len(), 3);
    }

    #[test]
    fn infusion_sets_valence_and_boosts_activation() {
        let rules = vec![
            EmotionRule::new("answer_correct", EmotionKind::Compassion, 0.8).unwrap(),
            EmotionRule::new("answer_incorrect", EmotionKind::MediumFear, -0.4).unwrap(),
        ];
        let base = Coalition::new("c19", 1.0);

        let correct = BTreeSet::from(["answer_correct".to_string()]);
        let infused = infuse_emotion(base.clone(), &rules, &correct, 1.0);
        assert_eq!(infused.valences[&EmotionKind::Compassion], 0.8);
        assert!((infused.activation - 1.8).abs() < 1e-12);

        let incorrect = BTreeSet::from(["answer_incorrect".to_string()]);
        let infused = infuse_emotion(base.clone(), &rules, &incorrect, 1.0);
        assert_eq!(infused.valences[&EmotionKind::MediumFear], -0.4);
        assert!((infused.activation - 1.4).abs() < 1e-12);

        let none = BTreeSet::new();
        let infused = infuse_emotion(base.clone(), &rules, &none, 1.0);
        assert_eq!(infused, base);
    }

    #[test]
    fn record_event_examples() {
        let mut trace = Vec::new();
        let valences = BTreeMap::from([(EmotionKind::Compassion, 0.8)]);
        record_event(&mut trace, 17, "c19", &valences, None).unwrap();
        assert_eq!(trace[0], Event::at(17).with_coalition("c19").with_emotion(EmotionKind::Compassion, 0.8));

        let valences = BTreeMap::from([(EmotionKind::MediumFear, 0.3)]);
        record_event(&mut trace, 18, "c2", &valences, Some("b1")).unwrap();
        assert_eq!(
            trace[1],
            Event::at(18)
                .with_coalition("c2")
                .with_emotion(EmotionKind::MediumFear, 0.3)
                .with_behavior("b1")
        );

        // Zero valences are omitted: coalition item only.
        let valences = BTreeMap::from([(EmotionKind::HighThreat, 0.0)]);
        record_event(&mut trace, 19, "c3", &valences, None).unwrap();
        assert_eq!(trace[2], Event::at(19).with_coalition("c3"));

        let err = record_event(&mut trace, 19, "c4", &BTreeMap::new(), None);
        assert!(matches!(err, Err(Error::NonMonotonicCycle { .. })));
    }

    #[test]
    fn consolidation_on_single_execution_yields_full_support() {
        let mut agent = Agent::new(decision_config());
        agent.config.consolidation.minsup = Fraction::one();
        agent.run_cycle(&Stimulus::new("problem")).unwrap();
        agent.run_cycle(&Stimulus::new("intervention")).unwrap();
        agent.run_cycle(&Stimulus::new("problem")).unwrap();
        agent.finish_execution().unwrap();
        let set = agent.consolidate().unwrap();
        assert!(!set.is_empty());
        for p in &set.patterns {
            assert_eq!(p.support, Fraction::new(1, 1));
        }
    }

    #[test]
    fn no_candidates_is_an_error() {
        let mut agent = Agent::new(decision_config());
        let err = agent.run_cycle(&Stimulus::new("unknown"));
        assert!(matches!(err, Err(Error::NoCandidates(_))));
    }

    #[test]
    fn injected_negative_pattern_flips_the_selection() {
        let mut config = decision_config();
        config
            .stimulus_map
            .insert("lead".into(), vec![Coalition::new("c10", 1.0)]);
        let mut agent = Agent::new(config);

        let mut set = PatternSet::empty();
        set.patterns
            .push(path_pattern("P1", "c18", "c19", EmotionKind::Compassion, 0.8, 4));
        set.patterns
            .push(path_pattern("P2", "c16", "c20", EmotionKind::Compassion, 0.5, 4));
        agent.install_patterns(set.clone());

        agent.run_cycle(&Stimulus::new("lead")).unwrap();
        agent.run_cycle(&Stimulus::new("problem")).unwrap();
        let outcome = agent.run_cycle(&Stimulus::new("intervention")).unwrap();
        assert_eq!(outcome.broadcast, "c18");
        assert_eq!(outcome.provenance, Provenance::Episodic);

        // A later generation that turned strongly against the hint path.
        let mut regenerated = set;
        regenerated.patterns.push(path_pattern(
            "P3",
            "c18",
            "c19",
            EmotionKind::HighThreat,
            -1.0,
            9,
        ));
        agent.install_patterns(regenerated);
        agent.run_cycle(&Stimulus::new("lead")).unwrap();
        agent.run_cycle(&Stimulus::new("problem")).unwrap();
        let outcome = agent.run_cycle(&Stimulus::new("intervention")).unwrap();
        assert_eq!(outcome.provenance, Provenance::Episodic);
        assert_eq!(outcome.broadcast, "c16");
    }

    #[test]
    fn behavior_network_rejects_bad_streams() {
        let node = BehaviorNode {
            id: "b1".into(),
            precondition: "c1".into(),
            action: "act".into(),
            base_activation: 1.0,
            threshold: 0.5,
            successors: vec![],
        };
        let bad = BehaviorNetwork::new(
            vec![node.clone()],
            BTreeMap::from([("s".to_string(), vec!["missing".to_string()])]),
        );
        assert!(bad.is_err());
        let cyclic = BehaviorNetwork::new(
            vec![node],
            BTreeMap::from([("s".to_string(), vec!["b1".to_string(), "b1".to_string()])]),
        );
        assert!(cyclic.is_err());
    }

    #[test]
    fn below_threshold_nodes_do_not_fire() {
        let node = BehaviorNode {
            id: "b1".into(),
            precondition: "c1".into(),
            action: "act".into(),
            base_activation: 0.2,
            threshold: 0.5,
            successors: vec![],
        };
        let network = BehaviorNetwork::new(vec![node], BTreeMap::new()).unwrap();
        assert!(network.fire_for("c1").is_none());
    }
}

//! Deterministic tutoring-dialogue scenario driver.
//!
//! Each execution is one tutoring session: a fixed warm-up run of
//! housekeeping broadcasts, then a sampled number of exchanges. Every
//! exchange poses a problem, decides between a hint-first intervention and
//! a direct solution (the decision point the episodic learner can
//! override), and evaluates the learner's answer, attaching compassion for
//! a correct answer or medium fear for an incorrect one.
//!
//! While the agent has no episodic signal for a decision, the driver
//! flips a seeded coin for the attention-favored path, so both
//! intervention styles (and both orderings across exchange boundaries)
//! enter the trace database and later consolidations can compare them.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::agent_core::{
    Agent, AgentConfig, BehaviorNetwork, BehaviorNode, Coalition, ConsolidationConfig,
    ConsolidationSchedule, EmotionRule, Stimulus,
};
use crate::episodic_learner::Provenance;
use crate::sequence_model::{EmotionKind, EventsSequence, TimeConstraints};
use crate::{Error, Fraction, Result};

/// Which intervention path an exchange took.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioPath {
    /// Scenario 2: give a hint first.
    Hint,
    /// Scenario 1: give the solution directly.
    DirectSolution,
}

/// How the simulated learner answers evaluation questions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LearnerPolicy {
    /// Uniformly random answers.
    Random,
    /// Path-dependent success probabilities.
    Profiled {
        p_correct_after_hint: f64,
        p_correct_after_solution: f64,
    },
}

impl LearnerPolicy {
    pub fn profiled(p_correct_after_hint: f64, p_correct_after_solution: f64) -> Result<Self> {
        for p in [p_correct_after_hint, p_correct_after_solution] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidData(format!("probability {p} outside [0, 1]")));
            }
        }
        Ok(LearnerPolicy::Profiled { p_correct_after_hint, p_correct_after_solution })
    }

    fn answers_correctly(&self, path: ScenarioPath, rng: &mut ChaCha8Rng) -> bool {
        match self {
            LearnerPolicy::Random => rng.gen_bool(0.5),
            LearnerPolicy::Profiled { p_correct_after_hint, p_correct_after_solution } => {
                let p = match path {
                    ScenarioPath::Hint => *p_correct_after_hint,
                    ScenarioPath::DirectSolution => *p_correct_after_solution,
                };
                match p {
                    0.0 => false,
                    1.0 => true,
                    p => rng.gen_bool(p),
                }
            }
        }
    }
}

/// Scenario vocabulary, dialogue-length distribution, and consolidation
/// settings.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    /// Session warm-up broadcasts emitted before the first exchange.
    pub intro: Vec<String>,
    pub problem_coalition: String,
    /// Scenario 2 entry: the hint intervention.
    pub hint_entry: String,
    /// Scenario 1 entry: the direct solution.
    pub solution_entry: String,
    pub hint_eval: String,
    pub solution_eval: String,
    /// Inclusive bounds on exchanges per execution.
    pub exchange_bounds: (u32, u32),
    pub exchange_mean: f64,
    pub exchange_std: f64,
    /// Activation bump applied to the exploration-forced entry.
    pub exploration_boost: f64,
    pub consolidation: ConsolidationConfig,
    pub history_capacity: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            intro: (1..=8).map(|i| format!("c{i}")).collect(),
            problem_coalition: "c11".into(),
            hint_entry: "c18".into(),
            solution_entry: "c16".into(),
            hint_eval: "c19".into(),
            solution_eval: "c20".into(),
            exchange_bounds: (2, 9),
            exchange_mean: 6.0,
            exchange_std: 1.6,
            exploration_boost: 0.5,
            consolidation: ConsolidationConfig {
                minsup: Fraction::new(25, 100),
                constraints: TimeConstraints {
                    min_span: 2,
                    max_span: Some(9),
                    min_gap: 1,
                    max_gap: Some(2),
                },
                schedule: ConsolidationSchedule::PerExecution,
            },
            history_capacity: 10,
        }
    }
}

impl ScenarioConfig {
    /// Builds the behavior network: two streams, each ending in its
    /// evaluation node.
    pub fn behavior_network(&self) -> BehaviorNetwork {
        let node = |id: &str, precondition: &str, action: &str, successors: Vec<String>| BehaviorNode {
            id: id.into(),
            precondition: precondition.into(),
            action: action.into(),
            base_activation: 1.0,
            threshold: 0.5,
            successors,
        };
        let nodes = vec![
            node("b1", &self.solution_entry, "give_solution", vec!["b2".into()]),
            node("b2", &self.solution_eval, "evaluate_answer", vec![]),
            node("b3", &self.hint_entry, "give_hint", vec!["b4".into()]),
            node("b4", &self.hint_eval, "evaluate_answer", vec![]),
        ];
        let streams = BTreeMap::from([
            ("scenario1".to_string(), vec!["b1".to_string(), "b2".to_string()]),
            ("scenario2".to_string(), vec!["b3".to_string(), "b4".to_string()]),
        ]);
        BehaviorNetwork::new(nodes, streams).expect("scenario network is valid")
    }

    /// The agent configuration implied by this scenario.
    pub fn agent_config(&self) -> AgentConfig {
        let mut stimulus_map = BTreeMap::new();
        for (i, coalition) in self.intro.iter().enumerate() {
            stimulus_map.insert(format!("intro_{i}"), vec![Coalition::new(coalition, 1.0)]);
        }
        stimulus_map.insert(
            "problem".to_string(),
            vec![Coalition::new(&self.problem_coalition, 1.0)],
        );
        stimulus_map.insert(
            "intervention".to_string(),
            vec![
                Coalition::new(&self.solution_entry, 1.0),
                Coalition::new(&self.hint_entry, 1.0),
            ],
        );
        stimulus_map.insert(
            "hint_eval".to_string(),
            vec![Coalition::new(&self.hint_eval, 1.0)],
        );
        stimulus_map.insert(
            "solution_eval".to_string(),
            vec![Coalition::new(&self.solution_eval, 1.0)],
        );
        AgentConfig {
            stimulus_map,
            emotion_rules: vec![
                EmotionRule::new("answer_correct", EmotionKind::Compassion, 0.8)
                    .expect("valid rule"),
                EmotionRule::new("answer_incorrect", EmotionKind::MediumFear, -0.4)
                    .expect("valid rule"),
            ],
            emotion_gain: 1.0,
            network: self.behavior_network(),
            history_capacity: self.history_capacity,
            consolidation: self.consolidation.clone(),
            ..AgentConfig::default()
        }
    }
}

/// What one execution produced, beyond the recorded sequence itself.
#[derive(Debug, Clone)]
pub struct ExecutionRecord {
    pub sequence: EventsSequence,
    pub exchange_count: u32,
    /// Broadcast chosen at each intervention decision, with provenance.
    pub interventions: Vec<(String, Provenance)>,
    /// Learner decision latency for every cycle of the execution.
    pub decision_times: Vec<Duration>,
    /// Time spent consolidating after the execution, when scheduled.
    pub mining_time: Option<Duration>,
}

/// One row of a batch report.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub execution: usize,
    pub mining_ms: f64,
    pub pattern_count: usize,
    pub mean_pattern_len: f64,
    /// Mean per-cycle learner decision time.
    pub learner_decision_us: f64,
    /// Worst per-cycle learner decision time (not part of the CSV).
    pub max_decision_us: f64,
}

/// Per-execution metrics for a batch run.
#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "execution,mining_ms,pattern_count,mean_pattern_len,learner_decision_us")?;
        for row in &self.rows {
            writeln!(
                out,
                "{},{:.3},{},{:.3},{:.3}",
                row.execution, row.mining_ms, row.pattern_count, row.mean_pattern_len,
                row.learner_decision_us
            )?;
        }
        Ok(())
    }
}

/// Derives independent per-execution seeds from one master seed; the
/// scheme batch runs and external drivers share.
pub fn execution_seeds(master_seed: u64, executions: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    (0..executions).map(|_| rng.gen()).collect()
}

/// Drives a scenario agent through executions and batches.
#[derive(Debug)]
pub struct ScenarioDriver {
    config: ScenarioConfig,
    agent: Agent,
}

impl ScenarioDriver {
    pub fn new(config: ScenarioConfig) -> Self {
        let agent = Agent::new(config.agent_config());
        ScenarioDriver { config, agent }
    }

    pub fn agent(&self) -> &Agent {
        &self.agent
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    /// Consolidates the recorded executions now, returning how long mining
    /// took. Used with [`ConsolidationSchedule::Manual`].
    pub fn consolidate(&mut self) -> Result<Duration> {
        let started = Instant::now();
        self.agent.consolidate()?;
        Ok(started.elapsed())
    }

    fn sample_exchanges(&self, rng: &mut ChaCha8Rng) -> u32 {
        let (min, max) = self.config.exchange_bounds;
        let normal = Normal::new(self.config.exchange_mean, self.config.exchange_std)
            .expect("valid distribution");
        for _ in 0..100 {
            let x = normal.sample(rng).round();
            if x >= min as f64 && x <= max as f64 {
                return x as u32;
            }
        }
        (self.config.exchange_mean.round() as u32).clamp(min, max)
    }

    /// Runs one full dialogue, records it, and consolidates when the
    /// schedule says to.
    pub fn run_execution(&mut self, policy: &LearnerPolicy, seed: u64) -> Result<ExecutionRecord> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let exchange_count = self.sample_exchanges(&mut rng);
        let mut decision_times = Vec::new();
        let mut interventions = Vec::new();

        for i in 0..self.config.intro.len() {
            let outcome = self.agent.run_cycle(&Stimulus::new(format!("intro_{i}")))?;
            decision_times.push(outcome.decision_time);
        }

        let open_with_hint = self.agent.database().len() % 2 == 0;
        for exchange in 0..exchange_count {
            let outcome = self.agent.run_cycle(&Stimulus::new("problem"))?;
            decision_times.push(outcome.decision_time);

            // Exploration: while no pattern matches, attention follows this
            // choice. The opening intervention alternates across sessions
            // and a seeded coin drives the rest, so both paths (and both
            // orderings) keep entering the trace database.
            let hint_favored = if exchange == 0 { open_with_hint } else { rng.gen_bool(0.5) };
            let forced = if hint_favored {
                &self.config.hint_entry
            } else {
                &self.config.solution_entry
            };
            let stimulus =
                Stimulus::new("intervention").with_boost(forced.clone(), self.config.exploration_boost);
            let outcome = self.agent.run_cycle(&stimulus)?;
            decision_times.push(outcome.decision_time);
            let path = if outcome.broadcast == self.config.hint_entry {
                ScenarioPath::Hint
            } else {
                ScenarioPath::DirectSolution
            };
            interventions.push((outcome.broadcast.clone(), outcome.provenance));

            let correct = policy.answers_correctly(path, &mut rng);
            let token = match path {
                ScenarioPath::Hint => "hint_eval",
                ScenarioPath::DirectSolution => "solution_eval",
            };
            let tag = if correct { "answer_correct" } else { "answer_incorrect" };
            let outcome = self.agent.run_cycle(&Stimulus::new(token).with_context(tag))?;
            decision_times.push(outcome.decision_time);
        }

        let sequence = self.agent.finish_execution()?;
        let mining_time =
            if self.config.consolidation.schedule == ConsolidationSchedule::PerExecution {
                let started = Instant::now();
                self.agent.consolidate()?;
                Some(started.elapsed())
            } else {
                None
            };

        Ok(ExecutionRecord { sequence, exchange_count, interventions, decision_times, mining_time })
    }

    /// Runs a batch of executions against one cumulative database,
    /// consolidating and collecting metrics after each.
    pub fn run_batch(
        &mut self,
        policy: &LearnerPolicy,
        executions: usize,
        master_seed: u64,
    ) -> Result<BenchReport> {
        let seeds = execution_seeds(master_seed, executions);
        let mut report = BenchReport::default();
        for (idx, seed) in seeds.into_iter().enumerate() {
            let record = self.run_execution(policy, seed)?;
            let mining = match record.mining_time {
                Some(d) => d,
                None => {
                    let started = Instant::now();
                    self.agent.consolidate()?;
                    started.elapsed()
                }
            };
            let micros: Vec<f64> =
                record.decision_times.iter().map(|d| d.as_secs_f64() * 1e6).collect();
            let mean_us = micros.iter().sum::<f64>() / micros.len().max(1) as f64;
            let max_us = micros.iter().fold(0.0f64, |a, &b| a.max(b));
            report.rows.push(BenchRow {
                execution: idx + 1,
                mining_ms: mining.as_secs_f64() * 1e3,
                pattern_count: self.agent.patterns().len(),
                mean_pattern_len: self.agent.patterns().mean_pattern_size(),
                learner_decision_us: mean_us,
                max_decision_us: max_us,
            });
        }
        Ok(report)
    }
}

//! `epmem` — mine, simulate, benchmark, and query episodic traces.
//!
//! Exit codes: 0 on success, 2 for input errors (unreadable or malformed
//! files, bad thresholds, empty databases), 3 for constraint violations
//! (inconsistent time windows, candidate cap exceeded).

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgAction, Args, Parser, Subcommand};
use epmem_core::agent_core::DecisionRecord;
use epmem_core::episodic_learner::{
    score_candidates, select, BroadcastHistory, LearnerConfig, Provenance,
};
use epmem_core::pattern_miner::{mine, read_patterns, write_patterns, MineParams, Pattern};
use epmem_core::scenario_sim::{execution_seeds, LearnerPolicy, ScenarioConfig, ScenarioDriver};
use epmem_core::sequence_model::{
    read_sequences, support, write_sequences, SequenceDatabase, TimeConstraints,
};
use epmem_core::{Error, Fraction};

#[derive(Parser)]
#[command(name = "epmem", version, about = "Episodic memory: record, consolidate, remember")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine frequent (closed) patterns from a sequence database file.
    Mine(MineArgs),
    /// Run tutoring-dialogue executions and write trace files.
    Simulate(SimulateArgs),
    /// Run a batch of executions and write per-execution metrics as CSV.
    Bench(BenchArgs),
    /// Score broadcast candidates against a pattern file and a history.
    Learn(LearnArgs),
}

#[derive(Args)]
struct ConstraintArgs {
    /// Minimum pattern span (last minus first timestamp).
    #[arg(long, default_value_t = 0)]
    min_span: u64,
    /// Maximum pattern span.
    #[arg(long)]
    max_span: Option<u64>,
    /// Minimum gap between adjacent events.
    #[arg(long, default_value_t = 1)]
    min_gap: u64,
    /// Maximum gap between adjacent events.
    #[arg(long)]
    max_gap: Option<u64>,
    /// Ignore all time constraints.
    #[arg(long, conflicts_with_all = ["min_span", "max_span", "min_gap", "max_gap"])]
    no_constraints: bool,
}

impl ConstraintArgs {
    fn to_constraints(&self) -> Result<TimeConstraints, Error> {
        if self.no_constraints {
            return Ok(TimeConstraints::none());
        }
        TimeConstraints::new(self.min_span, self.max_span, self.min_gap, self.max_gap)
    }
}

#[derive(Args)]
struct MineArgs {
    /// Sequence database, one JSON sequence per line.
    #[arg(long)]
    db: PathBuf,
    /// Where to write the mined patterns (JSON lines).
    #[arg(long)]
    out: PathBuf,
    /// Minimum support: a fraction like 0.32 or 2/6, or a percentage like 32%.
    #[arg(long)]
    minsup: String,
    /// Keep only closed patterns.
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    closed_only: bool,
    /// Abort after this many candidates (0 = unlimited). Defaults to
    /// 1000000 for exhaustive (non-closed) mining, unlimited otherwise.
    #[arg(long)]
    max_candidates: Option<usize>,
    /// Only output patterns with at least this many events.
    #[arg(long)]
    min_events: Option<usize>,
    #[command(flatten)]
    constraints: ConstraintArgs,
}

#[derive(Args)]
struct SimulateArgs {
    /// Directory for trace and decision files.
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 1)]
    executions: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Learner policy: "random" or "profiled:<p_hint>,<p_solution>".
    #[arg(long, default_value = "random")]
    policy: String,
    /// Consolidation threshold.
    #[arg(long, default_value = "0.25")]
    minsup: String,
    /// Also write the accumulated sequence database to this file.
    #[arg(long)]
    db: Option<PathBuf>,
    #[command(flatten)]
    constraints: ConstraintArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Where to write the per-execution CSV report.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 160)]
    executions: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Learner policy: "random" or "profiled:<p_hint>,<p_solution>".
    #[arg(long, default_value = "random")]
    policy: String,
    /// Consolidation threshold.
    #[arg(long, default_value = "0.25")]
    minsup: String,
    #[command(flatten)]
    constraints: ConstraintArgs,
}

#[derive(Args)]
struct LearnArgs {
    /// Mined pattern file (JSON lines).
    #[arg(long)]
    patterns: PathBuf,
    /// Recent broadcasts, oldest first, at consecutive cycles: "cA,cB".
    #[arg(long)]
    history: String,
    /// Candidate coalitions awaiting broadcast: "cC,cD".
    #[arg(long)]
    candidates: String,
    /// Re-verify pattern supports against this sequence database.
    #[arg(long)]
    db: Option<PathBuf>,
    /// Use order-only subsequence matching instead of strict offsets.
    #[arg(long)]
    relaxed: bool,
    /// Coalition to fall back to when no pattern matches; defaults to the
    /// lexicographically smallest candidate.
    #[arg(long)]
    fallback: Option<String>,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Mine(args) => cmd_mine(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Learn(args) => cmd_learn(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidConstraints(_) | Error::CandidateCapExceeded { .. } => 3,
        _ => 2,
    }
}

fn load_database(path: &Path) -> Result<SequenceDatabase, Error> {
    let file = File::open(path)?;
    let sequences = read_sequences(BufReader::new(file))?;
    SequenceDatabase::from_sequences(sequences)
}

fn parse_policy(text: &str) -> Result<LearnerPolicy, Error> {
    if text == "random" {
        return Ok(LearnerPolicy::Random);
    }
    if let Some(spec) = text.strip_prefix("profiled:") {
        if let Some((h, s)) = spec.split_once(',') {
            let parse = |v: &str| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidData(format!("bad probability {v:?}")))
            };
            return LearnerPolicy::profiled(parse(h)?, parse(s)?);
        }
    }
    Err(Error::InvalidData(format!(
        "bad policy {text:?}: expected \"random\" or \"profiled:<p_hint>,<p_solution>\""
    )))
}

fn parse_id_list(text: &str, what: &str) -> Result<Vec<String>, Error> {
    let ids: Vec<String> = text
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    if ids.is_empty() {
        return Err(Error::InvalidData(format!("empty {what} list")));
    }
    Ok(ids)
}

fn cmd_mine(args: MineArgs) -> Result<(), Error> {
    let db = load_database(&args.db)?;
    if db.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    let minsup = Fraction::parse_minsup(&args.minsup)?;
    let constraints = args.constraints.to_constraints()?;
    let max_candidates = match args.max_candidates {
        Some(0) => None,
        Some(n) => Some(n),
        None if !args.closed_only => Some(1_000_000),
        None => None,
    };
    let params = MineParams {
        minsup,
        constraints,
        closed_only: args.closed_only,
        max_candidates,
        min_events: args.min_events,
        generation: 0,
    };

    let started = Instant::now();
    let set = mine(&db, &params)?;
    let elapsed = started.elapsed();

    let out = File::create(&args.out)?;
    write_patterns(BufWriter::new(out), &set.patterns)?;

    println!("patterns: {}", set.len());
    if let (Some(first), Some(last)) = (set.patterns.first(), set.patterns.last()) {
        println!(
            "support: max {} ({:.0} %), min {} ({:.0} %)",
            first.support,
            first.support.as_percent(),
            last.support,
            last.support.as_percent()
        );
    }
    println!("elapsed: {:.3} ms", elapsed.as_secs_f64() * 1e3);
    Ok(())
}

fn scenario_config(minsup: &str, constraints: &ConstraintArgs) -> Result<ScenarioConfig, Error> {
    let mut config = ScenarioConfig::default();
    config.consolidation.minsup = Fraction::parse_minsup(minsup)?;
    if constraints.no_constraints
        || constraints.min_span != 0
        || constraints.max_span.is_some()
        || constraints.min_gap != 1
        || constraints.max_gap.is_some()
    {
        config.consolidation.constraints = constraints.to_constraints()?;
    }
    Ok(config)
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), Error> {
    let config = scenario_config(&args.minsup, &args.constraints)?;
    let policy = parse_policy(&args.policy)?;
    std::fs::create_dir_all(&args.out_dir)?;

    let mut driver = ScenarioDriver::new(config);
    let seeds = execution_seeds(args.seed, args.executions);
    let mut decisions_written = 0usize;
    for (idx, seed) in (1..).zip(seeds) {
        let record = driver.run_execution(&policy, seed)?;

        let trace_path = args.out_dir.join(format!("trace_{idx:04}.jsonl"));
        let file = File::create(&trace_path)?;
        write_sequences(BufWriter::new(file), std::slice::from_ref(&record.sequence))?;

        let decisions = &driver.agent().decisions()[decisions_written..];
        decisions_written = driver.agent().decisions().len();
        let decisions_path = args.out_dir.join(format!("decisions_{idx:04}.jsonl"));
        write_decisions(&decisions_path, decisions)?;

        println!(
            "execution {idx}: {} events, {} exchanges -> {}",
            record.sequence.len(),
            record.exchange_count,
            trace_path.display()
        );
    }

    if let Some(db_path) = &args.db {
        let file = File::create(db_path)?;
        write_sequences(BufWriter::new(file), driver.agent().database().sequences())?;
        println!(
            "database: {} sequences -> {}",
            driver.agent().database().len(),
            db_path.display()
        );
    }
    println!("patterns: {}", driver.agent().patterns().len());
    Ok(())
}

fn write_decisions(path: &Path, decisions: &[DecisionRecord]) -> Result<(), Error> {
    let mut out = BufWriter::new(File::create(path)?);
    for d in decisions {
        serde_json::to_writer(&mut out, d).map_err(|e| Error::InvalidData(e.to_string()))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), Error> {
    let config = scenario_config(&args.minsup, &args.constraints)?;
    let policy = parse_policy(&args.policy)?;
    let mut driver = ScenarioDriver::new(config);
    let report = driver.run_batch(&policy, args.executions, args.seed)?;

    let file = File::create(&args.out)?;
    report.write_csv(BufWriter::new(file))?;

    let max_mining = report.rows.iter().map(|r| r.mining_ms).fold(0.0f64, f64::max);
    let last = report.rows.last();
    println!("executions: {}", report.rows.len());
    println!("max mining: {max_mining:.3} ms");
    if let Some(last) = last {
        println!(
            "final: {} patterns, mean size {:.2}",
            last.pattern_count, last.mean_pattern_len
        );
    }
    println!("report: {}", args.out.display());
    Ok(())
}

fn cmd_learn(args: LearnArgs) -> Result<(), Error> {
    let file = File::open(&args.patterns)?;
    let patterns: Vec<Pattern> = read_patterns(BufReader::new(file))?;

    if let Some(db_path) = &args.db {
        let db = load_database(db_path)?;
        for p in &patterns {
            let actual = support(&p.sequence, &db)?;
            if actual != p.support {
                return Err(Error::InvalidData(format!(
                    "pattern {} support {} does not re-verify against the database ({actual})",
                    p.id, p.support
                )));
            }
        }
    }

    let ids = parse_id_list(&args.history, "history")?;
    let mut history = BroadcastHistory::new(ids.len().max(1));
    for (cycle, id) in ids.into_iter().enumerate() {
        history.push(cycle as u64, id)?;
    }
    let candidates: BTreeSet<String> = parse_id_list(&args.candidates, "candidate")?.into_iter().collect();
    let fallback = args
        .fallback
        .clone()
        .unwrap_or_else(|| candidates.iter().next().expect("non-empty").clone());

    let config = LearnerConfig { relaxed_match: args.relaxed };
    let scores = score_candidates(&history, &candidates, &patterns, &config);
    for s in &scores {
        println!(
            "{} total {:.9} (best {:.9}, worst {:.9}, patterns {})",
            s.coalition,
            s.total,
            s.best_strength,
            s.worst_strength,
            s.matched_pattern_ids.len()
        );
    }
    let (chosen, provenance) = select(&scores, &fallback);
    let provenance = match provenance {
        Provenance::Episodic => "episodic",
        Provenance::Attention => "attention",
    };
    println!("selected: {chosen} ({provenance})");
    Ok(())
}

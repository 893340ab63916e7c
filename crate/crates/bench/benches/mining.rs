use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use epmem_core::agent_core::ConsolidationSchedule;
use epmem_core::demo;
use epmem_core::pattern_miner::{mine, MineParams};
use epmem_core::scenario_sim::{LearnerPolicy, ScenarioConfig, ScenarioDriver};
use epmem_core::sequence_model::SequenceDatabase;
use epmem_core::Fraction;

/// Dialogue traces accumulated without consolidating, so the benchmark
/// mines each database size from a cold start.
fn scenario_database(executions: usize) -> SequenceDatabase {
    let mut config = ScenarioConfig::default();
    config.consolidation.schedule = ConsolidationSchedule::Manual;
    let mut driver = ScenarioDriver::new(config);
    for seed in 0..executions as u64 {
        driver.run_execution(&LearnerPolicy::Random, seed).unwrap();
    }
    driver.agent().database().clone()
}

fn bench_mining(c: &mut Criterion) {
    let demo_db = demo::demo_database();
    c.bench_function("mine/demo-closed", |b| {
        let params = MineParams::new(Fraction::new(32, 100));
        b.iter(|| mine(black_box(&demo_db), &params).unwrap())
    });

    let mut group = c.benchmark_group("mine/dialogue-closed");
    group.sample_size(10);
    for executions in [20usize, 40, 80] {
        let db = scenario_database(executions);
        let params = MineParams::new(Fraction::new(25, 100))
            .with_constraints(ScenarioConfig::default().consolidation.constraints);
        group.bench_with_input(BenchmarkId::from_parameter(executions), &db, |b, db| {
            b.iter(|| mine(black_box(db), &params).unwrap())
        });
    }
    group.finish();

    let shared = demo::shared_run_database(16);
    c.bench_function("mine/shared-run-closed", |b| {
        let params = MineParams::new(Fraction::new(3, 4));
        b.iter(|| mine(black_box(&shared), &params).unwrap())
    });
}

criterion_group!(benches, bench_mining);
criterion_main!(benches);

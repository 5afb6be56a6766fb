//! Symbol-elimination benchmarks: the worked two-agent example, a fixed
//! medium instance per logic, a random batch, and the verifier itself.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use dkinterp_bench::{logic_label, sequent_batch, small_universe, LOGICS};
use dkinterp_cli::eliminate_pair;
use dkinterp_core::{parse_sequent, verify_interpolant, AgentUniverse, ElimTarget, Logic, Prover};
use std::hint::black_box;

fn bench_worked_example(c: &mut Criterion) {
    let universe = AgentUniverse::new(["1", "2"]).expect("valid universe");
    let sequent =
        parse_sequent("D{1}q & D{1}p, D{2}p => D{1}p -> D{2}r", &universe).expect("fixture parses");
    let target = ElimTarget::new("p", "1");
    c.bench_function("eliminate/worked_example_K", |b| {
        b.iter_batched(
            || Prover::new(Logic::K),
            |mut prover| {
                let (formula, trace) =
                    eliminate_pair(&mut prover, black_box(&target), &sequent).expect("in budget");
                black_box((formula, trace.node_count()))
            },
            BatchSize::SmallInput,
        );
    });
}

fn bench_fixed_instance_per_logic(c: &mut Criterion) {
    let universe = small_universe();
    let sequent =
        parse_sequent("D{a}(p & q), <D{a}>q => D{a,b}p", &universe).expect("fixture parses");
    let target = ElimTarget::new("q", "b");
    let mut group = c.benchmark_group("eliminate/fixed_medium");
    for logic in LOGICS {
        group.bench_function(logic_label(logic), |b| {
            b.iter_batched(
                || Prover::new(logic),
                |mut prover| {
                    let (formula, _) =
                        eliminate_pair(&mut prover, &target, black_box(&sequent))
                            .expect("in budget");
                    black_box(formula)
                },
                BatchSize::SmallInput,
            );
        });
    }
    group.finish();
}

fn bench_random_batch(c: &mut Criterion) {
    let universe = small_universe();
    let batch = sequent_batch(&universe, 20, 10, 0x1E0);
    let target = ElimTarget::new("p", "a");
    let mut group = c.benchmark_group("eliminate/batch_20_weight_10");
    group.sample_size(10);
    for logic in [Logic::K, Logic::KtPlus] {
        group.bench_function(logic_label(logic), |b| {
            b.iter_batched(
                || Prover::new(logic),
                |mut prover| {
                    let mut total_weight = 0u64;
                    for s in &batch {
                        let (formula, _) =
                            eliminate_pair(&mut prover, &target, s).expect("in budget");
                        total_weight += formula.weight();
                    }
                    black_box(total_weight)
                },
                BatchSize::SmallInput,
            );
        });
    }
    group.finish();
}

fn bench_verifier(c: &mut Criterion) {
    let universe = AgentUniverse::new(["1", "2"]).expect("valid universe");
    let sequent =
        parse_sequent("D{1}q & D{1}p, D{2}p => D{1}p -> D{2}r", &universe).expect("fixture parses");
    let target = ElimTarget::new("p", "1");
    let mut setup_prover = Prover::new(Logic::K);
    let (eliminant, _) = eliminate_pair(&mut setup_prover, &target, &sequent).expect("in budget");
    c.bench_function("verify/worked_example_K", |b| {
        b.iter_batched(
            || Prover::new(Logic::K),
            |mut prover| {
                let report =
                    verify_interpolant(&mut prover, &target, &sequent, black_box(&eliminant), &[])
                        .expect("verification runs");
                assert!(report.all_ok());
                black_box(report)
            },
            BatchSize::SmallInput,
        );
    });
}

criterion_group!(
    benches,
    bench_worked_example,
    bench_fixed_instance_per_logic,
    bench_random_batch,
    bench_verifier
);
criterion_main!(benches);

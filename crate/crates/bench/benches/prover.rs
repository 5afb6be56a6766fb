//! Decision-procedure benchmarks: single proofs, refutations, and batch
//! classification of a random corpus, in each supported logic.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use dkinterp_bench::{logic_label, sequent_batch, small_universe, wide_universe, LOGICS};
use dkinterp_core::{parse_sequent, Logic, Prover};
use std::hint::black_box;

fn bench_single_proofs(c: &mut Criterion) {
    let universe = wide_universe();
    let cases = [
        ("distribution", "=> D{a,b}(p -> q) -> (D{a,b}p -> D{a,b}q)"),
        ("inclusion", "=> D{a}p -> D{a,b,c}p"),
        ("nested", "D{a}D{a,b}(p & q) => D{a}D{a,b}p & D{a}D{a,b}q"),
    ];
    let mut group = c.benchmark_group("prove");
    for logic in LOGICS {
        for (name, text) in cases {
            let sequent = parse_sequent(text, &universe).expect("fixture parses");
            group.bench_function(format!("{}/{}", name, logic_label(logic)), |b| {
                b.iter_batched(
                    || Prover::new(logic),
                    |mut prover| {
                        let verdict = prover.prove(black_box(&sequent)).expect("within budget");
                        assert!(verdict.is_derivable());
                    },
                    BatchSize::SmallInput,
                );
            });
        }
    }
    group.finish();
}

fn bench_refutations(c: &mut Criterion) {
    let universe = wide_universe();
    let cases = [
        ("subgroup_gap", "D{a,b}p => D{a}p"),
        ("no_introspection", "p => D{a}p"),
    ];
    let mut group = c.benchmark_group("refute");
    for logic in LOGICS {
        for (name, text) in cases {
            let sequent = parse_sequent(text, &universe).expect("fixture parses");
            group.bench_function(format!("{}/{}", name, logic_label(logic)), |b| {
                b.iter_batched(
                    || Prover::new(logic),
                    |mut prover| {
                        let verdict = prover.prove(black_box(&sequent)).expect("within budget");
                        assert!(!verdict.is_derivable());
                    },
                    BatchSize::SmallInput,
                );
            });
        }
    }
    group.finish();
}

fn bench_corpus_classification(c: &mut Criterion) {
    let universe = small_universe();
    let batch = sequent_batch(&universe, 100, 8, 0xBEEF);
    let mut group = c.benchmark_group("classify_100_random_sequents");
    group.sample_size(20);
    for logic in LOGICS {
        group.bench_function(logic_label(logic), |b| {
            b.iter_batched(
                || Prover::new(logic),
                |mut prover| {
                    let mut derivable = 0usize;
                    for s in &batch {
                        if prover.prove(s).expect("within budget").is_derivable() {
                            derivable += 1;
                        }
                    }
                    black_box(derivable)
                },
                BatchSize::SmallInput,
            );
        });
    }
    group.finish();
}

fn bench_memoized_reuse(c: &mut Criterion) {
    // One warm prover classifying the batch repeatedly: measures the memo
    // table's steady-state cost rather than fresh search.
    let universe = small_universe();
    let batch = sequent_batch(&universe, 100, 8, 0xBEEF);
    let mut group = c.benchmark_group("classify_memoized");
    for logic in [Logic::K, Logic::KtPlus] {
        let mut prover = Prover::new(logic);
        for s in &batch {
            prover.prove(s).expect("within budget");
        }
        group.bench_function(logic_label(logic), |b| {
            b.iter(|| {
                let mut derivable = 0usize;
                for s in &batch {
                    if prover.prove(black_box(s)).expect("within budget").is_derivable() {
                        derivable += 1;
                    }
                }
                black_box(derivable)
            });
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_single_proofs,
    bench_refutations,
    bench_corpus_classification,
    bench_memoized_reuse
);
criterion_main!(benches);

//! Countermodel and finite-model benchmarks: proof-driven countermodel
//! extraction, brute-force small-model search, and the packed bitmask sweep
//! that evaluates a whole formula corpus over every small frame.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use dkinterp_bench::{formula_levels, logic_label, small_universe, LOGICS};
use dkinterp_core::{
    countermodel, enumerate_small_models, for_each_frame, frame_is_canonical, packed_frame,
    parse_sequent, FormulaBank, FrameClass, Prover, DEFAULT_MODEL_BUDGET,
};
use std::hint::black_box;

fn bench_countermodel_extraction(c: &mut Criterion) {
    let universe = small_universe();
    let cases = [
        ("subgroup_gap", "D{a,b}p => D{a}p"),
        ("no_introspection", "p => D{a}p"),
        ("diamond_mix", "p => ~D{a}~(p & q)"),
    ];
    let mut group = c.benchmark_group("countermodel");
    for logic in LOGICS {
        for (name, text) in cases {
            let sequent = parse_sequent(text, &universe).expect("fixture parses");
            group.bench_function(format!("{}/{}", name, logic_label(logic)), |b| {
                b.iter_batched(
                    || Prover::new(logic),
                    |mut prover| {
                        let (model, witness) =
                            countermodel(&mut prover, &universe, black_box(&sequent))
                                .expect("sequent is refutable");
                        black_box((model.state_count(), witness))
                    },
                    BatchSize::SmallInput,
                );
            });
        }
    }
    group.finish();
}

fn bench_small_model_search(c: &mut Criterion) {
    let universe = small_universe();
    let refutable = parse_sequent("p => D{a}p", &universe).expect("fixture parses");
    let valid = parse_sequent("D{a}p => D{a,b}p", &universe).expect("fixture parses");
    let mut group = c.benchmark_group("enumerate_small_models");
    for logic in LOGICS {
        group.bench_function(format!("hit/{}", logic_label(logic)), |b| {
            b.iter(|| {
                let found = enumerate_small_models(
                    logic,
                    &universe,
                    black_box(&refutable),
                    2,
                    DEFAULT_MODEL_BUDGET,
                )
                .expect("within budget");
                assert!(found.is_some());
                black_box(found.map(|(m, w)| (m.state_count(), w)))
            });
        });
        group.bench_function(format!("miss/{}", logic_label(logic)), |b| {
            b.iter(|| {
                let found = enumerate_small_models(
                    logic,
                    &universe,
                    black_box(&valid),
                    2,
                    DEFAULT_MODEL_BUDGET,
                )
                .expect("within budget");
                assert!(found.is_none());
                black_box(found.is_none())
            });
        });
    }
    group.finish();
}

fn bench_packed_corpus_sweep(c: &mut Criterion) {
    // Evaluate every one-variable formula up to weight 4 over every canonical
    // two-state frame, with all valuations packed into one 8-world frame.
    let universe = small_universe();
    let corpus = formula_levels(&universe, 4);
    let vars = vec!["p".to_string()];
    let groups = universe.groups();
    let bank = FormulaBank::new(corpus.iter(), &vars, &groups).expect("corpus fits in the bank");
    let mut group = c.benchmark_group("packed_sweep");
    group.sample_size(20);
    group.bench_function(format!("n2_corpus_{}", corpus.len()), |b| {
        b.iter(|| {
            let mut refuted = vec![false; bank.roots().len()];
            let mut scratch = Vec::new();
            let mut budget = DEFAULT_MODEL_BUDGET;
            for_each_frame(&universe, FrameClass::All, 2, &mut budget, &mut |frame| {
                if !frame_is_canonical(frame) {
                    return true;
                }
                let (packed, masks) = packed_frame(frame, 1);
                let view = packed.view();
                let full = (1u64 << view.state_count()) - 1;
                bank.eval_into(&view, &masks, &mut scratch);
                for (slot, &node) in bank.roots().iter().enumerate() {
                    if scratch[node] != full {
                        refuted[slot] = true;
                    }
                }
                true
            })
            .expect("within budget");
            black_box(refuted.iter().filter(|r| **r).count())
        });
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_countermodel_extraction,
    bench_small_model_search,
    bench_packed_corpus_sweep
);
criterion_main!(benches);

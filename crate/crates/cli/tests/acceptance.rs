//! Acceptance suite. Eight criteria, each printing one pass/fail line; the
//! test fails if any criterion does. Run with `--nocapture` to see the lines
//! as they complete.

use std::time::Instant;

use dkinterp_core::{
    check_proof, countermodel, enumerate_small_models, for_each_frame, frame_is_canonical,
    frame_satisfies, model_check, packed_frame, verify_interpolant, AgentUniverse, ElimTarget,
    Formula, FormulaBank, FormulaMultiset, FrameClass, Logic, Prover, Sequent, Verdict,
    DEFAULT_MODEL_BUDGET,
};

use dkinterp_cli::{
    axiom_distribution, axiom_factivity, axiom_inclusion, axiom_seriality, eliminate_pair,
    exhaustive_formulas, random_formula, random_propositional, random_sequent, ALL_LOGICS,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Descent-measure bookkeeping shared by criteria 1 through 5 and audited by
/// criterion 7.
#[derive(Default)]
struct Audit {
    search_violations: u64,
    trace_violations: u64,
    traces: u64,
    searches: u64,
}

impl Audit {
    fn absorb_prover(&mut self, prover: &Prover) {
        self.search_violations += prover.total_stats().descent_violations;
        self.searches += prover.total_stats().nodes_expanded;
    }

    fn absorb_trace(&mut self, trace: &dkinterp_core::InterpolationTrace) {
        self.trace_violations += trace.descent_violations();
        self.traces += 1;
    }
}

fn universe(names: &[&str]) -> AgentUniverse {
    AgentUniverse::new(names.iter().copied()).unwrap()
}

fn vars(names: &[&str]) -> Vec<String> {
    names.iter().map(|n| n.to_string()).collect()
}

fn criterion1(audit: &mut Audit) -> Result<String, String> {
    let start = Instant::now();
    let u = universe(&["1", "2"]);
    let s = dkinterp_core::parse_sequent("D{1}q & D{1}p, D{2}p => D{1}p -> D{2}r", &u)
        .map_err(|e| e.to_string())?;
    let target = ElimTarget::new("p", "1");
    let mut prover = Prover::new(Logic::K);
    let (result, trace) =
        eliminate_pair(&mut prover, &target, &s).map_err(|e| e.to_string())?;
    audit.absorb_prover(&prover);
    audit.absorb_trace(&trace);
    let elapsed = start.elapsed();
    if result.to_string() != "<D{2}>false | D{2}r" {
        return Err(format!("got `{result}`, want `<D{{2}}>false | D{{2}}r`"));
    }
    if elapsed.as_secs_f64() >= 1.0 {
        return Err(format!("took {elapsed:?}, cap is 1s"));
    }
    Ok(format!("`{result}` in {elapsed:?}"))
}

fn criterion2(audit: &mut Audit) -> Result<String, String> {
    let u = universe(&["a"]);
    let s = dkinterp_core::parse_sequent("p => ~D{a}~(p & q)", &u).map_err(|e| e.to_string())?;
    let mut prover = Prover::new(Logic::KtPlus);
    let verdict = prover.prove(&s).map_err(|e| e.to_string())?;
    let nodes = prover.last_stats().nodes_expanded;
    if verdict.is_derivable() {
        return Err("loop sequent came out derivable".into());
    }
    if nodes >= 1000 {
        return Err(format!("search expanded {nodes} nodes, cap is 10^3"));
    }
    let (model, witness) = countermodel(&mut prover, &u, &s).map_err(|e| e.to_string())?;
    audit.absorb_prover(&prover);
    if !frame_satisfies(&model, FrameClass::Reflexive) {
        return Err("countermodel is not reflexive".into());
    }
    for f in s.antecedent.distinct() {
        if !model_check(&model, witness, f).map_err(|e| e.to_string())? {
            return Err(format!("antecedent member {f} is false at the witness"));
        }
    }
    for f in s.succedent.distinct() {
        if model_check(&model, witness, f).map_err(|e| e.to_string())? {
            return Err(format!("succedent member {f} is true at the witness"));
        }
    }
    Ok(format!(
        "not derivable in {nodes} nodes; reflexive countermodel with {} states checks",
        model.state_count()
    ))
}

fn criterion3(audit: &mut Audit) -> Result<String, String> {
    let start = Instant::now();
    let u = universe(&["a", "b", "c"]);
    let pool = vars(&["p", "q"]);
    let mut rng = ChaCha8Rng::seed_from_u64(0xA7);
    let mut proofs = 0u64;
    let mut run = |logic: Logic,
                   instances: &mut dyn FnMut(&mut ChaCha8Rng) -> Formula|
     -> Result<(), String> {
        let mut prover = Prover::new(logic);
        for _ in 0..50 {
            let axiom = instances(&mut rng);
            let s = Sequent::new(
                FormulaMultiset::new(),
                FormulaMultiset::singleton(axiom.clone()),
            );
            match prover.prove(&s).map_err(|e| e.to_string())? {
                Verdict::NotDerivable(_) => {
                    return Err(format!("{logic:?} failed to derive instance {axiom}"));
                }
                Verdict::Derivable(tree) => {
                    check_proof(logic, &tree)
                        .map_err(|e| format!("{logic:?} proof rejected: {e}"))?;
                    proofs += 1;
                }
            }
        }
        audit.absorb_prover(&prover);
        Ok(())
    };
    for logic in ALL_LOGICS {
        run(logic, &mut |rng| axiom_distribution(rng, 4, &pool, &u))?;
        run(logic, &mut |rng| axiom_inclusion(rng, 4, &pool, &u))?;
    }
    run(Logic::Kd, &mut |rng| axiom_seriality(rng, &u))?;
    run(Logic::KtPlus, &mut |rng| axiom_factivity(rng, 4, &pool, &u))?;
    let elapsed = start.elapsed();
    if elapsed.as_secs() >= 60 {
        return Err(format!("took {elapsed:?}, cap is 60s"));
    }
    Ok(format!("{proofs} axiom instances derived and re-checked in {elapsed:?}"))
}

fn criterion4(audit: &mut Audit) -> Result<String, String> {
    let u = universe(&["a", "b", "c"]);
    let pool = vars(&["p", "q", "r"]);
    let mut rng = ChaCha8Rng::seed_from_u64(0xC4);
    let mut direct = 0u64;
    let mut side_cases = 0u64;
    for logic in ALL_LOGICS {
        let mut prover = Prover::new(logic);
        for _ in 0..200 {
            let s = random_sequent(&mut rng, 12, &pool, &u);
            let target = ElimTarget::new(
                pool[rng.gen_range(0..pool.len())].clone(),
                u.names()[rng.gen_range(0..u.len())].clone(),
            );
            let (a, trace) =
                eliminate_pair(&mut prover, &target, &s).map_err(|e| e.to_string())?;
            audit.absorb_trace(&trace);
            let report = verify_interpolant(&mut prover, &target, &s, &a, &[])
                .map_err(|e| e.to_string())?;
            if !report.vocabulary_ok {
                return Err(format!(
                    "{logic:?}: vocabulary violated eliminating {target} from {s}; got {a}"
                ));
            }
            if !report.implication_ok {
                return Err(format!(
                    "{logic:?}: `{s}` with {a} added is not derivable (target {target})"
                ));
            }
            direct += 1;
        }

        let mut per_logic_cases = 0u64;
        for i in 0..165u64 {
            let s = random_sequent(&mut rng, 10, &pool, &u);
            let target = ElimTarget::new(
                pool[rng.gen_range(0..pool.len())].clone(),
                u.names()[rng.gen_range(0..u.len())].clone(),
            );
            let (a, _) = eliminate_pair(&mut prover, &target, &s).map_err(|e| e.to_string())?;
            let side_vars: Vec<String> =
                pool.iter().filter(|v| **v != target.var).cloned().collect();
            let remaining: Vec<&str> = u
                .names()
                .iter()
                .filter(|n| **n != target.agent)
                .map(String::as_str)
                .collect();
            let su = AgentUniverse::new(remaining).unwrap();
            let mut pi = FormulaMultiset::singleton(random_formula(&mut rng, 4, &side_vars, &su));
            let mut lambda =
                FormulaMultiset::singleton(random_formula(&mut rng, 4, &side_vars, &su));
            match i % 3 {
                0 => pi.insert(Formula::bottom()),
                1 => {
                    let chi = random_propositional(&mut rng, 3, &side_vars);
                    lambda.insert(Formula::implies(chi.clone(), chi));
                }
                _ => {}
            }
            let report = verify_interpolant(&mut prover, &target, &s, &a, &[(pi, lambda)])
                .map_err(|e| e.to_string())?;
            let outcome = &report.side_tests[0];
            if outcome.premise_derivable {
                per_logic_cases += 1;
                if !outcome.conclusion_derivable {
                    return Err(format!(
                        "{logic:?}: side premise derivable but conclusion is not, \
                         eliminating {target} from {s}"
                    ));
                }
            }
        }
        if per_logic_cases < 100 {
            return Err(format!(
                "{logic:?}: only {per_logic_cases} side tuples satisfied the precondition"
            ));
        }
        side_cases += per_logic_cases;
        audit.absorb_prover(&prover);
    }
    Ok(format!(
        "conditions (i)+(ii) on {direct} instances, implication transfer on {side_cases} tuples"
    ))
}

/// One logic's share of criterion 5: decide every corpus sequent both ways,
/// build countermodels for the refutable ones, sweep every frame with at
/// most three states for falsifiers, and cross-check a sample against the
/// one-sequent enumerator.
fn oracle_sweep(
    logic: Logic,
    u: &AgentUniverse,
    corpus: &[Formula],
    bank: &FormulaBank,
    audit: &mut Audit,
) -> Result<(u64, u64), String> {
    let class = FrameClass::for_logic(logic);
    let mut prover = Prover::new(logic);

    let mut derivable_suc = vec![false; corpus.len()];
    let mut derivable_ant = vec![false; corpus.len()];
    let mut model_states_suc = vec![0usize; corpus.len()];
    let mut model_states_ant = vec![0usize; corpus.len()];
    let mut models = 0u64;

    for (i, phi) in corpus.iter().enumerate() {
        let suc = Sequent::new(FormulaMultiset::new(), FormulaMultiset::singleton(phi.clone()));
        let ant = Sequent::new(FormulaMultiset::singleton(phi.clone()), FormulaMultiset::new());
        for (s, flag, states) in [
            (&suc, &mut derivable_suc[i], &mut model_states_suc[i]),
            (&ant, &mut derivable_ant[i], &mut model_states_ant[i]),
        ] {
            if prover.derivable(s).map_err(|e| e.to_string())? {
                *flag = true;
            } else {
                let (model, witness) = countermodel(&mut prover, u, s)
                    .map_err(|e| format!("{logic:?}: no countermodel for {s}: {e}"))?;
                *states = model.state_count();
                models += 1;
                if i % 500 == 0 {
                    if !frame_satisfies(&model, class) {
                        return Err(format!("{logic:?}: countermodel frame violates {class:?}"));
                    }
                    for f in s.antecedent.distinct() {
                        if !model_check(&model, witness, f).map_err(|e| e.to_string())? {
                            return Err(format!("{logic:?}: bad witness for {s}"));
                        }
                    }
                    for f in s.succedent.distinct() {
                        if model_check(&model, witness, f).map_err(|e| e.to_string())? {
                            return Err(format!("{logic:?}: bad witness for {s}"));
                        }
                    }
                }
            }
        }
    }
    audit.absorb_prover(&prover);

    // Falsifiable-within-three-states bits for every corpus formula, on the
    // canonical representatives of the logic's frames.
    let mut refutable_suc = vec![false; corpus.len()];
    let mut refutable_ant = vec![false; corpus.len()];
    let mut buf = Vec::new();
    for n in 1..=3usize {
        let mut budget = u64::MAX;
        for_each_frame(u, class, n, &mut budget, &mut |frame| {
            if !frame_is_canonical(frame) {
                return true;
            }
            let (packed, var_masks) = packed_frame(frame, 1);
            let view = packed.view();
            let full = if view.state_count() == 64 {
                u64::MAX
            } else {
                (1u64 << view.state_count()) - 1
            };
            bank.eval_into(&view, &var_masks, &mut buf);
            for (i, &root) in bank.roots().iter().enumerate() {
                let mask = buf[root];
                if mask != full {
                    refutable_suc[i] = true;
                }
                if mask != 0 {
                    refutable_ant[i] = true;
                }
            }
            true
        })
        .map_err(|e| e.to_string())?;
    }

    for i in 0..corpus.len() {
        if derivable_suc[i] && refutable_suc[i] {
            return Err(format!(
                "{logic:?}: `=> {}` is derivable yet falsified on a small frame",
                corpus[i]
            ));
        }
        if derivable_ant[i] && refutable_ant[i] {
            return Err(format!(
                "{logic:?}: `{} =>` is derivable yet satisfied on a small frame",
                corpus[i]
            ));
        }
        if !derivable_suc[i] && model_states_suc[i] <= 3 && !refutable_suc[i] {
            return Err(format!(
                "{logic:?}: countermodel for `=> {}` has {} states but the sweep found none",
                corpus[i], model_states_suc[i]
            ));
        }
        if !derivable_ant[i] && model_states_ant[i] <= 3 && !refutable_ant[i] {
            return Err(format!(
                "{logic:?}: countermodel for `{} =>` has {} states but the sweep found none",
                corpus[i], model_states_ant[i]
            ));
        }
    }

    // Literal spot check of the one-sequent enumerator against the sweep.
    let step = (corpus.len() / 40).max(1);
    for i in (0..corpus.len()).step_by(step) {
        let s = Sequent::new(
            FormulaMultiset::new(),
            FormulaMultiset::singleton(corpus[i].clone()),
        );
        let found = enumerate_small_models(logic, u, &s, 3, DEFAULT_MODEL_BUDGET)
            .map_err(|e| e.to_string())?;
        if found.is_some() != refutable_suc[i] {
            return Err(format!(
                "{logic:?}: enumerator and sweep disagree on `=> {}`",
                corpus[i]
            ));
        }
        if let Some((model, witness)) = found {
            if derivable_suc[i] {
                return Err(format!(
                    "{logic:?}: `=> {}` derivable yet the enumerator found a model",
                    corpus[i]
                ));
            }
            if model_check(&model, witness, &corpus[i]).map_err(|e| e.to_string())? {
                return Err(format!("{logic:?}: enumerated witness fails for {}", corpus[i]));
            }
        }
    }

    let theorems = derivable_suc.iter().filter(|d| **d).count() as u64;
    Ok((theorems, models))
}

fn criterion5(audit: &mut Audit) -> Result<String, String> {
    let u = universe(&["a", "b"]);
    let corpus = exhaustive_formulas(6, &["p"], &u);
    let pool = vars(&["p"]);
    let groups = u.groups();
    let bank = FormulaBank::new(&corpus, &pool, &groups).map_err(|e| e.to_string())?;
    let mut summary = Vec::new();
    for logic in ALL_LOGICS {
        let (theorems, models) = oracle_sweep(logic, &u, &corpus, &bank, audit)?;
        summary.push(format!("{logic:?} {theorems} theorems, {models} countermodels"));
    }
    Ok(format!("{} formulas; {}", corpus.len(), summary.join("; ")))
}

fn criterion6() -> Result<String, String> {
    let u = universe(&["a", "b"]);
    let pool = vars(&["p", "q"]);
    let mut rng = ChaCha8Rng::seed_from_u64(0xC6);
    let mut summary = Vec::new();
    for logic in ALL_LOGICS {
        let mut prover = Prover::new(logic);
        let mut weakening = 0u64;
        let mut contraction = 0u64;
        let mut cut = 0u64;

        for i in 0..220 {
            let mut base = random_sequent(&mut rng, 8, &pool, &u);
            if i % 2 == 0 {
                let shared = random_formula(&mut rng, 5, &pool, &u);
                base.antecedent.insert(shared.clone());
                base.succedent.insert(shared);
            }
            let extra = random_formula(&mut rng, 6, &pool, &u);
            let on_left = rng.gen_bool(0.5);
            if prover.derivable(&base).map_err(|e| e.to_string())? {
                let mut weakened = base.clone();
                if on_left {
                    weakened.antecedent.insert(extra);
                } else {
                    weakened.succedent.insert(extra);
                }
                if !prover.derivable(&weakened).map_err(|e| e.to_string())? {
                    return Err(format!("{logic:?}: weakening failed on {base}"));
                }
                weakening += 1;
            }
        }

        for i in 0..220 {
            let mut s = random_sequent(&mut rng, 8, &pool, &u);
            let phi = random_formula(&mut rng, 6, &pool, &u);
            let on_left = rng.gen_bool(0.5);
            if on_left {
                s.antecedent.insert(phi.clone());
                s.antecedent.insert(phi.clone());
            } else {
                s.succedent.insert(phi.clone());
                s.succedent.insert(phi.clone());
            }
            if i % 2 == 0 {
                if on_left {
                    s.succedent.insert(phi.clone());
                } else {
                    s.antecedent.insert(phi.clone());
                }
            }
            if prover.derivable(&s).map_err(|e| e.to_string())? {
                let mut contracted = s.clone();
                let removed = if on_left {
                    contracted.antecedent.remove_one(&phi)
                } else {
                    contracted.succedent.remove_one(&phi)
                };
                assert!(removed);
                if !prover.derivable(&contracted).map_err(|e| e.to_string())? {
                    return Err(format!("{logic:?}: contraction failed on {s}"));
                }
                contraction += 1;
            }
        }

        for i in 0..220 {
            let mut base = random_sequent(&mut rng, 8, &pool, &u);
            if i % 2 == 0 {
                let shared = random_formula(&mut rng, 5, &pool, &u);
                base.antecedent.insert(shared.clone());
                base.succedent.insert(shared);
            }
            let phi = random_formula(&mut rng, 6, &pool, &u);
            let left = Sequent::new(base.antecedent.clone(), base.succedent.with(phi.clone()));
            let right = Sequent::new(base.antecedent.with(phi), base.succedent.clone());
            if prover.derivable(&left).map_err(|e| e.to_string())?
                && prover.derivable(&right).map_err(|e| e.to_string())?
            {
                if !prover.derivable(&base).map_err(|e| e.to_string())? {
                    return Err(format!("{logic:?}: cut failed on {base}"));
                }
                cut += 1;
            }
        }

        for (name, count) in
            [("weakening", weakening), ("contraction", contraction), ("cut", cut)]
        {
            if count < 100 {
                return Err(format!("{logic:?}: only {count} {name} instances applied"));
            }
        }
        summary.push(format!(
            "{logic:?} {weakening}/{contraction}/{cut}"
        ));
    }
    Ok(format!("weakening/contraction/cut instances per logic: {}", summary.join(", ")))
}

fn criterion7(audit: &Audit) -> Result<String, String> {
    if audit.search_violations != 0 || audit.trace_violations != 0 {
        return Err(format!(
            "{} search and {} trace descent violations",
            audit.search_violations, audit.trace_violations
        ));
    }
    Ok(format!(
        "zero violations over {} expanded goals and {} elimination traces",
        audit.searches, audit.traces
    ))
}

fn criterion8() -> Result<String, String> {
    let exe = env!("CARGO_BIN_EXE_dkinterp");
    let run = || {
        std::process::Command::new(exe)
            .args([
                "selftest",
                "--agents",
                "a,b",
                "--seed",
                "42",
                "--count",
                "24",
                "--max-weight",
                "6",
                "--var-pool",
                "2",
            ])
            .output()
            .map_err(|e| e.to_string())
    };
    let first = run()?;
    let second = run()?;
    if !first.status.success() {
        return Err(format!(
            "selftest failed:\n{}",
            String::from_utf8_lossy(&first.stdout)
        ));
    }
    if first.stdout != second.stdout {
        return Err("repeated selftest runs differ".into());
    }
    if first.stdout.is_empty() {
        return Err("selftest produced no report".into());
    }
    Ok(format!("two runs, byte-identical {}-byte reports", first.stdout.len()))
}

#[test]
fn acceptance() {
    let mut audit = Audit::default();
    let mut results: Vec<(u32, Result<String, String>)> = Vec::new();
    results.push((1, criterion1(&mut audit)));
    results.push((2, criterion2(&mut audit)));
    results.push((3, criterion3(&mut audit)));
    results.push((4, criterion4(&mut audit)));
    results.push((5, criterion5(&mut audit)));
    results.push((6, criterion6()));
    results.push((7, criterion7(&audit)));
    results.push((8, criterion8()));

    let mut failed = false;
    for (n, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {n}: PASS - {detail}"),
            Err(reason) => {
                failed = true;
                println!("criterion {n}: FAIL - {reason}");
            }
        }
    }
    assert!(!failed, "at least one acceptance criterion failed");
}

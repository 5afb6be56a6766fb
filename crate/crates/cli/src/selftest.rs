//! Seeded self-test suites: structural-rule admissibility probes, interpolant
//! condition probes, prover-versus-semantics agreement on a small exhaustive
//! corpus, and a tally of proof-checker re-validations. The report is plain
//! JSON and depends only on the flags and the seed.

use dkinterp_core::{
    check_proof, countermodel, enumerate_small_models, verify_interpolant, AgentUniverse,
    ElimTarget, FormulaMultiset, Logic, Prover, Sequent, Verdict,
    DEFAULT_MODEL_BUDGET,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands::{eliminate_pair, ALL_LOGICS};
use crate::config::{RandomCorpusSpec, SessionConfig};
use crate::corpus::{exhaustive_formulas, random_formula, random_propositional, random_sequent};

const VAR_NAMES: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    cases: u64,
    failures: u64,
}

impl Tally {
    fn pass(&mut self) {
        self.cases += 1;
    }

    fn fail(&mut self) {
        self.cases += 1;
        self.failures += 1;
    }

    fn record(&mut self, ok: bool) {
        if ok {
            self.pass()
        } else {
            self.fail()
        }
    }
}

fn logic_label(logic: Logic) -> &'static str {
    match logic {
        Logic::K => "K",
        Logic::Kd => "KD",
        Logic::KtPlus => "KTplus",
    }
}

/// True when the sequent is derivable; budget exhaustion counts as failure
/// at the call site, so it maps to an `Err` here.
fn derivable(prover: &mut Prover, s: &Sequent) -> Result<bool, ()> {
    prover.derivable(s).map_err(|_| ())
}

/// A sequent that is derivable by construction: a shared formula occurrence
/// is planted on both sides of random context.
fn seeded_derivable(
    rng: &mut ChaCha8Rng,
    max_weight: u64,
    vars: &[String],
    universe: &AgentUniverse,
) -> Sequent {
    let mut s = random_sequent(rng, max_weight, vars, universe);
    let shared = random_formula(rng, max_weight.min(5), vars, universe);
    s.antecedent.insert(shared.clone());
    s.succedent.insert(shared);
    s
}

fn structural_suite(
    cfg: &SessionConfig,
    spec: &RandomCorpusSpec,
    rng: &mut ChaCha8Rng,
    vars: &[String],
    attempts: u64,
    checker: &mut Tally,
) -> Tally {
    let mut tally = Tally::default();
    let u = &cfg.universe;
    let w = spec.max_weight;
    for logic in ALL_LOGICS {
        let mut prover = Prover::with_budget(logic, cfg.budget);

        for i in 0..attempts {
            let base = if i % 2 == 0 {
                seeded_derivable(rng, w, vars, u)
            } else {
                random_sequent(rng, w, vars, u)
            };
            let extra = random_formula(rng, w.min(6), vars, u);
            let on_left = rng.gen_bool(0.5);
            match derivable(&mut prover, &base) {
                Err(()) => tally.fail(),
                Ok(false) => {}
                Ok(true) => {
                    if let Verdict::Derivable(tree) = prover.prove(&base).unwrap() {
                        checker.record(check_proof(logic, &tree).is_ok());
                    }
                    let mut weakened = base.clone();
                    if on_left {
                        weakened.antecedent.insert(extra);
                    } else {
                        weakened.succedent.insert(extra);
                    }
                    tally.record(derivable(&mut prover, &weakened) == Ok(true));
                }
            }
        }

        for i in 0..attempts {
            let mut s = random_sequent(rng, w, vars, u);
            let phi = random_formula(rng, w.min(6), vars, u);
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
            match derivable(&mut prover, &s) {
                Err(()) => tally.fail(),
                Ok(false) => {}
                Ok(true) => {
                    let mut contracted = s.clone();
                    let removed = if on_left {
                        contracted.antecedent.remove_one(&phi)
                    } else {
                        contracted.succedent.remove_one(&phi)
                    };
                    assert!(removed, "the duplicated formula is present");
                    tally.record(derivable(&mut prover, &contracted) == Ok(true));
                }
            }
        }

        for i in 0..attempts {
            let base = if i % 2 == 0 {
                seeded_derivable(rng, w, vars, u)
            } else {
                random_sequent(rng, w, vars, u)
            };
            let phi = random_formula(rng, w.min(6), vars, u);
            let left = Sequent::new(base.antecedent.clone(), base.succedent.with(phi.clone()));
            let right = Sequent::new(base.antecedent.with(phi), base.succedent.clone());
            match (derivable(&mut prover, &left), derivable(&mut prover, &right)) {
                (Err(()), _) | (_, Err(())) => tally.fail(),
                (Ok(true), Ok(true)) => {
                    tally.record(derivable(&mut prover, &base) == Ok(true));
                }
                _ => {}
            }
        }
    }
    tally
}

fn conditions_suite(
    cfg: &SessionConfig,
    spec: &RandomCorpusSpec,
    rng: &mut ChaCha8Rng,
    vars: &[String],
    attempts: u64,
    side_attempts: u64,
) -> Tally {
    let mut tally = Tally::default();
    let u = &cfg.universe;
    let w = spec.max_weight.min(12);
    for logic in ALL_LOGICS {
        let mut prover = Prover::with_budget(logic, cfg.budget);

        for _ in 0..attempts {
            let s = random_sequent(rng, w, vars, u);
            let target = ElimTarget::new(
                vars[rng.gen_range(0..vars.len())].clone(),
                u.names()[rng.gen_range(0..u.len())].clone(),
            );
            match eliminate_pair(&mut prover, &target, &s) {
                Err(_) => tally.fail(),
                Ok((a, _)) => match verify_interpolant(&mut prover, &target, &s, &a, &[]) {
                    Err(_) => tally.fail(),
                    Ok(report) => tally.record(report.all_ok()),
                },
            }
        }

        for _ in 0..side_attempts {
            let s = random_sequent(rng, w, vars, u);
            let target = ElimTarget::new(
                vars[rng.gen_range(0..vars.len())].clone(),
                u.names()[rng.gen_range(0..u.len())].clone(),
            );
            let Ok((a, _)) = eliminate_pair(&mut prover, &target, &s) else {
                tally.fail();
                continue;
            };
            let side_vars: Vec<String> =
                vars.iter().filter(|v| **v != target.var).cloned().collect();
            let side_vars = if side_vars.is_empty() {
                vec!["aux".to_string()]
            } else {
                side_vars
            };
            let remaining: Vec<&str> = u
                .names()
                .iter()
                .filter(|n| **n != target.agent)
                .map(String::as_str)
                .collect();
            let side_universe = AgentUniverse::new(remaining).ok();
            let side = |rng: &mut ChaCha8Rng| {
                let mut m = FormulaMultiset::new();
                for _ in 0..rng.gen_range(1..=2) {
                    let f = match &side_universe {
                        Some(su) => random_formula(rng, 4, &side_vars, su),
                        None => random_propositional(rng, 4, &side_vars),
                    };
                    m.insert(f);
                }
                m
            };
            let tests = vec![(side(rng), side(rng))];
            match verify_interpolant(&mut prover, &target, &s, &a, &tests) {
                Err(_) => tally.fail(),
                Ok(report) => {
                    for outcome in &report.side_tests {
                        if outcome.premise_derivable {
                            tally.record(outcome.conclusion_derivable);
                        }
                    }
                }
            }
        }
    }
    tally
}

fn oracle_suite(cfg: &SessionConfig, spec: &RandomCorpusSpec, checker: &mut Tally) -> Tally {
    let mut tally = Tally::default();
    let names = cfg.universe.names();
    let tiny = AgentUniverse::new(names.iter().take(2).map(String::as_str))
        .expect("a session universe is nonempty");
    let corpus = exhaustive_formulas(spec.max_weight.min(4), &["p"], &tiny);
    for logic in ALL_LOGICS {
        let mut prover = Prover::with_budget(logic, cfg.budget);
        for phi in &corpus {
            let s = Sequent::new(
                FormulaMultiset::new(),
                FormulaMultiset::singleton(phi.clone()),
            );
            match prover.prove(&s) {
                Err(_) => tally.fail(),
                Ok(Verdict::Derivable(tree)) => {
                    checker.record(check_proof(logic, &tree).is_ok());
                    match enumerate_small_models(logic, &tiny, &s, 2, DEFAULT_MODEL_BUDGET) {
                        Ok(None) => tally.pass(),
                        Ok(Some(_)) | Err(_) => tally.fail(),
                    }
                }
                Ok(Verdict::NotDerivable(_)) => {
                    tally.record(countermodel(&mut prover, &tiny, &s).is_ok());
                }
            }
        }
    }
    tally
}

/// Runs every suite and assembles the report. The boolean is the overall
/// verdict: no suite recorded a failure.
pub fn run(cfg: &SessionConfig, spec: &RandomCorpusSpec) -> (serde_json::Value, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let pool = spec.var_pool.clamp(1, VAR_NAMES.len());
    let vars: Vec<String> = VAR_NAMES[..pool].iter().map(|v| v.to_string()).collect();
    let empty = spec.max_weight == 0 || spec.formula_count == 0;
    let attempts = if empty { 0 } else { spec.formula_count / 4 };
    let side_attempts = if empty { 0 } else { (spec.formula_count / 8).max(1) };

    let mut checker = Tally::default();
    let structural = structural_suite(cfg, spec, &mut rng, &vars, attempts, &mut checker);
    let conditions = if empty {
        Tally::default()
    } else {
        conditions_suite(cfg, spec, &mut rng, &vars, attempts, side_attempts)
    };
    let oracle = oracle_suite(cfg, spec, &mut checker);

    let suites = [
        ("structural_admissibility", structural),
        ("interpolant_conditions", conditions),
        ("oracle_agreement", oracle),
        ("proof_checker", checker),
    ];
    let pass = suites.iter().all(|(_, t)| t.failures == 0);
    let report = serde_json::json!({
        "logics": ALL_LOGICS.iter().map(|l| logic_label(*l)).collect::<Vec<_>>(),
        "spec": {
            "formula_count": spec.formula_count,
            "max_weight": spec.max_weight,
            "var_pool": pool as u64,
            "seed": spec.seed,
        },
        "suites": suites
            .iter()
            .map(|(name, t)| {
                serde_json::json!({
                    "name": name,
                    "cases": t.cases,
                    "failures": t.failures,
                })
            })
            .collect::<Vec<_>>(),
        "pass": pass,
    });
    (report, pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SessionConfig;

    fn config() -> SessionConfig {
        SessionConfig::new(
            "k",
            &["a".to_string(), "b".to_string()],
            None,
            "text",
            7,
        )
        .unwrap()
    }

    #[test]
    fn default_run_passes_and_repeats() {
        let cfg = config();
        let spec = RandomCorpusSpec { formula_count: 24, max_weight: 6, var_pool: 2, seed: 7 };
        let (report, pass) = run(&cfg, &spec);
        assert!(pass, "selftest failed: {report:#}");
        let (again, _) = run(&cfg, &spec);
        assert_eq!(report.to_string(), again.to_string());
    }

    #[test]
    fn zero_weight_corpus_passes_vacuously() {
        let cfg = config();
        let spec = RandomCorpusSpec { formula_count: 24, max_weight: 0, var_pool: 2, seed: 7 };
        let (report, pass) = run(&cfg, &spec);
        assert!(pass);
        for suite in report["suites"].as_array().unwrap() {
            assert_eq!(suite["cases"].as_u64(), Some(0));
        }
    }

    #[test]
    fn different_seeds_draw_different_corpora() {
        let cfg = config();
        let a = RandomCorpusSpec { formula_count: 24, max_weight: 6, var_pool: 2, seed: 1 };
        let b = RandomCorpusSpec { seed: 2, ..a };
        let (ra, _) = run(&cfg, &a);
        let (rb, _) = run(&cfg, &b);
        assert_ne!(ra.to_string(), rb.to_string());
    }
}

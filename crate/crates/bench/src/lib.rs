//! Shared fixtures for the benchmark targets.
//!
//! Each helper builds a deterministic workload so that numbers are comparable
//! across runs and machines: fixed agent universes, fixed seeds, and corpora
//! drawn from the same generators the command-line self-test uses.

use dkinterp_cli::corpus::{exhaustive_formulas, random_sequent};
use dkinterp_core::{AgentUniverse, Formula, Logic, Sequent};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Two-agent universe used by most fixtures.
pub fn small_universe() -> AgentUniverse {
    AgentUniverse::new(["a", "b"]).expect("valid universe")
}

/// Three-agent universe for workloads that exercise group reasoning.
pub fn wide_universe() -> AgentUniverse {
    AgentUniverse::new(["a", "b", "c"]).expect("valid universe")
}

/// A deterministic batch of random sequents with the given weight ceiling.
pub fn sequent_batch(
    universe: &AgentUniverse,
    count: usize,
    max_weight: u64,
    seed: u64,
) -> Vec<Sequent> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars: Vec<String> = ["p", "q", "r"].iter().map(|s| s.to_string()).collect();
    (0..count)
        .map(|_| random_sequent(&mut rng, max_weight, &vars, universe))
        .collect()
}

/// Every formula over one variable up to the given weight, smallest first.
pub fn formula_levels(universe: &AgentUniverse, max_weight: u64) -> Vec<Formula> {
    exhaustive_formulas(max_weight, &["p"], universe)
}

/// The three supported logics, in increasing strength order.
pub const LOGICS: [Logic; 3] = [Logic::K, Logic::Kd, Logic::KtPlus];

/// Short stable label for a logic, used in benchmark ids.
pub fn logic_label(logic: Logic) -> &'static str {
    match logic {
        Logic::K => "K",
        Logic::Kd => "KD",
        Logic::KtPlus => "KT",
    }
}

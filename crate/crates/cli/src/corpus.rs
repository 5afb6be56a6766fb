//! Formula and sequent generators: the exhaustive weight-bounded corpus and
//! seeded random streams used by the self-test runner and the test suites.

use dkinterp_core::{AgentUniverse, Formula, FormulaMultiset, Group, Sequent};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Every formula of weight at most `max_weight` over the given variables and
/// all nonempty groups of the universe, in a fixed order: by weight, then by
/// the canonical formula order within each weight.
pub fn exhaustive_formulas(
    max_weight: u64,
    vars: &[&str],
    universe: &AgentUniverse,
) -> Vec<Formula> {
    let groups = universe.groups();
    let cap = max_weight as usize;
    let mut by_weight: Vec<Vec<Formula>> = vec![Vec::new(); cap + 1];
    if cap >= 1 {
        let mut level = vec![Formula::bottom()];
        level.extend(vars.iter().map(|v| Formula::var(*v)));
        level.sort();
        level.dedup();
        by_weight[1] = level;
    }
    for w in 2..=cap {
        let mut level = Vec::new();
        for f in &by_weight[w - 1] {
            level.push(Formula::not(f.clone()));
            for g in &groups {
                level.push(Formula::dist(g.clone(), f.clone()));
            }
        }
        for wl in 1..w.saturating_sub(1) {
            let wr = w - 1 - wl;
            for l in &by_weight[wl] {
                for r in &by_weight[wr] {
                    level.push(Formula::and(l.clone(), r.clone()));
                    level.push(Formula::or(l.clone(), r.clone()));
                    level.push(Formula::implies(l.clone(), r.clone()));
                }
            }
        }
        level.sort();
        by_weight[w] = level;
    }
    by_weight.into_iter().flatten().collect()
}

/// A uniformly chosen nonempty subset of the universe.
pub fn random_group(rng: &mut ChaCha8Rng, universe: &AgentUniverse) -> Group {
    let names = universe.names();
    let mut picked: Vec<&str> = names
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .map(String::as_str)
        .collect();
    if picked.is_empty() {
        picked.push(names[rng.gen_range(0..names.len())].as_str());
    }
    Group::new(picked).expect("nonempty subset of a valid universe")
}

/// A random formula of weight at most `budget` (at least 1).
pub fn random_formula(
    rng: &mut ChaCha8Rng,
    budget: u64,
    vars: &[String],
    universe: &AgentUniverse,
) -> Formula {
    let b = budget.max(1);
    let mut options: Vec<u8> = vec![0, 0, 1];
    if b >= 2 {
        options.extend([2, 2, 3, 3]);
    }
    if b >= 3 {
        options.extend([4, 5, 6]);
    }
    if b >= 4 {
        options.push(7);
    }
    match options[rng.gen_range(0..options.len())] {
        0 => Formula::var(vars[rng.gen_range(0..vars.len())].clone()),
        1 => Formula::bottom(),
        2 => Formula::not(random_formula(rng, b - 1, vars, universe)),
        3 => Formula::dist(random_group(rng, universe), random_formula(rng, b - 1, vars, universe)),
        7 => Formula::dia(random_group(rng, universe), random_formula(rng, b - 3, vars, universe)),
        binary => {
            let left_budget = rng.gen_range(1..=b - 2);
            let left = random_formula(rng, left_budget, vars, universe);
            let right = random_formula(rng, b - 1 - left_budget, vars, universe);
            match binary {
                4 => Formula::and(left, right),
                5 => Formula::or(left, right),
                _ => Formula::implies(left, right),
            }
        }
    }
}

/// A random box-free formula of weight at most `budget`, for contexts that
/// must avoid every agent symbol.
pub fn random_propositional(rng: &mut ChaCha8Rng, budget: u64, vars: &[String]) -> Formula {
    let b = budget.max(1);
    let mut options: Vec<u8> = vec![0, 0, 1];
    if b >= 2 {
        options.extend([2, 2]);
    }
    if b >= 3 {
        options.extend([3, 4, 5]);
    }
    match options[rng.gen_range(0..options.len())] {
        0 => Formula::var(vars[rng.gen_range(0..vars.len())].clone()),
        1 => Formula::bottom(),
        2 => Formula::not(random_propositional(rng, b - 1, vars)),
        binary => {
            let left_budget = rng.gen_range(1..=b - 2);
            let left = random_propositional(rng, left_budget, vars);
            let right = random_propositional(rng, b - 1 - left_budget, vars);
            match binary {
                3 => Formula::and(left, right),
                4 => Formula::or(left, right),
                _ => Formula::implies(left, right),
            }
        }
    }
}

/// A random sequent whose two sides together weigh at most `max_weight`.
/// Either side may come out empty.
pub fn random_sequent(
    rng: &mut ChaCha8Rng,
    max_weight: u64,
    vars: &[String],
    universe: &AgentUniverse,
) -> Sequent {
    let count = rng.gen_range(1..=4u64).min(max_weight.max(1));
    let mut remaining = max_weight.max(1);
    let mut antecedent = FormulaMultiset::new();
    let mut succedent = FormulaMultiset::new();
    for slot in 0..count {
        let slots_left = count - slot;
        if remaining < slots_left {
            break;
        }
        let cap = remaining - (slots_left - 1);
        let w = rng.gen_range(1..=cap);
        let f = random_formula(rng, w, vars, universe);
        remaining -= f.weight().min(remaining);
        if rng.gen_bool(0.5) {
            antecedent.insert(f);
        } else {
            succedent.insert(f);
        }
    }
    Sequent::new(antecedent, succedent)
}

/// Distribution axiom: D_G(α→β) → (D_Gα → D_Gβ).
pub fn axiom_distribution(
    rng: &mut ChaCha8Rng,
    weight: u64,
    vars: &[String],
    universe: &AgentUniverse,
) -> Formula {
    let g = random_group(rng, universe);
    let alpha = random_formula(rng, weight, vars, universe);
    let beta = random_formula(rng, weight, vars, universe);
    Formula::implies(
        Formula::dist(g.clone(), Formula::implies(alpha.clone(), beta.clone())),
        Formula::implies(Formula::dist(g.clone(), alpha), Formula::dist(g, beta)),
    )
}

/// Group-inclusion axiom: D_Gα → D_Hα with G ⊆ H.
pub fn axiom_inclusion(
    rng: &mut ChaCha8Rng,
    weight: u64,
    vars: &[String],
    universe: &AgentUniverse,
) -> Formula {
    let h = random_group(rng, universe);
    let members = h.members();
    let mut picked: Vec<&str> = members
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .map(String::as_str)
        .collect();
    if picked.is_empty() {
        picked.push(members[rng.gen_range(0..members.len())].as_str());
    }
    let g = Group::new(picked).expect("nonempty subset of a group");
    let alpha = random_formula(rng, weight, vars, universe);
    Formula::implies(Formula::dist(g, alpha.clone()), Formula::dist(h, alpha))
}

/// Single-agent seriality axiom: ¬D_{a}⊥.
pub fn axiom_seriality(rng: &mut ChaCha8Rng, universe: &AgentUniverse) -> Formula {
    let names = universe.names();
    let agent = names[rng.gen_range(0..names.len())].clone();
    Formula::not(Formula::dist(Group::singleton(agent), Formula::bottom()))
}

/// Factivity axiom: D_Gα → α.
pub fn axiom_factivity(
    rng: &mut ChaCha8Rng,
    weight: u64,
    vars: &[String],
    universe: &AgentUniverse,
) -> Formula {
    let g = random_group(rng, universe);
    let alpha = random_formula(rng, weight, vars, universe);
    Formula::implies(Formula::dist(g, alpha.clone()), alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn universe() -> AgentUniverse {
        AgentUniverse::new(["a", "b"]).unwrap()
    }

    #[test]
    fn exhaustive_counts_grow_as_expected() {
        let u = universe();
        // Weight 1: p, ⊥. Weight 2: one negation and three boxes of each.
        assert_eq!(exhaustive_formulas(1, &["p"], &u).len(), 2);
        assert_eq!(exhaustive_formulas(2, &["p"], &u).len(), 2 + 8);
        assert_eq!(exhaustive_formulas(3, &["p"], &u).len(), 2 + 8 + 44);
        assert_eq!(exhaustive_formulas(4, &["p"], &u).len(), 54 + 272);
    }

    #[test]
    fn exhaustive_formulas_respect_the_weight_bound() {
        let u = universe();
        let all = exhaustive_formulas(4, &["p", "q"], &u);
        assert!(all.iter().all(|f| f.weight() <= 4));
        let mut sorted = all.clone();
        sorted.sort_by_key(|f| f.weight());
        let weights: Vec<u64> = all.iter().map(Formula::weight).collect();
        let mut expected = weights.clone();
        expected.sort();
        assert_eq!(weights, expected, "corpus is ordered by weight");
    }

    #[test]
    fn random_streams_repeat_with_the_seed() {
        let u = universe();
        let vars = vec!["p".to_string(), "q".to_string()];
        let sample = |seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..20)
                .map(|_| random_formula(&mut rng, 9, &vars, &u).to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(sample(11), sample(11));
        assert_ne!(sample(11), sample(12));
    }

    #[test]
    fn random_formulas_respect_the_weight_budget() {
        let u = universe();
        let vars = vec!["p".to_string()];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let budget = rng.gen_range(1..=10);
            let f = random_formula(&mut rng, budget, &vars, &u);
            assert!(f.weight() <= budget, "{f} weighs {} > {budget}", f.weight());
        }
    }

    #[test]
    fn random_sequents_respect_the_total_weight() {
        let u = universe();
        let vars = vec!["p".to_string(), "q".to_string()];
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let s = random_sequent(&mut rng, 12, &vars, &u);
            assert!(s.antecedent.weight() + s.succedent.weight() <= 12);
        }
    }

    #[test]
    fn axiom_shapes_parse_back() {
        let u = universe();
        let vars = vec!["p".to_string()];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = axiom_inclusion(&mut rng, 4, &vars, &u);
        let printed = f.to_string();
        assert_eq!(
            dkinterp_core::parse_formula(&printed, &u).unwrap(),
            f,
            "axiom instances print and reparse"
        );
    }
}

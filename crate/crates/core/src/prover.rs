//! Backward proof search: deterministic decomposition, branching on the
//! modal rules, memoization over collapsed goals, and a node budget.
//!
//! A single `prove` call is sequential. Distinct `Prover` values may run
//! concurrently; nothing here synchronizes a shared one.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::calculus::{enumerate_backward_moves, Goal, Logic, Move, ProofTree, RuleTag};
use crate::sequents::{measure_lt, Sequent, TSequent};

/// Default search budget, in expanded nodes per call.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ProveError {
    #[error("search budget of {limit} nodes exceeded")]
    BudgetExceeded { limit: u64 },
}

/// Search outcome: a derivation, or the critical dead ends the exhausted
/// search bottomed out at. The dead-end list is never empty and is sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Derivable(ProofTree),
    NotDerivable(Vec<Goal>),
}

impl Verdict {
    pub fn is_derivable(&self) -> bool {
        matches!(self, Verdict::Derivable(_))
    }

    pub fn proof(&self) -> Option<&ProofTree> {
        match self {
            Verdict::Derivable(tree) => Some(tree),
            Verdict::NotDerivable(_) => None,
        }
    }

    pub fn dead_ends(&self) -> Option<&[Goal]> {
        match self {
            Verdict::Derivable(_) => None,
            Verdict::NotDerivable(deads) => Some(deads),
        }
    }
}

/// Decided goals, keyed by logic and collapsed goal. Contraction is
/// height-preserving admissible and weakening admissible, so a goal and its
/// collapsed form are derivable together, which is what makes this key sound.
///
/// For each refuted key one representative dead-end goal is kept, so later
/// hits can still report a concrete critical sequent.
#[derive(Debug, Default)]
pub struct MemoTable {
    decided: HashMap<(Logic, Goal), bool>,
    dead_rep: HashMap<(Logic, Goal), Goal>,
}

impl MemoTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, logic: Logic, goal: &Goal) -> Option<bool> {
        self.decided.get(&(logic, goal.clone())).copied()
    }

    pub fn len(&self) -> usize {
        self.decided.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decided.is_empty()
    }

    pub fn clear(&mut self) {
        self.decided.clear();
        self.dead_rep.clear();
    }

    fn insert_derivable(&mut self, key: (Logic, Goal)) {
        self.decided.insert(key, true);
    }

    fn insert_refuted(&mut self, key: (Logic, Goal), representative: Goal) {
        self.decided.insert(key.clone(), false);
        self.dead_rep.insert(key, representative);
    }

    fn representative(&self, key: &(Logic, Goal)) -> &Goal {
        self.dead_rep.get(key).expect("refuted key always has a representative")
    }
}

/// Counters for one `prove` call (`last_stats`) and the prover's lifetime
/// (`total_stats`).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Goals expanded, the budgeted quantity.
    pub nodes_expanded: u64,
    pub memo_hits: u64,
    /// Enumerated premises whose termination measure failed to drop below
    /// the conclusion's. Always zero unless the calculus is broken.
    pub descent_violations: u64,
}

impl SearchStats {
    fn absorb(&mut self, other: &SearchStats) {
        self.nodes_expanded += other.nodes_expanded;
        self.memo_hits += other.memo_hits;
        self.descent_violations += other.descent_violations;
    }
}

/// Backward proof search for one logic, with a memo shared across calls.
#[derive(Debug)]
pub struct Prover {
    logic: Logic,
    memo: MemoTable,
    budget: u64,
    last: SearchStats,
    total: SearchStats,
}

impl Prover {
    pub fn new(logic: Logic) -> Self {
        Self::with_budget(logic, DEFAULT_BUDGET)
    }

    pub fn with_budget(logic: Logic, budget: u64) -> Self {
        Self {
            logic,
            memo: MemoTable::new(),
            budget,
            last: SearchStats::default(),
            total: SearchStats::default(),
        }
    }

    pub fn logic(&self) -> Logic {
        self.logic
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn set_budget(&mut self, budget: u64) {
        self.budget = budget;
    }

    pub fn memo(&self) -> &MemoTable {
        &self.memo
    }

    /// Counters of the most recent `prove` call.
    pub fn last_stats(&self) -> SearchStats {
        self.last
    }

    /// Counters accumulated over the prover's lifetime.
    pub fn total_stats(&self) -> SearchStats {
        self.total
    }

    /// Decides a plain sequent. Under `KTplus` the sequent is embedded with
    /// an empty store, which is how the reflexive logic is defined.
    pub fn prove(&mut self, sequent: &Sequent) -> Result<Verdict, ProveError> {
        let goal = match self.logic {
            Logic::K | Logic::Kd => Goal::Plain(sequent.clone()),
            Logic::KtPlus => Goal::embedded(sequent),
        };
        self.prove_goal(&goal)
    }

    /// Decides a T-sequent; only meaningful for `KTplus`.
    pub fn prove_tsequent(&mut self, tsequent: &TSequent) -> Result<Verdict, ProveError> {
        assert_eq!(self.logic, Logic::KtPlus, "T-sequents belong to KTplus");
        self.prove_goal(&Goal::Stored(tsequent.clone()))
    }

    /// Decides a goal already in the logic's shape.
    pub fn prove_goal(&mut self, goal: &Goal) -> Result<Verdict, ProveError> {
        self.last = SearchStats::default();
        let mut deads = BTreeSet::new();
        let mut used = 0u64;
        let result = self.search(goal, &mut deads, &mut used);
        self.total.absorb(&self.last);
        match result? {
            Some(tree) => Ok(Verdict::Derivable(tree)),
            None => Ok(Verdict::NotDerivable(deads.into_iter().collect())),
        }
    }

    pub fn derivable(&mut self, sequent: &Sequent) -> Result<bool, ProveError> {
        Ok(self.prove(sequent)?.is_derivable())
    }

    fn search(
        &mut self,
        goal: &Goal,
        deads: &mut BTreeSet<Goal>,
        used: &mut u64,
    ) -> Result<Option<ProofTree>, ProveError> {
        *used += 1;
        self.last.nodes_expanded += 1;
        if *used > self.budget {
            return Err(ProveError::BudgetExceeded { limit: self.budget });
        }

        let key = (self.logic, goal.collapsed());
        let known = self.memo.get(self.logic, &key.1);
        match known {
            Some(false) => {
                self.last.memo_hits += 1;
                deads.insert(self.memo.representative(&key).clone());
                return Ok(None);
            }
            Some(true) => {
                // The verdict is known but a proof of this exact goal is
                // still wanted, so expansion proceeds; it cannot fail.
                self.last.memo_hits += 1;
            }
            None => {}
        }

        let moves = enumerate_backward_moves(self.logic, goal);
        let goal_measure = goal.measure();
        for mv in &moves {
            for premise in &mv.premises {
                if !measure_lt(&premise.measure(), &goal_measure) {
                    self.last.descent_violations += 1;
                }
            }
        }

        if let Some(mv) = moves.iter().find(|m| m.rule.is_axiom()) {
            if known.is_none() {
                self.memo.insert_derivable(key);
            }
            return Ok(Some(leaf(goal, mv)));
        }

        // The logical rules and the box-to-store transfer are invertible, so
        // the first such move can be committed to without backtracking.
        if let Some(mv) = moves.iter().find(|m| !is_branching(m.rule)) {
            let mut local = BTreeSet::new();
            let mut children = Vec::with_capacity(mv.premises.len());
            for premise in &mv.premises {
                match self.search(premise, &mut local, used)? {
                    Some(tree) => children.push(tree),
                    None => {
                        return Ok(self.refute(key, known, local, deads));
                    }
                }
            }
            if known.is_none() {
                self.memo.insert_derivable(key);
            }
            return Ok(Some(node(goal, mv, children)));
        }

        // Only modal moves remain: the goal is derivable when some premise is.
        let branching: Vec<&Move> = moves.iter().filter(|m| is_branching(m.rule)).collect();
        if branching.is_empty() {
            let local = BTreeSet::from([goal.clone()]);
            return Ok(self.refute(key, known, local, deads));
        }
        let mut local = BTreeSet::new();
        for mv in branching {
            let premise = &mv.premises[0];
            if let Some(tree) = self.search(premise, &mut local, used)? {
                if known.is_none() {
                    self.memo.insert_derivable(key);
                }
                return Ok(Some(node(goal, mv, vec![tree])));
            }
        }
        Ok(self.refute(key, known, local, deads))
    }

    fn refute(
        &mut self,
        key: (Logic, Goal),
        known: Option<bool>,
        local: BTreeSet<Goal>,
        deads: &mut BTreeSet<Goal>,
    ) -> Option<ProofTree> {
        debug_assert!(known != Some(true), "memoized derivable goal failed to re-derive");
        debug_assert!(!local.is_empty(), "refutation without a dead end");
        if known.is_none() {
            let representative = local.iter().next().expect("dead ends are non-empty").clone();
            self.memo.insert_refuted(key, representative);
        }
        deads.extend(local);
        None
    }
}

fn is_branching(rule: RuleTag) -> bool {
    matches!(rule, RuleTag::DK | RuleTag::DD | RuleTag::DKPlus)
}

fn leaf(goal: &Goal, mv: &Move) -> ProofTree {
    ProofTree {
        conclusion: goal.clone(),
        rule: mv.rule,
        principal: mv.principal.clone(),
        premises: Vec::new(),
    }
}

fn node(goal: &Goal, mv: &Move, premises: Vec<ProofTree>) -> ProofTree {
    ProofTree {
        conclusion: goal.clone(),
        rule: mv.rule,
        principal: mv.principal.clone(),
        premises,
    }
}

//! Pseudo-model semantics: finite Kripke structures with one anti-monotone
//! relation per agent group, model checking, saturation of underivable
//! sequents, countermodel extraction from failed proof search, and a
//! brute-force small-model enumerator that serves as an independent oracle.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::calculus::Logic;
use crate::formula::{AgentUniverse, Formula, FormulaKind, Group};
use crate::multiset::{subformula_closure, FormulaMultiset};
use crate::prover::{ProveError, Prover};
use crate::sequents::Sequent;

/// The frame condition a logic's models satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameClass {
    /// No condition beyond anti-monotonicity.
    All,
    /// Every single-agent relation is total: each state has a successor.
    SerialSingletons,
    /// Every relation contains the diagonal.
    Reflexive,
}

impl FrameClass {
    pub fn for_logic(logic: Logic) -> Self {
        match logic {
            Logic::K => FrameClass::All,
            Logic::Kd => FrameClass::SerialSingletons,
            Logic::KtPlus => FrameClass::Reflexive,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("state {state} is out of range for a model with {count} states")]
    StateOutOfRange { state: usize, count: usize },
    #[error("variable `{0}` has no valuation in this model")]
    UnknownVariable(String),
    #[error("agent `{0}` is outside the model's universe")]
    UnknownAgent(String),
    #[error("relation for {larger} is not contained in the one for {smaller}")]
    AntiMonotonicityViolation { smaller: Group, larger: Group },
}

/// A finite pseudo-model: states are indices, each group of the universe has
/// its own accessibility relation, and larger groups never relate more than
/// their subgroups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoModel {
    universe: AgentUniverse,
    state_count: usize,
    relations: BTreeMap<Group, BTreeSet<(usize, usize)>>,
    valuation: BTreeMap<String, BTreeSet<usize>>,
}

impl PseudoModel {
    /// Builds and validates a model. Missing relation entries are treated as
    /// empty; every referenced state must be in range, every relation key a
    /// group over the universe, and anti-monotonicity must hold.
    pub fn new(
        universe: AgentUniverse,
        state_count: usize,
        relations: BTreeMap<Group, BTreeSet<(usize, usize)>>,
        valuation: BTreeMap<String, BTreeSet<usize>>,
    ) -> Result<Self, ModelError> {
        let groups = universe.groups();
        for group in relations.keys() {
            if let Some(agent) = group.members().iter().find(|a| !universe.contains(a)) {
                return Err(ModelError::UnknownAgent(agent.clone()));
            }
        }
        let mut full: BTreeMap<Group, BTreeSet<(usize, usize)>> = groups
            .iter()
            .map(|g| (g.clone(), relations.get(g).cloned().unwrap_or_default()))
            .collect();
        for (group, edges) in &full {
            for &(w, v) in edges {
                for state in [w, v] {
                    if state >= state_count {
                        return Err(ModelError::StateOutOfRange { state, count: state_count });
                    }
                }
            }
            let _ = group;
        }
        for states in valuation.values() {
            for &state in states {
                if state >= state_count {
                    return Err(ModelError::StateOutOfRange { state, count: state_count });
                }
            }
        }
        for smaller in &groups {
            for larger in &groups {
                if smaller.is_subset_of(larger) && !full[larger].is_subset(&full[smaller]) {
                    return Err(ModelError::AntiMonotonicityViolation {
                        smaller: smaller.clone(),
                        larger: larger.clone(),
                    });
                }
            }
        }
        full.retain(|_, edges| !edges.is_empty());
        Ok(Self { universe, state_count, relations: full, valuation })
    }

    pub fn universe(&self) -> &AgentUniverse {
        &self.universe
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn states(&self) -> impl Iterator<Item = usize> {
        0..self.state_count
    }

    pub fn relation(&self, group: &Group) -> Option<&BTreeSet<(usize, usize)>> {
        self.relations.get(group)
    }

    pub fn successors(&self, group: &Group, state: usize) -> impl Iterator<Item = usize> + '_ {
        self.relations
            .get(group)
            .into_iter()
            .flatten()
            .filter(move |(w, _)| *w == state)
            .map(|(_, v)| *v)
    }

    pub fn valuation(&self) -> &BTreeMap<String, BTreeSet<usize>> {
        &self.valuation
    }
}

/// Evaluates a formula at a state: variables by the valuation, the box by
/// quantification over the group's successors.
pub fn model_check(m: &PseudoModel, state: usize, f: &Formula) -> Result<bool, ModelError> {
    if state >= m.state_count {
        return Err(ModelError::StateOutOfRange { state, count: m.state_count });
    }
    match f.kind() {
        FormulaKind::Var(name) => match m.valuation.get(name) {
            Some(states) => Ok(states.contains(&state)),
            None => Err(ModelError::UnknownVariable(name.clone())),
        },
        FormulaKind::Bottom => Ok(false),
        FormulaKind::Not(a) => Ok(!model_check(m, state, a)?),
        FormulaKind::And(a, b) => Ok(model_check(m, state, a)? && model_check(m, state, b)?),
        FormulaKind::Or(a, b) => Ok(model_check(m, state, a)? || model_check(m, state, b)?),
        FormulaKind::Implies(a, b) => Ok(!model_check(m, state, a)? || model_check(m, state, b)?),
        FormulaKind::Dist(group, body) => {
            if let Some(agent) = group.members().iter().find(|a| !m.universe.contains(a)) {
                return Err(ModelError::UnknownAgent(agent.clone()));
            }
            for v in m.successors(group, state).collect::<Vec<_>>() {
                if !model_check(m, v, body)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// True when no state satisfies every antecedent member while falsifying
/// every succedent member.
pub fn sequent_valid(m: &PseudoModel, s: &Sequent) -> Result<bool, ModelError> {
    for state in m.states() {
        let mut refuted = true;
        for f in s.antecedent.distinct() {
            if !model_check(m, state, f)? {
                refuted = false;
                break;
            }
        }
        if refuted {
            for f in s.succedent.distinct() {
                if model_check(m, state, f)? {
                    refuted = false;
                    break;
                }
            }
        }
        if refuted {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks the frame condition; anti-monotonicity is already guaranteed by
/// construction.
pub fn frame_satisfies(m: &PseudoModel, class: FrameClass) -> bool {
    match class {
        FrameClass::All => true,
        FrameClass::SerialSingletons => m.universe.singletons().all(|g| {
            m.states().all(|w| m.successors(&g, w).next().is_some())
        }),
        FrameClass::Reflexive => m
            .universe
            .groups()
            .iter()
            .all(|g| m.states().all(|w| m.successors(g, w).any(|v| v == w))),
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SaturateError {
    #[error(transparent)]
    Prove(#[from] ProveError),
    #[error("the sequent is derivable; only underivable sequents saturate")]
    Derivable,
    #[error("the sequent is not contained in the closure set")]
    OutsideClosure,
    #[error("the closure set is not subformula-closed")]
    NotClosed,
}

/// An underivable sequent that is maximal within a subformula-closed set:
/// nothing in the set can be added to either side without keeping it
/// underivable on the other test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturatedSequent {
    pub theta: BTreeSet<Formula>,
    pub pi: BTreeSet<Formula>,
    pub omega: BTreeSet<Formula>,
}

impl SaturatedSequent {
    pub fn as_sequent(&self) -> Sequent {
        Sequent::new(
            self.theta.iter().cloned().collect(),
            self.pi.iter().cloned().collect(),
        )
    }
}

fn set_sequent(theta: &BTreeSet<Formula>, pi: &BTreeSet<Formula>) -> Sequent {
    Sequent::new(theta.iter().cloned().collect(), pi.iter().cloned().collect())
}

/// Extends an underivable sequent to a saturated one inside `omega` by the
/// three-case loop: try each closure formula on the succedent, then on the
/// antecedent, in canonical order. Deterministic.
pub fn saturate(
    prover: &mut Prover,
    s: &Sequent,
    omega: &BTreeSet<Formula>,
) -> Result<SaturatedSequent, SaturateError> {
    let omega_multiset: FormulaMultiset = omega.iter().cloned().collect();
    if subformula_closure([&omega_multiset]) != *omega {
        return Err(SaturateError::NotClosed);
    }
    let mut theta: BTreeSet<Formula> = s.antecedent.distinct().cloned().collect();
    let mut pi: BTreeSet<Formula> = s.succedent.distinct().cloned().collect();
    if !theta.iter().chain(&pi).all(|f| omega.contains(f)) {
        return Err(SaturateError::OutsideClosure);
    }
    if prover.prove(&set_sequent(&theta, &pi))?.is_derivable() {
        return Err(SaturateError::Derivable);
    }
    for phi in omega {
        let on_right = set_sequent(&theta, &pi).succedent.with(phi.clone());
        let right = Sequent::new(set_sequent(&theta, &pi).antecedent, on_right);
        if !prover.prove(&right)?.is_derivable() {
            pi.insert(phi.clone());
            continue;
        }
        let left = Sequent::new(
            set_sequent(&theta, &pi).antecedent.with(phi.clone()),
            set_sequent(&theta, &pi).succedent,
        );
        if !prover.prove(&left)?.is_derivable() {
            theta.insert(phi.clone());
        }
    }
    Ok(SaturatedSequent { theta, pi, omega: omega.clone() })
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CountermodelError {
    #[error(transparent)]
    Prove(#[from] ProveError),
    #[error("the sequent is derivable; no countermodel exists")]
    Derivable,
    #[error("the sequent mentions agent `{0}`, which is outside the universe")]
    OutsideUniverse(String),
    #[error("state generation exceeded the limit of {limit} states")]
    StateBudget { limit: usize },
    #[error("internal verification failed: {0}")]
    Verification(String),
}

const MAX_COUNTERMODEL_STATES: usize = 4096;

/// Bodies of the boxes in `theta` whose group is contained in `group`.
fn subgroup_bodies(theta: &BTreeSet<Formula>, group: &Group) -> BTreeSet<Formula> {
    theta
        .iter()
        .filter_map(|f| f.as_boxed())
        .filter(|(g, _)| g.is_subset_of(group))
        .map(|(_, body)| body.clone())
        .collect()
}

/// Bodies of the boxes in `theta` whose group is exactly `group`.
fn exact_group_bodies(theta: &BTreeSet<Formula>, group: &Group) -> BTreeSet<Formula> {
    theta
        .iter()
        .filter_map(|f| f.as_boxed())
        .filter(|(g, _)| *g == group)
        .map(|(_, body)| body.clone())
        .collect()
}

/// Builds a finite countermodel for an underivable sequent and returns it
/// with the witness state where the antecedent holds and the succedent
/// fails.
///
/// States are saturated sequents over the subformula closure, generated on
/// demand: the root saturates the input; each boxed succedent member forces
/// a successor falsifying its body; for the serial frame class every state
/// gets one successor per agent. Relations connect every generated pair
/// whose antecedent boxes are honoured. The result is re-checked against the
/// input and its frame class before it is returned.
pub fn countermodel(
    prover: &mut Prover,
    universe: &AgentUniverse,
    s: &Sequent,
) -> Result<(PseudoModel, usize), CountermodelError> {
    let vocab = s.vocab();
    if let Some(agent) = vocab.agents.iter().find(|a| !universe.contains(a)) {
        return Err(CountermodelError::OutsideUniverse(agent.clone()));
    }
    if prover.prove(s)?.is_derivable() {
        return Err(CountermodelError::Derivable);
    }
    let omega = subformula_closure([&s.antecedent, &s.succedent]);
    let frame = FrameClass::for_logic(prover.logic());

    let mut states: Vec<SaturatedSequent> = Vec::new();
    let mut index: BTreeMap<(BTreeSet<Formula>, BTreeSet<Formula>), usize> = BTreeMap::new();
    let mut intern = |sat: SaturatedSequent,
                      states: &mut Vec<SaturatedSequent>|
     -> Result<usize, CountermodelError> {
        let key = (sat.theta.clone(), sat.pi.clone());
        if let Some(&i) = index.get(&key) {
            return Ok(i);
        }
        if states.len() >= MAX_COUNTERMODEL_STATES {
            return Err(CountermodelError::StateBudget { limit: MAX_COUNTERMODEL_STATES });
        }
        states.push(sat);
        index.insert(key, states.len() - 1);
        Ok(states.len() - 1)
    };

    let root = saturate(prover, s, &omega).map_err(|e| match e {
        SaturateError::Prove(p) => CountermodelError::Prove(p),
        SaturateError::Derivable => CountermodelError::Derivable,
        other => CountermodelError::Verification(other.to_string()),
    })?;
    intern(root, &mut states)?;

    let mut next = 0;
    while next < states.len() {
        let theta = states[next].theta.clone();
        let pi = states[next].pi.clone();
        for f in &pi {
            let Some((group, body)) = f.as_boxed() else { continue };
            let target = Sequent::new(
                subgroup_bodies(&theta, group).into_iter().collect(),
                FormulaMultiset::singleton(body.clone()),
            );
            let sat = saturate(prover, &target, &omega)
                .map_err(|e| CountermodelError::Verification(e.to_string()))?;
            intern(sat, &mut states)?;
        }
        if frame == FrameClass::SerialSingletons {
            for single in universe.singletons() {
                let target = Sequent::new(
                    exact_group_bodies(&theta, &single).into_iter().collect(),
                    FormulaMultiset::new(),
                );
                let sat = saturate(prover, &target, &omega)
                    .map_err(|e| CountermodelError::Verification(e.to_string()))?;
                intern(sat, &mut states)?;
            }
        }
        next += 1;
    }

    let groups = universe.groups();
    let mut relations: BTreeMap<Group, BTreeSet<(usize, usize)>> = BTreeMap::new();
    for group in &groups {
        let mut edges = BTreeSet::new();
        for (i, from) in states.iter().enumerate() {
            let required = subgroup_bodies(&from.theta, group);
            for (j, to) in states.iter().enumerate() {
                if required.is_subset(&to.theta) {
                    edges.insert((i, j));
                }
            }
        }
        relations.insert(group.clone(), edges);
    }

    let mut valuation: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
    for var in &vocab.vars {
        let var_formula = Formula::var(var.clone());
        let holds = states
            .iter()
            .enumerate()
            .filter(|(_, sat)| sat.theta.contains(&var_formula))
            .map(|(i, _)| i)
            .collect();
        valuation.insert(var.clone(), holds);
    }

    let model = PseudoModel::new(universe.clone(), states.len(), relations, valuation)
        .map_err(|e| CountermodelError::Verification(e.to_string()))?;

    if !frame_satisfies(&model, frame) {
        return Err(CountermodelError::Verification("frame condition failed".into()));
    }
    for f in s.antecedent.distinct() {
        match model_check(&model, 0, f) {
            Ok(true) => {}
            Ok(false) => {
                return Err(CountermodelError::Verification(format!(
                    "antecedent member {f} is false at the witness"
                )))
            }
            Err(e) => return Err(CountermodelError::Verification(e.to_string())),
        }
    }
    for f in s.succedent.distinct() {
        match model_check(&model, 0, f) {
            Ok(false) => {}
            Ok(true) => {
                return Err(CountermodelError::Verification(format!(
                    "succedent member {f} is true at the witness"
                )))
            }
            Err(e) => return Err(CountermodelError::Verification(e.to_string())),
        }
    }
    Ok((model, 0))
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("model enumeration exceeded the budget of {limit} candidates")]
    Budget { limit: u64 },
    #[error("the sequent mentions agent `{0}`, which is outside the universe")]
    OutsideUniverse(String),
}

pub const DEFAULT_MODEL_BUDGET: u64 = 100_000_000;

/// One candidate frame during enumeration: successor sets as state bitmasks,
/// one per group of the universe in canonical group order.
pub struct FrameView<'a> {
    groups: &'a [Group],
    state_count: usize,
    succ: &'a [Vec<u64>],
}

impl FrameView<'_> {
    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn groups(&self) -> &[Group] {
        self.groups
    }

    /// Bitmask of successors of `state` under the group at `group_index`.
    pub fn successors(&self, group_index: usize, state: usize) -> u64 {
        self.succ[group_index][state]
    }
}

/// Calls `visit` on every anti-monotone frame with exactly `state_count`
/// states over the universe, restricted to the frame class. Enumeration
/// order is deterministic. `visit` returns false to stop early; each frame
/// costs one unit of `budget`.
pub fn for_each_frame(
    universe: &AgentUniverse,
    class: FrameClass,
    state_count: usize,
    budget: &mut u64,
    visit: &mut dyn FnMut(&FrameView) -> bool,
) -> Result<(), EnumerateError> {
    let groups = universe.groups();
    let m = groups.len();
    assert!(m <= 16, "too many groups to enumerate frames");
    assert!(state_count <= 6, "frame enumeration is for very small models");

    // Memberships a single ordered pair may have: downward-closed group
    // sets, so that belonging to a group's relation forces belonging to
    // every subgroup's.
    let mut patterns: Vec<u32> = Vec::new();
    'candidate: for mask in 0u32..(1 << m) {
        for i in 0..m {
            if mask & (1 << i) == 0 {
                continue;
            }
            for j in 0..m {
                if groups[j].is_subset_of(&groups[i]) && mask & (1 << j) == 0 {
                    continue 'candidate;
                }
            }
        }
        patterns.push(mask);
    }
    let full_pattern_index = patterns
        .iter()
        .position(|&p| p == (1u32 << m) - 1)
        .expect("the full membership set is downward closed");

    let n = state_count;
    let pair_count = n * n;
    let mut digits = vec![0usize; pair_count];
    let singleton_indices: Vec<usize> = groups
        .iter()
        .enumerate()
        .filter(|(_, g)| g.len() == 1)
        .map(|(i, _)| i)
        .collect();

    let mut succ: Vec<Vec<u64>> = vec![vec![0; n]; m];
    loop {
        if *budget == 0 {
            return Err(EnumerateError::Budget { limit: 0 });
        }
        *budget -= 1;

        let mut admissible = true;
        if class == FrameClass::Reflexive {
            for w in 0..n {
                if digits[w * n + w] != full_pattern_index {
                    admissible = false;
                    break;
                }
            }
        }
        if admissible {
            for g in 0..m {
                for w in 0..n {
                    succ[g][w] = 0;
                }
            }
            for w in 0..n {
                for v in 0..n {
                    let pattern = patterns[digits[w * n + v]];
                    for g in 0..m {
                        if pattern & (1 << g) != 0 {
                            succ[g][w] |= 1 << v;
                        }
                    }
                }
            }
            if class == FrameClass::SerialSingletons {
                admissible = singleton_indices
                    .iter()
                    .all(|&g| (0..n).all(|w| succ[g][w] != 0));
            }
            if admissible {
                let view = FrameView { groups: &groups, state_count: n, succ: &succ };
                if !visit(&view) {
                    return Ok(());
                }
            }
        }

        let mut pos = 0;
        loop {
            if pos == pair_count {
                return Ok(());
            }
            digits[pos] += 1;
            if digits[pos] < patterns.len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// A formula pre-resolved against a variable order and the universe's group
/// order, for fast repeated evaluation during enumeration.
#[derive(Debug, Clone)]
pub enum CompiledFormula {
    Var(usize),
    Bottom,
    Not(Box<CompiledFormula>),
    And(Box<CompiledFormula>, Box<CompiledFormula>),
    Or(Box<CompiledFormula>, Box<CompiledFormula>),
    Implies(Box<CompiledFormula>, Box<CompiledFormula>),
    Dist(usize, Box<CompiledFormula>),
}

/// Resolves variables and groups to indices. Errors with the offending
/// agent name when a group is outside the universe.
pub fn compile_formula(
    f: &Formula,
    vars: &[String],
    groups: &[Group],
) -> Result<CompiledFormula, EnumerateError> {
    Ok(match f.kind() {
        FormulaKind::Var(name) => {
            let i = vars.iter().position(|v| v == name).expect("variable order covers the formula");
            CompiledFormula::Var(i)
        }
        FormulaKind::Bottom => CompiledFormula::Bottom,
        FormulaKind::Not(a) => CompiledFormula::Not(Box::new(compile_formula(a, vars, groups)?)),
        FormulaKind::And(a, b) => CompiledFormula::And(
            Box::new(compile_formula(a, vars, groups)?),
            Box::new(compile_formula(b, vars, groups)?),
        ),
        FormulaKind::Or(a, b) => CompiledFormula::Or(
            Box::new(compile_formula(a, vars, groups)?),
            Box::new(compile_formula(b, vars, groups)?),
        ),
        FormulaKind::Implies(a, b) => CompiledFormula::Implies(
            Box::new(compile_formula(a, vars, groups)?),
            Box::new(compile_formula(b, vars, groups)?),
        ),
        FormulaKind::Dist(group, body) => {
            let i = groups.iter().position(|g| g == group).ok_or_else(|| {
                let agent = group
                    .members()
                    .iter()
                    .find(|a| !groups.iter().any(|g| g.contains(a)))
                    .unwrap_or(&group.members()[0])
                    .clone();
                EnumerateError::OutsideUniverse(agent)
            })?;
            CompiledFormula::Dist(i, Box::new(compile_formula(body, vars, groups)?))
        }
    })
}

/// Truth of a compiled formula as a bitmask over the frame's states, given
/// one valuation bitmask per variable.
pub fn eval_compiled(c: &CompiledFormula, frame: &FrameView, valuation: &[u64]) -> u64 {
    let full = if frame.state_count == 64 { u64::MAX } else { (1u64 << frame.state_count) - 1 };
    match c {
        CompiledFormula::Var(i) => valuation[*i],
        CompiledFormula::Bottom => 0,
        CompiledFormula::Not(a) => !eval_compiled(a, frame, valuation) & full,
        CompiledFormula::And(a, b) => {
            eval_compiled(a, frame, valuation) & eval_compiled(b, frame, valuation)
        }
        CompiledFormula::Or(a, b) => {
            eval_compiled(a, frame, valuation) | eval_compiled(b, frame, valuation)
        }
        CompiledFormula::Implies(a, b) => {
            (!eval_compiled(a, frame, valuation) & full) | eval_compiled(b, frame, valuation)
        }
        CompiledFormula::Dist(g, body) => {
            let body_mask = eval_compiled(body, frame, valuation);
            let mut out = 0u64;
            for w in 0..frame.state_count {
                if frame.succ[*g][w] & !body_mask == 0 {
                    out |= 1 << w;
                }
            }
            out
        }
    }
}

/// An owned frame, for building derived frames outside the enumeration
/// callback.
#[derive(Debug, Clone)]
pub struct OwnedFrame {
    groups: Vec<Group>,
    state_count: usize,
    succ: Vec<Vec<u64>>,
}

impl OwnedFrame {
    pub fn view(&self) -> FrameView<'_> {
        FrameView { groups: &self.groups, state_count: self.state_count, succ: &self.succ }
    }
}

/// True when the frame is the lexicographically least among its state
/// relabelings. Checking only canonical frames loses no refutations, since
/// truth is invariant under relabeling and every relabeling is enumerated.
pub fn frame_is_canonical(frame: &FrameView) -> bool {
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut items: Vec<usize> = (0..n).collect();
        fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k <= 1 {
                out.push(items.clone());
                return;
            }
            for i in 0..k {
                heap(k - 1, items, out);
                if k % 2 == 0 {
                    items.swap(i, k - 1);
                } else {
                    items.swap(0, k - 1);
                }
            }
        }
        heap(n, &mut items, &mut out);
        out
    }

    let n = frame.state_count;
    let m = frame.groups.len();
    for perm in permutations(n) {
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            continue;
        }
        let mut ordering = std::cmp::Ordering::Equal;
        'compare: for g in 0..m {
            for w in 0..n {
                let original = frame.succ[g][w];
                let mut permuted = 0u64;
                let source = frame.succ[g][perm.iter().position(|&p| p == w).expect("permutation")];
                for v in 0..n {
                    if source & (1 << v) != 0 {
                        permuted |= 1 << perm[v];
                    }
                }
                match original.cmp(&permuted) {
                    std::cmp::Ordering::Equal => {}
                    other => {
                        ordering = other;
                        break 'compare;
                    }
                }
            }
        }
        if ordering == std::cmp::Ordering::Greater {
            return false;
        }
    }
    true
}

/// Folds every valuation of `var_count` variables into one wider frame whose
/// worlds are (valuation, state) pairs, so a single evaluation pass covers
/// all valuations at once. Returns the packed frame and one world bitmask
/// per variable.
pub fn packed_frame(frame: &FrameView, var_count: usize) -> (OwnedFrame, Vec<u64>) {
    let n = frame.state_count;
    let bits = n * var_count;
    assert!(bits < 6 && n * (1 << bits) <= 64, "packed frame exceeds 64 worlds");
    let vals = 1usize << bits;
    let worlds = n * vals;
    let m = frame.groups.len();
    let mut succ = vec![vec![0u64; worlds]; m];
    for g in 0..m {
        for vi in 0..vals {
            for w in 0..n {
                succ[g][vi * n + w] = frame.succ[g][w] << (vi * n);
            }
        }
    }
    let mut var_masks = vec![0u64; var_count];
    for (i, mask) in var_masks.iter_mut().enumerate() {
        for vi in 0..vals {
            for w in 0..n {
                if vi >> (w * var_count + i) & 1 == 1 {
                    *mask |= 1 << (vi * n + w);
                }
            }
        }
    }
    (
        OwnedFrame { groups: frame.groups.to_vec(), state_count: worlds, succ },
        var_masks,
    )
}

enum BankNode {
    Var(usize),
    Bottom,
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Dist(usize, usize),
}

/// A batch of formulas flattened into one shared-subformula array, evaluated
/// in a single pass per frame. The cheap way to check thousands of formulas
/// against millions of candidate models.
pub struct FormulaBank {
    nodes: Vec<BankNode>,
    roots: Vec<usize>,
}

impl FormulaBank {
    pub fn new<'a>(
        formulas: impl IntoIterator<Item = &'a Formula>,
        vars: &[String],
        groups: &[Group],
    ) -> Result<Self, EnumerateError> {
        let mut nodes = Vec::new();
        let mut by_formula: std::collections::HashMap<Formula, usize> =
            std::collections::HashMap::new();
        let mut roots = Vec::new();
        for f in formulas {
            roots.push(intern(f, vars, groups, &mut nodes, &mut by_formula)?);
        }
        return Ok(Self { nodes, roots });

        fn intern(
            f: &Formula,
            vars: &[String],
            groups: &[Group],
            nodes: &mut Vec<BankNode>,
            by_formula: &mut std::collections::HashMap<Formula, usize>,
        ) -> Result<usize, EnumerateError> {
            if let Some(&i) = by_formula.get(f) {
                return Ok(i);
            }
            let node = match f.kind() {
                FormulaKind::Var(name) => BankNode::Var(
                    vars.iter().position(|v| v == name).expect("variable order covers the bank"),
                ),
                FormulaKind::Bottom => BankNode::Bottom,
                FormulaKind::Not(a) => BankNode::Not(intern(a, vars, groups, nodes, by_formula)?),
                FormulaKind::And(a, b) => BankNode::And(
                    intern(a, vars, groups, nodes, by_formula)?,
                    intern(b, vars, groups, nodes, by_formula)?,
                ),
                FormulaKind::Or(a, b) => BankNode::Or(
                    intern(a, vars, groups, nodes, by_formula)?,
                    intern(b, vars, groups, nodes, by_formula)?,
                ),
                FormulaKind::Implies(a, b) => BankNode::Implies(
                    intern(a, vars, groups, nodes, by_formula)?,
                    intern(b, vars, groups, nodes, by_formula)?,
                ),
                FormulaKind::Dist(group, body) => {
                    let g = groups.iter().position(|x| x == group).ok_or_else(|| {
                        EnumerateError::OutsideUniverse(group.members()[0].clone())
                    })?;
                    BankNode::Dist(g, intern(body, vars, groups, nodes, by_formula)?)
                }
            };
            nodes.push(node);
            let i = nodes.len() - 1;
            by_formula.insert(f.clone(), i);
            Ok(i)
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node index of the i-th input formula.
    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    /// Evaluates every node over the frame; `out[i]` is the truth bitmask of
    /// node `i`. Children always precede parents in the array.
    pub fn eval_into(&self, frame: &FrameView, valuation: &[u64], out: &mut Vec<u64>) {
        let n = frame.state_count;
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        out.clear();
        out.resize(self.nodes.len(), 0);
        for (i, node) in self.nodes.iter().enumerate() {
            out[i] = match *node {
                BankNode::Var(v) => valuation[v],
                BankNode::Bottom => 0,
                BankNode::Not(a) => !out[a] & full,
                BankNode::And(a, b) => out[a] & out[b],
                BankNode::Or(a, b) => out[a] | out[b],
                BankNode::Implies(a, b) => (!out[a] & full) | out[b],
                BankNode::Dist(g, body) => {
                    let body_mask = out[body];
                    let mut mask = 0u64;
                    for w in 0..n {
                        if frame.succ[g][w] & !body_mask == 0 {
                            mask |= 1 << w;
                        }
                    }
                    mask
                }
            };
        }
    }
}

fn model_from_frame(
    universe: &AgentUniverse,
    frame: &FrameView,
    vars: &[String],
    valuation: &[u64],
) -> PseudoModel {
    let n = frame.state_count;
    let mut relations: BTreeMap<Group, BTreeSet<(usize, usize)>> = BTreeMap::new();
    for (g, group) in frame.groups.iter().enumerate() {
        let mut edges = BTreeSet::new();
        for w in 0..n {
            for v in 0..n {
                if frame.succ[g][w] & (1 << v) != 0 {
                    edges.insert((w, v));
                }
            }
        }
        relations.insert(group.clone(), edges);
    }
    let val = vars
        .iter()
        .enumerate()
        .map(|(i, var)| {
            let states = (0..n).filter(|w| valuation[i] & (1 << w) != 0).collect();
            (var.clone(), states)
        })
        .collect();
    PseudoModel::new(universe.clone(), n, relations, val)
        .expect("enumerated frames are anti-monotone by construction")
}

/// Exhaustively searches pointed models with at most `max_states` states for
/// one that refutes the sequent: all antecedent members true and all
/// succedent members false at the returned state. Deterministic; `None`
/// means no such model exists within the bound.
pub fn enumerate_small_models(
    logic: Logic,
    universe: &AgentUniverse,
    s: &Sequent,
    max_states: usize,
    budget: u64,
) -> Result<Option<(PseudoModel, usize)>, EnumerateError> {
    let vocab = s.vocab();
    if let Some(agent) = vocab.agents.iter().find(|a| !universe.contains(a)) {
        return Err(EnumerateError::OutsideUniverse(agent.clone()));
    }
    let class = FrameClass::for_logic(logic);
    let groups = universe.groups();
    let vars: Vec<String> = vocab.vars.iter().cloned().collect();
    let ant: Vec<CompiledFormula> = s
        .antecedent
        .distinct()
        .map(|f| compile_formula(f, &vars, &groups))
        .collect::<Result<_, _>>()?;
    let suc: Vec<CompiledFormula> = s
        .succedent
        .distinct()
        .map(|f| compile_formula(f, &vars, &groups))
        .collect::<Result<_, _>>()?;

    let mut remaining = budget;
    let mut found: Option<(PseudoModel, usize)> = None;
    for n in 1..=max_states {
        let full = (1u64 << n) - 1;
        let mut valuation = vec![0u64; vars.len()];
        for_each_frame(universe, class, n, &mut remaining, &mut |frame| {
            valuation.iter_mut().for_each(|v| *v = 0);
            loop {
                let mut refuted = full;
                for c in &ant {
                    refuted &= eval_compiled(c, frame, &valuation);
                    if refuted == 0 {
                        break;
                    }
                }
                if refuted != 0 {
                    for c in &suc {
                        refuted &= !eval_compiled(c, frame, &valuation) & full;
                        if refuted == 0 {
                            break;
                        }
                    }
                }
                if refuted != 0 {
                    let witness = refuted.trailing_zeros() as usize;
                    found = Some((model_from_frame(universe, frame, &vars, &valuation), witness));
                    return false;
                }
                let mut pos = 0;
                loop {
                    if pos == valuation.len() {
                        return true;
                    }
                    valuation[pos] += 1;
                    if valuation[pos] <= full {
                        break;
                    }
                    valuation[pos] = 0;
                    pos += 1;
                }
            }
        })
        .map_err(|e| match e {
            EnumerateError::Budget { .. } => EnumerateError::Budget { limit: budget },
            other => other,
        })?;
        if found.is_some() {
            break;
        }
    }
    Ok(found)
}

/// Renders a model as JSON: state list, per-group edge lists, valuation.
pub fn model_to_json(m: &PseudoModel) -> serde_json::Value {
    let relations: serde_json::Map<String, serde_json::Value> = m
        .universe
        .groups()
        .iter()
        .map(|g| {
            let edges: Vec<serde_json::Value> = m
                .relation(g)
                .into_iter()
                .flatten()
                .map(|(w, v)| serde_json::json!([w, v]))
                .collect();
            (g.to_string(), serde_json::Value::Array(edges))
        })
        .collect();
    serde_json::json!({
        "states": m.states().collect::<Vec<_>>(),
        "agents": m.universe.names(),
        "relations": relations,
        "valuation": m
            .valuation
            .iter()
            .map(|(var, states)| (var.clone(), serde_json::json!(states.iter().collect::<Vec<_>>())))
            .collect::<serde_json::Map<_, _>>(),
    })
}

/// Renders a model as Graphviz dot: one node per state annotated with its
/// true variables, one edge per state pair annotated with the groups
/// relating it.
pub fn model_to_dot(m: &PseudoModel) -> String {
    let mut out = String::from("digraph model {\n  rankdir=LR;\n");
    for w in m.states() {
        let vars: Vec<&str> = m
            .valuation
            .iter()
            .filter(|(_, states)| states.contains(&w))
            .map(|(var, _)| var.as_str())
            .collect();
        let label = if vars.is_empty() {
            format!("w{w}")
        } else {
            format!("w{w}\\n{}", vars.join(","))
        };
        out.push_str(&format!("  w{w} [label=\"{label}\"];\n"));
    }
    let mut edge_groups: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
    for (group, edges) in &m.relations {
        for &(w, v) in edges {
            edge_groups.entry((w, v)).or_default().push(group.to_string());
        }
    }
    for ((w, v), mut labels) in edge_groups {
        labels.sort();
        out.push_str(&format!("  w{w} -> w{v} [label=\"{}\"];\n", labels.join("; ")));
    }
    out.push_str("}\n");
    out
}



#[cfg(test)]
mod sweep_tests {
    use super::*;
    use crate::parse::parse_formula_unchecked;

    fn universe(names: &[&str]) -> AgentUniverse {
        AgentUniverse::new(names.iter().copied()).unwrap()
    }

    #[test]
    fn canonical_filter_keeps_one_frame_per_orbit() {
        let u = universe(&["a"]);
        let mut total = 0usize;
        let mut canonical = 0usize;
        let mut budget = u64::MAX;
        for_each_frame(&u, FrameClass::All, 2, &mut budget, &mut |frame| {
            total += 1;
            if frame_is_canonical(frame) {
                canonical += 1;
            }
            true
        })
        .unwrap();
        // 16 two-state frames over one group; swapping the states fixes 4 of
        // them, so there are (16 + 4) / 2 = 10 orbits.
        assert_eq!(total, 16);
        assert_eq!(canonical, 10);
    }

    #[test]
    fn packed_frames_agree_with_per_valuation_evaluation() {
        let u = universe(&["a", "b"]);
        let groups = u.groups();
        let vars = vec!["p".to_string()];
        let formulas: Vec<Formula> = [
            "p",
            "D{a}p",
            "D{a,b}p -> D{b}p",
            "~D{a}~p & p",
            "D{b}(p -> D{a}p)",
        ]
        .iter()
        .map(|t| parse_formula_unchecked(t).unwrap())
        .collect();
        let bank = FormulaBank::new(&formulas, &vars, &groups).unwrap();
        let compiled: Vec<CompiledFormula> =
            formulas.iter().map(|f| compile_formula(f, &vars, &groups).unwrap()).collect();

        let n = 2;
        let mut budget = 5000;
        let mut buf = Vec::new();
        for_each_frame(&u, FrameClass::All, n, &mut budget, &mut |frame| {
            let (packed, var_masks) = packed_frame(frame, vars.len());
            bank.eval_into(&packed.view(), &var_masks, &mut buf);
            for vi in 0..1u64 << n {
                let valuation = [vi];
                for (i, c) in compiled.iter().enumerate() {
                    let direct = eval_compiled(c, frame, &valuation);
                    let packed_mask = buf[bank.roots()[i]];
                    for w in 0..n {
                        let from_packed = packed_mask >> (vi as usize * n + w) & 1;
                        let from_direct = direct >> w & 1;
                        assert_eq!(from_packed, from_direct, "formula {i} state {w} val {vi:b}");
                    }
                }
            }
            true
        })
        .unwrap();
    }

    #[test]
    fn bank_shares_common_subformulas() {
        let u = universe(&["a"]);
        let groups = u.groups();
        let vars = vec!["p".to_string()];
        let formulas: Vec<Formula> = ["D{a}p", "D{a}p -> p", "~D{a}p"]
            .iter()
            .map(|t| parse_formula_unchecked(t).unwrap())
            .collect();
        let bank = FormulaBank::new(&formulas, &vars, &groups).unwrap();
        // p, D{a}p, D{a}p -> p, ~D{a}p: four distinct nodes.
        assert_eq!(bank.len(), 4);
    }

    #[test]
    fn canonical_sweep_refutes_exactly_what_the_full_sweep_refutes() {
        let u = universe(&["a"]);
        let groups = u.groups();
        let vars = vec!["p".to_string()];
        let formulas: Vec<Formula> = [
            "p", "~p", "p -> p", "D{a}p", "D{a}false", "~D{a}false", "D{a}p -> p",
        ]
        .iter()
        .map(|t| parse_formula_unchecked(t).unwrap())
        .collect();
        let bank = FormulaBank::new(&formulas, &vars, &groups).unwrap();

        let mut refuted_full = vec![false; formulas.len()];
        let mut refuted_canonical = vec![false; formulas.len()];
        for n in 1..=2 {
            let mut buf = Vec::new();
            let mut budget = u64::MAX;
            for_each_frame(&u, FrameClass::All, n, &mut budget, &mut |frame| {
                let canonical = frame_is_canonical(frame);
                let (packed, var_masks) = packed_frame(frame, 1);
                let worlds = packed.view().state_count();
                let full = (1u64 << worlds) - 1;
                bank.eval_into(&packed.view(), &var_masks, &mut buf);
                for (i, &root) in bank.roots().iter().enumerate() {
                    if buf[root] != full {
                        refuted_full[i] = true;
                        if canonical {
                            refuted_canonical[i] = true;
                        }
                    }
                }
                true
            })
            .unwrap();
        }
        assert_eq!(refuted_full, refuted_canonical);
        assert!(refuted_full[0]);
        assert!(!refuted_full[2]);
    }
}

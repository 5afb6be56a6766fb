//! Variable-and-agent elimination: the inductive table that rewrites a
//! sequent into a formula mentioning neither the eliminated propositional
//! variable nor the eliminated agent, its dual, the nested multi-symbol
//! pre- and post-interpolants, and an independent verifier for the three
//! uniform-interpolant conditions.

use std::fmt;

use thiserror::Error;

use crate::calculus::{Goal, Logic};
use crate::formula::{Formula, FormulaKind, Group};
use crate::multiset::FormulaMultiset;
use crate::prover::{ProveError, Prover};
use crate::sequents::{measure_lt, Sequent, TSequent};

/// The pair of symbols one elimination pass removes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElimTarget {
    pub var: String,
    pub agent: String,
}

impl ElimTarget {
    pub fn new(var: impl Into<String>, agent: impl Into<String>) -> Self {
        Self { var: var.into(), agent: agent.into() }
    }
}

impl fmt::Display for ElimTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.var, self.agent)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum InterpolationError {
    #[error(transparent)]
    Prove(#[from] ProveError),
    #[error("nothing to eliminate: variable and agent lists are both empty")]
    EmptyElimination,
}

/// Which table line a trace node applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceLine {
    /// Lines 1 to 8: propositional decomposition, by line number.
    Decompose(u8),
    /// T-table line 9: an antecedent box moves to the store, its body stays.
    StoreBox,
    /// The eliminated variable occurs on both sides; result is top.
    SharedVar,
    /// A derivable premise behind a succedent box of the eliminated agent's
    /// singleton group; result is top.
    BoxTest,
    /// `KD` only: the eliminated agent's boxes have a derivably empty
    /// premise; result is top.
    SerialTest,
    /// The disjunction built from the critical sequent's members.
    Disjunction,
    /// The empty sequent; result is bottom.
    EmptyBase,
}

impl TraceLine {
    /// The table line label; the two tables number their shared cases
    /// differently, so the label depends on which table the goal belongs to.
    pub fn label(self, stored: bool) -> &'static str {
        match (self, stored) {
            (TraceLine::Decompose(1), _) => "1",
            (TraceLine::Decompose(2), _) => "2",
            (TraceLine::Decompose(3), _) => "3",
            (TraceLine::Decompose(4), _) => "4",
            (TraceLine::Decompose(5), _) => "5",
            (TraceLine::Decompose(6), _) => "6",
            (TraceLine::Decompose(7), _) => "7",
            (TraceLine::Decompose(8), _) => "8",
            (TraceLine::Decompose(_), _) => unreachable!("decomposition lines are 1 to 8"),
            (TraceLine::StoreBox, _) => "9",
            (TraceLine::SharedVar, false) => "9",
            (TraceLine::SharedVar, true) => "10",
            (TraceLine::BoxTest, false) => "10",
            (TraceLine::BoxTest, true) => "11",
            (TraceLine::SerialTest, _) => "10'",
            (TraceLine::Disjunction, false) => "11",
            (TraceLine::Disjunction, true) => "12",
            (TraceLine::EmptyBase, _) => "empty",
        }
    }
}

/// One elimination step: the sequent it matched, the line applied, the
/// formula produced, and the recursive calls made.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceNode {
    pub line: TraceLine,
    pub goal: Goal,
    pub result: Formula,
    pub children: Vec<TraceNode>,
}

/// The full call tree of one elimination run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpolationTrace {
    pub root: TraceNode,
}

impl InterpolationTrace {
    pub fn node_count(&self) -> usize {
        fn count(n: &TraceNode) -> usize {
            1 + n.children.iter().map(count).sum::<usize>()
        }
        count(&self.root)
    }

    /// Edges whose child sequent fails to sit strictly below its parent in
    /// the termination order. Always zero unless the table is broken.
    pub fn descent_violations(&self) -> u64 {
        fn walk(n: &TraceNode, violations: &mut u64) {
            let parent = n.goal.measure();
            for child in &n.children {
                if !measure_lt(&child.goal.measure(), &parent) {
                    *violations += 1;
                }
                walk(child, violations);
            }
        }
        let mut violations = 0;
        walk(&self.root, &mut violations);
        violations
    }
}

/// Renders a trace as nested JSON objects with `line`, `sequent`, `result`,
/// and `children`.
pub fn trace_to_json(trace: &InterpolationTrace) -> serde_json::Value {
    fn node(n: &TraceNode) -> serde_json::Value {
        let stored = matches!(n.goal, Goal::Stored(_));
        serde_json::json!({
            "line": n.line.label(stored),
            "sequent": n.goal.to_string(),
            "result": n.result.to_string(),
            "children": n.children.iter().map(node).collect::<Vec<_>>(),
        })
    }
    node(&trace.root)
}

fn is_propositional_compound(f: &Formula) -> bool {
    matches!(
        f.kind(),
        FormulaKind::And(..) | FormulaKind::Or(..) | FormulaKind::Implies(..) | FormulaKind::Not(_)
    )
}

struct Elim<'a> {
    prover: &'a mut Prover,
    target: &'a ElimTarget,
}

impl Elim<'_> {
    fn singleton_group(&self) -> Group {
        Group::singleton(self.target.agent.clone())
    }

    fn eliminated_var(&self) -> Formula {
        Formula::var(self.target.var.clone())
    }

    /// The table over plain sequents, for `K` and `KD`.
    fn plain(
        &mut self,
        ant: FormulaMultiset,
        suc: FormulaMultiset,
    ) -> Result<(Formula, TraceNode), ProveError> {
        let goal = Goal::plain(ant.clone(), suc.clone());
        let done = |line, result: Formula, children| {
            (result.clone(), TraceNode { line, goal: goal.clone(), result, children })
        };

        if ant.is_empty() && suc.is_empty() {
            return Ok(done(TraceLine::EmptyBase, Formula::bottom(), vec![]));
        }

        // Lines 1, 3, 5, 7: first compound antecedent member.
        if let Some(f) = ant.distinct().find(|f| is_propositional_compound(f)).cloned() {
            let rest = ant.without_one(&f).expect("member just found");
            let (line, result, children) = match f.kind() {
                FormulaKind::And(a, b) => {
                    let (r, c) = self.plain(rest.with(a.clone()).with(b.clone()), suc)?;
                    (TraceLine::Decompose(1), r, vec![c])
                }
                FormulaKind::Or(a, b) => {
                    let (r1, c1) = self.plain(rest.with(a.clone()), suc.clone())?;
                    let (r2, c2) = self.plain(rest.with(b.clone()), suc)?;
                    (TraceLine::Decompose(3), Formula::and(r1, r2), vec![c1, c2])
                }
                FormulaKind::Not(a) => {
                    let (r, c) = self.plain(rest, suc.with(a.clone()))?;
                    (TraceLine::Decompose(5), r, vec![c])
                }
                FormulaKind::Implies(a, b) => {
                    let (r1, c1) = self.plain(rest.clone(), suc.with(a.clone()))?;
                    let (r2, c2) = self.plain(rest.with(b.clone()), suc)?;
                    (TraceLine::Decompose(7), Formula::and(r1, r2), vec![c1, c2])
                }
                _ => unreachable!("filtered to compounds"),
            };
            return Ok(done(line, result, children));
        }

        // Lines 2, 4, 6, 8: first compound succedent member.
        if let Some(f) = suc.distinct().find(|f| is_propositional_compound(f)).cloned() {
            let rest = suc.without_one(&f).expect("member just found");
            let (line, result, children) = match f.kind() {
                FormulaKind::And(a, b) => {
                    let (r1, c1) = self.plain(ant.clone(), rest.with(a.clone()))?;
                    let (r2, c2) = self.plain(ant, rest.with(b.clone()))?;
                    (TraceLine::Decompose(2), Formula::and(r1, r2), vec![c1, c2])
                }
                FormulaKind::Or(a, b) => {
                    let (r, c) = self.plain(ant, rest.with(a.clone()).with(b.clone()))?;
                    (TraceLine::Decompose(4), r, vec![c])
                }
                FormulaKind::Not(a) => {
                    let (r, c) = self.plain(ant.with(a.clone()), rest)?;
                    (TraceLine::Decompose(6), r, vec![c])
                }
                FormulaKind::Implies(a, b) => {
                    let (r, c) = self.plain(ant.with(a.clone()), rest.with(b.clone()))?;
                    (TraceLine::Decompose(8), r, vec![c])
                }
                _ => unreachable!("filtered to compounds"),
            };
            return Ok(done(line, result, children));
        }

        // The sequent is critical from here on.
        let p = self.eliminated_var();
        if ant.contains(&p) && suc.contains(&p) {
            return Ok(done(TraceLine::SharedVar, Formula::top(), vec![]));
        }

        let single = self.singleton_group();
        let agent_bodies = ant.bodies_with_group(&single);
        for f in suc.distinct() {
            let Some((group, body)) = f.as_boxed() else { continue };
            if group != &single {
                continue;
            }
            let premise = Sequent::new(agent_bodies.clone(), FormulaMultiset::singleton(body.clone()));
            if self.prover.prove(&premise)?.is_derivable() {
                return Ok(done(TraceLine::BoxTest, Formula::top(), vec![]));
            }
        }

        if self.prover.logic() == Logic::Kd && !agent_bodies.is_empty() {
            let premise = Sequent::new(agent_bodies, FormulaMultiset::new());
            if self.prover.prove(&premise)?.is_derivable() {
                return Ok(done(TraceLine::SerialTest, Formula::top(), vec![]));
            }
        }

        let (disjuncts, children) = self.build_x(&ant, &ant, &suc, false)?;
        Ok(done(TraceLine::Disjunction, fold_or(disjuncts), children))
    }

    /// The table over T-sequents, for the reflexive logic.
    fn stored(
        &mut self,
        store: FormulaMultiset,
        ant: FormulaMultiset,
        suc: FormulaMultiset,
    ) -> Result<(Formula, TraceNode), ProveError> {
        let goal = Goal::Stored(
            TSequent::new(store.clone(), ant.clone(), suc.clone()).expect("store holds boxes"),
        );
        let done = |line, result: Formula, children| {
            (result.clone(), TraceNode { line, goal: goal.clone(), result, children })
        };

        if ant.is_empty() && suc.is_empty() {
            return Ok(done(TraceLine::EmptyBase, Formula::bottom(), vec![]));
        }

        // Lines 1, 3, 5, 7 on compounds and line 9 on boxes, scanning the
        // antecedent in canonical order.
        if let Some(f) = ant
            .distinct()
            .find(|f| is_propositional_compound(f) || f.is_boxed())
            .cloned()
        {
            let rest = ant.without_one(&f).expect("member just found");
            let (line, result, children) = match f.kind() {
                FormulaKind::And(a, b) => {
                    let (r, c) = self.stored(store, rest.with(a.clone()).with(b.clone()), suc)?;
                    (TraceLine::Decompose(1), r, vec![c])
                }
                FormulaKind::Or(a, b) => {
                    let (r1, c1) = self.stored(store.clone(), rest.with(a.clone()), suc.clone())?;
                    let (r2, c2) = self.stored(store, rest.with(b.clone()), suc)?;
                    (TraceLine::Decompose(3), Formula::and(r1, r2), vec![c1, c2])
                }
                FormulaKind::Not(a) => {
                    let (r, c) = self.stored(store, rest, suc.with(a.clone()))?;
                    (TraceLine::Decompose(5), r, vec![c])
                }
                FormulaKind::Implies(a, b) => {
                    let (r1, c1) = self.stored(store.clone(), rest.clone(), suc.with(a.clone()))?;
                    let (r2, c2) = self.stored(store, rest.with(b.clone()), suc)?;
                    (TraceLine::Decompose(7), Formula::and(r1, r2), vec![c1, c2])
                }
                FormulaKind::Dist(_, body) => {
                    let (r, c) =
                        self.stored(store.with(f.clone()), rest.with(body.clone()), suc)?;
                    (TraceLine::StoreBox, r, vec![c])
                }
                _ => unreachable!("filtered to compounds and boxes"),
            };
            return Ok(done(line, result, children));
        }

        if let Some(f) = suc.distinct().find(|f| is_propositional_compound(f)).cloned() {
            let rest = suc.without_one(&f).expect("member just found");
            let (line, result, children) = match f.kind() {
                FormulaKind::And(a, b) => {
                    let (r1, c1) = self.stored(store.clone(), ant.clone(), rest.with(a.clone()))?;
                    let (r2, c2) = self.stored(store, ant, rest.with(b.clone()))?;
                    (TraceLine::Decompose(2), Formula::and(r1, r2), vec![c1, c2])
                }
                FormulaKind::Or(a, b) => {
                    let (r, c) = self.stored(store, ant, rest.with(a.clone()).with(b.clone()))?;
                    (TraceLine::Decompose(4), r, vec![c])
                }
                FormulaKind::Not(a) => {
                    let (r, c) = self.stored(store, ant.with(a.clone()), rest)?;
                    (TraceLine::Decompose(6), r, vec![c])
                }
                FormulaKind::Implies(a, b) => {
                    let (r, c) = self.stored(store, ant.with(a.clone()), rest.with(b.clone()))?;
                    (TraceLine::Decompose(8), r, vec![c])
                }
                _ => unreachable!("filtered to compounds"),
            };
            return Ok(done(line, result, children));
        }

        // The T-sequent is critical from here on.
        let p = self.eliminated_var();
        if ant.contains(&p) && suc.contains(&p) {
            return Ok(done(TraceLine::SharedVar, Formula::top(), vec![]));
        }

        let single = self.singleton_group();
        let agent_bodies = store.bodies_with_group(&single);
        for f in suc.distinct() {
            let Some((group, body)) = f.as_boxed() else { continue };
            if group != &single {
                continue;
            }
            let premise = TSequent::plain(agent_bodies.clone(), FormulaMultiset::singleton(body.clone()));
            if self.prover.prove_tsequent(&premise)?.is_derivable() {
                return Ok(done(TraceLine::BoxTest, Formula::top(), vec![]));
            }
        }

        let (disjuncts, children) = self.build_x(&store, &ant, &suc, true)?;
        Ok(done(TraceLine::Disjunction, fold_or(disjuncts), children))
    }

    /// The disjunction of a critical sequent, family by family: negated
    /// antecedent variables, succedent variables, one negated bottom per
    /// antecedent bottom, one bottom per succedent bottom, a diamond per
    /// eligible box on the antecedent side (for the T-table, the store), and
    /// a box per eligible succedent box, per multiset occurrence throughout.
    fn build_x(
        &mut self,
        boxes: &FormulaMultiset,
        ant: &FormulaMultiset,
        suc: &FormulaMultiset,
        stored: bool,
    ) -> Result<(Vec<Formula>, Vec<TraceNode>), ProveError> {
        let p = self.eliminated_var();
        let agent = self.target.agent.as_str();
        let mut disjuncts = Vec::new();
        let mut children = Vec::new();

        for (f, n) in ant.iter() {
            if f.is_var() && *f != p {
                push_copies(&mut disjuncts, Formula::not(f.clone()), n);
            }
        }
        for (f, n) in suc.iter() {
            if f.is_var() && *f != p {
                push_copies(&mut disjuncts, f.clone(), n);
            }
        }
        push_copies(&mut disjuncts, Formula::not(Formula::bottom()), ant.count(&Formula::bottom()));
        push_copies(&mut disjuncts, Formula::bottom(), suc.count(&Formula::bottom()));

        for (f, n) in boxes.iter() {
            let Some((group, _)) = f.as_boxed() else { continue };
            if group.contains(agent) {
                continue;
            }
            let sub_ant = boxes.bodies_of_subgroups(group);
            let (inner, child) = self.recurse(sub_ant, FormulaMultiset::new(), stored)?;
            push_copies(&mut disjuncts, Formula::dia(group.clone(), inner), n);
            children.push(child);
        }

        for (f, n) in suc.iter() {
            let Some((group, body)) = f.as_boxed() else { continue };
            if group.contains(agent) {
                continue;
            }
            let sub_ant = boxes.bodies_of_subgroups(group);
            let (inner, child) =
                self.recurse(sub_ant, FormulaMultiset::singleton(body.clone()), stored)?;
            push_copies(&mut disjuncts, Formula::dist(group.clone(), inner), n);
            children.push(child);
        }

        for (f, n) in suc.iter() {
            let Some((group, body)) = f.as_boxed() else { continue };
            if !group.contains(agent) {
                continue;
            }
            let Some(without) = group.without(agent) else { continue };
            let sub_ant = boxes.bodies_of_subgroups(group);
            let (inner, child) =
                self.recurse(sub_ant, FormulaMultiset::singleton(body.clone()), stored)?;
            push_copies(&mut disjuncts, Formula::dist(without, inner), n);
            children.push(child);
        }

        Ok((disjuncts, children))
    }

    fn recurse(
        &mut self,
        ant: FormulaMultiset,
        suc: FormulaMultiset,
        stored: bool,
    ) -> Result<(Formula, TraceNode), ProveError> {
        if stored {
            self.stored(FormulaMultiset::new(), ant, suc)
        } else {
            self.plain(ant, suc)
        }
    }
}

fn push_copies(out: &mut Vec<Formula>, f: Formula, n: usize) {
    for _ in 0..n {
        out.push(f.clone());
    }
}

fn fold_or(disjuncts: Vec<Formula>) -> Formula {
    let mut iter = disjuncts.into_iter();
    let Some(first) = iter.next() else {
        return Formula::bottom();
    };
    iter.fold(first, Formula::or)
}

/// Eliminates the target's variable and agent from a plain sequent, for `K`
/// and `KD`. The result names neither symbol, and with the sequent's
/// antecedent it derives the succedent.
pub fn a_formula(
    prover: &mut Prover,
    target: &ElimTarget,
    sequent: &Sequent,
) -> Result<(Formula, InterpolationTrace), ProveError> {
    assert!(
        !prover.logic().uses_tsequents(),
        "plain-table elimination runs in K or KD; the reflexive logic uses a_formula_t"
    );
    let mut elim = Elim { prover, target };
    let (result, root) = elim.plain(sequent.antecedent.clone(), sequent.succedent.clone())?;
    Ok((result, InterpolationTrace { root }))
}

/// Eliminates over a T-sequent, for the reflexive logic. The entry point for
/// a plain sequent is its empty-store embedding.
pub fn a_formula_t(
    prover: &mut Prover,
    target: &ElimTarget,
    tsequent: &TSequent,
) -> Result<(Formula, InterpolationTrace), ProveError> {
    assert!(prover.logic().uses_tsequents(), "the T-table runs in the reflexive logic");
    let mut elim = Elim { prover, target };
    let (result, root) = elim.stored(
        tsequent.store().clone(),
        tsequent.antecedent.clone(),
        tsequent.succedent.clone(),
    )?;
    Ok((result, InterpolationTrace { root }))
}

fn a_for_logic(
    prover: &mut Prover,
    target: &ElimTarget,
    antecedent: FormulaMultiset,
    succedent: FormulaMultiset,
) -> Result<Formula, ProveError> {
    if prover.logic().uses_tsequents() {
        let ts = TSequent::plain(antecedent, succedent);
        Ok(a_formula_t(prover, target, &ts)?.0)
    } else {
        let s = Sequent::new(antecedent, succedent);
        Ok(a_formula(prover, target, &s)?.0)
    }
}

/// The dual eliminator: negates the elimination of the negated formula.
/// Where elimination of a succedent formula is implied by it, this one
/// implies the original.
pub fn e_formula(
    prover: &mut Prover,
    target: &ElimTarget,
    beta: &Formula,
) -> Result<Formula, ProveError> {
    let negated = FormulaMultiset::singleton(Formula::not(beta.clone()));
    let inner = a_for_logic(prover, target, FormulaMultiset::new(), negated)?;
    Ok(Formula::not(inner))
}

/// Pads the shorter list by repeating its last element, then pairs the lists
/// positionally. Errors when both are empty.
fn paired_targets(
    vars: &[String],
    agents: &[String],
) -> Result<Vec<ElimTarget>, InterpolationError> {
    if vars.is_empty() && agents.is_empty() {
        return Err(InterpolationError::EmptyElimination);
    }
    if vars.is_empty() || agents.is_empty() {
        // A one-sided request would eliminate a symbol of the other kind
        // that the caller never named; there is no neutral filler.
        return Err(InterpolationError::EmptyElimination);
    }
    let n = vars.len().max(agents.len());
    Ok((0..n)
        .map(|i| {
            ElimTarget::new(
                vars[i.min(vars.len() - 1)].clone(),
                agents[i.min(agents.len() - 1)].clone(),
            )
        })
        .collect())
}

/// The strongest consequence of `alpha` in the remaining vocabulary: nested
/// elimination over all requested variables and agents, innermost pair
/// first, the shorter list padded by repeating its last element.
pub fn pre_interpolant(
    prover: &mut Prover,
    alpha: &Formula,
    vars: &[String],
    agents: &[String],
) -> Result<Formula, InterpolationError> {
    let targets = paired_targets(vars, agents)?;
    let mut result = alpha.clone();
    for target in targets.iter().rev() {
        result = a_for_logic(
            prover,
            target,
            FormulaMultiset::new(),
            FormulaMultiset::singleton(result),
        )?;
    }
    Ok(result)
}

/// The weakest antecedent for `alpha` in the remaining vocabulary: the dual
/// nesting, innermost pair first, with the same padding.
pub fn post_interpolant(
    prover: &mut Prover,
    alpha: &Formula,
    vars: &[String],
    agents: &[String],
) -> Result<Formula, InterpolationError> {
    let targets = paired_targets(vars, agents)?;
    let mut result = alpha.clone();
    for target in targets.iter().rev() {
        result = e_formula(prover, target, &result)?;
    }
    Ok(result)
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error(transparent)]
    Prove(#[from] ProveError),
    #[error("side test {index} mentions the eliminated {what} `{name}`")]
    TargetInSideTest {
        index: usize,
        what: &'static str,
        name: String,
    },
}

/// Outcome of one side test: vacuously fine unless the premise holds and the
/// interpolated conclusion fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SideTestOutcome {
    pub premise_derivable: bool,
    pub conclusion_derivable: bool,
}

impl SideTestOutcome {
    pub fn ok(&self) -> bool {
        !self.premise_derivable || self.conclusion_derivable
    }
}

/// The three interpolant conditions, each reported separately.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpolantReport {
    /// The candidate's variables and agents stay inside the sequent's
    /// vocabulary minus the eliminated pair.
    pub vocabulary_ok: bool,
    /// Antecedent plus candidate derives the succedent.
    pub implication_ok: bool,
    pub side_tests: Vec<SideTestOutcome>,
}

impl InterpolantReport {
    pub fn all_ok(&self) -> bool {
        self.vocabulary_ok && self.implication_ok && self.side_tests.iter().all(|t| t.ok())
    }
}

/// Checks a candidate interpolant `a` for the sequent against the three
/// conditions. Each side test `(Π, Λ)` must avoid the eliminated pair; when
/// its premise `Π,Γ => Δ,Λ` is derivable, `Π => a,Λ` must be too.
pub fn verify_interpolant(
    prover: &mut Prover,
    target: &ElimTarget,
    sequent: &Sequent,
    a: &Formula,
    side_tests: &[(FormulaMultiset, FormulaMultiset)],
) -> Result<InterpolantReport, VerifyError> {
    for (index, (pi, lambda)) in side_tests.iter().enumerate() {
        let mut vocab = pi.vocab();
        vocab.merge(&lambda.vocab());
        if vocab.vars.contains(&target.var) {
            return Err(VerifyError::TargetInSideTest {
                index,
                what: "variable",
                name: target.var.clone(),
            });
        }
        if vocab.agents.contains(&target.agent) {
            return Err(VerifyError::TargetInSideTest {
                index,
                what: "agent",
                name: target.agent.clone(),
            });
        }
    }

    let sequent_vocab = sequent.vocab();
    let a_vocab = a.vocab();
    let vocabulary_ok = a_vocab.vars.iter().all(|v| v != &target.var && sequent_vocab.vars.contains(v))
        && a_vocab
            .agents
            .iter()
            .all(|g| g != &target.agent && sequent_vocab.agents.contains(g));

    let with_a = Sequent::new(sequent.antecedent.with(a.clone()), sequent.succedent.clone());
    let implication_ok = prover.prove(&with_a)?.is_derivable();

    let mut outcomes = Vec::with_capacity(side_tests.len());
    for (pi, lambda) in side_tests {
        let premise = Sequent::new(
            pi.union(&sequent.antecedent),
            sequent.succedent.union(lambda),
        );
        let premise_derivable = prover.prove(&premise)?.is_derivable();
        let conclusion_derivable = if premise_derivable {
            let conclusion = Sequent::new(pi.clone(), lambda.with(a.clone()));
            prover.prove(&conclusion)?.is_derivable()
        } else {
            false
        };
        outcomes.push(SideTestOutcome { premise_derivable, conclusion_derivable });
    }

    Ok(InterpolantReport { vocabulary_ok, implication_ok, side_tests: outcomes })
}

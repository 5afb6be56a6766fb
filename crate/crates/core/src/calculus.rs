//! The three sequent calculi: rule instances, backward move enumeration,
//! proof trees, and an independent proof checker.
//!
//! `K` and `KD` work on plain sequents. `KTplus` works on T-sequents; a plain
//! sequent is treated there by embedding it with an empty store, and the
//! reflexive logic's derivability is defined through that embedding.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::formula::{Formula, FormulaKind, Group, Vocabulary};
use crate::multiset::FormulaMultiset;
use crate::sequents::{Measure, Sequent, TSequent};

/// Which calculus backward search runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Logic {
    K,
    #[serde(rename = "KD")]
    Kd,
    #[serde(rename = "KTplus")]
    KtPlus,
}

impl Logic {
    /// Whether goals carry a store.
    pub fn uses_tsequents(self) -> bool {
        matches!(self, Logic::KtPlus)
    }

    pub fn name(self) -> &'static str {
        match self {
            Logic::K => "K",
            Logic::Kd => "KD",
            Logic::KtPlus => "KTplus",
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Antecedent,
    Succedent,
}

/// A search goal: a plain sequent, or a T-sequent with its store.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Goal {
    Plain(Sequent),
    Stored(TSequent),
}

impl Goal {
    pub fn plain(antecedent: FormulaMultiset, succedent: FormulaMultiset) -> Self {
        Goal::Plain(Sequent::new(antecedent, succedent))
    }

    /// The empty-store embedding of a plain sequent.
    pub fn embedded(sequent: &Sequent) -> Self {
        Goal::Stored(TSequent::plain(sequent.antecedent.clone(), sequent.succedent.clone()))
    }

    pub fn measure(&self) -> Measure {
        match self {
            Goal::Plain(s) => s.measure(),
            Goal::Stored(t) => t.measure(),
        }
    }

    pub fn vocab(&self) -> Vocabulary {
        match self {
            Goal::Plain(s) => s.vocab(),
            Goal::Stored(t) => t.vocab(),
        }
    }

    /// Multiplicities forced to 1 in every part; the memo key shape.
    pub fn collapsed(&self) -> Goal {
        match self {
            Goal::Plain(s) => Goal::Plain(s.collapsed()),
            Goal::Stored(t) => Goal::Stored(t.collapsed()),
        }
    }

    pub fn is_critical(&self) -> bool {
        match self {
            Goal::Plain(s) => s.is_critical(),
            Goal::Stored(t) => t.is_critical(),
        }
    }

    fn antecedent(&self) -> &FormulaMultiset {
        match self {
            Goal::Plain(s) => &s.antecedent,
            Goal::Stored(t) => &t.antecedent,
        }
    }

    fn succedent(&self) -> &FormulaMultiset {
        match self {
            Goal::Plain(s) => &s.succedent,
            Goal::Stored(t) => &t.succedent,
        }
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Goal::Plain(s) => s.fmt(f),
            Goal::Stored(t) => t.fmt(f),
        }
    }
}

/// Rule names, shared between move enumeration, proof trees, and rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleTag {
    Initial,
    BottomLeft,
    AndLeft,
    AndRight,
    OrLeft,
    OrRight,
    ImpliesLeft,
    ImpliesRight,
    NotLeft,
    NotRight,
    #[serde(rename = "DK")]
    DK,
    #[serde(rename = "DD")]
    DD,
    #[serde(rename = "DKplus")]
    DKPlus,
    #[serde(rename = "DTplus")]
    DTPlus,
}

impl RuleTag {
    pub fn name(self) -> &'static str {
        match self {
            RuleTag::Initial => "Initial",
            RuleTag::BottomLeft => "BottomLeft",
            RuleTag::AndLeft => "AndLeft",
            RuleTag::AndRight => "AndRight",
            RuleTag::OrLeft => "OrLeft",
            RuleTag::OrRight => "OrRight",
            RuleTag::ImpliesLeft => "ImpliesLeft",
            RuleTag::ImpliesRight => "ImpliesRight",
            RuleTag::NotLeft => "NotLeft",
            RuleTag::NotRight => "NotRight",
            RuleTag::DK => "DK",
            RuleTag::DD => "DD",
            RuleTag::DKPlus => "DKplus",
            RuleTag::DTPlus => "DTplus",
        }
    }

    pub fn is_axiom(self) -> bool {
        matches!(self, RuleTag::Initial | RuleTag::BottomLeft)
    }

    fn latex_label(self) -> &'static str {
        match self {
            RuleTag::Initial | RuleTag::BottomLeft => "",
            RuleTag::AndLeft => r"(L\wedge)",
            RuleTag::AndRight => r"(R\wedge)",
            RuleTag::OrLeft => r"(L\vee)",
            RuleTag::OrRight => r"(R\vee)",
            RuleTag::ImpliesLeft => r"(L\rightarrow)",
            RuleTag::ImpliesRight => r"(R\rightarrow)",
            RuleTag::NotLeft => r"(L\neg)",
            RuleTag::NotRight => r"(R\neg)",
            RuleTag::DK => r"(D_K)",
            RuleTag::DD => r"(D_D)",
            RuleTag::DKPlus => r"(D_K^+)",
            RuleTag::DTPlus => r"(D_T^+)",
        }
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The formula occurrences a rule instance acts on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Principal {
    /// Initial sequents: the shared variable, or `false` on the left.
    Atom(Formula),
    /// One-formula rules, on the given side of the conclusion.
    Single(Side, Formula),
    /// Modal rules: the boxes consumed from the antecedent (for `DKplus`,
    /// from the store), with multiplicity, and the succedent box introduced
    /// by the box rules.
    Modal {
        boxes: FormulaMultiset,
        introduced: Option<Formula>,
    },
}

/// One backward rule application: the premises it leaves open, bottom-up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Move {
    pub rule: RuleTag,
    pub principal: Principal,
    pub premises: Vec<Goal>,
}

/// Every rule instance applicable backward at the goal, in the deterministic
/// order search follows: initial sequents, then logical rules (antecedent
/// before succedent, canonical order within a side), then box transfer
/// (`DTplus`), then the branching modal rules (`DD` before `DK` in `KD`).
///
/// The modal rules' context conditions force every qualifying box to be
/// principal, so each instance is determined by its succedent box (for `DK`
/// and `DKplus`) or its singleton agent (for `DD`); the enumeration is
/// complete over rule instances, one entry per distinct principal choice.
pub fn enumerate_backward_moves(logic: Logic, goal: &Goal) -> Vec<Move> {
    match (logic, goal) {
        (Logic::K, Goal::Plain(s)) => {
            let mut moves = axiom_moves(goal);
            moves.extend(logical_moves(goal));
            if s.is_critical() {
                moves.extend(dk_moves(s));
            }
            moves
        }
        (Logic::Kd, Goal::Plain(s)) => {
            let mut moves = axiom_moves(goal);
            moves.extend(logical_moves(goal));
            if s.is_critical() {
                moves.extend(dd_moves(s));
                moves.extend(dk_moves(s));
            }
            moves
        }
        (Logic::KtPlus, Goal::Stored(t)) => {
            let mut moves = axiom_moves(goal);
            moves.extend(logical_moves(goal));
            moves.extend(dt_plus_moves(t));
            if t.is_critical() {
                moves.extend(dk_plus_moves(t));
            }
            moves
        }
        (logic, goal) => panic!("goal shape {goal} does not fit logic {logic}"),
    }
}

fn axiom_moves(goal: &Goal) -> Vec<Move> {
    let ant = goal.antecedent();
    let suc = goal.succedent();
    let mut moves = Vec::new();
    if ant.contains(&Formula::bottom()) {
        moves.push(Move {
            rule: RuleTag::BottomLeft,
            principal: Principal::Atom(Formula::bottom()),
            premises: Vec::new(),
        });
    }
    for f in ant.distinct() {
        if f.is_var() && suc.contains(f) {
            moves.push(Move {
                rule: RuleTag::Initial,
                principal: Principal::Atom(f.clone()),
                premises: Vec::new(),
            });
        }
    }
    moves
}

fn logical_moves(goal: &Goal) -> Vec<Move> {
    let rebuild = |ant: FormulaMultiset, suc: FormulaMultiset| match goal {
        Goal::Plain(_) => Goal::plain(ant, suc),
        Goal::Stored(t) => Goal::Stored(
            TSequent::new(t.store().clone(), ant, suc).expect("store is unchanged"),
        ),
    };
    let ant = goal.antecedent();
    let suc = goal.succedent();
    let mut moves = Vec::new();

    for f in ant.distinct() {
        let rest = ant.without_one(f).expect("iterating members");
        let (rule, premises) = match f.kind() {
            FormulaKind::And(a, b) => (
                RuleTag::AndLeft,
                vec![rebuild(rest.with(a.clone()).with(b.clone()), suc.clone())],
            ),
            FormulaKind::Or(a, b) => (
                RuleTag::OrLeft,
                vec![
                    rebuild(rest.with(a.clone()), suc.clone()),
                    rebuild(rest.with(b.clone()), suc.clone()),
                ],
            ),
            FormulaKind::Implies(a, b) => (
                RuleTag::ImpliesLeft,
                vec![
                    rebuild(rest.clone(), suc.with(a.clone())),
                    rebuild(rest.with(b.clone()), suc.clone()),
                ],
            ),
            FormulaKind::Not(a) => {
                (RuleTag::NotLeft, vec![rebuild(rest, suc.with(a.clone()))])
            }
            _ => continue,
        };
        moves.push(Move {
            rule,
            principal: Principal::Single(Side::Antecedent, f.clone()),
            premises,
        });
    }

    for f in suc.distinct() {
        let rest = suc.without_one(f).expect("iterating members");
        let (rule, premises) = match f.kind() {
            FormulaKind::And(a, b) => (
                RuleTag::AndRight,
                vec![
                    rebuild(ant.clone(), rest.with(a.clone())),
                    rebuild(ant.clone(), rest.with(b.clone())),
                ],
            ),
            FormulaKind::Or(a, b) => (
                RuleTag::OrRight,
                vec![rebuild(ant.clone(), rest.with(a.clone()).with(b.clone()))],
            ),
            FormulaKind::Implies(a, b) => (
                RuleTag::ImpliesRight,
                vec![rebuild(ant.with(a.clone()), rest.with(b.clone()))],
            ),
            FormulaKind::Not(a) => {
                (RuleTag::NotRight, vec![rebuild(ant.with(a.clone()), rest)])
            }
            _ => continue,
        };
        moves.push(Move {
            rule,
            principal: Principal::Single(Side::Succedent, f.clone()),
            premises,
        });
    }

    moves
}

/// `DK` at a critical sequent: one instance per distinct succedent box
/// `D{G}β`; every antecedent box whose group is within `G` must be principal.
fn dk_moves(s: &Sequent) -> Vec<Move> {
    let mut moves = Vec::new();
    for f in s.succedent.distinct() {
        let Some((group, body)) = f.as_boxed() else { continue };
        let premise = Sequent::new(
            s.antecedent.bodies_of_subgroups(group),
            FormulaMultiset::singleton(body.clone()),
        );
        moves.push(Move {
            rule: RuleTag::DK,
            principal: Principal::Modal {
                boxes: s.antecedent.boxes_of_subgroups(group),
                introduced: Some(f.clone()),
            },
            premises: vec![Goal::Plain(premise)],
        });
    }
    moves
}

/// `DD` at a critical sequent: one instance per distinct single agent with a
/// box `D{a}γ` in the antecedent; every box with exactly that group is
/// principal, and the premise succedent is empty.
fn dd_moves(s: &Sequent) -> Vec<Move> {
    let mut agents = std::collections::BTreeSet::new();
    for f in s.antecedent.distinct() {
        if let Some((group, _)) = f.as_boxed() {
            if let Some(agent) = group.as_singleton() {
                agents.insert(agent.to_string());
            }
        }
    }
    agents
        .into_iter()
        .map(|agent| {
            let group = Group::singleton(agent);
            let premise =
                Sequent::new(s.antecedent.bodies_with_group(&group), FormulaMultiset::new());
            Move {
                rule: RuleTag::DD,
                principal: Principal::Modal {
                    boxes: s.antecedent.boxes_with_group(&group),
                    introduced: None,
                },
                premises: vec![Goal::Plain(premise)],
            }
        })
        .collect()
}

/// `DTplus`: one instance per distinct antecedent box; the box moves to the
/// store and its body joins the antecedent.
fn dt_plus_moves(t: &TSequent) -> Vec<Move> {
    let mut moves = Vec::new();
    for f in t.antecedent.distinct() {
        let Some((_, body)) = f.as_boxed() else { continue };
        let ant = t.antecedent.without_one(f).expect("iterating members").with(body.clone());
        let premise = TSequent::new(t.store().with(f.clone()), ant, t.succedent.clone())
            .expect("principal formula is boxed");
        moves.push(Move {
            rule: RuleTag::DTPlus,
            principal: Principal::Single(Side::Antecedent, f.clone()),
            premises: vec![Goal::Stored(premise)],
        });
    }
    moves
}

/// `DKplus` at a critical T-sequent: one instance per distinct succedent box
/// `D{G}β`; every store box whose group is within `G` is principal, and the
/// premise starts over with an empty store.
fn dk_plus_moves(t: &TSequent) -> Vec<Move> {
    let mut moves = Vec::new();
    for f in t.succedent.distinct() {
        let Some((group, body)) = f.as_boxed() else { continue };
        let premise = TSequent::plain(
            t.store().bodies_of_subgroups(group),
            FormulaMultiset::singleton(body.clone()),
        );
        moves.push(Move {
            rule: RuleTag::DKPlus,
            principal: Principal::Modal {
                boxes: t.store().boxes_of_subgroups(group),
                introduced: Some(f.clone()),
            },
            premises: vec![Goal::Stored(premise)],
        });
    }
    moves
}

/// A finished derivation: the conclusion at the root, premises above.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTree {
    pub conclusion: Goal,
    pub rule: RuleTag,
    pub principal: Principal,
    pub premises: Vec<ProofTree>,
}

impl ProofTree {
    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::node_count).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::height).max().unwrap_or(0)
    }
}

/// A rejected proof tree: the path of premise indices from the root to the
/// first bad node, and what was wrong there.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid proof at {}: {message}", format_path(path))]
pub struct ProofCheckError {
    pub path: Vec<usize>,
    pub message: String,
}

fn format_path(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        let steps: Vec<String> = path.iter().map(|i| i.to_string()).collect();
        format!("premise path {}", steps.join("."))
    }
}

/// Checks that every node applies a legal rule instance of the logic whose
/// premises are exactly the conclusions of its children.
pub fn check_proof(logic: Logic, tree: &ProofTree) -> Result<(), ProofCheckError> {
    let mut path = Vec::new();
    check_node(logic, tree, &mut path)
}

fn check_node(logic: Logic, node: &ProofTree, path: &mut Vec<usize>) -> Result<(), ProofCheckError> {
    let moves = enumerate_backward_moves(logic, &node.conclusion);
    let matching = moves
        .iter()
        .find(|m| m.rule == node.rule && m.principal == node.principal);
    let Some(mv) = matching else {
        return Err(ProofCheckError {
            path: path.clone(),
            message: format!("no {} instance with this principal at `{}`", node.rule, node.conclusion),
        });
    };
    if mv.premises.len() != node.premises.len() {
        return Err(ProofCheckError {
            path: path.clone(),
            message: format!(
                "{} needs {} premises, found {}",
                node.rule,
                mv.premises.len(),
                node.premises.len()
            ),
        });
    }
    for (i, (want, child)) in mv.premises.iter().zip(&node.premises).enumerate() {
        if child.conclusion != *want {
            path.push(i);
            let err = ProofCheckError {
                path: path.clone(),
                message: format!("premise should be `{}`, found `{}`", want, child.conclusion),
            };
            path.pop();
            return Err(err);
        }
        path.push(i);
        let res = check_node(logic, child, path);
        path.pop();
        res?;
    }
    Ok(())
}

fn principal_to_json(principal: &Principal) -> serde_json::Value {
    match principal {
        Principal::Atom(f) => serde_json::json!({
            "kind": "atom",
            "formula": f.to_string(),
        }),
        Principal::Single(side, f) => serde_json::json!({
            "kind": "single",
            "side": match side { Side::Antecedent => "antecedent", Side::Succedent => "succedent" },
            "formula": f.to_string(),
        }),
        Principal::Modal { boxes, introduced } => serde_json::json!({
            "kind": "modal",
            "boxes": boxes.occurrences().map(|f| f.to_string()).collect::<Vec<_>>(),
            "introduced": introduced.as_ref().map(|f| f.to_string()),
        }),
    }
}

/// Renders a proof tree as a JSON object: `conclusion` (printed sequent),
/// `rule`, `principal`, and `premises` (nested objects of the same shape).
pub fn proof_to_json(tree: &ProofTree) -> serde_json::Value {
    serde_json::json!({
        "conclusion": tree.conclusion.to_string(),
        "rule": tree.rule.name(),
        "principal": principal_to_json(&tree.principal),
        "premises": tree.premises.iter().map(proof_to_json).collect::<Vec<_>>(),
    })
}

fn latex_escape_name(name: &str) -> String {
    name.replace('_', r"\_")
}

fn latex_group(g: &Group) -> String {
    let members: Vec<String> = g.members().iter().map(|m| latex_escape_name(m)).collect();
    format!(r"D_{{\{{{}\}}}}", members.join(","))
}

fn latex_fmt(f: &Formula, min: u8, out: &mut String) {
    use FormulaKind::*;
    if let Not(inner) = f.kind() {
        match inner.kind() {
            Bottom => {
                out.push_str(r"\top");
                return;
            }
            Dist(g, body) => {
                if let Not(x) = body.kind() {
                    out.push_str(r"\langle ");
                    out.push_str(&latex_group(g));
                    out.push_str(r"\rangle ");
                    latex_fmt(x, 4, out);
                    return;
                }
            }
            _ => {}
        }
    }
    match f.kind() {
        Var(name) => out.push_str(&latex_escape_name(name)),
        Bottom => out.push_str(r"\bot"),
        Not(c) => {
            out.push_str(r"\neg ");
            latex_fmt(c, 4, out);
        }
        Dist(g, c) => {
            out.push_str(&latex_group(g));
            out.push(' ');
            latex_fmt(c, 4, out);
        }
        And(l, r) => latex_binary(l, r" \wedge ", r, 3, false, min, out),
        Or(l, r) => latex_binary(l, r" \vee ", r, 2, false, min, out),
        Implies(l, r) => latex_binary(l, r" \rightarrow ", r, 1, true, min, out),
    }
}

fn latex_binary(
    l: &Formula,
    op: &str,
    r: &Formula,
    prec: u8,
    right_assoc: bool,
    min: u8,
    out: &mut String,
) {
    let parens = prec < min;
    if parens {
        out.push('(');
    }
    let (lmin, rmin) = if right_assoc { (prec + 1, prec) } else { (prec, prec + 1) };
    latex_fmt(l, lmin, out);
    out.push_str(op);
    latex_fmt(r, rmin, out);
    if parens {
        out.push(')');
    }
}

/// Math-mode LaTeX for a formula.
pub fn formula_to_latex(f: &Formula) -> String {
    let mut out = String::new();
    latex_fmt(f, 0, &mut out);
    out
}

fn multiset_to_latex(m: &FormulaMultiset) -> String {
    let parts: Vec<String> = m.occurrences().map(formula_to_latex).collect();
    parts.join(", ")
}

/// Math-mode LaTeX for a goal, using `\Rightarrow` and, for T-sequents, a
/// `\mid` separated store.
pub fn goal_to_latex(goal: &Goal) -> String {
    match goal {
        Goal::Plain(s) => {
            format!(r"{} \Rightarrow {}", multiset_to_latex(&s.antecedent), multiset_to_latex(&s.succedent))
        }
        Goal::Stored(t) => format!(
            r"{} \mid {} \Rightarrow {}",
            multiset_to_latex(t.store()),
            multiset_to_latex(&t.antecedent),
            multiset_to_latex(&t.succedent)
        ),
    }
}

fn latex_walk(node: &ProofTree, out: &mut String) {
    for premise in &node.premises {
        latex_walk(premise, out);
    }
    let sequent = goal_to_latex(&node.conclusion);
    match node.premises.len() {
        0 => {
            out.push_str(&format!("\\AxiomC{{${sequent}$}}\n"));
        }
        n => {
            let label = node.rule.latex_label();
            if !label.is_empty() {
                out.push_str(&format!("\\RightLabel{{\\scriptsize ${label}$}}\n"));
            }
            let cmd = if n == 1 { "UnaryInfC" } else { "BinaryInfC" };
            out.push_str(&format!("\\{cmd}{{${sequent}$}}\n"));
        }
    }
}

/// Renders a proof tree for the LaTeX `bussproofs` package.
pub fn proof_to_latex(tree: &ProofTree) -> String {
    let mut out = String::from("\\begin{prooftree}\n");
    latex_walk(tree, &mut out);
    out.push_str("\\end{prooftree}\n");
    out
}

//! Formula terms, agent groups, and the structural measures defined on them:
//! weight, subformula sets, and vocabulary extraction.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

/// Errors from constructing agent universes, groups, and formulas.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("agent universe must not be empty")]
    EmptyUniverse,
    #[error("duplicate agent name `{0}` in universe")]
    DuplicateAgent(String),
    #[error("agent group must not be empty")]
    EmptyGroup,
    #[error("unknown agent name `{0}`")]
    UnknownAgent(String),
}

/// The fixed, finite, non-empty set of agent names for a session.
///
/// Names are stored sorted, so iteration order is deterministic and
/// independent of the order they were declared in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentUniverse {
    names: Vec<String>,
}

impl AgentUniverse {
    pub fn new<I, S>(names: I) -> Result<Self, SyntaxError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(SyntaxError::EmptyUniverse);
        }
        names.sort();
        for pair in names.windows(2) {
            if pair[0] == pair[1] {
                return Err(SyntaxError::DuplicateAgent(pair[0].clone()));
            }
        }
        Ok(Self { names })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).is_ok()
    }

    /// The group containing every agent of the universe.
    pub fn full_group(&self) -> Group {
        Group::new(self.names.iter().cloned()).expect("universe is non-empty")
    }

    /// All singleton groups, in sorted name order.
    pub fn singletons(&self) -> impl Iterator<Item = Group> + '_ {
        self.names.iter().map(|n| Group::singleton(n.clone()))
    }

    /// Every non-empty subset of the universe, in canonical group order.
    ///
    /// Exponential in the universe size; intended for the small universes the
    /// semantic oracle works over.
    pub fn groups(&self) -> Vec<Group> {
        assert!(self.names.len() <= 16, "universe too large to enumerate groups");
        let n = self.names.len();
        let mut out = Vec::with_capacity((1usize << n) - 1);
        for mask in 1usize..(1 << n) {
            let members = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.names[i].clone());
            out.push(Group::new(members).expect("mask is non-zero"));
        }
        out.sort();
        out
    }
}

/// A non-empty set of agent names, stored sorted and deduplicated.
///
/// Comparison is lexicographic on the member list, which makes the derived
/// order the canonical one used everywhere formulas are ordered.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Group(Arc<[String]>);

impl Group {
    pub fn new<I, S>(members: I) -> Result<Self, SyntaxError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut members: Vec<String> = members.into_iter().map(Into::into).collect();
        members.sort();
        members.dedup();
        if members.is_empty() {
            return Err(SyntaxError::EmptyGroup);
        }
        Ok(Self(members.into()))
    }

    pub fn singleton(name: impl Into<String>) -> Self {
        Self(vec![name.into()].into())
    }

    pub fn members(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.binary_search_by(|m| m.as_str().cmp(name)).is_ok()
    }

    /// `Some(name)` when the group is exactly `{name}`.
    pub fn as_singleton(&self) -> Option<&str> {
        match &*self.0 {
            [only] => Some(only),
            _ => None,
        }
    }

    pub fn is_subset_of(&self, other: &Group) -> bool {
        self.0.iter().all(|m| other.contains(m))
    }

    /// The group with `name` removed, or `None` when that would leave it empty.
    pub fn without(&self, name: &str) -> Option<Group> {
        if !self.contains(name) {
            return Some(self.clone());
        }
        let rest: Vec<String> = self.0.iter().filter(|m| m.as_str() != name).cloned().collect();
        if rest.is_empty() {
            None
        } else {
            Some(Self(rest.into()))
        }
    }

    pub fn is_within(&self, universe: &AgentUniverse) -> bool {
        self.0.iter().all(|m| universe.contains(m))
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(m)?;
        }
        Ok(())
    }
}

/// Shape of a formula node. `⊤` and the diamond `<D{G}>` are not
/// constructors; they abbreviate `~false` and `~D{G}~·` respectively.
#[derive(Debug, PartialEq, Eq, Hash)]
pub enum FormulaKind {
    Var(String),
    Bottom,
    Not(Formula),
    And(Formula, Formula),
    Or(Formula, Formula),
    Implies(Formula, Formula),
    Dist(Group, Formula),
}

/// An immutable, cheaply clonable formula term.
#[derive(Debug, Clone, Eq)]
pub struct Formula(Arc<FormulaKind>);

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Self(Arc::new(FormulaKind::Var(name.into())))
    }

    pub fn bottom() -> Self {
        Self(Arc::new(FormulaKind::Bottom))
    }

    /// `⊤`, i.e. `~false`.
    pub fn top() -> Self {
        Self::not(Self::bottom())
    }

    pub fn not(child: Formula) -> Self {
        Self(Arc::new(FormulaKind::Not(child)))
    }

    pub fn and(left: Formula, right: Formula) -> Self {
        Self(Arc::new(FormulaKind::And(left, right)))
    }

    pub fn or(left: Formula, right: Formula) -> Self {
        Self(Arc::new(FormulaKind::Or(left, right)))
    }

    pub fn implies(left: Formula, right: Formula) -> Self {
        Self(Arc::new(FormulaKind::Implies(left, right)))
    }

    pub fn dist(group: Group, child: Formula) -> Self {
        Self(Arc::new(FormulaKind::Dist(group, child)))
    }

    /// `<D{G}>α`, i.e. `~D{G}~α`.
    pub fn dia(group: Group, child: Formula) -> Self {
        Self::not(Self::dist(group, Self::not(child)))
    }

    pub fn kind(&self) -> &FormulaKind {
        &self.0
    }

    pub fn is_var(&self) -> bool {
        matches!(self.kind(), FormulaKind::Var(_))
    }

    pub fn as_var(&self) -> Option<&str> {
        match self.kind() {
            FormulaKind::Var(name) => Some(name),
            _ => None,
        }
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self.kind(), FormulaKind::Bottom)
    }

    pub fn is_atom(&self) -> bool {
        matches!(self.kind(), FormulaKind::Var(_) | FormulaKind::Bottom)
    }

    pub fn is_boxed(&self) -> bool {
        matches!(self.kind(), FormulaKind::Dist(..))
    }

    pub fn as_boxed(&self) -> Option<(&Group, &Formula)> {
        match self.kind() {
            FormulaKind::Dist(g, c) => Some((g, c)),
            _ => None,
        }
    }

    /// A variable, `false`, or an outmost-boxed formula: the shapes that may
    /// appear in a critical sequent.
    pub fn is_atom_or_boxed(&self) -> bool {
        self.is_atom() || self.is_boxed()
    }

    /// Weight: atoms count 1; `~` and `D{G}` add 1; binary connectives add 1
    /// to the sum of their children.
    pub fn weight(&self) -> u64 {
        match self.kind() {
            FormulaKind::Var(_) | FormulaKind::Bottom => 1,
            FormulaKind::Not(c) | FormulaKind::Dist(_, c) => c.weight() + 1,
            FormulaKind::And(l, r) | FormulaKind::Or(l, r) | FormulaKind::Implies(l, r) => {
                l.weight() + r.weight() + 1
            }
        }
    }

    /// The set of subformulas, including the formula itself.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if !out.insert(self.clone()) {
            return;
        }
        match self.kind() {
            FormulaKind::Var(_) | FormulaKind::Bottom => {}
            FormulaKind::Not(c) | FormulaKind::Dist(_, c) => c.collect_subformulas(out),
            FormulaKind::And(l, r) | FormulaKind::Or(l, r) | FormulaKind::Implies(l, r) => {
                l.collect_subformulas(out);
                r.collect_subformulas(out);
            }
        }
    }

    /// The propositional variables and agent symbols occurring in the term.
    pub fn vocab(&self) -> Vocabulary {
        let mut v = Vocabulary::default();
        self.collect_vocab(&mut v);
        v
    }

    pub(crate) fn collect_vocab(&self, v: &mut Vocabulary) {
        match self.kind() {
            FormulaKind::Var(name) => {
                v.vars.insert(name.clone());
            }
            FormulaKind::Bottom => {}
            FormulaKind::Not(c) => c.collect_vocab(v),
            FormulaKind::Dist(g, c) => {
                v.agents.extend(g.members().iter().cloned());
                c.collect_vocab(v);
            }
            FormulaKind::And(l, r) | FormulaKind::Or(l, r) | FormulaKind::Implies(l, r) => {
                l.collect_vocab(v);
                r.collect_vocab(v);
            }
        }
    }

    fn rank(&self) -> u8 {
        match self.kind() {
            FormulaKind::Var(_) => 0,
            FormulaKind::Bottom => 1,
            FormulaKind::Not(_) => 2,
            FormulaKind::And(..) => 3,
            FormulaKind::Or(..) => 4,
            FormulaKind::Implies(..) => 5,
            FormulaKind::Dist(..) => 6,
        }
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical structural order: constructor tag, then children, then group
/// members lexicographically. Every multiset iteration and every emitted
/// disjunction follows this order, which is what makes outputs reproducible.
impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        use FormulaKind::*;
        match (self.kind(), other.kind()) {
            (Var(a), Var(b)) => a.cmp(b),
            (Bottom, Bottom) => Ordering::Equal,
            (Not(a), Not(b)) => a.cmp(b),
            (And(a1, a2), And(b1, b2))
            | (Or(a1, a2), Or(b1, b2))
            | (Implies(a1, a2), Implies(b1, b2)) => a1.cmp(b1).then_with(|| a2.cmp(b2)),
            (Dist(g1, c1), Dist(g2, c2)) => c1.cmp(c2).then_with(|| g1.cmp(g2)),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

/// Propositional variables and agent symbols of a term or multiset.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub vars: BTreeSet<String>,
    pub agents: BTreeSet<String>,
}

impl Vocabulary {
    pub fn merge(&mut self, other: &Vocabulary) {
        self.vars.extend(other.vars.iter().cloned());
        self.agents.extend(other.agents.iter().cloned());
    }

    pub fn is_subset_of(&self, other: &Vocabulary) -> bool {
        self.vars.is_subset(&other.vars) && self.agents.is_subset(&other.agents)
    }
}

// Precedence levels for printing: `->` 1, `|` 2, `&` 3, unary 4, atoms 5.
// A node is parenthesized when its level is below what the context requires.
fn fmt_prec(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    use FormulaKind::*;
    if let Not(inner) = f.kind() {
        match inner.kind() {
            Bottom => return out.write_str("true"),
            Dist(g, body) => {
                if let Not(x) = body.kind() {
                    write!(out, "<D{{{g}}}>")?;
                    return fmt_prec(x, 4, out);
                }
            }
            _ => {}
        }
    }
    match f.kind() {
        Var(name) => out.write_str(name),
        Bottom => out.write_str("false"),
        Not(c) => {
            out.write_str("~")?;
            fmt_prec(c, 4, out)
        }
        Dist(g, c) => {
            write!(out, "D{{{g}}}")?;
            fmt_prec(c, 4, out)
        }
        And(l, r) => fmt_binary(l, " & ", r, 3, false, min, out),
        Or(l, r) => fmt_binary(l, " | ", r, 2, false, min, out),
        Implies(l, r) => fmt_binary(l, " -> ", r, 1, true, min, out),
    }
}

fn fmt_binary(
    l: &Formula,
    op: &str,
    r: &Formula,
    prec: u8,
    right_assoc: bool,
    min: u8,
    out: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    let parens = prec < min;
    if parens {
        out.write_str("(")?;
    }
    let (lmin, rmin) = if right_assoc { (prec + 1, prec) } else { (prec, prec + 1) };
    fmt_prec(l, lmin, out)?;
    out.write_str(op)?;
    fmt_prec(r, rmin, out)?;
    if parens {
        out.write_str(")")?;
    }
    Ok(())
}

/// Prints in the ASCII concrete syntax. `~false` renders as `true` and
/// `~D{G}~α` as `<D{G}>α`; parsing the output reproduces the exact term.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_prec(self, 0, f)
    }
}

//! Formula multisets and the group-indexed projections the modal rules and
//! the variable-elimination tables are written in terms of.

use std::collections::BTreeSet;
use std::fmt;

use crate::formula::{Formula, Group, Vocabulary};

/// A finite multiset of formulas, iterated in canonical formula order.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormulaMultiset {
    counts: std::collections::BTreeMap<Formula, usize>,
}

impl FormulaMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(f: Formula) -> Self {
        let mut m = Self::new();
        m.insert(f);
        m
    }

    pub fn insert(&mut self, f: Formula) {
        *self.counts.entry(f).or_insert(0) += 1;
    }

    pub fn insert_many(&mut self, f: Formula, n: usize) {
        if n > 0 {
            *self.counts.entry(f).or_insert(0) += n;
        }
    }

    /// Removes one occurrence; `false` when the formula is absent.
    pub fn remove_one(&mut self, f: &Formula) -> bool {
        match self.counts.get_mut(f) {
            Some(n) if *n > 1 => {
                *n -= 1;
                true
            }
            Some(_) => {
                self.counts.remove(f);
                true
            }
            None => false,
        }
    }

    pub fn count(&self, f: &Formula) -> usize {
        self.counts.get(f).copied().unwrap_or(0)
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.counts.contains_key(f)
    }

    /// Total number of occurrences, multiplicity included.
    pub fn len(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn distinct_len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Distinct members with their multiplicities, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&Formula, usize)> {
        self.counts.iter().map(|(f, n)| (f, *n))
    }

    /// Distinct members in canonical order, multiplicities dropped.
    pub fn distinct(&self) -> impl Iterator<Item = &Formula> {
        self.counts.keys()
    }

    /// Every occurrence, repeating members by multiplicity.
    pub fn occurrences(&self) -> impl Iterator<Item = &Formula> {
        self.counts.iter().flat_map(|(f, n)| std::iter::repeat(f).take(*n))
    }

    pub fn all(&self, mut pred: impl FnMut(&Formula) -> bool) -> bool {
        self.counts.keys().all(|f| pred(f))
    }

    pub fn any(&self, mut pred: impl FnMut(&Formula) -> bool) -> bool {
        self.counts.keys().any(|f| pred(f))
    }

    pub fn extend_from(&mut self, other: &FormulaMultiset) {
        for (f, n) in other.iter() {
            self.insert_many(f.clone(), n);
        }
    }

    /// Multiset sum.
    pub fn union(&self, other: &FormulaMultiset) -> FormulaMultiset {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }

    /// A copy with one occurrence of `f` added.
    pub fn with(&self, f: Formula) -> FormulaMultiset {
        let mut out = self.clone();
        out.insert(f);
        out
    }

    /// A copy with one occurrence of `f` removed, or `None` when absent.
    pub fn without_one(&self, f: &Formula) -> Option<FormulaMultiset> {
        if !self.contains(f) {
            return None;
        }
        let mut out = self.clone();
        out.remove_one(f);
        Some(out)
    }

    /// Multiset inclusion: every multiplicity here is at most the one there.
    pub fn is_submultiset_of(&self, other: &FormulaMultiset) -> bool {
        self.iter().all(|(f, n)| n <= other.count(f))
    }

    /// Sum of member weights, counted with multiplicity.
    pub fn weight(&self) -> u64 {
        self.iter().map(|(f, n)| f.weight() * n as u64).sum()
    }

    /// The underlying set: every multiplicity forced to 1.
    pub fn collapsed(&self) -> FormulaMultiset {
        let mut out = FormulaMultiset::new();
        for f in self.distinct() {
            out.insert(f.clone());
        }
        out
    }

    pub fn vocab(&self) -> Vocabulary {
        let mut v = Vocabulary::default();
        for f in self.distinct() {
            f.collect_vocab(&mut v);
        }
        v
    }

    /// `D{G}Γ`: every member wrapped in a `G`-box, multiplicities kept.
    pub fn box_wrap(&self, group: &Group) -> FormulaMultiset {
        let mut out = FormulaMultiset::new();
        for (f, n) in self.iter() {
            out.insert_many(Formula::dist(group.clone(), f.clone()), n);
        }
        out
    }

    /// The members boxed with exactly the group `G`.
    pub fn boxes_with_group(&self, group: &Group) -> FormulaMultiset {
        self.filter_boxes(|g, _| g == group, false)
    }

    /// The bodies of the members boxed with exactly the group `G`.
    pub fn bodies_with_group(&self, group: &Group) -> FormulaMultiset {
        self.filter_boxes(|g, _| g == group, true)
    }

    /// The members boxed with a group containing the agent.
    pub fn boxes_containing(&self, agent: &str) -> FormulaMultiset {
        self.filter_boxes(|g, _| g.contains(agent), false)
    }

    /// The bodies of the members boxed with a subgroup of `G`.
    pub fn bodies_of_subgroups(&self, group: &Group) -> FormulaMultiset {
        self.filter_boxes(|g, _| g.is_subset_of(group), true)
    }

    /// The members boxed with a subgroup of `G`.
    pub fn boxes_of_subgroups(&self, group: &Group) -> FormulaMultiset {
        self.filter_boxes(|g, _| g.is_subset_of(group), false)
    }

    fn filter_boxes(
        &self,
        mut keep: impl FnMut(&Group, &Formula) -> bool,
        take_body: bool,
    ) -> FormulaMultiset {
        let mut out = FormulaMultiset::new();
        for (f, n) in self.iter() {
            if let Some((g, body)) = f.as_boxed() {
                if keep(g, body) {
                    let kept = if take_body { body.clone() } else { f.clone() };
                    out.insert_many(kept, n);
                }
            }
        }
        out
    }
}

impl FromIterator<Formula> for FormulaMultiset {
    fn from_iter<T: IntoIterator<Item = Formula>>(iter: T) -> Self {
        let mut m = Self::new();
        for f in iter {
            m.insert(f);
        }
        m
    }
}

/// Comma-separated members in canonical order; multiplicities expand.
impl fmt::Display for FormulaMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, member) in self.occurrences().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{member}")?;
        }
        Ok(())
    }
}

/// The named projections of a multiset, as one selectable operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Projection {
    /// Wrap every member in a box with the given group.
    BoxWrap(Group),
    /// Keep the members boxed with exactly the given group.
    BoxesWithGroup(Group),
    /// Keep the bodies of members boxed with exactly the given group.
    BodiesWithGroup(Group),
    /// Keep the members boxed with a group containing the agent.
    BoxesContaining(String),
    /// Keep the bodies of members boxed with a subgroup of the given group.
    BodiesOfSubgroups(Group),
}

pub fn project(m: &FormulaMultiset, projection: &Projection) -> FormulaMultiset {
    match projection {
        Projection::BoxWrap(g) => m.box_wrap(g),
        Projection::BoxesWithGroup(g) => m.boxes_with_group(g),
        Projection::BodiesWithGroup(g) => m.bodies_with_group(g),
        Projection::BoxesContaining(a) => m.boxes_containing(a),
        Projection::BodiesOfSubgroups(g) => m.bodies_of_subgroups(g),
    }
}

/// The set of subformulas of every formula in the given multisets.
pub fn subformula_closure<'a>(parts: impl IntoIterator<Item = &'a FormulaMultiset>) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    for part in parts {
        for f in part.distinct() {
            out.extend(f.subformulas());
        }
    }
    out
}

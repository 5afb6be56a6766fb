//! Sequents, T-sequents with a separated store, criticality tests, and the
//! termination measures the backward search descends along.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, Vocabulary};
use crate::multiset::{subformula_closure, FormulaMultiset};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SequentError {
    #[error("store member `{0}` is not a boxed formula")]
    UnboxedStoreMember(Formula),
}

/// A two-sided sequent `Γ => Δ` over formula multisets.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    pub antecedent: FormulaMultiset,
    pub succedent: FormulaMultiset,
}

impl Sequent {
    pub fn new(antecedent: FormulaMultiset, succedent: FormulaMultiset) -> Self {
        Self { antecedent, succedent }
    }

    /// Critical: both sides hold only variables, `false`, and outmost-boxed
    /// formulas. The empty sequent is critical.
    pub fn is_critical(&self) -> bool {
        self.antecedent.all(|f| f.is_atom_or_boxed()) && self.succedent.all(|f| f.is_atom_or_boxed())
    }

    /// Sum of the weights of both sides, with multiplicity.
    pub fn weight(&self) -> u64 {
        self.antecedent.weight() + self.succedent.weight()
    }

    pub fn measure(&self) -> Measure {
        Measure::Weight(self.weight())
    }

    pub fn vocab(&self) -> Vocabulary {
        let mut v = self.antecedent.vocab();
        v.merge(&self.succedent.vocab());
        v
    }

    /// Both sides with multiplicities forced to 1.
    pub fn collapsed(&self) -> Sequent {
        Sequent::new(self.antecedent.collapsed(), self.succedent.collapsed())
    }

    pub fn is_empty(&self) -> bool {
        self.antecedent.is_empty() && self.succedent.is_empty()
    }
}

fn fmt_turnstile(
    antecedent: &FormulaMultiset,
    succedent: &FormulaMultiset,
    f: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    match (antecedent.is_empty(), succedent.is_empty()) {
        (true, true) => write!(f, "=>"),
        (true, false) => write!(f, "=> {succedent}"),
        (false, true) => write!(f, "{antecedent} =>"),
        (false, false) => write!(f, "{antecedent} => {succedent}"),
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_turnstile(&self.antecedent, &self.succedent, f)
    }
}

/// A sequent `Σ | Γ => Δ` whose store `Σ` holds boxed formulas set aside by
/// the reflexive calculus; the store never counts toward the weight measure.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TSequent {
    store: FormulaMultiset,
    pub antecedent: FormulaMultiset,
    pub succedent: FormulaMultiset,
}

impl TSequent {
    pub fn new(
        store: FormulaMultiset,
        antecedent: FormulaMultiset,
        succedent: FormulaMultiset,
    ) -> Result<Self, SequentError> {
        if let Some(bad) = store.distinct().find(|f| !f.is_boxed()) {
            return Err(SequentError::UnboxedStoreMember(bad.clone()));
        }
        Ok(Self { store, antecedent, succedent })
    }

    /// A T-sequent with an empty store, as produced by the embedding of plain
    /// sequents.
    pub fn plain(antecedent: FormulaMultiset, succedent: FormulaMultiset) -> Self {
        Self { store: FormulaMultiset::new(), antecedent, succedent }
    }

    pub fn store(&self) -> &FormulaMultiset {
        &self.store
    }

    /// Critical: the antecedent holds only variables and `false`; the
    /// succedent holds only variables, `false`, and outmost-boxed formulas.
    /// The store is unconstrained.
    pub fn is_critical(&self) -> bool {
        self.antecedent.all(|f| f.is_atom()) && self.succedent.all(|f| f.is_atom_or_boxed())
    }

    /// Weight of the two sides only; the store is excluded.
    pub fn weight(&self) -> u64 {
        self.antecedent.weight() + self.succedent.weight()
    }

    /// Number of distinct boxed formulas among the subformulas of all three
    /// parts, taken over the underlying sets.
    pub fn boxed_subformula_count(&self) -> usize {
        boxed_count([&self.store, &self.antecedent, &self.succedent])
    }

    pub fn measure(&self) -> Measure {
        Measure::Lex { boxed: self.boxed_subformula_count(), weight: self.weight() }
    }

    pub fn vocab(&self) -> Vocabulary {
        let mut v = self.store.vocab();
        v.merge(&self.antecedent.vocab());
        v.merge(&self.succedent.vocab());
        v
    }

    /// All three parts with multiplicities forced to 1.
    pub fn collapsed(&self) -> TSequent {
        Self {
            store: self.store.collapsed(),
            antecedent: self.antecedent.collapsed(),
            succedent: self.succedent.collapsed(),
        }
    }
}

impl fmt::Display for TSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.store.is_empty() {
            write!(f, "| ")?;
        } else {
            write!(f, "{} | ", self.store)?;
        }
        fmt_turnstile(&self.antecedent, &self.succedent, f)
    }
}

/// Distinct boxed formulas among the subformulas of the given multisets,
/// computed over underlying sets, so duplicate occurrences count once.
pub fn boxed_count<'a>(parts: impl IntoIterator<Item = &'a FormulaMultiset>) -> usize {
    let closure: BTreeSet<Formula> = subformula_closure(parts);
    closure.iter().filter(|f| f.is_boxed()).count()
}

/// Termination measure of a goal: plain sequents descend along weight,
/// T-sequents along the pair (boxed-subformula count, weight).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Measure {
    Weight(u64),
    Lex { boxed: usize, weight: u64 },
}

/// Strict decrease between measures of the same shape. Every backward rule
/// application must satisfy this from conclusion to each premise.
pub fn measure_lt(premise: &Measure, conclusion: &Measure) -> bool {
    match (premise, conclusion) {
        (Measure::Weight(a), Measure::Weight(b)) => a < b,
        (Measure::Lex { boxed: ba, weight: wa }, Measure::Lex { boxed: bb, weight: wb }) => {
            (ba, wa) < (bb, wb)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Group;

    fn g(names: &[&str]) -> Group {
        Group::new(names.iter().copied()).unwrap()
    }

    fn ms(fs: &[Formula]) -> FormulaMultiset {
        fs.iter().cloned().collect()
    }

    #[test]
    fn criticality() {
        let p = Formula::var("p");
        let box_q = Formula::dist(g(&["a"]), Formula::var("q"));
        let critical = Sequent::new(ms(&[p.clone(), box_q.clone()]), ms(&[Formula::bottom()]));
        assert!(critical.is_critical());
        assert!(Sequent::default().is_critical());

        let not_critical = Sequent::new(ms(&[Formula::and(p.clone(), Formula::var("q"))]), ms(&[]));
        assert!(!not_critical.is_critical());
    }

    #[test]
    fn t_criticality_rejects_antecedent_boxes() {
        let box_q = Formula::dist(g(&["a"]), Formula::var("q"));
        let ok = TSequent::new(
            ms(&[box_q.clone()]),
            ms(&[Formula::var("p"), Formula::bottom()]),
            ms(&[box_q.clone(), Formula::var("r")]),
        )
        .unwrap();
        assert!(ok.is_critical());

        let bad = TSequent::new(ms(&[]), ms(&[box_q]), ms(&[Formula::var("q")])).unwrap();
        assert!(!bad.is_critical());
    }

    #[test]
    fn store_must_be_boxed() {
        let err = TSequent::new(ms(&[Formula::var("p")]), ms(&[]), ms(&[]));
        assert!(matches!(err, Err(SequentError::UnboxedStoreMember(_))));
    }

    #[test]
    fn weight_excludes_store() {
        let box_p = Formula::dist(g(&["a"]), Formula::var("p"));
        let t = TSequent::new(ms(&[box_p]), ms(&[Formula::var("q")]), ms(&[])).unwrap();
        assert_eq!(t.weight(), 1);
    }

    #[test]
    fn boxed_count_deduplicates_and_nests() {
        let a = g(&["a"]);
        let b = g(&["b"]);
        let nested = Formula::dist(a.clone(), Formula::dist(b.clone(), Formula::var("p")));
        assert_eq!(boxed_count([&ms(&[nested])]), 2);

        let box_p = Formula::dist(a.clone(), Formula::var("p"));
        assert_eq!(boxed_count([&ms(&[box_p.clone(), box_p])]), 1);

        let t = TSequent::new(
            ms(&[Formula::dist(a, Formula::var("p"))]),
            ms(&[Formula::var("p")]),
            ms(&[Formula::dist(b, Formula::var("q"))]),
        )
        .unwrap();
        assert_eq!(t.boxed_subformula_count(), 2);
    }

    #[test]
    fn measure_comparison_is_lexicographic() {
        let m1 = Measure::Lex { boxed: 1, weight: 100 };
        let m2 = Measure::Lex { boxed: 2, weight: 1 };
        assert!(measure_lt(&m1, &m2));
        assert!(!measure_lt(&m2, &m1));
        assert!(measure_lt(&Measure::Weight(3), &Measure::Weight(4)));
        assert!(!measure_lt(&Measure::Weight(4), &Measure::Weight(4)));
        assert!(!measure_lt(&Measure::Weight(1), &m2));
    }

    #[test]
    fn display_forms() {
        let p = Formula::var("p");
        let q = Formula::var("q");
        let s = Sequent::new(ms(&[p.clone()]), ms(&[q.clone()]));
        assert_eq!(s.to_string(), "p => q");
        assert_eq!(Sequent::new(ms(&[]), ms(&[q.clone()])).to_string(), "=> q");
        assert_eq!(Sequent::new(ms(&[p.clone()]), ms(&[])).to_string(), "p =>");
        assert_eq!(Sequent::default().to_string(), "=>");

        let box_p = Formula::dist(g(&["a"]), p.clone());
        let t = TSequent::new(ms(&[box_p]), ms(&[p.clone()]), ms(&[q.clone()])).unwrap();
        assert_eq!(t.to_string(), "D{a}p | p => q");
        let t2 = TSequent::plain(ms(&[p]), ms(&[q]));
        assert_eq!(t2.to_string(), "| p => q");
    }
}

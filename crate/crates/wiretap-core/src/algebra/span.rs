use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::dag::Structure;
use super::expr::{Atom, InfoExpr, Rational};

/// A set of expressions asserted to vanish, kept alongside a reduced
/// row-echelon basis of their span for exact membership tests.
#[derive(Clone, Debug)]
pub struct EqualitySet {
    equalities: Vec<InfoExpr>,
    structure: Option<Structure>,
    /// pivot atom → basis row with unit coefficient on the pivot; no row
    /// mentions another row's pivot.
    basis: BTreeMap<Atom, InfoExpr>,
}

fn pivot_key(a: &Atom) -> (usize, &Atom) {
    (a.vars().len(), a)
}

impl EqualitySet {
    pub fn new(equalities: Vec<InfoExpr>, structure: Option<Structure>) -> Self {
        let mut s = EqualitySet { equalities: Vec::new(), structure, basis: BTreeMap::new() };
        for e in equalities {
            s.push(e);
        }
        s
    }

    /// No equalities: only atom-level identities hold.
    pub fn empty() -> Self {
        EqualitySet::new(Vec::new(), None)
    }

    pub fn equalities(&self) -> &[InfoExpr] {
        &self.equalities
    }

    pub fn structure(&self) -> Option<&Structure> {
        self.structure.as_ref()
    }

    /// Dimension of the span.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Adds an equality and updates the basis.
    pub fn push(&mut self, e: InfoExpr) {
        let mut v = InfoExpr::constant(Rational::zero());
        for (a, c) in e.terms() {
            v.add_term(a.clone(), c.clone());
        }
        self.equalities.push(e);
        let v = self.reduce_terms(&v);
        let Some(pivot) = v.terms().keys().max_by(|x, y| pivot_key(x).cmp(&pivot_key(y))).cloned() else {
            return;
        };
        let inv = Rational::one() / v.coeff(&pivot);
        let row = v.scaled(&inv);
        for other in self.basis.values_mut() {
            let c = other.coeff(&pivot);
            if !c.is_zero() {
                other.add_scaled(&row, &(-c));
            }
        }
        self.basis.insert(pivot, row);
    }

    fn reduce_terms(&self, e: &InfoExpr) -> InfoExpr {
        let mut out = e.clone();
        let hits: Vec<(Atom, Rational)> = e
            .terms()
            .iter()
            .filter(|(a, _)| self.basis.contains_key(*a))
            .map(|(a, c)| (a.clone(), c.clone()))
            .collect();
        for (a, c) in hits {
            out.add_scaled(&self.basis[&a], &(-c));
        }
        out
    }

    /// Canonical representative of `e` modulo the span (constants untouched).
    pub fn reduce(&self, e: &InfoExpr) -> InfoExpr {
        self.reduce_terms(e)
    }

    pub fn contains(&self, e: &InfoExpr) -> bool {
        e.constant_term().is_zero() && self.reduce(e).is_zero()
    }
}

/// True iff `e1 − e2` lies in the rational span of the equalities.
pub fn exprs_equal(e1: &InfoExpr, e2: &InfoExpr, eqs: &EqualitySet) -> bool {
    eqs.contains(&(e1.clone() - e2.clone()))
}

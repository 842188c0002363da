use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::algebra::{EqualitySet, InfoExpr, Rational};
use crate::error::{Error, Result};

/// Right-hand side of a linear constraint.
pub trait RhsValue: Clone + fmt::Debug + fmt::Display + PartialEq {
    fn zero() -> Self;
    fn add(&self, other: &Self) -> Self;
    /// Multiplication by a rational; negative factors are only allowed on
    /// values without a minimum.
    fn scale(&self, c: &Rational) -> Result<Self>;
    /// Whether the value may be scaled by a negative factor.
    fn is_plain(&self) -> bool;
}

impl RhsValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, c: &Rational) -> Result<Self> {
        Ok(self * c.to_f64().unwrap_or(f64::NAN))
    }
    fn is_plain(&self) -> bool {
        true
    }
}

/// Symbolic right-hand side: the minimum of one or more entropy expressions.
/// Sums distribute over the minimum (min a + min b = min over pairs).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rhs {
    alts: Vec<InfoExpr>,
}

impl Rhs {
    pub fn expr(e: InfoExpr) -> Self {
        Rhs { alts: vec![e] }
    }

    pub fn min_of(alts: Vec<InfoExpr>) -> Result<Self> {
        if alts.is_empty() {
            return Err(Error::EmptyArgument("minimum over no alternatives"));
        }
        let mut r = Rhs { alts };
        r.normalize();
        Ok(r)
    }

    pub fn alternatives(&self) -> &[InfoExpr] {
        &self.alts
    }

    fn normalize(&mut self) {
        self.alts.sort();
        self.alts.dedup();
    }

    /// Reduces every alternative modulo `eqs` and normalizes.
    pub fn canonical(&self, eqs: &EqualitySet) -> Rhs {
        let mut r = Rhs { alts: self.alts.iter().map(|e| eqs.reduce(e)).collect() };
        r.normalize();
        r
    }

    /// Numeric value: the minimum over alternatives of `value`.
    pub fn eval_with(&self, value: &dyn Fn(&InfoExpr) -> f64) -> f64 {
        self.alts.iter().map(value).fold(f64::INFINITY, f64::min)
    }
}

impl From<InfoExpr> for Rhs {
    fn from(e: InfoExpr) -> Self {
        Rhs::expr(e)
    }
}

impl RhsValue for Rhs {
    fn zero() -> Self {
        Rhs::expr(InfoExpr::zero())
    }

    fn add(&self, other: &Self) -> Self {
        let mut alts = Vec::with_capacity(self.alts.len() * other.alts.len());
        for a in &self.alts {
            for b in &other.alts {
                alts.push(a.clone() + b.clone());
            }
        }
        let mut r = Rhs { alts };
        r.normalize();
        r
    }

    fn scale(&self, c: &Rational) -> Result<Self> {
        if c.is_zero() {
            return Ok(Self::zero());
        }
        if c.is_negative() && self.alts.len() > 1 {
            return Err(Error::Validation(format!("cannot negate the minimum {self}")));
        }
        let mut r = Rhs { alts: self.alts.iter().map(|e| e.scaled(c)).collect() };
        r.normalize();
        Ok(r)
    }

    fn is_plain(&self) -> bool {
        self.alts.len() == 1
    }
}

impl fmt::Display for Rhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alts.len() == 1 {
            write!(f, "{}", self.alts[0])
        } else {
            write!(f, "min{{")?;
            for (i, a) in self.alts.iter().enumerate() {
                if i > 0 {
                    write!(f, "; ")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, "}}")
        }
    }
}

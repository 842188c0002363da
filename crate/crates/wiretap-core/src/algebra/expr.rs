use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::info::ProbTable;

/// Exact rational scalar of the symbolic layer.
pub type Rational = num_rational::BigRational;

/// Integer as a rational.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Fraction `n/d` as a rational.
pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Joint entropy atom H(S) for a nonempty, canonically sorted set S.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Vec<String>);

impl Atom {
    pub fn new<I, S>(vars: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = vars.into_iter().map(Into::into).collect();
        if set.is_empty() {
            return Err(Error::EmptyArgument("entropy atom needs at least one variable"));
        }
        Ok(Atom(set.into_iter().collect()))
    }

    pub fn vars(&self) -> &[String] {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H({})", self.0.join(","))
    }
}

/// Rational combination of entropy atoms plus a rational constant.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfoExpr {
    terms: BTreeMap<Atom, Rational>,
    constant: Rational,
}

impl InfoExpr {
    pub fn zero() -> Self {
        InfoExpr::default()
    }

    pub fn constant(c: Rational) -> Self {
        InfoExpr { terms: BTreeMap::new(), constant: c }
    }

    /// H(vars); the empty set gives the zero expression.
    pub fn h<S: AsRef<str>>(vars: &[S]) -> Self {
        let mut e = InfoExpr::zero();
        if !vars.is_empty() {
            let atom = Atom::new(vars.iter().map(|s| s.as_ref().to_string())).expect("nonempty");
            e.add_term(atom, q(1));
        }
        e
    }

    /// I(A;B|C), panicking on malformed arguments; see [`expand_mi`].
    pub fn mi<S: AsRef<str>>(a: &[S], b: &[S], c: &[S]) -> Self {
        let v = |s: &[S]| s.iter().map(|x| x.as_ref().to_string()).collect::<Vec<_>>();
        expand_mi(&v(a), &v(b), &v(c)).expect("well-formed mutual information")
    }

    pub fn terms(&self) -> &BTreeMap<Atom, Rational> {
        &self.terms
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn coeff(&self, atom: &Atom) -> Rational {
        self.terms.get(atom).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    pub fn add_term(&mut self, atom: Atom, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(atom.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&atom);
        }
    }

    pub fn add_scaled(&mut self, other: &InfoExpr, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (a, k) in &other.terms {
            self.add_term(a.clone(), k * c);
        }
        self.constant += &other.constant * c;
    }

    pub fn scaled(&self, c: &Rational) -> InfoExpr {
        let mut e = InfoExpr::zero();
        e.add_scaled(self, c);
        e
    }

    /// Every variable mentioned by some atom.
    pub fn variables(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|a| a.0.iter().cloned()).collect()
    }

    /// Numeric value on a joint table (entropies in nats).
    pub fn eval(&self, t: &ProbTable) -> Result<f64> {
        let mut cache = HashMap::new();
        self.eval_cached(t, &mut cache)
    }

    /// Numeric value reusing an entropy cache across calls on the same table.
    pub fn eval_cached(&self, t: &ProbTable, cache: &mut HashMap<Atom, f64>) -> Result<f64> {
        let mut v = self.constant.to_f64().unwrap_or(f64::NAN);
        for (a, c) in &self.terms {
            let h = match cache.get(a) {
                Some(&h) => h,
                None => {
                    let names: Vec<&str> = a.0.iter().map(String::as_str).collect();
                    let h = t.entropy(&names)?;
                    cache.insert(a.clone(), h);
                    h
                }
            };
            v += c.to_f64().unwrap_or(f64::NAN) * h;
        }
        Ok(v)
    }

    /// Numeric value from a map of atom values.
    pub fn eval_with(&self, value: &dyn Fn(&Atom) -> f64) -> f64 {
        let mut v = self.constant.to_f64().unwrap_or(f64::NAN);
        for (a, c) in &self.terms {
            v += c.to_f64().unwrap_or(f64::NAN) * value(a);
        }
        v
    }
}

/// I(A;B|C) = H(A∪C) + H(B∪C) − H(A∪B∪C) − H(C), with H(∅) dropped.
pub fn expand_mi<S: AsRef<str>>(a: &[S], b: &[S], c: &[S]) -> Result<InfoExpr> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyArgument("mutual information needs nonempty A and B"));
    }
    let set = |s: &[S]| -> Result<BTreeSet<String>> {
        let mut out = BTreeSet::new();
        for x in s {
            if !out.insert(x.as_ref().to_string()) {
                return Err(Error::OverlappingSets(x.as_ref().to_string()));
            }
        }
        Ok(out)
    };
    let (sa, sb, sc) = (set(a)?, set(b)?, set(c)?);
    for (x, y) in [(&sa, &sb), (&sa, &sc), (&sb, &sc)] {
        if let Some(v) = x.intersection(y).next() {
            return Err(Error::OverlappingSets(v.clone()));
        }
    }
    let union = |parts: &[&BTreeSet<String>]| -> Vec<String> {
        parts.iter().flat_map(|p| p.iter().cloned()).collect()
    };
    let mut e = InfoExpr::zero();
    e += &InfoExpr::h(&union(&[&sa, &sc]));
    e += &InfoExpr::h(&union(&[&sb, &sc]));
    e -= &InfoExpr::h(&union(&[&sa, &sb, &sc]));
    e -= &InfoExpr::h(&union(&[&sc]));
    Ok(e)
}

impl AddAssign<&InfoExpr> for InfoExpr {
    fn add_assign(&mut self, rhs: &InfoExpr) {
        self.add_scaled(rhs, &q(1));
    }
}

impl SubAssign<&InfoExpr> for InfoExpr {
    fn sub_assign(&mut self, rhs: &InfoExpr) {
        self.add_scaled(rhs, &q(-1));
    }
}

impl Add for InfoExpr {
    type Output = InfoExpr;
    fn add(mut self, rhs: InfoExpr) -> InfoExpr {
        self += &rhs;
        self
    }
}

impl Sub for InfoExpr {
    type Output = InfoExpr;
    fn sub(mut self, rhs: InfoExpr) -> InfoExpr {
        self -= &rhs;
        self
    }
}

impl Neg for InfoExpr {
    type Output = InfoExpr;
    fn neg(self) -> InfoExpr {
        self.scaled(&q(-1))
    }
}

pub(crate) fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for InfoExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (a, c) in &self.terms {
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if !mag.is_one() {
                write!(f, "{} ", fmt_rational(&mag))?;
            }
            write!(f, "{a}")?;
            first = false;
        }
        if !self.constant.is_zero() || first {
            let sign = if self.constant.is_negative() { "-" } else { "+" };
            if first {
                write!(f, "{}", fmt_rational(&self.constant))?;
            } else {
                write!(f, " {sign} {}", fmt_rational(&self.constant.abs()))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mi_without_conditioning_has_three_atoms() {
        let e = expand_mi(&["U"], &["Z"], &[] as &[&str]).unwrap();
        let expect = InfoExpr::h(&["U"]) + InfoExpr::h(&["Z"]) - InfoExpr::h(&["U", "Z"]);
        assert_eq!(e, expect);
        assert_eq!(e.terms().len(), 3);
    }

    #[test]
    fn mi_with_conditioning_has_four_atoms() {
        let e = expand_mi(&["U"], &["Y2"], &["Q"]).unwrap();
        let expect = InfoExpr::h(&["U", "Q"]) + InfoExpr::h(&["Y2", "Q"])
            - InfoExpr::h(&["U", "Y2", "Q"])
            - InfoExpr::h(&["Q"]);
        assert_eq!(e, expect);
    }

    #[test]
    fn mi_rejects_overlap_and_empty() {
        assert!(matches!(expand_mi(&["A"], &["A"], &[] as &[&str]), Err(Error::OverlappingSets(_))));
        assert!(matches!(expand_mi(&[] as &[&str], &["A"], &[]), Err(Error::EmptyArgument(_))));
    }

    #[test]
    fn chain_rule_is_atom_identity() {
        let lhs = InfoExpr::mi(&["U", "V1"], &["Z"], &["Q"]);
        let rhs = InfoExpr::mi(&["U"], &["Z"], &["Q"]) + InfoExpr::mi(&["V1"], &["Z"], &["U", "Q"]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn atoms_are_canonical() {
        assert_eq!(Atom::new(["Z", "U"]).unwrap(), Atom::new(["U", "Z"]).unwrap());
        assert!(Atom::new(Vec::<String>::new()).is_err());
    }

    #[test]
    fn display_is_readable() {
        let e = InfoExpr::h(&["X"]).scaled(&qf(-1, 2)) + InfoExpr::constant(q(3));
        assert_eq!(e.to_string(), "-1/2 H(X) + 3");
    }
}

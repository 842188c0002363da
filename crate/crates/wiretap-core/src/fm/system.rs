use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::rhs::RhsValue;
use crate::algebra::{fmt_rational, q, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Le,
    Eq,
}

/// Σ coeffs·vars (≤ or =) rhs.
#[derive(Clone, Debug, PartialEq)]
pub struct LinIneq<R> {
    pub coeffs: BTreeMap<String, Rational>,
    pub rel: Relation,
    pub rhs: R,
}

impl<R: RhsValue> LinIneq<R> {
    pub fn new<S: AsRef<str>>(terms: &[(S, Rational)], rel: Relation, rhs: R) -> Self {
        let mut coeffs = BTreeMap::new();
        for (v, c) in terms {
            let e = coeffs.entry(v.as_ref().to_string()).or_insert_with(Rational::zero);
            *e += c;
        }
        coeffs.retain(|_, c: &mut Rational| !c.is_zero());
        LinIneq { coeffs, rel, rhs }
    }

    /// Sum of the named variables (unit coefficients) ≤ rhs.
    pub fn le<S: AsRef<str>>(vars: &[S], rhs: R) -> Self {
        let t: Vec<(&str, Rational)> = vars.iter().map(|v| (v.as_ref(), q(1))).collect();
        Self::new(&t, Relation::Le, rhs)
    }

    /// Sum of the named variables = rhs.
    pub fn eq<S: AsRef<str>>(vars: &[S], rhs: R) -> Self {
        let t: Vec<(&str, Rational)> = vars.iter().map(|v| (v.as_ref(), q(1))).collect();
        Self::new(&t, Relation::Eq, rhs)
    }

    /// −v ≤ 0.
    pub fn nonneg(v: &str) -> Self {
        Self::new(&[(v, q(-1))], Relation::Le, R::zero())
    }

    pub fn coeff(&self, v: &str) -> Rational {
        self.coeffs.get(v).cloned().unwrap_or_else(Rational::zero)
    }

    /// self·a + other·b; both factors must be admissible for the rhs kinds.
    pub fn combine(&self, a: &Rational, other: &Self, b: &Rational) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (v, c) in &self.coeffs {
            *coeffs.entry(v.clone()).or_insert_with(Rational::zero) += c * a;
        }
        for (v, c) in &other.coeffs {
            *coeffs.entry(v.clone()).or_insert_with(Rational::zero) += c * b;
        }
        coeffs.retain(|_, c: &mut Rational| !c.is_zero());
        let rel = if self.rel == Relation::Eq && other.rel == Relation::Eq { Relation::Eq } else { Relation::Le };
        let rhs = self.rhs.scale(a)?.add(&other.rhs.scale(b)?);
        Ok(LinIneq { coeffs, rel, rhs })
    }

    pub fn map_rhs<T: RhsValue>(&self, f: impl Fn(&R) -> Result<T>) -> Result<LinIneq<T>> {
        Ok(LinIneq { coeffs: self.coeffs.clone(), rel: self.rel, rhs: f(&self.rhs)? })
    }

    /// Evaluates the left-hand side at a point (missing variables read as 0).
    pub fn lhs_at(&self, point: &BTreeMap<String, f64>) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs.iter().map(|(v, c)| c.to_f64().unwrap() * point.get(v).copied().unwrap_or(0.0)).sum()
    }

    /// Whether the row is the nonnegativity constraint −v ≤ 0 of some v.
    pub fn nonneg_var(&self) -> Option<&str> {
        if self.rel != Relation::Le || self.coeffs.len() != 1 || self.rhs != R::zero() {
            return None;
        }
        let (v, c) = self.coeffs.iter().next().unwrap();
        if c.is_negative() {
            Some(v)
        } else {
            None
        }
    }
}

impl<R: RhsValue> fmt::Display for LinIneq<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (i, (v, c)) in self.coeffs.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{} ", fmt_rational(&mag))?;
            }
            write!(f, "{v}")?;
        }
        let op = match self.rel {
            Relation::Le => "<=",
            Relation::Eq => "=",
        };
        write!(f, " {op} {}", self.rhs)
    }
}

/// A finite set of linear constraints over named rate variables.
#[derive(Clone, Debug, PartialEq)]
pub struct IneqSystem<R> {
    pub ineqs: Vec<LinIneq<R>>,
    pub vars: BTreeSet<String>,
}

impl<R: RhsValue> Default for IneqSystem<R> {
    fn default() -> Self {
        IneqSystem { ineqs: Vec::new(), vars: BTreeSet::new() }
    }
}

impl<R: RhsValue> IneqSystem<R> {
    pub fn new(ineqs: Vec<LinIneq<R>>) -> Self {
        let mut s = IneqSystem::default();
        for i in ineqs {
            s.push(i);
        }
        s
    }

    /// Adds a constraint unless an identical one is present; rows with no
    /// variable and a zero rhs are dropped.
    pub fn push(&mut self, i: LinIneq<R>) {
        if i.coeffs.is_empty() && i.rhs == R::zero() {
            return;
        }
        for v in i.coeffs.keys() {
            self.vars.insert(v.clone());
        }
        if !self.ineqs.contains(&i) {
            self.ineqs.push(i);
        }
    }

    pub fn declare_var(&mut self, v: &str) {
        self.vars.insert(v.to_string());
    }

    /// Adds −v ≤ 0 for every variable.
    pub fn with_nonnegativity(mut self) -> Self {
        let vars: Vec<String> = self.vars.iter().cloned().collect();
        for v in vars {
            self.push(LinIneq::nonneg(&v));
        }
        self
    }

    /// Variables actually carrying a nonzero coefficient somewhere.
    pub fn used_vars(&self) -> BTreeSet<String> {
        self.ineqs.iter().flat_map(|i| i.coeffs.keys().cloned()).collect()
    }

    pub fn map_rhs<T: RhsValue>(&self, f: impl Fn(&R) -> Result<T>) -> Result<IneqSystem<T>> {
        let ineqs = self.ineqs.iter().map(|i| i.map_rhs(&f)).collect::<Result<Vec<_>>>()?;
        let mut out = IneqSystem::new(ineqs);
        out.vars.extend(self.vars.iter().cloned());
        Ok(out)
    }

    /// Removes the named variable by one of the equalities containing it
    /// (if any), substituting it into every other constraint.
    pub fn substitute_var(&self, v: &str) -> Result<Option<Self>> {
        let Some(eq) = self.ineqs.iter().find(|i| i.rel == Relation::Eq && !i.coeff(v).is_zero()) else {
            return Ok(None);
        };
        substitute_equality(self, eq, v).map(Some)
    }

    /// Sets a variable to zero (drops it from every row).
    pub fn set_zero(&self, v: &str) -> Self {
        let mut out = IneqSystem::default();
        for i in &self.ineqs {
            let mut j = i.clone();
            j.coeffs.remove(v);
            out.push(j);
        }
        out.vars.extend(self.vars.iter().filter(|x| *x != v).cloned());
        out
    }

    /// Removes constraints equal to any of `drop`.
    pub fn without(&self, drop: &[LinIneq<R>]) -> Self {
        let mut out = IneqSystem::default();
        out.vars = self.vars.clone();
        for i in &self.ineqs {
            if !drop.contains(i) {
                out.push(i.clone());
            }
        }
        out
    }

    /// Checks membership of a point (numeric systems).
    pub fn contains_point(&self, point: &BTreeMap<String, f64>, tol: f64) -> bool
    where
        R: Into<f64> + Copy,
    {
        self.ineqs.iter().all(|i| {
            let lhs = i.lhs_at(point);
            let r: f64 = i.rhs.into();
            match i.rel {
                Relation::Le => lhs <= r + tol,
                Relation::Eq => (lhs - r).abs() <= tol,
            }
        })
    }
}

impl<R: RhsValue> fmt::Display for IneqSystem<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.ineqs {
            writeln!(f, "{i}")?;
        }
        Ok(())
    }
}

/// Removes the variable `v` using the equality `eq`: v is solved from `eq`
/// and replaced in every other constraint; `eq` itself is dropped.
pub fn substitute_equality<R: RhsValue>(sys: &IneqSystem<R>, eq: &LinIneq<R>, v: &str) -> Result<IneqSystem<R>> {
    if eq.rel != Relation::Eq {
        return Err(Error::Validation(format!("`{eq}` is not an equality")));
    }
    let e = eq.coeff(v);
    if e.is_zero() {
        return Err(Error::ZeroCoefficient(v.to_string()));
    }
    if !eq.rhs.is_plain() {
        return Err(Error::Validation(format!("equality `{eq}` has a minimum on its right-hand side")));
    }
    let mut out = IneqSystem::default();
    out.vars.extend(sys.vars.iter().filter(|x| *x != v).cloned());
    for i in &sys.ineqs {
        if i == eq {
            continue;
        }
        let c = i.coeff(v);
        if c.is_zero() {
            out.push(i.clone());
        } else {
            out.push(i.combine(&q(1), eq, &(-(c / &e)))?);
        }
    }
    Ok(out)
}

/// Fourier–Motzkin projection eliminating `v`. Equalities containing `v`
/// are substituted first. Returns the system unchanged if `v` is absent.
pub fn fm_eliminate<R: RhsValue>(sys: &IneqSystem<R>, v: &str) -> Result<IneqSystem<R>> {
    if !sys.vars.contains(v) && sys.ineqs.iter().all(|i| i.coeff(v).is_zero()) {
        return Ok(sys.clone());
    }
    if let Some(s) = sys.substitute_var(v)? {
        return Ok(s);
    }
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = IneqSystem::default();
    out.vars.extend(sys.vars.iter().filter(|x| *x != v).cloned());
    for i in &sys.ineqs {
        let c = i.coeff(v);
        if c.is_zero() {
            out.push(i.clone());
        } else if c.is_positive() {
            pos.push((i, c));
        } else {
            neg.push((i, -c));
        }
    }
    for (p, a) in &pos {
        for (n, b) in &neg {
            // b·p + a·n cancels v; normalize so that the lhs scale is preserved
            out.push(p.combine(b, n, a)?);
        }
    }
    Ok(normalize_rows(out))
}

/// Divides each row by a positive factor so that its smallest nonzero
/// coefficient magnitude is 1 (rows are stored in a canonical scale).
pub fn normalize_rows<R: RhsValue>(sys: IneqSystem<R>) -> IneqSystem<R> {
    let mut out = IneqSystem::default();
    out.vars = sys.vars.clone();
    for i in sys.ineqs {
        out.push(normalize_row(i));
    }
    out
}

pub(crate) fn normalize_row<R: RhsValue>(i: LinIneq<R>) -> LinIneq<R> {
    let Some(m) = i.coeffs.values().map(|c| c.abs()).min() else {
        return i;
    };
    if m.is_one() {
        return i;
    }
    let inv = Rational::one() / m;
    match i.rhs.scale(&inv) {
        Ok(rhs) => LinIneq {
            coeffs: i.coeffs.iter().map(|(k, c)| (k.clone(), c * &inv)).collect(),
            rel: i.rel,
            rhs,
        },
        Err(_) => i,
    }
}

//! Text syntax for entropy expressions.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := number | [number ['*']] factor
//! factor := I(list;list[|list]) | H(list[|list]) | minj(expr) | (expr)
//! ```
//! Inside `minj(...)` the name `Yj` ranges over `Y1` and `Y2`; the result is
//! the list of alternatives whose minimum the expression denotes.
//!
//! Linear rows (`side (<=|>=|=) side`) additionally accept bare identifiers
//! as rate variables, on either side, e.g. `Rp0 + Rs0 + D0 <= minj(I(U;Yj))`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::expr::{expand_mi, q, Atom, InfoExpr, Rational};
use crate::error::{Error, Result};

/// Parses an expression without `minj`.
pub fn parse_info_expr(src: &str) -> Result<InfoExpr> {
    let mut alts = parse_alternatives(src)?;
    if alts.len() != 1 {
        return Err(Error::Parse { line: 1, col: 1, msg: "expected a plain expression (no minj)".into() });
    }
    Ok(alts.pop().unwrap())
}

/// Parses an expression possibly containing `minj(...)`, returning the
/// alternatives of the minimum (a single one when `minj` is absent).
pub fn parse_alternatives(src: &str) -> Result<Vec<InfoExpr>> {
    let mut p = Parser { s: src.as_bytes(), i: 0, j: None, rates: false };
    let out = p.sum()?;
    p.ws();
    if p.i != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

/// Relation of a parsed linear row after normalization to `lhs op rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowOp {
    Le,
    Eq,
}

/// A linear constraint Σ coeffs·rates (≤ or =) min(rhs alternatives), with
/// every rate variable moved to the left and every entropy term to the right.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearRow {
    pub coeffs: BTreeMap<String, Rational>,
    pub op: RowOp,
    pub rhs: Vec<InfoExpr>,
}

/// Marker distinguishing rate variables from random variables while parsing.
const RATE_MARK: &str = "$";

/// Parses a linear row such as `R_a - D + I(U;Z|Q) <= minj(I(U;Yj))` or
/// `0 >= L1 - I(V1;V2|U)`. A minimum may only appear on the larger side.
pub fn parse_linear_row(src: &str) -> Result<LinearRow> {
    let mut p = Parser { s: src.as_bytes(), i: 0, j: None, rates: true };
    let left = p.sum()?;
    let op_at = p.i;
    let (op, flip) = if p.keyword("<=") {
        (RowOp::Le, false)
    } else if p.keyword(">=") {
        (RowOp::Le, true)
    } else if p.keyword("=") {
        (RowOp::Eq, false)
    } else {
        return Err(p.err("expected `<=`, `>=` or `=`"));
    };
    let right = p.sum()?;
    p.ws();
    if p.i != p.s.len() {
        return Err(p.err("trailing input"));
    }
    let (small, large) = if flip { (right, left) } else { (left, right) };
    if small.len() != 1 || (op == RowOp::Eq && large.len() != 1) {
        return Err(Error::Parse { line: 1, col: op_at + 1, msg: "a minimum may only bound a row from above".into() });
    }
    let mut coeffs: Option<BTreeMap<String, Rational>> = None;
    let mut rhs = Vec::with_capacity(large.len());
    for alt in &large {
        let diff = alt.clone() - small[0].clone();
        let mut rates = BTreeMap::new();
        let mut info = InfoExpr::constant(diff.constant_term().clone());
        for (atom, c) in diff.terms() {
            match atom.vars() {
                [v] if v.starts_with(RATE_MARK) => {
                    rates.insert(v[RATE_MARK.len()..].to_string(), -c.clone());
                }
                vars if vars.iter().any(|v| v.starts_with(RATE_MARK)) => {
                    return Err(Error::Parse { line: 1, col: 1, msg: "rate variables cannot appear inside I(...) or H(...)".into() });
                }
                _ => info.add_term(atom.clone(), c.clone()),
            }
        }
        match &coeffs {
            None => coeffs = Some(rates),
            Some(prev) if *prev != rates => {
                return Err(Error::Parse { line: 1, col: 1, msg: "rate variables inside minj(...)".into() });
            }
            Some(_) => {}
        }
        if !rhs.contains(&info) {
            rhs.push(info);
        }
    }
    Ok(LinearRow { coeffs: coeffs.unwrap_or_default(), op, rhs })
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
    j: Option<&'static str>,
    rates: bool,
}

fn cartesian(a: &[InfoExpr], b: &[InfoExpr]) -> Vec<InfoExpr> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            let mut e = x.clone();
            e += y;
            if !out.contains(&e) {
                out.push(e);
            }
        }
    }
    out
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { line: 1, col: self.i + 1, msg: msg.to_string() }
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn sum(&mut self) -> Result<Vec<InfoExpr>> {
        let mut sign = q(1);
        if self.eat(b'-') {
            sign = q(-1);
        } else {
            self.eat(b'+');
        }
        let mut acc = self.term(&sign)?;
        loop {
            let s = if self.eat(b'+') {
                q(1)
            } else if self.eat(b'-') {
                q(-1)
            } else {
                return Ok(acc);
            };
            let t = self.term(&s)?;
            acc = cartesian(&acc, &t);
        }
    }

    fn number(&mut self) -> Result<Option<Rational>> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        if self.i == start {
            return Ok(None);
        }
        let int: BigInt = std::str::from_utf8(&self.s[start..self.i]).unwrap().parse().unwrap();
        let mut val = Rational::from_integer(int);
        if self.i < self.s.len() && self.s[self.i] == b'.' {
            self.i += 1;
            let fs = self.i;
            while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                self.i += 1;
            }
            let digits = std::str::from_utf8(&self.s[fs..self.i]).unwrap();
            if !digits.is_empty() {
                let num: BigInt = digits.parse().unwrap();
                let den = num_traits::pow(BigInt::from(10), digits.len());
                val += Rational::new(num, den);
            }
        }
        if self.peek() == Some(b'/') {
            self.i += 1;
            let den = self.number()?.ok_or_else(|| self.err("expected denominator"))?;
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            val /= den;
        }
        Ok(Some(val))
    }

    fn term(&mut self, sign: &Rational) -> Result<Vec<InfoExpr>> {
        let coef = self.number()?;
        let c = coef.clone().unwrap_or_else(|| q(1)) * sign;
        self.eat(b'*');
        let at_factor = self.at_factor();
        if !at_factor {
            if self.rates && self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
                let name = self.ident()?;
                let atom = Atom::new([format!("{RATE_MARK}{name}")])?;
                let mut e = InfoExpr::zero();
                e.add_term(atom, c);
                return Ok(vec![e]);
            }
            return match coef {
                Some(_) => Ok(vec![InfoExpr::constant(c)]),
                None => Err(self.err("expected a term")),
            };
        }
        let f = self.factor()?;
        if f.len() > 1 && c.is_negative() {
            return Err(self.err("a minimum cannot appear with a negative coefficient"));
        }
        Ok(f.iter().map(|e| e.scaled(&c)).collect())
    }

    fn ident(&mut self) -> Result<String> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() {
            let c = self.s[self.i];
            if c.is_ascii_alphanumeric() || c == b'_' || c == b'~' || c == b'\'' {
                self.i += 1;
            } else {
                break;
            }
        }
        if start == self.i {
            return Err(self.err("expected a variable name"));
        }
        let name = std::str::from_utf8(&self.s[start..self.i]).unwrap().to_string();
        if name == "Yj" {
            return self.j.map(str::to_string).ok_or_else(|| self.err("`Yj` outside minj(...)"));
        }
        Ok(name)
    }

    fn list(&mut self) -> Result<Vec<String>> {
        let mut v = vec![self.ident()?];
        while self.eat(b',') {
            v.push(self.ident()?);
        }
        Ok(v)
    }

    fn at_factor(&mut self) -> bool {
        self.ws();
        let rest = &self.s[self.i..];
        ["minj(", "I(", "H(", "("].iter().any(|k| rest.starts_with(k.as_bytes()))
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.ws();
        let k = kw.as_bytes();
        if self.s[self.i..].starts_with(k) {
            self.i += k.len();
            true
        } else {
            false
        }
    }

    fn factor(&mut self) -> Result<Vec<InfoExpr>> {
        if self.keyword("minj(") {
            if self.j.is_some() {
                return Err(self.err("nested minj"));
            }
            let start = self.i;
            let mut alts = Vec::new();
            for y in ["Y1", "Y2"] {
                self.i = start;
                self.j = Some(y);
                let inner = self.sum()?;
                self.j = None;
                for e in inner {
                    if !alts.contains(&e) {
                        alts.push(e);
                    }
                }
            }
            self.expect(b')')?;
            return Ok(alts);
        }
        if self.keyword("I(") {
            let a = self.list()?;
            self.expect(b';')?;
            let b = self.list()?;
            let c = if self.eat(b'|') { self.list()? } else { Vec::new() };
            self.expect(b')')?;
            let at = self.i;
            return expand_mi(&a, &b, &c)
                .map(|e| vec![e])
                .map_err(|e| Error::Parse { line: 1, col: at, msg: e.to_string() });
        }
        if self.keyword("H(") {
            let a = self.list()?;
            let c = if self.eat(b'|') { self.list()? } else { Vec::new() };
            self.expect(b')')?;
            let mut all = a.clone();
            all.extend(c.iter().cloned());
            return Ok(vec![InfoExpr::h(&all) - InfoExpr::h(&c)]);
        }
        if self.eat(b'(') {
            let e = self.sum()?;
            self.expect(b')')?;
            return Ok(e);
        }
        Err(self.err("expected I(...), H(...), minj(...) or a parenthesized expression"))
    }
}

//! Small linear programs (backed by `minilp`) used for boundedness checks,
//! implication certificates and convex-hull membership.

use minilp::{ComparisonOp, OptimizationDirection, Problem, Variable};
use num_traits::ToPrimitive;

use super::system::{IneqSystem, LinIneq, Relation};
use crate::error::Result;

/// Outcome of an LP.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal(f64),
    Infeasible,
    Unbounded,
}

fn build(sys: &IneqSystem<f64>, vars: &[String], objective: &dyn Fn(&str) -> f64, dir: OptimizationDirection) -> (Problem, Vec<Variable>) {
    let mut p = Problem::new(dir);
    let xs: Vec<Variable> = vars.iter().map(|v| p.add_var(objective(v), (0.0, f64::INFINITY))).collect();
    for row in &sys.ineqs {
        add_row(&mut p, row, vars, &xs);
    }
    (p, xs)
}

fn add_row(p: &mut Problem, row: &LinIneq<f64>, vars: &[String], xs: &[Variable]) {
    let terms: Vec<(Variable, f64)> = row
        .coeffs
        .iter()
        .filter_map(|(v, c)| vars.iter().position(|w| w == v).map(|k| (xs[k], c.to_f64().unwrap())))
        .collect();
    let op = match row.rel {
        Relation::Le => ComparisonOp::Le,
        Relation::Eq => ComparisonOp::Eq,
    };
    p.add_constraint(terms, op, row.rhs);
}

fn run(p: &Problem) -> LpOutcome {
    match p.solve() {
        Ok(s) => LpOutcome::Optimal(s.objective()),
        Err(minilp::Error::Infeasible) => LpOutcome::Infeasible,
        Err(minilp::Error::Unbounded) => LpOutcome::Unbounded,
    }
}

/// max Σ obj(v)·v over the system intersected with the nonnegative orthant.
pub fn maximize(sys: &IneqSystem<f64>, objective: &[(String, f64)]) -> LpOutcome {
    let vars: Vec<String> = sys.vars.iter().cloned().chain(objective.iter().map(|(v, _)| v.clone())).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let obj = |v: &str| objective.iter().filter(|(w, _)| w == v).map(|(_, c)| *c).sum();
    let (p, _) = build(sys, &vars, &obj, OptimizationDirection::Maximize);
    run(&p)
}

/// Whether the system (in the nonnegative orthant) is nonempty and unbounded.
pub fn is_unbounded(sys: &IneqSystem<f64>, vars: &[String]) -> Result<bool> {
    // recession directions: A d ≤ 0 (rows), equalities A d = 0, 0 ≤ d ≤ 1
    let mut p = Problem::new(OptimizationDirection::Maximize);
    let ds: Vec<Variable> = vars.iter().map(|_| p.add_var(1.0, (0.0, 1.0))).collect();
    for row in &sys.ineqs {
        let mut r = row.clone();
        r.rhs = 0.0;
        add_row(&mut p, &r, vars, &ds);
    }
    let ray = match run(&p) {
        LpOutcome::Optimal(v) => v > 1e-9,
        _ => false,
    };
    if !ray {
        return Ok(false);
    }
    let (feas, _) = build(sys, vars, &|_| 0.0, OptimizationDirection::Maximize);
    Ok(run(&feas) != LpOutcome::Infeasible)
}

/// Whether `row` is implied by `sys` (within `tol`, relative to the rhs
/// scale) on the nonnegative orthant. An empty system implies everything.
pub fn implies(sys: &IneqSystem<f64>, row: &LinIneq<f64>, tol: f64) -> bool {
    let obj: Vec<(String, f64)> = row.coeffs.iter().map(|(v, c)| (v.clone(), c.to_f64().unwrap())).collect();
    let t = tol * (1.0 + row.rhs.abs());
    let le = match maximize(sys, &obj) {
        LpOutcome::Optimal(v) => v <= row.rhs + t,
        LpOutcome::Infeasible => true,
        LpOutcome::Unbounded => false,
    };
    if row.rel == Relation::Le || !le {
        return le;
    }
    let neg: Vec<(String, f64)> = obj.iter().map(|(v, c)| (v.clone(), -c)).collect();
    match maximize(sys, &neg) {
        LpOutcome::Optimal(v) => -v >= row.rhs - t,
        LpOutcome::Infeasible => true,
        LpOutcome::Unbounded => false,
    }
}

/// Removes constraints implied by the remaining ones (on the nonnegative
/// orthant), scanning in order; nonnegativity rows are always kept. A row
/// whose left-hand side repeats an earlier row's is compared directly.
pub fn prune_redundant(sys: &IneqSystem<f64>, tol: f64) -> IneqSystem<f64> {
    let mut kept: Vec<LinIneq<f64>> = sys.ineqs.clone();
    let mut i = 0;
    while i < kept.len() {
        let row = &kept[i];
        if row.nonneg_var().is_some() {
            i += 1;
            continue;
        }
        let twin = kept.iter().enumerate().any(|(j, o)| {
            j != i && o.coeffs == row.coeffs && o.rel == row.rel && (o.rhs < row.rhs || (o.rhs == row.rhs && j < i))
        });
        let implied = twin || {
            let rest: Vec<LinIneq<f64>> = kept.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, r)| r.clone()).collect();
            let mut others = IneqSystem::new(rest);
            others.vars = sys.vars.clone();
            row.rel == Relation::Le && implies(&others, row, tol)
        };
        if implied {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    let mut out = IneqSystem::new(kept);
    out.vars = sys.vars.clone();
    out
}

/// Smallest uniform shift s such that `target − s·1` is dominated
/// componentwise by a convex combination of `points`. Nonpositive values
/// mean `target` lies in the down-closed convex hull of the points.
pub fn hull_shortfall(points: &[Vec<f64>], target: &[f64]) -> f64 {
    if points.is_empty() {
        return f64::INFINITY;
    }
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let s = p.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
    let lam: Vec<Variable> = points.iter().map(|_| p.add_var(0.0, (0.0, 1.0))).collect();
    p.add_constraint(lam.iter().map(|&l| (l, 1.0)).collect::<Vec<_>>(), ComparisonOp::Eq, 1.0);
    for (k, &t) in target.iter().enumerate() {
        let mut terms: Vec<(Variable, f64)> = lam.iter().zip(points).map(|(&l, pt)| (l, pt[k])).collect();
        terms.push((s, 1.0));
        p.add_constraint(terms, ComparisonOp::Ge, t);
    }
    match p.solve() {
        Ok(sol) => sol.objective(),
        Err(_) => f64::INFINITY,
    }
}

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::lp;
use super::system::{IneqSystem, Relation};
use crate::error::{Error, Result};

/// Largest dimension handled by basis enumeration.
pub const MAX_VERTEX_DIM: usize = 6;
const DEDUP_TOL: f64 = 1e-9;

/// Vertex (V-) representation of a bounded polytope.
#[derive(Clone, Debug, PartialEq)]
pub struct VPolytope {
    /// Coordinate names, in order.
    pub vars: Vec<String>,
    pub vertices: Vec<Vec<f64>>,
}

impl VPolytope {
    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn point(&self, i: usize) -> BTreeMap<String, f64> {
        self.vars.iter().cloned().zip(self.vertices[i].iter().copied()).collect()
    }
}

/// Dense rows `a·x ≤ b` (equalities as two rows) including nonnegativity.
pub(crate) fn dense_rows(sys: &IneqSystem<f64>, vars: &[String]) -> (Vec<Vec<f64>>, Vec<f64>, Vec<bool>) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut is_eq = Vec::new();
    for i in &sys.ineqs {
        let row: Vec<f64> = vars.iter().map(|v| i.coeff(v).to_f64().unwrap()).collect();
        a.push(row);
        b.push(i.rhs);
        is_eq.push(i.rel == Relation::Eq);
    }
    for k in 0..vars.len() {
        let mut row = vec![0.0; vars.len()];
        row[k] = -1.0;
        a.push(row);
        b.push(0.0);
        is_eq.push(false);
    }
    (a, b, is_eq)
}

fn feasible(a: &[Vec<f64>], b: &[f64], is_eq: &[bool], x: &[f64], tol: f64) -> bool {
    a.iter().zip(b).zip(is_eq).all(|((row, &r), &eq)| {
        let lhs: f64 = row.iter().zip(x).map(|(p, q)| p * q).sum();
        let t = tol * (1.0 + r.abs());
        if eq {
            (lhs - r).abs() <= t
        } else {
            lhs <= r + t
        }
    })
}

/// Calls `f` on every k-subset of 0..n in lexicographic order.
fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Exact-style vertex enumeration: every choice of `d` linearly independent
/// tight constraints (equalities always tight) is solved and kept if
/// feasible; duplicates within 1e-9 are merged. The region is intersected
/// with the nonnegative orthant of its variables.
pub fn vertices(sys: &IneqSystem<f64>) -> Result<VPolytope> {
    let vars: Vec<String> = sys.vars.iter().cloned().collect();
    let d = vars.len();
    if d > MAX_VERTEX_DIM {
        return Err(Error::DimensionTooLarge { dim: d, max: MAX_VERTEX_DIM });
    }
    if lp::is_unbounded(sys, &vars)? {
        return Err(Error::UnboundedRegion);
    }
    let (a, b, is_eq) = dense_rows(sys, &vars);
    if d == 0 {
        let ok = feasible(&a, &b, &is_eq, &[], DEDUP_TOL);
        return Ok(VPolytope { vars, vertices: if ok { vec![vec![]] } else { vec![] } });
    }
    let eq_rows: Vec<usize> = (0..a.len()).filter(|&i| is_eq[i]).collect();
    let free_rows: Vec<usize> = (0..a.len()).filter(|&i| !is_eq[i]).collect();
    if eq_rows.len() > d {
        // overdetermined equalities: use a least-squares-consistent subset via the generic path
        return vertices_generic(&a, &b, &is_eq, vars);
    }
    let k = d - eq_rows.len();
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    for_each_subset(free_rows.len(), k, &mut |s| subsets.push(s.iter().map(|&i| free_rows[i]).collect()));
    let found: Vec<Vec<f64>> = subsets
        .par_iter()
        .filter_map(|s| {
            let rows: Vec<usize> = eq_rows.iter().chain(s.iter()).copied().collect();
            solve_basis(&a, &b, &rows, d).filter(|x| feasible(&a, &b, &is_eq, x, DEDUP_TOL))
        })
        .collect();
    Ok(VPolytope { vars, vertices: dedup_sorted(found) })
}

fn vertices_generic(a: &[Vec<f64>], b: &[f64], is_eq: &[bool], vars: Vec<String>) -> Result<VPolytope> {
    let d = vars.len();
    let mut found = Vec::new();
    for_each_subset(a.len(), d, &mut |s| {
        if let Some(x) = solve_basis(a, b, s, d) {
            if feasible(a, b, is_eq, &x, DEDUP_TOL) {
                found.push(x);
            }
        }
    });
    Ok(VPolytope { vars, vertices: dedup_sorted(found) })
}

fn solve_basis(a: &[Vec<f64>], b: &[f64], rows: &[usize], d: usize) -> Option<Vec<f64>> {
    let m = DMatrix::from_fn(d, d, |i, j| a[rows[i]][j]);
    let rhs = DVector::from_fn(d, |i, _| b[rows[i]]);
    let lu = m.clone().full_piv_lu();
    // reject near-singular bases relative to the row scale
    let scale = m.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(1.0);
    let diag_min = (0..d).map(|i| lu.u()[(i, i)].abs()).fold(f64::INFINITY, f64::min);
    if !(diag_min > 1e-12 * scale) {
        return None;
    }
    let x = lu.solve(&rhs)?;
    let x: Vec<f64> = x.iter().map(|&v| if v.abs() < 1e-15 { 0.0 } else { v }).collect();
    if x.iter().all(|v| v.is_finite()) {
        Some(x)
    } else {
        None
    }
}

/// Sorts lexicographically and merges points closer than 1e-9 (max-norm).
fn dedup_sorted(mut pts: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    let mut out: Vec<Vec<f64>> = Vec::new();
    for p in pts {
        let dup = out.iter().any(|q| close(q, &p));
        if !dup {
            out.push(p);
        }
    }
    out
}

fn close(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= DEDUP_TOL * (1.0 + x.abs().max(y.abs())))
}

/// Whether every vertex of `a` lies in `b` within `tol` (including the
/// nonnegative orthant).
pub fn contained_in(a: &VPolytope, b: &IneqSystem<f64>, tol: f64) -> bool {
    (0..a.vertices.len()).all(|i| {
        let p = a.point(i);
        p.values().all(|&x| x >= -tol) && b.contains_point(&p, tol)
    })
}

/// Equality of the regions described by two numeric systems over the same
/// variables, intersected with the nonnegative orthant: each one's vertices
/// lie in the other within `tol`.
pub fn region_equal(a: &IneqSystem<f64>, b: &IneqSystem<f64>, tol: f64) -> Result<bool> {
    if a.vars != b.vars {
        return Err(Error::DimensionMismatch(format!("variables {:?} vs {:?}", a.vars, b.vars)));
    }
    let va = vertices(a)?;
    let vb = vertices(b)?;
    Ok(contained_in(&va, b, tol) && contained_in(&vb, a, tol))
}

//! Numeric rate regions: bound constants for a fixed auxiliary distribution
//! (discrete) or covariance split (Gaussian), the polytopes they define, and
//! seeded sweeps that trace the union over auxiliaries.

pub mod discrete;
pub mod gaussian;

use std::fmt;

use crate::fm::lp::hull_shortfall;
use crate::fm::{IneqSystem, LinIneq, VPolytope};

/// The four rates, in coordinate order: public and confidential rate of the
/// first legitimate user, then of the second.
pub const RATES: [&str; 4] = ["Rp1", "Rs1", "Rp2", "Rs2"];

/// One bound Σ rates ≤ value.
#[derive(Clone, Debug, PartialEq)]
pub struct Bound {
    pub rates: Vec<&'static str>,
    pub value: f64,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.rates.join(" + "), self.value)
    }
}

/// The instantiated right-hand sides of a region, in the fixed order of its
/// bound list. Values are stored raw: secrecy differences may be
/// negative (the region is then empty or degenerate).
#[derive(Clone, Debug, PartialEq)]
pub struct RegionPoint {
    pub bounds: Vec<Bound>,
}

impl RegionPoint {
    pub(crate) fn from_rows(rows: &[&[&'static str]], values: &[f64]) -> Self {
        RegionPoint {
            bounds: rows.iter().zip(values).map(|(r, &v)| Bound { rates: r.to_vec(), value: v }).collect(),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.bounds.iter().map(|b| b.value).collect()
    }

    /// The polytope over all four rates (nonnegativity included).
    pub fn system(&self) -> IneqSystem<f64> {
        rate_system(self.bounds.iter().map(|b| (b.rates.as_slice(), b.value)))
    }
}

/// Builds a numeric system over the four rates from (rates, rhs) rows and
/// adds nonnegativity of every rate.
pub fn rate_system<'a>(rows: impl IntoIterator<Item = (&'a [&'static str], f64)>) -> IneqSystem<f64> {
    let mut sys = IneqSystem::default();
    for r in RATES {
        sys.declare_var(r);
    }
    for (rates, v) in rows {
        sys.push(LinIneq::le(rates, v));
    }
    sys.with_nonnegativity()
}

/// One sample of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSample {
    pub index: u64,
    /// Stable hash of the sampled auxiliary distribution or covariance split.
    pub hash: u64,
    pub point: RegionPoint,
    pub polytope: VPolytope,
}

/// Vertex `i` of a polytope over the rates, as coordinates in [`RATES`] order.
pub fn in_rate_order(p: &VPolytope, i: usize) -> Vec<f64> {
    let pt = p.point(i);
    RATES.iter().map(|r| pt.get(*r).copied().unwrap_or(0.0)).collect()
}

/// The per-sample polytopes of a sweep together with the extreme points of
/// the down-closed convex hull of their union, in [`RATES`] coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub vars: Vec<String>,
    pub samples: Vec<SweepSample>,
    pub hull: Vec<Vec<f64>>,
}

impl SweepResult {
    pub(crate) fn from_samples(samples: Vec<SweepSample>) -> Self {
        let vars = RATES.iter().map(|s| s.to_string()).collect();
        let cloud: Vec<Vec<f64>> = samples
            .iter()
            .flat_map(|s| (0..s.polytope.vertices.len()).map(|i| in_rate_order(&s.polytope, i)))
            .collect();
        SweepResult { vars, samples, hull: down_closed_hull(cloud) }
    }

    /// Whether `point` lies in the down-closed convex hull within `tol`.
    pub fn hull_contains(&self, point: &[f64], tol: f64) -> bool {
        hull_shortfall(&self.hull, point) <= tol
    }
}

/// Above this many Pareto points the LP-based extreme-point filter is
/// skipped; the Pareto set still generates the same down-closed hull.
const HULL_LP_LIMIT: usize = 400;

/// Reduces a point cloud in the nonnegative orthant to generators of its
/// down-closed convex hull: dominated points are removed, then (for small
/// clouds) points inside the hull of the others. Output is sorted.
pub fn down_closed_hull(mut pts: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    pts.dedup();
    let dominated = |p: &Vec<f64>, q: &Vec<f64>| p != q && p.iter().zip(q).all(|(a, b)| a <= b);
    let pareto: Vec<Vec<f64>> = pts.iter().filter(|p| !pts.iter().any(|q| dominated(p, q))).cloned().collect();
    if pareto.len() > HULL_LP_LIMIT {
        return pareto;
    }
    let mut kept = pareto;
    let mut i = 0;
    while i < kept.len() {
        let others: Vec<Vec<f64>> = kept.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
        if !others.is_empty() && hull_shortfall(&others, &kept[i]) <= 1e-12 {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    kept
}

/// FNV-1a over the bit patterns of a float slice; stable across platforms
/// and releases.
pub fn stable_hash(values: &[f64]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in values {
        for b in v.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

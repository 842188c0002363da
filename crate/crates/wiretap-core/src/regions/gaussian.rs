//! Gaussian MIMO regions: channels with noise covariances Σ1, Σ2, ΣZ under
//! an input covariance cap S, degradedness checks in covariance-order and
//! gain-matrix form, closed-form log-det constants of the degraded inner
//! and outer bounds and of the Marton-coded general inner bound with
//! dirty-paper precoding, corollary specializations, covariance sweeps, and
//! a lattice discretization of scalar channels for cross-checks against the
//! discrete evaluators.

use nalgebra::DVector;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use statrs::function::erf::erfc;

use super::discrete::{specialize_corollary, AuxJoint, Corollary, DegradedTerms, EXTRA_ROW, INNER_ROWS};
use super::{stable_hash, RegionPoint, SweepResult, SweepSample};
use crate::error::{Error, Result};
use crate::fm::{vertices, IneqSystem};
use crate::info::{build_degraded_joint, ChannelSpec, Kernel, VarId};
use crate::linalg::{check_pd, half_log_ratio, is_psd, min_eigenvalue, psd_clip, psd_scale, spd_inverse, sqrt_psd, LinearGaussModel, Mat, PSD_TOL};
use crate::rng::{random_pmf, stream, uniform, SampleRng};

/// Absolute tolerance of the covariance order Σ1 ⪯ Σ2 ⪯ ΣZ.
pub const ORDER_TOL: f64 = 1e-10;
/// Largest accepted residual ‖H2 − D H1‖ in the gain-matrix check.
pub const GAIN_RESIDUAL_TOL: f64 = 1e-9;

/// Rows of the general inner bound with the second user's codeword encoded
/// first, in order.
pub const GENERAL_GAUSS_ROWS: [&[&str]; 8] = [
    &["Rs1"],
    &["Rs2"],
    &["Rs1", "Rs2"],
    &["Rp1", "Rs1"],
    &["Rp2", "Rs2"],
    &["Rp1", "Rs1", "Rs2"],
    &["Rs1", "Rp2", "Rs2"],
    &["Rp1", "Rs1", "Rp2", "Rs2"],
];

/// Y_j = X + N_j, j ∈ {1, 2, Z}, with E[XXᵀ] ⪯ S.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussChannel {
    pub s: Mat,
    pub sigma1: Mat,
    pub sigma2: Mat,
    pub sigma_z: Mat,
}

impl GaussChannel {
    /// Validates squareness, a common dimension, symmetry and positive
    /// definiteness of all four matrices.
    pub fn new(s: Mat, sigma1: Mat, sigma2: Mat, sigma_z: Mat) -> Result<Self> {
        let d = s.nrows();
        for (m, what) in [(&s, "S"), (&sigma1, "Sigma1"), (&sigma2, "Sigma2"), (&sigma_z, "SigmaZ")] {
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::DimensionMismatch(format!("{what} is {}x{}, expected {d}x{d}", m.nrows(), m.ncols())));
            }
            check_pd(m, what)?;
        }
        Ok(GaussChannel { s, sigma1, sigma2, sigma_z })
    }

    /// A 1×1 channel.
    pub fn scalar(s: f64, sigma1: f64, sigma2: f64, sigma_z: f64) -> Result<Self> {
        let m = |v| Mat::from_element(1, 1, v);
        Self::new(m(s), m(sigma1), m(sigma2), m(sigma_z))
    }

    pub fn dim(&self) -> usize {
        self.s.nrows()
    }

    /// Noise covariance of output j: 0 → Σ1, 1 → Σ2, 2 → ΣZ.
    pub fn noise(&self, j: usize) -> &Mat {
        [&self.sigma1, &self.sigma2, &self.sigma_z][j]
    }

    /// The channel with the two legitimate receivers exchanged.
    pub fn swap_users(&self) -> Self {
        GaussChannel { s: self.s.clone(), sigma1: self.sigma2.clone(), sigma2: self.sigma1.clone(), sigma_z: self.sigma_z.clone() }
    }

    /// The same noises under another input cap.
    pub fn with_cap(&self, s: Mat) -> Result<Self> {
        Self::new(s, self.sigma1.clone(), self.sigma2.clone(), self.sigma_z.clone())
    }
}

/// Whether 0 ≺ Σ1 ⪯ Σ2 ⪯ ΣZ, with each order checked to [`ORDER_TOL`].
pub fn check_degraded_order(ch: &GaussChannel) -> bool {
    min_eigenvalue(&ch.sigma1) > 0.0
        && is_psd(&(&ch.sigma2 - &ch.sigma1), ORDER_TOL)
        && is_psd(&(&ch.sigma_z - &ch.sigma2), ORDER_TOL)
}

/// Y1 = H1 X + N1, Y2 = H2 X + N2, Z = HZ X + NZ with identity noise.
#[derive(Clone, Debug, PartialEq)]
pub struct HGaussChannel {
    pub h1: Mat,
    pub h2: Mat,
    pub hz: Mat,
}

impl HGaussChannel {
    pub fn new(h1: Mat, h2: Mat, hz: Mat) -> Result<Self> {
        let t = h1.ncols();
        if h2.ncols() != t || hz.ncols() != t {
            return Err(Error::DimensionMismatch(format!(
                "gain matrices have {}, {}, {} columns",
                t,
                h2.ncols(),
                hz.ncols()
            )));
        }
        Ok(HGaussChannel { h1, h2, hz })
    }
}

/// Outcome of the gain-matrix degradedness check, with the least-squares
/// witnesses D21 = H2 H1⁺ and DZ2 = HZ H2⁺.
#[derive(Clone, Debug, PartialEq)]
pub struct GainDegradedness {
    pub degraded: bool,
    pub d21: Mat,
    pub dz2: Mat,
    /// Frobenius norm of H2 − D21 H1.
    pub residual21: f64,
    /// Frobenius norm of HZ − DZ2 H2.
    pub residual_z2: f64,
}

/// Whether H2 = D21 H1 and HZ = DZ2 H2 for contractions D21, DZ2.
pub fn check_degraded_h(ch: &HGaussChannel) -> GainDegradedness {
    let witness = |next: &Mat, prev: &Mat| {
        let pinv = prev.clone().pseudo_inverse(1e-12).unwrap_or_else(|_| Mat::zeros(prev.ncols(), prev.nrows()));
        let d = next * pinv;
        let resid = (next - &d * prev).norm();
        let contraction = is_psd(&(Mat::identity(d.nrows(), d.nrows()) - &d * d.transpose()), ORDER_TOL);
        (d, resid, contraction)
    };
    let (d21, residual21, c21) = witness(&ch.h2, &ch.h1);
    let (dz2, residual_z2, cz2) = witness(&ch.hz, &ch.h2);
    let degraded = residual21 <= GAIN_RESIDUAL_TOL && residual_z2 <= GAIN_RESIDUAL_TOL && c21 && cz2;
    GainDegradedness { degraded, d21, dz2, residual21, residual_z2 }
}

/// Joint covariance of (N1, N2, NZ) realized as (N1, N1 + Ñ, N1 + Ñ + Ñ′)
/// with independent increments Ñ ~ N(0, Σ2 − Σ1), Ñ′ ~ N(0, ΣZ − Σ2), which
/// makes X → Y1 → Y2 → Z a Markov chain without changing the marginals.
pub fn construct_joint_noise(ch: &GaussChannel) -> Result<Mat> {
    if !check_degraded_order(ch) {
        return Err(Error::NotDegraded);
    }
    let d = ch.dim();
    let blocks = [&ch.sigma1, &ch.sigma2, &ch.sigma_z];
    let mut out = Mat::zeros(3 * d, 3 * d);
    for i in 0..3 {
        for j in 0..3 {
            // Cov(N_i, N_j) is the covariance of the less noisy of the two.
            out.view_mut((i * d, j * d), (d, d)).copy_from(blocks[i.min(j)]);
        }
    }
    Ok(out)
}

/// A covariance split of the input: K alone for the degraded bounds, or
/// (K0, K1, K2) for the general bound.
#[derive(Clone, Debug, PartialEq)]
pub enum CovSplit {
    Single(Mat),
    Triple([Mat; 3]),
}

impl CovSplit {
    /// Validates and clips K.
    pub fn single(k: Mat) -> Result<Self> {
        Ok(CovSplit::Single(psd_clip(&k, "K")?))
    }

    /// Validates and clips K0, K1, K2.
    pub fn triple(k0: Mat, k1: Mat, k2: Mat) -> Result<Self> {
        Ok(CovSplit::Triple([psd_clip(&k0, "K0")?, psd_clip(&k1, "K1")?, psd_clip(&k2, "K2")?]))
    }

    /// K, or K0 + K1 + K2.
    pub fn total(&self) -> Mat {
        match self {
            CovSplit::Single(k) => k.clone(),
            CovSplit::Triple([a, b, c]) => a + b + c,
        }
    }

    fn matrices(&self) -> Vec<&Mat> {
        match self {
            CovSplit::Single(k) => vec![k],
            CovSplit::Triple(ks) => ks.iter().collect(),
        }
    }

    /// Checks dimensions and total ⪯ S within the relative PSD tolerance.
    pub fn check_cap(&self, s: &Mat) -> Result<()> {
        for m in self.matrices() {
            if m.shape() != s.shape() {
                return Err(Error::DimensionMismatch(format!("split matrix is {}x{}, cap is {}x{}", m.nrows(), m.ncols(), s.nrows(), s.ncols())));
            }
        }
        let gap = s - self.total();
        let lo = min_eigenvalue(&gap);
        if lo < -PSD_TOL * psd_scale(s) {
            return Err(Error::CapExceeded { eigenvalue: lo });
        }
        Ok(())
    }

    fn single_k(&self) -> Result<&Mat> {
        match self {
            CovSplit::Single(k) => Ok(k),
            CovSplit::Triple(_) => Err(Error::Validation("degraded bounds take a single covariance K".into())),
        }
    }

    fn triple_k(&self) -> Result<&[Mat; 3]> {
        match self {
            CovSplit::Triple(ks) => Ok(ks),
            CovSplit::Single(_) => Err(Error::Validation("the general bound takes a split (K0, K1, K2)".into())),
        }
    }

    fn entries(&self) -> Vec<f64> {
        self.matrices().into_iter().flat_map(|m| m.iter().copied()).collect()
    }
}

/// The degraded-bound information terms for jointly Gaussian (U, X) with
/// Cov(X|U) = K and Cov(X) = S:
/// I(U;Y2) = ½ ln|S+Σ2|/|K+Σ2|, I(U;Z) = ½ ln|S+ΣZ|/|K+ΣZ|,
/// I(X;Y1|U) = ½ ln|K+Σ1|/|Σ1|, I(X;Z) = ½ ln|S+ΣZ|/|ΣZ|,
/// I(X;Z|U) = ½ ln|K+ΣZ|/|ΣZ|.
pub fn gauss_terms(split: &CovSplit, ch: &GaussChannel) -> Result<DegradedTerms> {
    let k = split.single_k()?;
    split.check_cap(&ch.s)?;
    if !check_degraded_order(ch) {
        return Err(Error::NotDegraded);
    }
    let (s, s1, s2, sz) = (&ch.s, &ch.sigma1, &ch.sigma2, &ch.sigma_z);
    Ok(DegradedTerms {
        u_y2: half_log_ratio(&(s + s2), &(k + s2))?,
        u_z: half_log_ratio(&(s + sz), &(k + sz))?,
        x_y1_u: half_log_ratio(&(k + s1), s1)?,
        x_z: half_log_ratio(&(s + sz), sz)?,
        x_z_u: half_log_ratio(&(k + sz), sz)?,
    })
}

/// The five inner-bound constants for covariance K.
pub fn gauss_inner_point(split: &CovSplit, ch: &GaussChannel) -> Result<RegionPoint> {
    Ok(RegionPoint::from_rows(&INNER_ROWS, &gauss_terms(split, ch)?.inner()))
}

/// The four outer-bound constants: the inner ones without the
/// Rs1 + Rp2 + Rs2 row.
pub fn gauss_outer_point(split: &CovSplit, ch: &GaussChannel) -> Result<RegionPoint> {
    let mut p = gauss_inner_point(split, ch)?;
    p.bounds.remove(EXTRA_ROW);
    Ok(p)
}

/// The inner-bound polytope for covariance K.
pub fn eval_gauss_inner(split: &CovSplit, ch: &GaussChannel) -> Result<IneqSystem<f64>> {
    Ok(gauss_inner_point(split, ch)?.system())
}

/// The outer-bound polytope for covariance K.
pub fn eval_gauss_outer(split: &CovSplit, ch: &GaussChannel) -> Result<IneqSystem<f64>> {
    Ok(gauss_outer_point(split, ch)?.system())
}

/// Corollary specialization of a Gaussian degraded region; the per-user
/// secrecy form yields Rs2 ≤ ½ ln|S+Σ2|/|K+Σ2| − ½ ln|S+ΣZ|/|K+ΣZ| and
/// Rs1 ≤ ½ ln|K+Σ1|/|Σ1| − ½ ln|K+ΣZ|/|ΣZ|.
pub fn specialize_gauss_corollary(sys: &IneqSystem<f64>, which: Corollary) -> Result<IneqSystem<f64>> {
    specialize_corollary(sys, which)
}

/// The dirty-paper precoder A = K1 (K1 + Σ1)⁻¹.
pub fn dpc_matrix(k1: &Mat, sigma1: &Mat) -> Result<Mat> {
    if k1.shape() != sigma1.shape() {
        return Err(Error::DimensionMismatch("K1 and Sigma1 differ in shape".into()));
    }
    Ok(k1 * spd_inverse(&(k1 + sigma1), "K1 + Sigma1")?)
}

/// The jointly Gaussian (Q, U, V1, V2, X, Y1, Y2, Z) of the general
/// Gaussian bound, with V2 encoded first:
/// Q ~ N(0, S − K0 − K1 − K2), U = Q + Q′ with Q′ ~ N(0, K0),
/// V2 = U + U2 with U2 ~ N(0, K2), V1 = U1 + A U2 + U with U1 ~ N(0, K1),
/// X = U + U1 + U2, and Y_j = X + N_j.
pub fn general_gauss_model(split: &CovSplit, ch: &GaussChannel) -> Result<LinearGaussModel> {
    let [k0, k1, k2] = split.triple_k()?;
    split.check_cap(&ch.s)?;
    let d = ch.dim();
    let a = dpc_matrix(k1, &ch.sigma1)?;
    let id = || Mat::identity(d, d);
    let mut g = LinearGaussModel::default();
    let q = g.source(psd_clip(&(&ch.s - split.total()), "S - K0 - K1 - K2")?);
    let q0 = g.source(k0.clone());
    let u2 = g.source(k2.clone());
    let u1 = g.source(k1.clone());
    let noises: Vec<usize> = (0..3).map(|j| g.source(ch.noise(j).clone())).collect();
    g.block("Q", d, vec![(q, id())])?;
    g.block("U", d, vec![(q, id()), (q0, id())])?;
    g.block("V2", d, vec![(q, id()), (q0, id()), (u2, id())])?;
    g.block("V1", d, vec![(q, id()), (q0, id()), (u2, a), (u1, id())])?;
    g.block("X", d, vec![(q, id()), (q0, id()), (u2, id()), (u1, id())])?;
    for (name, n) in ["Y1", "Y2", "Z"].into_iter().zip(noises) {
        g.block(name, d, vec![(q, id()), (q0, id()), (u2, id()), (u1, id()), (n, id())])?;
    }
    Ok(g)
}

/// Both sides of the dirty-paper identity
/// I(V1;Y1|U) − I(V1;V2|U) = ½ ln|K1+Σ1|/|Σ1|.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DpcCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Evaluates the dirty-paper identity from the joint covariance of the
/// general Gaussian model.
pub fn dpc_identity_check(split: &CovSplit, ch: &GaussChannel) -> Result<DpcCheck> {
    let g = general_gauss_model(split, ch)?;
    let lhs = g.mutual_information(&["V1"], &["Y1"], &["U"])? - g.mutual_information(&["V1"], &["V2"], &["U"])?;
    let k1 = &split.triple_k()?[1];
    let rhs = half_log_ratio(&(k1 + &ch.sigma1), &ch.sigma1)?;
    Ok(DpcCheck { lhs, rhs, residual: (lhs - rhs).abs() })
}

/// Which auxiliary is encoded first in the general bound: `R21` encodes V2
/// first and precodes V1 against it; `R12` the reverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MartonOrder {
    R21,
    R12,
}

impl std::str::FromStr for MartonOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "21" => Ok(MartonOrder::R21),
            "12" => Ok(MartonOrder::R12),
            other => Err(Error::Validation(format!("encoding order must be 21 or 12, got `{other}`"))),
        }
    }
}

/// Exchanges the user index of a rate label.
pub fn swap_rate_label(r: &'static str) -> &'static str {
    match r {
        "Rp1" => "Rp2",
        "Rp2" => "Rp1",
        "Rs1" => "Rs2",
        "Rs2" => "Rs1",
        other => other,
    }
}

fn general_r21_values(ks: &[Mat; 3], ch: &GaussChannel) -> Result<[f64; 8]> {
    let [k0, k1, k2] = ks;
    let (s, s1, s2, sz) = (&ch.s, &ch.sigma1, &ch.sigma2, &ch.sigma_z);
    let k12 = k1 + k2;
    let t = k0 + &k12;
    let l = half_log_ratio;
    // Common-message terms: min over both legitimate receivers, with and
    // without the time-sharing variable known.
    let m_q = l(&(&t + s1), &(&k12 + s1))?.min(l(&(&t + s2), &(&k12 + s2))?);
    let m = l(&(s + s1), &(&k12 + s1))?.min(l(&(s + s2), &(&k12 + s2))?);
    let dpc1 = l(&(k1 + s1), s1)?;
    let v2_y2 = l(&(&k12 + s2), &(k1 + s2))?;
    let u_z_q = l(&(&t + sz), &(&k12 + sz))?;
    let v1_z = l(&(k1 + sz), sz)?;
    let uv2_z_q = l(&(&t + sz), &(k1 + sz))?;
    let uv1v2_z_q = l(&(&t + sz), sz)?;
    let v2_z = l(&(&k12 + sz), &(k1 + sz))?;
    Ok([
        m_q + dpc1 - u_z_q - v1_z,
        m_q + v2_y2 - uv2_z_q,
        m_q + v2_y2 + dpc1 - uv1v2_z_q,
        m + dpc1,
        m + v2_y2,
        m + dpc1 + v2_y2 - v2_z,
        m + v2_y2 + dpc1 - v1_z,
        m + v2_y2 + dpc1,
    ])
}

/// The eight constants of the general Gaussian inner bound for the split
/// (K0, K1, K2). `R12` evaluates the `R21` formulas on the channel with the
/// users exchanged and K1 ↔ K2, then relabels the rates back.
pub fn general_gauss_point(split: &CovSplit, ch: &GaussChannel, order: MartonOrder) -> Result<RegionPoint> {
    let ks = split.triple_k()?;
    split.check_cap(&ch.s)?;
    match order {
        MartonOrder::R21 => Ok(RegionPoint::from_rows(&GENERAL_GAUSS_ROWS, &general_r21_values(ks, ch)?)),
        MartonOrder::R12 => {
            let swapped = [ks[0].clone(), ks[2].clone(), ks[1].clone()];
            let values = general_r21_values(&swapped, &ch.swap_users())?;
            let rows: Vec<Vec<&'static str>> =
                GENERAL_GAUSS_ROWS.iter().map(|r| r.iter().map(|v| swap_rate_label(v)).collect()).collect();
            let rows: Vec<&[&'static str]> = rows.iter().map(|r| r.as_slice()).collect();
            Ok(RegionPoint::from_rows(&rows, &values))
        }
    }
}

/// The general Gaussian inner-bound polytope for one split and order.
pub fn eval_general_gauss(split: &CovSplit, ch: &GaussChannel, order: MartonOrder) -> Result<IneqSystem<f64>> {
    Ok(general_gauss_point(split, ch, order)?.system())
}

/// How the input cap varies across a covariance sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CapMode {
    /// The channel's own S.
    FixedS,
    /// Every S with tr(S) ≤ P. Each sample evaluates the channel's S
    /// rescaled to trace P and a random S of trace P, so the result
    /// always contains the fixed-S sweep of the rescaled cap.
    TraceP(f64),
}

/// Which Gaussian region a sweep traces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaussRegion {
    Inner,
    Outer,
    /// Both encoding orders of the general bound, whose union is hulled.
    General,
}

/// Configuration of a covariance sweep. Samples 0, 1, 2 are the corners
/// K = S/2, K = 0 and K = S (for splits: (S/2, S/2, 0), (S, 0, 0) and
/// (0, S/2, S/2)); later samples are S^{1/2} W S^{1/2} with W drawn from
/// per-index streams of `seed`, W = O diag(λ) Oᵀ, O Haar-orthogonal and λ
/// uniform on [0, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct GaussSweepConfig {
    pub budget: u64,
    pub seed: u64,
    pub mode: CapMode,
    pub region: GaussRegion,
}


fn random_orthogonal(rng: &mut SampleRng, d: usize) -> Mat {
    use rand::RngExt;
    let g = Mat::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    // Sign fix makes the draw Haar-distributed.
    let signs = DVector::from_fn(d, |i, _| if r[(i, i)] < 0.0 { -1.0 } else { 1.0 });
    q * Mat::from_diagonal(&signs)
}

fn random_contraction(rng: &mut SampleRng, d: usize) -> Mat {
    let o = random_orthogonal(rng, d);
    let lam = DVector::from_fn(d, |_, _| uniform(rng, 0.0, 1.0));
    &o * Mat::from_diagonal(&lam) * o.transpose()
}

fn congruence(root: &Mat, w: &Mat) -> Mat {
    crate::linalg::symmetrize(&(root * w * root))
}

/// The single covariance K of sample `index` under cap `s`.
pub fn sample_single_split(s: &Mat, seed: u64, index: u64) -> Result<CovSplit> {
    let k = match index {
        0 => s * 0.5,
        1 => Mat::zeros(s.nrows(), s.ncols()),
        2 => s.clone(),
        _ => congruence(&sqrt_psd(s), &random_contraction(&mut stream(seed, index), s.nrows())),
    };
    CovSplit::single(k)
}

/// The split (K0, K1, K2) of sample `index` under cap `s`.
pub fn sample_triple_split(s: &Mat, seed: u64, index: u64) -> Result<CovSplit> {
    let z = || Mat::zeros(s.nrows(), s.ncols());
    let h = s * 0.5;
    let [k0, k1, k2] = match index {
        0 => [h.clone(), h, z()],
        1 => [s.clone(), z(), z()],
        2 => [z(), h.clone(), h],
        _ => {
            let mut rng = stream(seed, index);
            let d = s.nrows();
            let ws = [0; 3].map(|_| random_contraction(&mut rng, d));
            let top = (&ws[0] + &ws[1] + &ws[2]).symmetric_eigenvalues().max().max(1e-300);
            let scale = uniform(&mut rng, 0.0, 1.0) / top;
            let root = sqrt_psd(s);
            ws.map(|w| congruence(&root, &(w * scale)))
        }
    };
    CovSplit::triple(k0, k1, k2)
}

/// A random cap of trace `p` for sample `index`: O diag(p·π) Oᵀ with π
/// uniform on the simplex.
pub fn sample_trace_cap(d: usize, p: f64, seed: u64, index: u64) -> Mat {
    let mut rng = stream(seed ^ 0x7EACE, index);
    let o = random_orthogonal(&mut rng, d);
    let pi = DVector::from_vec(random_pmf(&mut rng, d).into_iter().map(|v| v * p).collect());
    crate::linalg::symmetrize(&(&o * Mat::from_diagonal(&pi) * o.transpose()))
}

fn random_pd(rng: &mut SampleRng, d: usize, floor: f64) -> Mat {
    use rand::RngExt;
    let g = Mat::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    crate::linalg::symmetrize(&(&g * g.transpose() / d as f64 + Mat::identity(d, d) * floor))
}

/// A random degraded channel of dimension `d` from stream (seed, index):
/// S and Σ1 are Wishart-like plus a floor, and Σ2 − Σ1, ΣZ − Σ2 are random
/// PSD increments, so Σ1 ⪯ Σ2 ⪯ ΣZ holds exactly. Used by property suites
/// and demos.
pub fn sample_degraded_gauss_channel(d: usize, seed: u64, index: u64) -> Result<GaussChannel> {
    let mut rng = stream(seed ^ 0x6A055, index);
    let s = random_pd(&mut rng, d, 0.2) * 2.0;
    let s1 = random_pd(&mut rng, d, 0.1);
    let s2 = &s1 + random_pd(&mut rng, d, 0.0) * uniform(&mut rng, 0.0, 1.0);
    let sz = &s2 + random_pd(&mut rng, d, 0.0) * uniform(&mut rng, 0.0, 1.0);
    GaussChannel::new(s, s1, s2, sz)
}

fn sweep_sample(ch: &GaussChannel, cfg: &GaussSweepConfig, index: u64) -> Result<Vec<SweepSample>> {
    let mut out = Vec::new();
    let mut sample = |split: &CovSplit, ch: &GaussChannel, point: RegionPoint| -> Result<()> {
        let mut key = split.entries();
        key.extend(ch.s.iter().copied());
        let polytope = vertices(&point.system())?;
        out.push(SweepSample { index, hash: stable_hash(&key), point, polytope });
        Ok(())
    };
    let mut eval = |ch: &GaussChannel| -> Result<()> {
        match cfg.region {
            GaussRegion::General => {
                let split = sample_triple_split(&ch.s, cfg.seed, index)?;
                for order in [MartonOrder::R21, MartonOrder::R12] {
                    sample(&split, ch, general_gauss_point(&split, ch, order)?)?;
                }
                Ok(())
            }
            GaussRegion::Inner => {
                let split = sample_single_split(&ch.s, cfg.seed, index)?;
                sample(&split, ch, gauss_inner_point(&split, ch)?)
            }
            GaussRegion::Outer => {
                let split = sample_single_split(&ch.s, cfg.seed, index)?;
                sample(&split, ch, gauss_outer_point(&split, ch)?)
            }
        }
    };
    match cfg.mode {
        CapMode::FixedS => eval(ch)?,
        CapMode::TraceP(p) => {
            let tr = ch.s.trace();
            eval(&ch.with_cap(&ch.s * (p / tr))?)?;
            eval(&ch.with_cap(sample_trace_cap(ch.dim(), p, cfg.seed, index))?)?;
        }
    }
    Ok(out)
}

/// Seeded sweep over covariance splits (and caps, in trace mode). Samples
/// come from independent per-index streams and are evaluated in parallel;
/// the result is independent of scheduling and a larger budget extends the
/// sample sequence.
pub fn sweep_covariances(ch: &GaussChannel, cfg: &GaussSweepConfig) -> Result<SweepResult> {
    if cfg.budget == 0 {
        return Err(Error::BudgetZero);
    }
    if let CapMode::TraceP(p) = cfg.mode {
        if !(p > 0.0) {
            return Err(Error::Validation(format!("trace budget must be positive, got {p}")));
        }
    }
    let per_index = (0..cfg.budget).into_par_iter().map(|i| sweep_sample(ch, cfg, i)).collect::<Result<Vec<_>>>()?;
    Ok(SweepResult::from_samples(per_index.into_iter().flatten().collect()))
}

/// Degraded inner regions of a scalar channel on the uniform grid
/// K = S·i/(points−1), i = 0..points: a deterministic envelope for scalar
/// comparisons.
pub fn sweep_scalar_grid(ch: &GaussChannel, points: usize) -> Result<SweepResult> {
    if ch.dim() != 1 {
        return Err(Error::DimensionMismatch("grid sweep needs a scalar channel".into()));
    }
    if points < 2 {
        return Err(Error::BudgetZero);
    }
    let s = ch.s[(0, 0)];
    let samples = (0..points)
        .into_par_iter()
        .map(|i| {
            let split = CovSplit::single(Mat::from_element(1, 1, s * i as f64 / (points - 1) as f64))?;
            let point = gauss_inner_point(&split, ch)?;
            let polytope = vertices(&point.system())?;
            Ok(SweepSample { index: i as u64, hash: stable_hash(&split.entries()), point, polytope })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult::from_samples(samples))
}

/// Resolution of the lattice discretization of a scalar Gaussian channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarGrid {
    /// Lattice step of U and X.
    pub step: f64,
    /// Half-width of every grid in standard deviations.
    pub span: f64,
    /// Number of output quantization bins.
    pub bins: usize,
}

impl Default for ScalarGrid {
    fn default() -> Self {
        ScalarGrid { step: 0.05, span: 7.0, bins: 800 }
    }
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Lattice Gaussian weights on the points i·step, |i·step| ≤ span·sd;
/// returns (offsets in steps, normalized weights). Zero variance gives the
/// point mass at 0.
fn lattice_gaussian(var: f64, step: f64, span: f64) -> (Vec<i64>, Vec<f64>) {
    if var <= 0.0 {
        return (vec![0], vec![1.0]);
    }
    let m = (span * var.sqrt() / step).floor() as i64;
    let idx: Vec<i64> = (-m..=m).collect();
    let w: Vec<f64> = idx.iter().map(|&i| (-(i as f64 * step).powi(2) / (2.0 * var)).exp()).collect();
    let total: f64 = w.iter().sum();
    (idx, w.into_iter().map(|v| v / total).collect())
}

/// Row-stochastic kernel from points `centers` to the bins of `edges`,
/// adding N(0, var) noise; the outer bins absorb the tails.
fn quantized_gaussian_kernel(centers: &[f64], edges: &[f64], var: f64) -> Vec<Vec<f64>> {
    let nb = edges.len() - 1;
    centers
        .iter()
        .map(|&c| {
            if var <= 0.0 {
                let b = edges.partition_point(|&e| e <= c).clamp(1, nb) - 1;
                return (0..nb).map(|i| if i == b { 1.0 } else { 0.0 }).collect();
            }
            let sd = var.sqrt();
            let cdf = |i: usize| match i {
                0 => 0.0,
                i if i == nb => 1.0,
                i => normal_cdf((edges[i] - c) / sd),
            };
            let mut row: Vec<f64> = (0..nb).map(|i| (cdf(i + 1) - cdf(i)).max(0.0)).collect();
            let total: f64 = row.iter().sum();
            row.iter_mut().for_each(|v| *v /= total);
            row
        })
        .collect()
}

/// A discrete surrogate of a scalar degraded Gaussian channel and of the
/// Gaussian auxiliary with Cov(X|U) = K: U and X live on a lattice of step
/// `grid.step` with lattice-Gaussian weights (variance S − K for U, K for
/// X − U), and the outputs are quantized into `grid.bins` equal bins.
/// The cascade adds the noise increments Σ1, Σ2 − Σ1, ΣZ − Σ2 stage by
/// stage, so the surrogate channel is degraded by construction.
pub fn discretize_scalar(ch: &GaussChannel, k: f64, grid: &ScalarGrid) -> Result<(AuxJoint, ChannelSpec)> {
    if ch.dim() != 1 {
        return Err(Error::DimensionMismatch("discretization is defined for 1x1 channels".into()));
    }
    if !check_degraded_order(ch) {
        return Err(Error::NotDegraded);
    }
    let (s, s1, s2, sz) = (ch.s[(0, 0)], ch.sigma1[(0, 0)], ch.sigma2[(0, 0)], ch.sigma_z[(0, 0)]);
    CovSplit::single(Mat::from_element(1, 1, k))?.check_cap(&ch.s)?;
    let (ui, uw) = lattice_gaussian(s - k, grid.step, grid.span);
    let (vi, vw) = lattice_gaussian(k, grid.step, grid.span);
    let xmin = ui[0] + vi[0];
    let nx = (ui[ui.len() - 1] + vi[vi.len() - 1] - xmin + 1) as usize;
    let rows: Vec<Vec<f64>> = ui
        .iter()
        .map(|&u| {
            let mut row = vec![0.0; nx];
            for (&v, &w) in vi.iter().zip(&vw) {
                row[(u + v - xmin) as usize] += w;
            }
            row
        })
        .collect();
    let aux = AuxJoint::from_layers(&uw, rows)?;
    let xs: Vec<f64> = (0..nx).map(|i| (xmin + i as i64) as f64 * grid.step).collect();
    let half = grid.span * (s + sz).sqrt();
    let nb = grid.bins.max(2);
    let edges: Vec<f64> = (0..=nb).map(|i| -half + 2.0 * half * i as f64 / nb as f64).collect();
    let centers: Vec<f64> = edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let k1 = Kernel::matrix(VarId::new("X", nx), VarId::new("Y1", nb), quantized_gaussian_kernel(&xs, &edges, s1))?;
    let k2 = Kernel::matrix(VarId::new("Y1", nb), VarId::new("Y2", nb), quantized_gaussian_kernel(&centers, &edges, s2 - s1))?;
    let k3 = Kernel::matrix(VarId::new("Y2", nb), VarId::new("Z", nb), quantized_gaussian_kernel(&centers, &edges, sz - s2))?;
    Ok((aux, build_degraded_joint(&k1, &k2, &k3)?))
}

//! Numerical checks of the Fisher-information toolbox behind Gaussian
//! optimality: conditional Fisher information of Gaussian pairs, the
//! conditional de Bruijn identity, the Cramér–Rao, noise-shift,
//! conditioning, line-integral, entropy-lower-bound and inverse-order
//! inequalities, the interpolation point used to build the Gaussian
//! competitor, and an evidence harness comparing scalar non-Gaussian
//! auxiliaries with the Gaussian region.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fm::lp::hull_shortfall;
use crate::fm::vertices;
use crate::linalg::{check_pd, conditional_covariance, log_det, min_eigenvalue, psd_scale, spd_inverse, symmetrize, LinearGaussModel, Mat};
use crate::regions::gaussian::GaussChannel;
use crate::regions::discrete::{inner_system_from, DegradedTerms, INNER_ROWS};
use crate::regions::{in_rate_order, SweepResult, RATES};
use crate::rng::{random_pmf, stream, uniform, SampleRng};

const TWO_PI_E: f64 = 2.0 * std::f64::consts::PI * std::f64::consts::E;

/// Jointly Gaussian (U, X): joint covariance with U in the first `du`
/// coordinates and X in the last `dx`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussPair {
    pub cov: Mat,
    pub du: usize,
    pub dx: usize,
}

impl GaussPair {
    pub fn new(cov: Mat, du: usize, dx: usize) -> Result<Self> {
        if cov.nrows() != du + dx || !cov.is_square() {
            return Err(Error::DimensionMismatch(format!("joint covariance must be {0}x{0}", du + dx)));
        }
        crate::linalg::psd_clip(&cov, "joint covariance")?;
        Ok(GaussPair { cov, du, dx })
    }

    /// X independent of U with covariance `k` (U one-dimensional, unit variance).
    pub fn independent(k: &Mat) -> Result<Self> {
        let dx = k.nrows();
        let mut cov = Mat::zeros(1 + dx, 1 + dx);
        cov[(0, 0)] = 1.0;
        cov.view_mut((1, 1), (dx, dx)).copy_from(k);
        Self::new(cov, 1, dx)
    }

    /// Cov(X | U).
    pub fn cond_cov_x(&self) -> Result<Mat> {
        // Reorder to (X, U) so the conditioned block comes first.
        let n = self.du + self.dx;
        let perm: Vec<usize> = (self.du..n).chain(0..self.du).collect();
        let reordered = Mat::from_fn(n, n, |i, j| self.cov[(perm[i], perm[j])]);
        conditional_covariance(&reordered, self.dx)
    }

    /// Cov(X).
    pub fn cov_x(&self) -> Mat {
        self.cov.view((self.du, self.du), (self.dx, self.dx)).into_owned()
    }
}

/// J(X + N | U) = (Cov(X|U) + Σ_N)⁻¹ for jointly Gaussian (U, X) and
/// independent N ~ N(0, Σ_N).
pub fn gaussian_fisher(pair: &GaussPair, sigma_n: &Mat) -> Result<Mat> {
    check_pd(sigma_n, "noise covariance").map_err(|_| Error::SingularConditionalCovariance)?;
    let c = pair.cond_cov_x()?;
    spd_inverse(&(c + sigma_n), "Cov(X|U) + noise").map_err(|_| Error::SingularConditionalCovariance)
}

/// h(X + N | U) = ½ ln |2πe (Cov(X|U) + Σ_N)| for a Gaussian pair.
pub fn gaussian_cond_entropy(pair: &GaussPair, sigma_n: &Mat) -> Result<f64> {
    let c = pair.cond_cov_x()? + sigma_n;
    Ok(0.5 * (c.nrows() as f64 * TWO_PI_E.ln() + log_det(&c, "Cov(X|U) + noise")?))
}

/// A scalar (U, X) with finite support, observed through Gaussian noises
/// of variances σ1² ≤ σ2² ≤ σZ².
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarMixture {
    /// (u label, x, probability) triples.
    pub support: Vec<(usize, f64, f64)>,
    /// Noise variances of Y1, Y2, Z.
    pub noise: [f64; 3],
}

/// Probability of one value of U and the conditional law of X given it.
#[derive(Clone, Debug, PartialEq)]
pub struct MixGroup {
    pub weight: f64,
    /// (x, p(x|u)) pairs.
    pub atoms: Vec<(f64, f64)>,
}

impl ScalarMixture {
    /// Validates nonnegative, normalized weights and positive, ordered noise
    /// variances.
    pub fn new(support: Vec<(usize, f64, f64)>, noise: [f64; 3]) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::EmptyArgument("mixture support"));
        }
        if let Some((i, &(_, _, w))) = support.iter().enumerate().find(|(_, s)| !(s.2 >= 0.0)) {
            return Err(Error::NegativeMass { index: i, value: w });
        }
        let total: f64 = support.iter().map(|s| s.2).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { sum: total });
        }
        if !(noise[0] > 0.0 && noise[0] <= noise[1] && noise[1] <= noise[2]) {
            return Err(Error::NotDegraded);
        }
        Ok(ScalarMixture { support, noise })
    }

    /// Groups the support by U.
    pub fn groups(&self) -> Vec<MixGroup> {
        let mut labels: Vec<usize> = self.support.iter().map(|s| s.0).collect();
        labels.sort_unstable();
        labels.dedup();
        labels
            .into_iter()
            .filter_map(|u| {
                let atoms: Vec<(f64, f64)> = self.support.iter().filter(|s| s.0 == u).map(|s| (s.1, s.2)).collect();
                let weight: f64 = atoms.iter().map(|a| a.1).sum();
                (weight > 0.0).then(|| MixGroup { weight, atoms: atoms.into_iter().map(|(x, p)| (x, p / weight)).collect() })
            })
            .collect()
    }

    /// E[X²], the smallest admissible input cap.
    pub fn second_moment(&self) -> f64 {
        self.support.iter().map(|s| s.2 * s.1 * s.1).sum()
    }

    /// Var(X).
    pub fn variance(&self) -> f64 {
        let mean: f64 = self.support.iter().map(|s| s.2 * s.1).sum();
        self.second_moment() - mean * mean
    }

    /// E[Var(X|U)].
    pub fn cond_variance(&self) -> f64 {
        self.groups()
            .iter()
            .map(|g| {
                let m: f64 = g.atoms.iter().map(|a| a.1 * a.0).sum();
                g.weight * g.atoms.iter().map(|a| a.1 * (a.0 - m).powi(2)).sum::<f64>()
            })
            .sum()
    }

    /// The scalar Gaussian channel with the mixture's noises and cap
    /// S = E[X²].
    pub fn channel(&self) -> Result<GaussChannel> {
        let [s1, s2, sz] = self.noise;
        GaussChannel::scalar(self.second_moment(), s1, s2, sz)
    }

    /// A lattice discretization of jointly Gaussian (U, X) with Var(X) = s
    /// and Var(X|U) = k: U and X − U are lattice Gaussians of step `step`
    /// truncated at `span` standard deviations.
    pub fn lattice_gaussian(s: f64, k: f64, step: f64, span: f64, noise: [f64; 3]) -> Result<Self> {
        let lattice = |var: f64| -> Vec<(f64, f64)> {
            if var <= 0.0 {
                return vec![(0.0, 1.0)];
            }
            let m = (span * var.sqrt() / step).floor() as i64;
            let w: Vec<(f64, f64)> = (-m..=m).map(|i| (i as f64 * step, (-(i as f64 * step).powi(2) / (2.0 * var)).exp())).collect();
            let total: f64 = w.iter().map(|p| p.1).sum();
            w.into_iter().map(|(x, p)| (x, p / total)).collect()
        };
        let mut support = Vec::new();
        for (iu, (u, pu)) in lattice(s - k).into_iter().enumerate() {
            for (v, pv) in lattice(k) {
                support.push((iu, u + v, pu * pv));
            }
        }
        let total: f64 = support.iter().map(|s| s.2).sum();
        support.iter_mut().for_each(|s| s.2 /= total);
        Self::new(support, noise)
    }
}

/// Half-width, in noise standard deviations, of the quadrature window
/// around the outermost atoms.
pub const QUAD_SPAN: f64 = 8.0;
/// Convergence target of successive quadrature refinements.
pub const QUAD_TOL: f64 = 1e-12;
const QUAD_MAX_DOUBLINGS: usize = 8;

/// Differential entropy and Fisher information of the density of A + N,
/// A discrete with `atoms` (x, p), N ~ N(0, var): composite trapezoid rule
/// over [min x − 8σ, max x + 8σ] (spectrally accurate for these smooth,
/// rapidly decaying integrands), doubling the node count until two
/// successive results agree to [`QUAD_TOL`].
pub fn mixture_entropy_fisher(atoms: &[(f64, f64)], var: f64) -> Result<(f64, f64)> {
    if !(var > 0.0) {
        return Err(Error::Validation(format!("noise variance must be positive, got {var}")));
    }
    let sd = var.sqrt();
    let lo = atoms.iter().map(|a| a.0).fold(f64::INFINITY, f64::min) - QUAD_SPAN * sd;
    let hi = atoms.iter().map(|a| a.0).fold(f64::NEG_INFINITY, f64::max) + QUAD_SPAN * sd;
    let norm = 1.0 / (2.0 * std::f64::consts::PI * var).sqrt();
    let eval = |n: usize| -> (f64, f64) {
        let h = (hi - lo) / n as f64;
        let (mut ent, mut fis) = (0.0, 0.0);
        for i in 0..=n {
            let y = lo + h * i as f64;
            let (mut f, mut df) = (0.0, 0.0);
            for &(x, p) in atoms {
                let g = p * norm * (-(y - x) * (y - x) / (2.0 * var)).exp();
                f += g;
                df += g * (x - y) / var;
            }
            if f > 0.0 {
                let wt = if i == 0 || i == n { 0.5 } else { 1.0 };
                ent -= wt * f * f.ln();
                fis += wt * df * df / f;
            }
        }
        (ent * h, fis * h)
    };
    let mut n = (((hi - lo) / (sd / 4.0)).ceil() as usize).max(16);
    let mut prev = eval(n);
    let mut gap = f64::INFINITY;
    for _ in 0..QUAD_MAX_DOUBLINGS {
        n *= 2;
        let next = eval(n);
        gap = (next.0 - prev.0).abs().max((next.1 - prev.1).abs() * var);
        if gap <= QUAD_TOL * (1.0 + next.0.abs()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNonConvergent { gap })
}

/// h(X + N | U) and J(X + N | U) of a scalar mixture with noise variance `var`.
pub fn mixture_cond_entropy_fisher(mix: &ScalarMixture, var: f64) -> Result<(f64, f64)> {
    mix.groups().iter().try_fold((0.0, 0.0), |(h, j), g| {
        let (hg, jg) = mixture_entropy_fisher(&g.atoms, var)?;
        Ok((h + g.weight * hg, j + g.weight * jg))
    })
}

/// h(X + N) of a scalar mixture.
pub fn mixture_entropy(mix: &ScalarMixture, var: f64) -> Result<f64> {
    let atoms: Vec<(f64, f64)> = mix.support.iter().map(|s| (s.1, s.2)).collect();
    Ok(mixture_entropy_fisher(&atoms, var)?.0)
}

/// An input whose conditional entropy and Fisher information can be
/// evaluated as functions of the noise covariance.
#[derive(Clone, Debug, PartialEq)]
pub enum FisherSource {
    Gaussian(GaussPair),
    /// Scalar only; the mixture's own noise variances are ignored.
    Mixture(ScalarMixture),
}

impl FisherSource {
    pub fn dim(&self) -> usize {
        match self {
            FisherSource::Gaussian(p) => p.dx,
            FisherSource::Mixture(_) => 1,
        }
    }

    /// h(X + N | U) and J(X + N | U) for N ~ N(0, Σ_N).
    pub fn entropy_fisher(&self, sigma_n: &Mat) -> Result<(f64, Mat)> {
        if sigma_n.nrows() != self.dim() || !sigma_n.is_square() {
            return Err(Error::DimensionMismatch(format!("noise covariance must be {0}x{0}", self.dim())));
        }
        match self {
            FisherSource::Gaussian(p) => Ok((gaussian_cond_entropy(p, sigma_n)?, gaussian_fisher(p, sigma_n)?)),
            FisherSource::Mixture(m) => {
                let (h, j) = mixture_cond_entropy_fisher(m, sigma_n[(0, 0)])?;
                Ok((h, Mat::from_element(1, 1, j)))
            }
        }
    }

    /// Cov(X).
    pub fn cov_x(&self) -> Mat {
        match self {
            FisherSource::Gaussian(p) => p.cov_x(),
            FisherSource::Mixture(m) => Mat::from_element(1, 1, m.variance()),
        }
    }
}

/// Outcome of a de Bruijn check.
#[derive(Clone, Debug, PartialEq)]
pub struct DebruijnReport {
    /// Central-difference gradient of h(X + N | U) in Σ_N.
    pub gradient: Mat,
    /// ½ J(X + N | U).
    pub half_fisher: Mat,
    /// max |gradient − ½ J| at the accepted step.
    pub residual: f64,
    /// Residual at the accepted step over the residual at half of it.
    pub ratio: f64,
    /// Accepted absolute step.
    pub step: f64,
}

/// Halvings attempted before giving up on second-order convergence.
pub const DEBRUIJN_MAX_HALVINGS: usize = 8;
/// Accepted band of the step-halving ratio of a second-order difference.
pub const DEBRUIJN_RATIO_BAND: (f64, f64) = (3.2, 4.8);
/// Residuals below this are round-off dominated and accepted as converged.
pub const DEBRUIJN_FLOOR: f64 = 1e-10;

fn fd_gradient(source: &FisherSource, sigma_n: &Mat, s: f64) -> Result<Mat> {
    let d = sigma_n.nrows();
    let mut g = Mat::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            // Symmetric direction (e_i e_jᵀ + e_j e_iᵀ)/2, so the
            // directional derivative is the (i, j) gradient entry.
            let mut e = Mat::zeros(d, d);
            e[(i, j)] += 0.5;
            e[(j, i)] += 0.5;
            let plus = source.entropy_fisher(&(sigma_n + &e * s))?.0;
            let minus = source.entropy_fisher(&(sigma_n - &e * s))?.0;
            g[(i, j)] = (plus - minus) / (2.0 * s);
            g[(j, i)] = g[(i, j)];
        }
    }
    Ok(g)
}

/// Compares the central-difference gradient of h(X + N | U) in Σ_N with
/// ½ J(X + N | U). `step` is relative to the scale of Σ_N; the step is
/// halved until the residual shows second-order convergence (halving
/// ratio within [`DEBRUIJN_RATIO_BAND`]) or falls below the round-off
/// floor.
pub fn debruijn_check(source: &FisherSource, sigma_n: &Mat, step: f64) -> Result<DebruijnReport> {
    check_pd(sigma_n, "noise covariance")?;
    let (_, j) = source.entropy_fisher(sigma_n)?;
    let half = &j * 0.5;
    let mut s = step * psd_scale(sigma_n);
    let mut ratio = f64::NAN;
    let residual = |g: &Mat| (g - &half).amax();
    for _ in 0..DEBRUIJN_MAX_HALVINGS {
        let (g1, g2) = match (fd_gradient(source, sigma_n, s), fd_gradient(source, sigma_n, s / 2.0)) {
            (Ok(a), Ok(b)) => (a, b),
            // The perturbed covariance left the PD cone: the step is too large.
            _ => {
                s /= 2.0;
                continue;
            }
        };
        let (r1, r2) = (residual(&g1), residual(&g2));
        ratio = r1 / r2;
        if r1 <= DEBRUIJN_FLOOR || (DEBRUIJN_RATIO_BAND.0..=DEBRUIJN_RATIO_BAND.1).contains(&ratio) {
            return Ok(DebruijnReport { gradient: g1, half_fisher: half, residual: r1, ratio, step: s });
        }
        s /= 2.0;
    }
    Err(Error::StepTooLarge { ratio })
}

/// One de Bruijn check of a seeded suite.
#[derive(Clone, Debug, PartialEq)]
pub struct DebruijnRow {
    /// "gaussian" or "mixture".
    pub family: &'static str,
    pub instance: u64,
    pub dim: usize,
    pub residual: f64,
    pub ratio: f64,
    pub step: f64,
}

/// Residual tolerance of the de Bruijn check on Gaussian inputs.
pub const DEBRUIJN_GAUSS_TOL: f64 = 1e-5;
/// Residual tolerance of the de Bruijn check on scalar mixtures.
pub const DEBRUIJN_MIXTURE_TOL: f64 = 1e-4;

/// De Bruijn checks on `count` seeded Gaussian instances (X independent of
/// U with random covariance, dimension 1–3 cycling, random noise
/// covariance) and `count` seeded scalar mixtures at their Y2 noise.
pub fn debruijn_suite(seed: u64, count: u64, step: f64) -> Result<Vec<DebruijnRow>> {
    let per: Vec<[DebruijnRow; 2]> = (0..count)
        .into_par_iter()
        .map(|i| {
            let d = 1 + (i % 3) as usize;
            let mut rng = stream(seed ^ 0xDEB2, i);
            let pair = GaussPair::new(random_pd(&mut rng, 2 * d, 0.1), d, d)?;
            let sigma = random_pd(&mut rng, d, 0.1);
            let g = debruijn_check(&FisherSource::Gaussian(pair), &sigma, step)?;
            let mix = random_mixture(seed, i)?;
            let var = Mat::from_element(1, 1, mix.noise[1]);
            let m = debruijn_check(&FisherSource::Mixture(mix), &var, step)?;
            let row = |family, dim, r: DebruijnReport| DebruijnRow { family, instance: i, dim, residual: r.residual, ratio: r.ratio, step: r.step };
            Ok([row("gaussian", d, g), row("mixture", 1, m)])
        })
        .collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

/// The inequalities checked by the lemma suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lemma {
    /// J(X|U) ⪰ Cov(X|U)⁻¹.
    CramerRao,
    /// J⁻¹(U+V2|T) − Σ2 ⪰ J⁻¹(U+V1|T) − Σ1 for Gaussian V1, V2 with Σ1 ⪯ Σ2.
    NoiseShift,
    /// J(X|V) ⪰ J(X|U) when U → V → X.
    Conditioning,
    /// ∫ tr(f(K) dK) ≥ 0 along a segment K1 → K2 ⪰ K1 for f ⪰ 0 a gradient.
    LineIntegral,
    /// h(X|U) ≥ ½ ln |2πe J⁻¹(X|U)|.
    EntropyBound,
    /// A ⪯ B ⇒ A⁻¹ ⪰ B⁻¹.
    InverseOrder,
    /// J⁻¹(X+N2|U) − Σ2 ⪯ K1(t*) ⪯ Cov(X) at the interpolation point.
    InterpolationOrder,
}

impl Lemma {
    pub const ALL: [Lemma; 7] = [
        Lemma::CramerRao,
        Lemma::NoiseShift,
        Lemma::Conditioning,
        Lemma::LineIntegral,
        Lemma::EntropyBound,
        Lemma::InverseOrder,
        Lemma::InterpolationOrder,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Lemma::CramerRao => "cramer_rao",
            Lemma::NoiseShift => "noise_shift",
            Lemma::Conditioning => "conditioning",
            Lemma::LineIntegral => "line_integral",
            Lemma::EntropyBound => "entropy_bound",
            Lemma::InverseOrder => "inverse_order",
            Lemma::InterpolationOrder => "interpolation_order",
        }
    }
}

/// One evaluated inequality: the smallest eigenvalue (or the scalar) of
/// its slack, which is ≥ 0 when the inequality holds.
#[derive(Clone, Debug, PartialEq)]
pub struct LemmaEntry {
    pub lemma: Lemma,
    pub instance: u64,
    pub dim: usize,
    /// "gaussian" or "mixture".
    pub family: &'static str,
    pub min_slack: f64,
}

/// All entries of a suite run, in (instance, lemma) order.
#[derive(Clone, Debug, PartialEq)]
pub struct LemmaReport {
    pub entries: Vec<LemmaEntry>,
}

impl LemmaReport {
    /// Smallest slack per lemma.
    pub fn min_by_lemma(&self) -> Vec<(Lemma, f64)> {
        Lemma::ALL
            .iter()
            .map(|&l| (l, self.entries.iter().filter(|e| e.lemma == l).map(|e| e.min_slack).fold(f64::INFINITY, f64::min)))
            .collect()
    }

    /// Whether every slack is at least `-tol`.
    pub fn all_hold(&self, tol: f64) -> bool {
        self.entries.iter().all(|e| e.min_slack >= -tol)
    }
}

/// Slack tolerance of the lemma suite.
pub const LEMMA_TOL: f64 = 1e-8;

fn random_pd(rng: &mut SampleRng, d: usize, floor: f64) -> Mat {
    let g = Mat::from_fn(d, d, |_, _| uniform(rng, -1.0, 1.0));
    symmetrize(&(&g * g.transpose() + Mat::identity(d, d) * floor))
}

/// Gauss–Legendre nodes and weights on [0, 1] (8 points, exact for
/// polynomials of degree 15), applied on `pieces` equal sub-intervals.
fn gauss_legendre(pieces: usize) -> Vec<(f64, f64)> {
    const X: [f64; 4] = [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
    const W: [f64; 4] = [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];
    let mut out = Vec::with_capacity(8 * pieces);
    let h = 1.0 / pieces as f64;
    for p in 0..pieces {
        let mid = (p as f64 + 0.5) * h;
        for (x, w) in X.iter().zip(W) {
            out.push((mid - 0.5 * h * x, 0.5 * h * w));
            out.push((mid + 0.5 * h * x, 0.5 * h * w));
        }
    }
    out
}

/// ∫₀¹ tr(f(K(t)) (K2 − K1)) dt along K(t) = K1 + t (K2 − K1) for
/// f(K) = (K + Σ)⁻¹, the gradient of ln |K + Σ|.
pub fn line_integral(k1: &Mat, k2: &Mat, sigma: &Mat) -> Result<f64> {
    let dk = k2 - k1;
    gauss_legendre(16).into_iter().try_fold(0.0, |acc, (t, w)| {
        let f = spd_inverse(&(k1 + &dk * t + sigma), "K(t) + Sigma")?;
        Ok(acc + w * (f * &dk).trace())
    })
}

/// A random scalar mixture from stream (seed, index): 1–3 values of U,
/// 1–3 atoms each in [−2, 2], Dirichlet weights, and ordered noise
/// variances in [0.2, 3].
pub fn random_mixture(seed: u64, index: u64) -> Result<ScalarMixture> {
    use rand::RngExt;
    let mut rng = stream(seed ^ 0x4D1C, index);
    let nu = rng.random_range(1..=3usize);
    let pu = random_pmf(&mut rng, nu);
    let mut support = Vec::new();
    for (u, &w) in pu.iter().enumerate() {
        let nx = rng.random_range(1..=3usize);
        let px = random_pmf(&mut rng, nx);
        for p in px {
            support.push((u, uniform(&mut rng, -2.0, 2.0), w * p));
        }
    }
    let total: f64 = support.iter().map(|s| s.2).sum();
    support.iter_mut().for_each(|s| s.2 /= total);
    let mut noise = [0; 3].map(|_| uniform(&mut rng, 0.2, 3.0));
    noise.sort_by(|a, b| a.total_cmp(b));
    ScalarMixture::new(support, noise)
}

fn gaussian_instance(seed: u64, index: u64) -> Result<Vec<LemmaEntry>> {
    let mut rng = stream(seed, index);
    let d = 1 + (index % 3) as usize;
    let entry = |lemma, min_slack| LemmaEntry { lemma, instance: index, dim: d, family: "gaussian", min_slack };
    let pair = GaussPair::new(random_pd(&mut rng, 2 * d, 0.1), d, d)?;
    let s1 = random_pd(&mut rng, d, 0.1);
    let s2 = &s1 + random_pd(&mut rng, d, 0.0);
    let mut out = Vec::new();

    // Cramér–Rao at equality: the Fisher information of X + N given U
    // against the inverse conditional covariance.
    let j = gaussian_fisher(&pair, &s1)?;
    let crb = spd_inverse(&(pair.cond_cov_x()? + &s1), "Cov")?;
    out.push(entry(Lemma::CramerRao, min_eigenvalue(&(&j - crb))));

    // Noise shift: J⁻¹(X+N2|U) − Σ2 ⪰ J⁻¹(X+N1|U) − Σ1.
    let j2_inv = spd_inverse(&gaussian_fisher(&pair, &s2)?, "J")?;
    let j1_inv = spd_inverse(&j, "J")?;
    out.push(entry(Lemma::NoiseShift, min_eigenvalue(&((j2_inv - &s2) - (j1_inv - &s1)))));

    // Conditioning: U → V → X with V = A U + W1, X = B V + W2.
    let mut g = LinearGaussModel::default();
    let u = g.source(random_pd(&mut rng, d, 0.1));
    let w1 = g.source(random_pd(&mut rng, d, 0.1));
    let w2 = g.source(random_pd(&mut rng, d, 0.1));
    let a = Mat::from_fn(d, d, |_, _| uniform(&mut rng, -1.0, 1.0));
    let b = Mat::from_fn(d, d, |_, _| uniform(&mut rng, -1.0, 1.0));
    let id = Mat::identity(d, d);
    g.block("U", d, vec![(u, id.clone())])?;
    g.block("V", d, vec![(u, a.clone()), (w1, id.clone())])?;
    g.block("X", d, vec![(u, &b * &a), (w1, b.clone()), (w2, id.clone())])?;
    let j_given = |cond: &str| -> Result<Mat> {
        let joint = g.covariance(&["X", cond])?;
        spd_inverse(&conditional_covariance(&joint, d)?, "Cov(X|.)")
    };
    out.push(entry(Lemma::Conditioning, min_eigenvalue(&(j_given("V")? - j_given("U")?))));

    // Line integral of the PSD gradient field (K + Σ)⁻¹ from K1 to K2 ⪰ K1.
    let k1 = random_pd(&mut rng, d, 0.0);
    let k2 = &k1 + random_pd(&mut rng, d, 0.0);
    out.push(entry(Lemma::LineIntegral, line_integral(&k1, &k2, &s1)?));

    // Entropy lower bound at equality.
    let h = gaussian_cond_entropy(&pair, &s1)?;
    let bound = 0.5 * (d as f64 * TWO_PI_E.ln() - log_det(&j, "J")?);
    out.push(entry(Lemma::EntropyBound, h - bound));

    // Inverse order.
    let am = random_pd(&mut rng, d, 0.05);
    let bm = &am + random_pd(&mut rng, d, 0.0);
    let inv_gap = spd_inverse(&am, "A")? - spd_inverse(&bm, "B")?;
    out.push(entry(Lemma::InverseOrder, min_eigenvalue(&inv_gap)));

    let t = interpolation_t_star(&FisherSource::Gaussian(pair), &s1, &s2)?;
    out.push(entry(Lemma::InterpolationOrder, t.sandwich_slack));
    Ok(out)
}

fn mixture_instance(seed: u64, index: u64) -> Result<Vec<LemmaEntry>> {
    let mix = random_mixture(seed, index)?;
    let entry = |lemma, min_slack| LemmaEntry { lemma, instance: index, dim: 1, family: "mixture", min_slack };
    let [s1, s2, _] = mix.noise;
    let (h1, j1) = mixture_cond_entropy_fisher(&mix, s1)?;
    let (_, j2) = mixture_cond_entropy_fisher(&mix, s2)?;
    let m1 = |v: f64| Mat::from_element(1, 1, v);
    let t = interpolation_t_star(&FisherSource::Mixture(mix.clone()), &m1(s2), &m1(mix.noise[2]))?;
    Ok(vec![
        entry(Lemma::CramerRao, j1 - 1.0 / (mix.cond_variance() + s1)),
        entry(Lemma::NoiseShift, (1.0 / j2 - s2) - (1.0 / j1 - s1)),
        entry(Lemma::EntropyBound, h1 - 0.5 * (TWO_PI_E / j1).ln()),
        entry(Lemma::InterpolationOrder, t.sandwich_slack),
    ])
}

/// Runs every inequality on `count` seeded Gaussian instances (dimension
/// 1–3, cycling) and on `count` seeded scalar mixtures (for the
/// Cramér–Rao, noise-shift and entropy-bound inequalities, whose
/// non-Gaussian forms are quadrature-computable, and the interpolation
/// order). A missing interpolation bracket fails the run with `NoRoot`. Instances run in
/// parallel; the report is in instance order.
pub fn lemma_suite_check(seed: u64, count: u64) -> Result<LemmaReport> {
    let per: Vec<Vec<LemmaEntry>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut v = gaussian_instance(seed, i)?;
            v.extend(mixture_instance(seed, i)?);
            Ok(v)
        })
        .collect::<Result<_>>()?;
    Ok(LemmaReport { entries: per.into_iter().flatten().collect() })
}

/// The interpolation point between the two Fisher-information endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct TStar {
    pub t: f64,
    /// K1(t*).
    pub k1: Mat,
    /// h(X+N_Z|U) − h(X+N_2|U), the value f(t*) must hit.
    pub target: f64,
    pub f0: f64,
    pub f1: f64,
    /// J⁻¹(X+N_2|U) − Σ2, the lower end of the sandwich.
    pub lower: Mat,
    /// Cov(X), the upper end of the sandwich (below any admissible cap S).
    pub upper: Mat,
    /// min(λmin(K1 − lower), λmin(upper − K1)).
    pub sandwich_slack: f64,
}

/// Bisection tolerance on t.
pub const TSTAR_TOL: f64 = 1e-10;
/// Tolerance on the bracket f(0) ≤ target ≤ f(1).
pub const BRACKET_TOL: f64 = 1e-10;

/// Finds t* ∈ [0, 1] with f(t*) = h(X+N_Z|U) − h(X+N_2|U), where
/// f(t) = ½ ln |K1(t)+ΣZ| / |K1(t)+Σ2| and
/// K1(t) = (1−t)[J⁻¹(X+N_Z|U) − ΣZ] + t[J⁻¹(X+N_2|U) − Σ2].
/// Returns t* = 0 when f(0) already hits the target within the bracket
/// tolerance.
pub fn interpolation_t_star(source: &FisherSource, sigma2: &Mat, sigma_z: &Mat) -> Result<TStar> {
    if !crate::linalg::is_psd(&(sigma_z - sigma2), 1e-10) {
        return Err(Error::NotDegraded);
    }
    let (h2, j2) = source.entropy_fisher(sigma2)?;
    let (hz, jz) = source.entropy_fisher(sigma_z)?;
    let target = hz - h2;
    let end_z = spd_inverse(&jz, "J")? - sigma_z;
    let end_2 = spd_inverse(&j2, "J")? - sigma2;
    let k1 = |t: f64| &end_z * (1.0 - t) + &end_2 * t;
    let f = |t: f64| -> Result<f64> {
        let k = k1(t);
        Ok(0.5 * (log_det(&(&k + sigma_z), "K1+SigmaZ")? - log_det(&(&k + sigma2), "K1+Sigma2")?))
    };
    let (f0, f1) = (f(0.0)?, f(1.0)?);
    let t = if (f0 - target).abs() <= BRACKET_TOL {
        0.0
    } else if (f1 - target).abs() <= BRACKET_TOL {
        1.0
    } else if (f0 - target) * (f1 - target) > 0.0 {
        return Err(Error::NoRoot { f0: f0 - target, f1: f1 - target });
    } else {
        let (mut lo, mut hi) = (0.0, 1.0);
        let rising = f1 > f0;
        while hi - lo > TSTAR_TOL {
            let mid = 0.5 * (lo + hi);
            if (f(mid)? < target) == rising {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let k = k1(t);
    let upper = source.cov_x();
    let sandwich_slack = min_eigenvalue(&(&k - &end_2)).min(min_eigenvalue(&(&upper - &k)));
    Ok(TStar { t, k1: k, target, f0, f1, lower: end_2, upper, sandwich_slack })
}

/// The five degraded inner-bound constants of a scalar mixture, from
/// quadrature entropies: I(U;Y) = h(Y) − h(Y|U), I(X;Y) = h(Y) − ½ ln 2πeσ²,
/// I(X;Y|U) = h(Y|U) − ½ ln 2πeσ².
pub fn mixture_inner_terms(mix: &ScalarMixture) -> Result<DegradedTerms> {
    let [s1, s2, sz] = mix.noise;
    let noise_h = |v: f64| 0.5 * (TWO_PI_E * v).ln();
    let (h1u, _) = mixture_cond_entropy_fisher(mix, s1)?;
    let (h2u, _) = mixture_cond_entropy_fisher(mix, s2)?;
    let (hzu, _) = mixture_cond_entropy_fisher(mix, sz)?;
    let h2 = mixture_entropy(mix, s2)?;
    let hz = mixture_entropy(mix, sz)?;
    Ok(DegradedTerms {
        u_y2: h2 - h2u,
        u_z: hz - hzu,
        x_y1_u: h1u - noise_h(s1),
        x_z: hz - noise_h(sz),
        x_z_u: hzu - noise_h(sz),
    })
}

/// Comparison of a mixture's inner region with a Gaussian sweep hull.
#[derive(Clone, Debug, PartialEq)]
pub struct EvidenceReport {
    /// The mixture's five inner-bound constants.
    pub constants: [f64; 5],
    /// Vertices of the mixture region, in rate order.
    pub vertices: Vec<Vec<f64>>,
    /// Shortfall of each vertex against the Gaussian hull (≤ 0 inside).
    pub vertex_shortfall: Vec<f64>,
    /// Per bound row: max of its rate sum over the Gaussian hull minus the
    /// max over the mixture region (≥ 0 when the hull reaches as far).
    pub constraint_slack: [f64; 5],
    pub max_shortfall: f64,
    /// Whether every vertex lies within the slack tolerance of the hull.
    pub dominated: bool,
}

/// Slack allowed between a mixture region and the Gaussian hull.
pub const EVIDENCE_SLACK: f64 = 1e-3;

/// Evidence (not proof) that the Gaussian auxiliary exhausts the scalar
/// degraded inner region: the mixture's region must lie in the
/// down-closed hull of a Gaussian sweep on the channel with cap S ≥ E[X²].
pub fn sufficiency_evidence_scalar(mix: &ScalarMixture, gauss: &SweepResult, slack: f64) -> Result<EvidenceReport> {
    let constants = mixture_inner_terms(mix)?.inner();
    let poly = vertices(&inner_system_from(&constants))?;
    let verts: Vec<Vec<f64>> = (0..poly.vertices.len()).map(|i| in_rate_order(&poly, i)).collect();
    let vertex_shortfall: Vec<f64> = verts.iter().map(|v| hull_shortfall(&gauss.hull, v)).collect();
    let max_shortfall = vertex_shortfall.iter().copied().fold(0.0_f64, f64::max);
    let support = |pts: &[Vec<f64>], row: &[&str]| {
        let idx: Vec<usize> = row.iter().map(|r| RATES.iter().position(|x| x == r).unwrap_or(0)).collect();
        pts.iter().map(|p| idx.iter().map(|&i| p[i]).sum::<f64>()).fold(0.0_f64, f64::max)
    };
    let mut constraint_slack = [0.0; 5];
    for (k, row) in INNER_ROWS.iter().enumerate() {
        constraint_slack[k] = support(&gauss.hull, row) - support(&verts, row);
    }
    Ok(EvidenceReport {
        constants,
        vertices: verts,
        vertex_shortfall,
        constraint_slack,
        max_shortfall,
        dominated: max_shortfall <= slack,
    })
}

//! Symmetric-matrix utilities for Gaussian evaluation: symmetry and
//! semidefiniteness checks with explicit tolerances, Cholesky log
//! determinants, and mutual information between blocks of a jointly
//! Gaussian vector described as linear images of independent sources.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

pub type Mat = DMatrix<f64>;

/// Largest accepted asymmetry, relative to the largest entry (or 1).
pub const SYM_TOL: f64 = 1e-12;
/// Relative tolerance on negative eigenvalues: a matrix is accepted as
/// PSD when its smallest eigenvalue is ≥ −PSD_TOL · scale, where scale is
/// the larger of trace/d and the largest absolute entry.
pub const PSD_TOL: f64 = 1e-10;
/// Eigenvalues below this fraction of the largest one span the null space
/// of a conditional covariance.
const RANK_TOL: f64 = 1e-12;

fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0_f64, |a, &b| a.max(b.abs()))
}

/// Scale against which semidefiniteness tolerances are measured.
pub fn psd_scale(m: &Mat) -> f64 {
    let d = m.nrows().max(1) as f64;
    (m.trace().abs() / d).max(max_abs(m))
}

/// Errors unless `m` is square and symmetric to [`SYM_TOL`].
pub fn check_symmetric(m: &Mat, what: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("{what} is {}x{}", m.nrows(), m.ncols())));
    }
    let resid = max_abs(&(m - m.transpose()));
    if resid > SYM_TOL * max_abs(m).max(1.0) {
        return Err(Error::Validation(format!("{what} is not symmetric (residual {resid:e})")));
    }
    Ok(())
}

/// Exact symmetrization (A + Aᵀ)/2.
pub fn symmetrize(m: &Mat) -> Mat {
    (m + m.transpose()) * 0.5
}

/// Smallest eigenvalue of the symmetric part of `m`.
pub fn min_eigenvalue(m: &Mat) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    SymmetricEigen::new(symmetrize(m)).eigenvalues.min()
}

/// Whether every eigenvalue of `m` is at least `-tol`.
pub fn is_psd(m: &Mat, tol: f64) -> bool {
    min_eigenvalue(m) >= -tol
}

/// Checks symmetry and semidefiniteness within the relative tolerance, then
/// clips negative eigenvalues to zero.
pub fn psd_clip(m: &Mat, what: &str) -> Result<Mat> {
    check_symmetric(m, what)?;
    if m.nrows() == 0 {
        return Ok(m.clone());
    }
    let eig = SymmetricEigen::new(symmetrize(m));
    let lo = eig.eigenvalues.min();
    if lo < -PSD_TOL * psd_scale(m) {
        return Err(Error::NotPsd { what: what.to_string(), eigenvalue: lo });
    }
    if lo >= 0.0 {
        return Ok(symmetrize(m));
    }
    let clipped = eig.eigenvalues.map(|l| l.max(0.0));
    Ok(symmetrize(&(&eig.eigenvectors * Mat::from_diagonal(&clipped) * eig.eigenvectors.transpose())))
}

/// Errors unless `m` is symmetric and positive definite (Cholesky succeeds).
pub fn check_pd(m: &Mat, what: &str) -> Result<()> {
    check_symmetric(m, what)?;
    log_det(m, what).map(|_| ())
}

/// ln |m| via Cholesky; a nonpositive pivot is reported as [`Error::NotPsd`]
/// with the smallest eigenvalue.
pub fn log_det(m: &Mat, what: &str) -> Result<f64> {
    if m.nrows() == 0 {
        return Ok(0.0);
    }
    match Cholesky::new(symmetrize(m)) {
        Some(c) => Ok(2.0 * c.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>()),
        None => Err(Error::NotPsd { what: what.to_string(), eigenvalue: min_eigenvalue(m) }),
    }
}

/// ½ ln(|a| / |b|), the rate expression used throughout the Gaussian bounds.
pub fn half_log_ratio(a: &Mat, b: &Mat) -> Result<f64> {
    Ok(0.5 * (log_det(a, "numerator")? - log_det(b, "denominator")?))
}

/// Inverse of a positive definite matrix via Cholesky.
pub fn spd_inverse(m: &Mat, what: &str) -> Result<Mat> {
    Cholesky::new(symmetrize(m))
        .map(|c| symmetrize(&c.inverse()))
        .ok_or_else(|| Error::SingularMatrix(what.to_string()))
}

/// Symmetric square root of a PSD matrix.
pub fn sqrt_psd(m: &Mat) -> Mat {
    let eig = SymmetricEigen::new(symmetrize(m));
    let r = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    symmetrize(&(&eig.eigenvectors * Mat::from_diagonal(&r) * eig.eigenvectors.transpose()))
}

/// Moore–Penrose pseudo-inverse of a symmetric PSD matrix, with eigenvalues
/// below `RANK_TOL` times the largest treated as zero.
fn pinv_psd(m: &Mat) -> Mat {
    if m.nrows() == 0 {
        return m.clone();
    }
    let eig = SymmetricEigen::new(symmetrize(m));
    let top = eig.eigenvalues.iter().fold(0.0_f64, |a, &b| a.max(b));
    let inv = eig.eigenvalues.map(|l| if l > RANK_TOL * top && l > 0.0 { 1.0 / l } else { 0.0 });
    &eig.eigenvectors * Mat::from_diagonal(&inv) * eig.eigenvectors.transpose()
}

/// A jointly Gaussian vector whose named blocks are linear images of
/// independent zero-mean sources: block = Σ_i M_i W_i with W_i ~ N(0, C_i).
#[derive(Clone, Debug, Default)]
pub struct LinearGaussModel {
    sources: Vec<Mat>,
    blocks: Vec<(String, usize, Vec<(usize, Mat)>)>,
}

impl LinearGaussModel {
    /// Adds an independent source with covariance `cov`; returns its index.
    pub fn source(&mut self, cov: Mat) -> usize {
        self.sources.push(cov);
        self.sources.len() - 1
    }

    /// Defines block `name` = Σ coeff · source.
    pub fn block(&mut self, name: &str, dim: usize, terms: Vec<(usize, Mat)>) -> Result<()> {
        for (s, m) in &terms {
            let c = self.sources.get(*s).ok_or_else(|| Error::UnknownVariable(format!("source {s}")))?;
            if m.nrows() != dim || m.ncols() != c.nrows() {
                return Err(Error::DimensionMismatch(format!("coefficient of source {s} in `{name}`")));
            }
        }
        self.blocks.push((name.to_string(), dim, terms));
        Ok(())
    }

    fn find(&self, name: &str) -> Result<&(String, usize, Vec<(usize, Mat)>)> {
        self.blocks.iter().find(|b| b.0 == name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    fn cross(&self, a: &str, b: &str) -> Result<Mat> {
        let (_, da, ta) = self.find(a)?;
        let (_, db, tb) = self.find(b)?;
        let mut out = Mat::zeros(*da, *db);
        for (sa, ma) in ta {
            for (sb, mb) in tb {
                if sa == sb {
                    out += ma * &self.sources[*sa] * mb.transpose();
                }
            }
        }
        Ok(out)
    }

    /// Joint covariance of the listed blocks, stacked in order.
    pub fn covariance(&self, names: &[&str]) -> Result<Mat> {
        let dims: Vec<usize> = names.iter().map(|n| self.find(n).map(|b| b.1)).collect::<Result<_>>()?;
        let n: usize = dims.iter().sum();
        let mut out = Mat::zeros(n, n);
        let mut r = 0;
        for (i, a) in names.iter().enumerate() {
            let mut c = 0;
            for (j, b) in names.iter().enumerate() {
                out.view_mut((r, c), (dims[i], dims[j])).copy_from(&self.cross(a, b)?);
                c += dims[j];
            }
            r += dims[i];
        }
        Ok(symmetrize(&out))
    }

    /// I(A;B|C) in nats.
    pub fn mutual_information(&self, a: &[&str], b: &[&str], c: &[&str]) -> Result<f64> {
        let bc: Vec<&str> = b.iter().chain(c).copied().collect();
        let joint = self.covariance(&[a, &bc].concat())?;
        let outer = conditional_covariance(&self.covariance(&[a, c].concat())?, a_dim(self, a)?)?;
        let inner = conditional_covariance(&joint, a_dim(self, a)?)?;
        gaussian_information(&outer, &inner, psd_scale(&joint))
    }
}

fn a_dim(m: &LinearGaussModel, a: &[&str]) -> Result<usize> {
    a.iter().map(|n| m.find(n).map(|b| b.1)).sum()
}

/// Cov(A | rest) for a joint covariance whose first `na` coordinates are A,
/// using a pseudo-inverse so that degenerate conditioning is allowed.
pub fn conditional_covariance(joint: &Mat, na: usize) -> Result<Mat> {
    let n = joint.nrows();
    if na > n {
        return Err(Error::DimensionMismatch("conditioned block larger than the joint".into()));
    }
    let saa = joint.view((0, 0), (na, na)).into_owned();
    if na == n {
        return Ok(saa);
    }
    let sab = joint.view((0, na), (na, n - na)).into_owned();
    let sbb = joint.view((na, na), (n - na, n - na)).into_owned();
    Ok(symmetrize(&(saa - &sab * pinv_psd(&sbb) * sab.transpose())))
}

/// ½ ln(|outer| / |inner|) restricted to the range of `outer`, where
/// `outer = Cov(A|C)` and `inner = Cov(A|B,C)` ⪯ outer. The range keeps
/// eigenvalues above `RANK_TOL · scale`, with `scale` the magnitude of the
/// joint covariance, so round-off residue of a determined block is not
/// mistaken for a random direction. Directions in which
/// A is already determined by C carry no information; a direction
/// determined by (B, C) but not by C alone gives infinite information and
/// is reported as a singular conditional covariance.
pub fn gaussian_information(outer: &Mat, inner: &Mat, scale: f64) -> Result<f64> {
    if outer.nrows() == 0 {
        return Ok(0.0);
    }
    let eig = SymmetricEigen::new(symmetrize(outer));
    let top = eig.eigenvalues.iter().fold(0.0_f64, |a, &b| a.max(b));
    let cut = RANK_TOL * top.max(scale).max(1e-300);
    let keep: Vec<usize> = (0..eig.eigenvalues.len()).filter(|&i| eig.eigenvalues[i] > cut).collect();
    if keep.is_empty() {
        return Ok(0.0);
    }
    let p = eig.eigenvectors.select_columns(keep.iter());
    let o = p.transpose() * outer * &p;
    let i = p.transpose() * inner * &p;
    let lo = log_det(&o, "conditional covariance")?;
    let li = log_det(&i, "conditional covariance").map_err(|_| Error::SingularConditionalCovariance)?;
    Ok(0.5 * (lo - li))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(a: f64, b: f64, c: f64) -> Mat {
        Mat::from_row_slice(2, 2, &[a, b, b, c])
    }

    #[test]
    fn log_det_of_diagonal() {
        let m = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 3.0]));
        assert!((log_det(&m, "m").unwrap() - 6f64.ln()).abs() < 1e-14);
        assert!(matches!(log_det(&m2(1.0, 2.0, 1.0), "m"), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn clipping_accepts_tiny_negative_eigenvalues_only() {
        let tiny = m2(1.0, 1.0 + 1e-12, 1.0);
        let c = psd_clip(&tiny, "k").unwrap();
        assert!(min_eigenvalue(&c) >= 0.0);
        assert!(matches!(psd_clip(&m2(1.0, 2.0, 1.0), "k"), Err(Error::NotPsd { eigenvalue, .. }) if (eigenvalue + 1.0).abs() < 1e-12));
        assert!(check_symmetric(&Mat::from_row_slice(2, 2, &[1.0, 0.0, 1e-6, 1.0]), "a").is_err());
    }

    #[test]
    fn scalar_channel_information() {
        // X ~ N(0, 1), Y = X + N, N ~ N(0, 1): I(X;Y) = ½ ln 2.
        let mut g = LinearGaussModel::default();
        let x = g.source(Mat::identity(1, 1));
        let n = g.source(Mat::identity(1, 1));
        let one = || Mat::identity(1, 1);
        g.block("X", 1, vec![(x, one())]).unwrap();
        g.block("Y", 1, vec![(x, one()), (n, one())]).unwrap();
        let i = g.mutual_information(&["X"], &["Y"], &[]).unwrap();
        assert!((i - 0.5 * 2f64.ln()).abs() < 1e-14);
        // Conditioning on X itself leaves nothing.
        assert_eq!(g.mutual_information(&["X"], &["Y"], &["X"]).unwrap(), 0.0);
        // Knowing X from X is infinite information.
        assert_eq!(g.mutual_information(&["X"], &["X"], &[]), Err(Error::SingularConditionalCovariance));
    }

    #[test]
    fn conditional_covariance_of_block() {
        let j = Mat::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        assert!((conditional_covariance(&j, 1).unwrap()[(0, 0)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn determined_block_carries_no_information() {
        // V = U exactly and Y = U + N: given U, V is constant up to round-off.
        let s = m2(2.07, 0.31, 0.91);
        let mut g = LinearGaussModel::default();
        let u = g.source(s.clone());
        let n = g.source(Mat::identity(2, 2));
        let id = || Mat::identity(2, 2);
        g.block("U", 2, vec![(u, id())]).unwrap();
        g.block("V", 2, vec![(u, id() * 3.0 - id() * 2.0)]).unwrap();
        g.block("Y", 2, vec![(u, id()), (n, id())]).unwrap();
        assert_eq!(g.mutual_information(&["V"], &["Y"], &["U"]).unwrap(), 0.0);
        assert_eq!(g.mutual_information(&["V"], &["V"], &["U"]).unwrap(), 0.0);
        let i = g.mutual_information(&["U"], &["Y"], &[]).unwrap();
        assert!((i - 0.5 * ((&s + id()).determinant()).ln()).abs() < 1e-12);
    }
}

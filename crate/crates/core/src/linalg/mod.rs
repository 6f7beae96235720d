//! Dense factorizations and the generalized eigensolver.

mod qr;
mod qz;
mod svd;

pub use qr::qr;
pub use qz::{
    eig, eigenvalues, generalized_eig, generalized_schur, EigDecomposition, EigPair,
    GeneralizedSchur, HomogeneousEigenvalue,
};
pub use svd::{min_singular_triplet, singular_values, svd, Svd};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, C64};
use crate::rng::{self, Rng};

/// Threshold for counting singular values as nonzero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankTol {
    /// `max(rows, cols) · ε · σ_max`
    #[default]
    Auto,
    Value(f64),
}

impl RankTol {
    pub fn resolve(self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        match self {
            RankTol::Auto => rows.max(cols) as f64 * f64::EPSILON * sigma_max,
            RankTol::Value(t) => t,
        }
    }
}

/// Numerical rank: the number of singular values strictly above the tolerance.
pub fn rank_with_tol(m: &CMatrix, tol: RankTol) -> Result<usize> {
    Ok(rank_report(m, tol)?.0)
}

/// Rank together with the tolerance that was applied.
pub fn rank_report(m: &CMatrix, tol: RankTol) -> Result<(usize, f64)> {
    if let RankTol::Value(t) = tol {
        if !(t >= 0.0) {
            return Err(Error::InvalidArgument(format!("rank tolerance {t} must be nonnegative")));
        }
    }
    let s = singular_values(m)?;
    let smax = s.first().copied().unwrap_or(0.0);
    let t = tol.resolve(m.rows(), m.cols(), smax);
    Ok((s.iter().filter(|&&x| x > t).count(), t))
}

/// `n × k` matrix with orthonormal columns, distributed as the unitary factor
/// of a complex Gaussian matrix (Haar on the Stiefel manifold).
pub fn random_orthonormal(n: usize, k: usize, rng: &mut Rng) -> Result<CMatrix> {
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "cannot draw {k} orthonormal columns in dimension {n}"
        )));
    }
    let g = rng::complex_gaussian_matrix(n, k, rng);
    let (q, r) = qr(&g);
    // fix column phases so that diag(R) is positive
    let mut out = q.submatrix(0, 0, n, k);
    for j in 0..k {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase: C64 = d / d.norm();
            for x in out.col_mut(j) {
                *x *= phase;
            }
        }
    }
    Ok(out)
}

pub fn random_unitary(n: usize, rng: &mut Rng) -> CMatrix {
    random_orthonormal(n, n, rng).expect("square draw")
}

/// Deviation from orthonormal columns: `‖MᴴM − I‖_F`.
pub fn orthonormality_error(m: &CMatrix) -> f64 {
    let g = &m.adjoint() * m;
    (&g - &CMatrix::identity(m.cols())).norm_fro()
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kron(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_simple_matrices() {
        assert_eq!(rank_with_tol(&CMatrix::zeros(3, 4), RankTol::Auto).unwrap(), 0);
        assert_eq!(rank_with_tol(&CMatrix::identity(5), RankTol::Auto).unwrap(), 5);
        // σ = {1, 1e-20}; auto tolerance is 2·ε·1 ≈ 4.4e-16
        let d = CMatrix::from_real_diag(&[1.0, 1e-20]);
        let (r, t) = rank_report(&d, RankTol::Auto).unwrap();
        assert_eq!(r, 1);
        assert_eq!(t, 2.0 * f64::EPSILON);
        assert_eq!(rank_with_tol(&d, RankTol::Value(1e-21)).unwrap(), 2);
        assert!(rank_with_tol(&d, RankTol::Value(-1.0)).is_err());
    }

    #[test]
    fn random_orthonormal_contract() {
        let mut g = rng::seeded(1);
        let m = random_orthonormal(5, 5, &mut g).unwrap();
        assert!(orthonormality_error(&m) <= 5e-15);
        let v = random_orthonormal(7, 1, &mut g).unwrap();
        assert!((v.norm_fro() - 1.0).abs() < 1e-15);
        for &(n, k) in &[(1, 1), (10, 3), (40, 40), (33, 7)] {
            let m = random_orthonormal(n, k, &mut g).unwrap();
            assert!(orthonormality_error(&m) <= 10.0 * n as f64 * f64::EPSILON);
        }
        assert!(random_orthonormal(3, 4, &mut g).is_err());
    }

    #[test]
    fn random_orthonormal_is_deterministic() {
        let a = random_orthonormal(6, 2, &mut rng::seeded(42)).unwrap();
        let b = random_orthonormal(6, 2, &mut rng::seeded(42)).unwrap();
        assert_eq!(a.as_slice(), b.as_slice());
    }

    #[test]
    fn kron_mixed_product_on_vectors() {
        let mut g = rng::seeded(8);
        let a = rng::complex_gaussian_matrix(2, 2, &mut g);
        let b = rng::complex_gaussian_matrix(2, 2, &mut g);
        let x = rng::complex_gaussian_matrix(2, 1, &mut g);
        let y = rng::complex_gaussian_matrix(2, 1, &mut g);
        let lhs = &kron(&a, &b) * &kron(&x, &y);
        let rhs = kron(&(&a * &x), &(&b * &y));
        assert!((&lhs - &rhs).norm_fro() < 1e-14);
    }
}

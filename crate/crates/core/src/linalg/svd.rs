//! One-sided (Hestenes) Jacobi SVD.
//!
//! Column pairs are rotated until mutually orthogonal to working precision.
//! This computes small singular values to high relative accuracy, which is
//! what rank decisions on nearly singular pencils need.

use crate::error::{Error, Result};
use crate::matrix::{dotc, vec_norm, CMatrix, C64, ZERO};

const MAX_SWEEPS: usize = 80;

/// Thin SVD `A = U diag(s) Vᴴ` with singular values in descending order.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub v: CMatrix,
}

pub fn svd(a: &CMatrix) -> Result<Svd> {
    let (m, n) = a.shape();
    if m < n {
        let t = svd(&a.adjoint())?;
        return Ok(Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        });
    }
    // work on a copy scaled to unit max entry, undone on the singular values
    let scale = a.max_abs();
    if !scale.is_finite() {
        return Err(Error::InvalidArgument("svd of a matrix with non-finite entries".into()));
    }
    if scale == 0.0 {
        return Ok(Svd {
            u: CMatrix::identity(m).submatrix(0, 0, m, n),
            s: vec![0.0; n],
            v: CMatrix::identity(n),
        });
    }
    let mut w = a.scale_real(1.0 / scale);
    let mut v = CMatrix::identity(n);
    // below this a column is numerically zero: rotations against it underflow
    let tiny = f64::MIN_POSITIVE / f64::EPSILON;
    let tol = f64::EPSILON * (m as f64).sqrt();

    let mut converged = n < 2;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                routine: "jacobi_svd",
                iterations: sweeps,
                first: 0,
                last: n - 1,
            });
        }
        sweeps += 1;
        converged = true;
        for p in 0..n - 1 {
            for q in p + 1..n {
                // norms rather than squared norms: columns of size 1e-160 are
                // common after zero padding and their squares would underflow
                let np = vec_norm(w.col(p));
                let nq = vec_norm(w.col(q));
                if np <= tiny || nq <= tiny {
                    continue;
                }
                let gamma = dotc(w.col(p), w.col(q));
                let g = gamma.norm();
                let cos = g / np / nq;
                if g == 0.0 || cos <= tol {
                    continue;
                }
                let phase = gamma / g;
                let zeta = (nq / np - np / nq) / (2.0 * cos);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                if t == 0.0 || !t.is_finite() {
                    // column norms differ by more than the exponent range
                    continue;
                }
                converged = false;
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
            }
        }
    }

    let mut s: Vec<f64> = (0..n).map(|j| vec_norm(w.col(j))).collect();
    let unscaled: Vec<f64> = s.iter().map(|x| x * scale).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
    let mut u = CMatrix::zeros(m, n);
    let mut vs = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let sigma = s[src];
        if sigma > 0.0 {
            for (x, &y) in u.col_mut(dst).iter_mut().zip(w.col(src)) {
                *x = y / sigma;
            }
        }
        vs.col_mut(dst).copy_from_slice(v.col(src));
    }
    s = order.iter().map(|&i| unscaled[i]).collect();
    Ok(Svd { u, s, v: vs })
}

// [p, q] ← [p, q·e^{-iφ}] · [[c, s], [-s, c]]
fn rotate(m: &mut CMatrix, p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let ph = phase.conj();
    for i in 0..m.rows() {
        let xp = m[(i, p)];
        let xq = m[(i, q)] * ph;
        m[(i, p)] = xp * c - xq * s;
        m[(i, q)] = (xp * s + xq * c) * phase;
    }
}

pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    if a.is_empty() {
        return Ok(Vec::new());
    }
    Ok(svd(a)?.s)
}

/// Smallest singular value of a square matrix and its right singular vector.
pub fn min_singular_triplet(a: &CMatrix) -> Result<(f64, Vec<C64>)> {
    let n = a.cols();
    if n == 0 {
        return Ok((0.0, Vec::new()));
    }
    let d = svd(a)?;
    if a.rows() < n {
        // wide matrix: a null vector exists
        let mut x = vec![ZERO; n];
        x.copy_from_slice(d.v.col(d.v.cols() - 1));
        return Ok((0.0, x));
    }
    let last = d.s.len() - 1;
    Ok((d.s[last], d.v.col(last).to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn svd_reconstructs() {
        let mut g = rng::seeded(11);
        for &(m, n) in &[(6, 4), (4, 6), (5, 5), (1, 3)] {
            let a = rng::complex_gaussian_matrix(m, n, &mut g);
            let d = svd(&a).unwrap();
            let p = d.s.len();
            let mut us = d.u.clone();
            for j in 0..p {
                for x in us.col_mut(j) {
                    *x *= d.s[j];
                }
            }
            let back = &us * &d.v.adjoint();
            assert!((&back - &a).norm_fro() < 1e-13 * a.norm_fro());
            assert!(d.s.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn tiny_singular_value_is_resolved() {
        let a = CMatrix::from_real_diag(&[1.0, 1e-20]);
        let s = singular_values(&a).unwrap();
        assert_eq!(s, vec![1.0, 1e-20]);
    }

    #[test]
    fn min_triplet_finds_null_vector() {
        let a = CMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        let (sigma, x) = min_singular_triplet(&a).unwrap();
        assert!(sigma < 1e-15);
        let r = a.matvec(&x);
        assert!(vec_norm(&r) < 1e-14);
    }
}

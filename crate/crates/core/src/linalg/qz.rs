//! Complex QZ algorithm for the generalized eigenproblem `A x = λ B x`.
//!
//! The pencil is reduced to Hessenberg-triangular form with a QR step and
//! Givens rotations, then to generalized Schur form `(S, T) = (Qᴴ A Z, Qᴴ B Z)`
//! by single-shift QZ sweeps. Right and left eigenvectors come from
//! triangular solves on `(S, T)` mapped back through `Z` and `Q`.

use serde::{Deserialize, Serialize};

use super::qr::householder;
use crate::error::{Error, Result};
use crate::matrix::{normalize, CMatrix, C64, ONE, ZERO};

const ULP: f64 = f64::EPSILON;
const SAFMIN: f64 = f64::MIN_POSITIVE;

/// Eigenvalue `λ = alpha / beta` in homogeneous form, normalized so that
/// `|alpha|² + |beta|² = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousEigenvalue {
    pub alpha: C64,
    pub beta: C64,
}

impl HomogeneousEigenvalue {
    /// Normalizes `(alpha, beta)`. Returns `None` for the pair `(0, 0)`.
    pub fn new(alpha: C64, beta: C64) -> Option<Self> {
        let r = alpha.norm().hypot(beta.norm());
        if r == 0.0 || !r.is_finite() {
            return None;
        }
        Some(Self {
            alpha: alpha / r,
            beta: beta / r,
        })
    }

    pub fn finite(lambda: C64) -> Self {
        Self::new(lambda, ONE).expect("finite eigenvalue")
    }

    pub fn infinite() -> Self {
        Self {
            alpha: ONE,
            beta: ZERO,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.beta.norm() <= f64::EPSILON * self.alpha.norm()
    }

    /// `alpha / beta`, or `None` when the eigenvalue is numerically infinite.
    pub fn lambda(&self) -> Option<C64> {
        (!self.is_infinite()).then(|| self.alpha / self.beta)
    }

    /// Chordal distance on the Riemann sphere; `0` for equal points, `1` for
    /// antipodes.
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        (self.alpha * other.beta - other.alpha * self.beta).norm()
    }

    /// Multiplies the eigenvalue by `factor` (a positive real scale).
    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(self.alpha * factor, self.beta).unwrap_or(*self)
    }
}

#[derive(Clone, Debug)]
pub struct EigPair {
    pub value: HomogeneousEigenvalue,
    /// Right eigenvector, unit 2-norm: `(β A - α B) x = 0`.
    pub right: Vec<C64>,
    /// Left eigenvector, unit 2-norm: `yᴴ (β A - α B) = 0`.
    pub left: Vec<C64>,
}

#[derive(Clone, Debug)]
pub struct EigDecomposition {
    pub pairs: Vec<EigPair>,
}

impl EigDecomposition {
    pub fn values(&self) -> Vec<HomogeneousEigenvalue> {
        self.pairs.iter().map(|p| p.value).collect()
    }
}

/// Generalized Schur form: `A = Q S Zᴴ`, `B = Q T Zᴴ` with `S`, `T` upper
/// triangular and `T` having a real nonnegative diagonal.
#[derive(Clone, Debug)]
pub struct GeneralizedSchur {
    pub s: CMatrix,
    pub t: CMatrix,
    pub q: CMatrix,
    pub z: CMatrix,
}

/// `(c, s, r)` with `c·f + s·g = r` and `-s̄·f + c·g = 0`.
fn lartg(f: C64, g: C64) -> (f64, C64, C64) {
    if g == ZERO {
        return (1.0, ZERO, f);
    }
    let fa = f.norm();
    let ga = g.norm();
    if fa == 0.0 {
        return (0.0, g.conj() / ga, C64::new(ga, 0.0));
    }
    let d = fa.hypot(ga);
    let phase = f / fa;
    (fa / d, phase * g.conj() / d, phase * d)
}

#[inline]
fn abs1(z: C64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Rotates rows `r1`, `r2` over columns `cols`: `x ← c x + s y`, `y ← c y - s̄ x`.
fn rot_rows(m: &mut CMatrix, r1: usize, r2: usize, cols: std::ops::RangeInclusive<usize>, c: f64, s: C64) {
    let sc = s.conj();
    for j in cols {
        let x = m[(r1, j)];
        let y = m[(r2, j)];
        m[(r1, j)] = x * c + s * y;
        m[(r2, j)] = y * c - sc * x;
    }
}

/// Rotates columns `c1`, `c2` over rows `rows`: `x ← c x + s y`, `y ← c y - s̄ x`.
fn rot_cols(m: &mut CMatrix, c1: usize, c2: usize, rows: std::ops::Range<usize>, c: f64, s: C64) {
    let sc = s.conj();
    for i in rows {
        let x = m[(i, c1)];
        let y = m[(i, c2)];
        m[(i, c1)] = x * c + s * y;
        m[(i, c2)] = y * c - sc * x;
    }
}

fn check_pencil(a: &CMatrix, b: &CMatrix) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "generalized eigenproblem needs square matrices, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    a.check_same_shape(b, "generalized eigenproblem")?;
    Ok(a.rows())
}

/// Reduces `(A, B)` to Hessenberg-triangular form, returning `(H, T, Q, Z)`.
fn hessenberg_triangular(a: &CMatrix, b: &CMatrix) -> (CMatrix, CMatrix, CMatrix, CMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut t = b.clone();
    let mut q = CMatrix::identity(n);
    let mut z = CMatrix::identity(n);

    for j in 0..n.saturating_sub(1) {
        let refl = householder(&t.col(j)[j..]);
        refl.apply_left(&mut t, j, j + 1..n);
        refl.apply_left(&mut h, j, 0..n);
        refl.apply_right(&mut q, j, 0..n);
        t[(j, j)] = C64::new(refl.beta, 0.0);
        for i in j + 1..n {
            t[(i, j)] = ZERO;
        }
    }

    for jcol in 0..n.saturating_sub(2) {
        for jrow in (jcol + 2..n).rev() {
            let (c, s, r) = lartg(h[(jrow - 1, jcol)], h[(jrow, jcol)]);
            h[(jrow - 1, jcol)] = r;
            h[(jrow, jcol)] = ZERO;
            rot_rows(&mut h, jrow - 1, jrow, jcol + 1..=n - 1, c, s);
            rot_rows(&mut t, jrow - 1, jrow, jrow - 1..=n - 1, c, s);
            rot_cols(&mut q, jrow - 1, jrow, 0..n, c, s.conj());

            let (c, s, r) = lartg(t[(jrow, jrow)], t[(jrow, jrow - 1)]);
            t[(jrow, jrow)] = r;
            t[(jrow, jrow - 1)] = ZERO;
            rot_cols(&mut h, jrow, jrow - 1, 0..n, c, s);
            rot_cols(&mut t, jrow, jrow - 1, 0..jrow, c, s);
            rot_cols(&mut z, jrow, jrow - 1, 0..n, c, s);
        }
    }
    (h, t, q, z)
}

enum Next {
    /// `H[ilast, ilast-1]` is zero: accept the trailing 1×1 block.
    Deflate,
    /// `T[ilast, ilast]` is zero: rotate `H[ilast, ilast-1]` away, then deflate.
    ClearSubdiagonal,
    /// Run a QZ sweep on the active block `ifirst..=ilast`.
    Sweep(usize),
}

/// Computes the generalized Schur form of a square pencil.
pub fn generalized_schur(a: &CMatrix, b: &CMatrix) -> Result<GeneralizedSchur> {
    let n = check_pencil(a, b)?;
    if n == 0 {
        return Ok(GeneralizedSchur {
            s: CMatrix::zeros(0, 0),
            t: CMatrix::zeros(0, 0),
            q: CMatrix::zeros(0, 0),
            z: CMatrix::zeros(0, 0),
        });
    }
    let (mut h, mut t, mut q, mut z) = hessenberg_triangular(a, b);

    let anorm = h.norm_fro();
    let bnorm = t.norm_fro();
    let atol = SAFMIN.max(ULP * anorm);
    let btol = SAFMIN.max(ULP * bnorm);
    let ascale = 1.0 / SAFMIN.max(anorm);
    let bscale = 1.0 / SAFMIN.max(bnorm);
    let last = n - 1;

    let mut ilast = last;
    let mut iiter = 0usize;
    let mut eshift = ZERO;
    let maxit = 30 * n;

    let small_sub = |h: &CMatrix, j: usize| {
        abs1(h[(j, j - 1)]) <= SAFMIN.max(ULP * (abs1(h[(j, j)]) + abs1(h[(j - 1, j - 1)])))
    };

    let mut jiter = 0;
    loop {
        if jiter > maxit {
            return Err(Error::NoConvergence {
                routine: "qz",
                iterations: jiter,
                first: 0,
                last: ilast,
            });
        }
        jiter += 1;

        let next = 'find: {
            if ilast == 0 {
                break 'find Next::Deflate;
            }
            if small_sub(&h, ilast) {
                h[(ilast, ilast - 1)] = ZERO;
                break 'find Next::Deflate;
            }
            if t[(ilast, ilast)].norm() <= btol {
                t[(ilast, ilast)] = ZERO;
                break 'find Next::ClearSubdiagonal;
            }
            for j in (0..ilast).rev() {
                let ilazro = if j == 0 {
                    true
                } else if small_sub(&h, j) {
                    h[(j, j - 1)] = ZERO;
                    true
                } else {
                    false
                };

                if abs1(t[(j, j)]) < btol {
                    t[(j, j)] = ZERO;
                    let mut ilazr2 = !ilazro
                        && abs1(h[(j, j - 1)]) * (ascale * abs1(h[(j + 1, j)]))
                            <= abs1(h[(j, j)]) * (ascale * atol);

                    if ilazro || ilazr2 {
                        // chase the zero on T's diagonal down with row rotations
                        for jch in j..ilast {
                            let (c, s, r) = lartg(h[(jch, jch)], h[(jch + 1, jch)]);
                            h[(jch, jch)] = r;
                            h[(jch + 1, jch)] = ZERO;
                            rot_rows(&mut h, jch, jch + 1, jch + 1..=last, c, s);
                            rot_rows(&mut t, jch, jch + 1, jch + 1..=last, c, s);
                            rot_cols(&mut q, jch, jch + 1, 0..n, c, s.conj());
                            if ilazr2 {
                                h[(jch, jch - 1)] *= c;
                            }
                            ilazr2 = false;
                            if abs1(t[(jch + 1, jch + 1)]) >= btol {
                                if jch + 1 >= ilast {
                                    break 'find Next::Deflate;
                                }
                                break 'find Next::Sweep(jch + 1);
                            }
                            t[(jch + 1, jch + 1)] = ZERO;
                        }
                        break 'find Next::ClearSubdiagonal;
                    }

                    // chase the zero to T[ilast, ilast]
                    for jch in j..ilast {
                        let (c, s, r) = lartg(t[(jch, jch + 1)], t[(jch + 1, jch + 1)]);
                        t[(jch, jch + 1)] = r;
                        t[(jch + 1, jch + 1)] = ZERO;
                        if jch + 2 <= last {
                            rot_rows(&mut t, jch, jch + 1, jch + 2..=last, c, s);
                        }
                        rot_rows(&mut h, jch, jch + 1, jch - 1..=last, c, s);
                        rot_cols(&mut q, jch, jch + 1, 0..n, c, s.conj());

                        let (c, s, r) = lartg(h[(jch + 1, jch)], h[(jch + 1, jch - 1)]);
                        h[(jch + 1, jch)] = r;
                        h[(jch + 1, jch - 1)] = ZERO;
                        rot_cols(&mut h, jch, jch - 1, 0..jch + 1, c, s);
                        rot_cols(&mut t, jch, jch - 1, 0..jch, c, s);
                        rot_cols(&mut z, jch, jch - 1, 0..n, c, s);
                    }
                    break 'find Next::ClearSubdiagonal;
                } else if ilazro {
                    break 'find Next::Sweep(j);
                }
            }
            unreachable!("QZ split search always selects an action");
        };

        let ifirst = match next {
            Next::Sweep(ifirst) => ifirst,
            Next::ClearSubdiagonal | Next::Deflate => {
                if let Next::ClearSubdiagonal = next {
                    let (c, s, r) = lartg(h[(ilast, ilast)], h[(ilast, ilast - 1)]);
                    h[(ilast, ilast)] = r;
                    h[(ilast, ilast - 1)] = ZERO;
                    rot_cols(&mut h, ilast, ilast - 1, 0..ilast, c, s);
                    rot_cols(&mut t, ilast, ilast - 1, 0..ilast, c, s);
                    rot_cols(&mut z, ilast, ilast - 1, 0..n, c, s);
                }
                // make T[ilast, ilast] real and nonnegative
                let absb = t[(ilast, ilast)].norm();
                if absb > SAFMIN {
                    let sign = (t[(ilast, ilast)] / absb).conj();
                    t[(ilast, ilast)] = C64::new(absb, 0.0);
                    for i in 0..ilast {
                        t[(i, ilast)] *= sign;
                    }
                    for i in 0..=ilast {
                        h[(i, ilast)] *= sign;
                    }
                    for x in z.col_mut(ilast) {
                        *x *= sign;
                    }
                } else {
                    t[(ilast, ilast)] = ZERO;
                }
                if ilast == 0 {
                    break;
                }
                ilast -= 1;
                iiter = 0;
                eshift = ZERO;
                continue;
            }
        };

        iiter += 1;
        let shift = if iiter % 10 != 0 {
            wilkinson_shift(&h, &t, ilast, ascale, bscale)
        } else {
            // exceptional shift
            if iiter % 20 == 0 && bscale * abs1(t[(ilast, ilast)]) > SAFMIN {
                eshift += (h[(ilast, ilast)] * ascale) / (t[(ilast, ilast)] * bscale);
            } else {
                eshift += (h[(ilast, ilast - 1)] * ascale) / (t[(ilast - 1, ilast - 1)] * bscale);
            }
            eshift
        };

        // look for two consecutive small subdiagonals
        let mut istart = ifirst;
        let mut ctemp = h[(ifirst, ifirst)] * ascale - shift * (t[(ifirst, ifirst)] * bscale);
        for j in (ifirst + 1..ilast).rev() {
            let c = h[(j, j)] * ascale - shift * (t[(j, j)] * bscale);
            let mut temp = abs1(c);
            let mut temp2 = ascale * abs1(h[(j + 1, j)]);
            let tempr = temp.max(temp2);
            if tempr < 1.0 && tempr != 0.0 {
                temp /= tempr;
                temp2 /= tempr;
            }
            if abs1(h[(j, j - 1)]) * temp2 <= temp * atol {
                istart = j;
                ctemp = c;
                break;
            }
        }

        let (mut c, mut s, _) = lartg(ctemp, h[(istart + 1, istart)] * ascale);
        for j in istart..ilast {
            if j > istart {
                let (c2, s2, r) = lartg(h[(j, j - 1)], h[(j + 1, j - 1)]);
                c = c2;
                s = s2;
                h[(j, j - 1)] = r;
                h[(j + 1, j - 1)] = ZERO;
            }
            rot_rows(&mut h, j, j + 1, j..=last, c, s);
            rot_rows(&mut t, j, j + 1, j..=last, c, s);
            rot_cols(&mut q, j, j + 1, 0..n, c, s.conj());

            let (c2, s2, r) = lartg(t[(j + 1, j + 1)], t[(j + 1, j)]);
            t[(j + 1, j + 1)] = r;
            t[(j + 1, j)] = ZERO;
            rot_cols(&mut h, j + 1, j, 0..(j + 3).min(ilast + 1), c2, s2);
            rot_cols(&mut t, j + 1, j, 0..j + 1, c2, s2);
            rot_cols(&mut z, j + 1, j, 0..n, c2, s2);
        }
    }

    Ok(GeneralizedSchur { s: h, t, q, z })
}

fn wilkinson_shift(h: &CMatrix, t: &CMatrix, ilast: usize, ascale: f64, bscale: f64) -> C64 {
    let l = ilast;
    let u12 = (t[(l - 1, l)] * bscale) / (t[(l, l)] * bscale);
    let ad11 = (h[(l - 1, l - 1)] * ascale) / (t[(l - 1, l - 1)] * bscale);
    let ad21 = (h[(l, l - 1)] * ascale) / (t[(l - 1, l - 1)] * bscale);
    let ad12 = (h[(l - 1, l)] * ascale) / (t[(l, l)] * bscale);
    let ad22 = (h[(l, l)] * ascale) / (t[(l, l)] * bscale);
    let abi22 = ad22 - u12 * ad21;
    let abi12 = ad12 - u12 * ad11;

    let mut shift = abi22;
    let ctemp = abi12.sqrt() * ad21.sqrt();
    if ctemp != ZERO {
        let x = (ad11 - shift) * 0.5;
        let temp2 = abs1(x);
        let temp = abs1(ctemp).max(temp2);
        let mut y = ((x / temp).powi(2) + (ctemp / temp).powi(2)).sqrt() * temp;
        if temp2 > 0.0 {
            let xs = x / temp2;
            if xs.re * y.re + xs.im * y.im < 0.0 {
                y = -y;
            }
        }
        shift -= ctemp * (ctemp / (x + y));
    }
    shift
}

/// Eigenvalues and unit-norm right and left eigenvectors of a square pencil.
pub fn generalized_eig(a: &CMatrix, b: &CMatrix) -> Result<EigDecomposition> {
    let n = check_pencil(a, b)?;
    let GeneralizedSchur { s, t, q, z } = generalized_schur(a, b)?;
    let anorm = s.norm_one().max(SAFMIN);
    let bnorm = t.norm_one().max(SAFMIN);
    let ascale = 1.0 / anorm;
    let bscale = 1.0 / bnorm;

    let mut pairs = Vec::with_capacity(n);
    let mut work = vec![ZERO; n];
    for je in 0..n {
        let sjj = s[(je, je)];
        let tjj = t[(je, je)];
        let value = HomogeneousEigenvalue::new(sjj, tjj);

        let (right, left) = if value.is_none() {
            // both diagonal entries vanish: the pencil is singular here
            (z.col(je).to_vec(), q.col(je).to_vec())
        } else {
            let temp = 1.0 / (sjj.norm() * ascale).max(tjj.norm() * bscale).max(SAFMIN);
            let acoef = tjj * (temp * bscale * ascale);
            let bcoef = sjj * (temp * ascale * bscale);
            let dmin = (ULP * (acoef.norm() * anorm + bcoef.norm() * bnorm)).max(SAFMIN);
            let coef = |i: usize, j: usize| acoef * s[(i, j)] - bcoef * t[(i, j)];
            let pivot = |d: C64| if d.norm() < dmin { C64::new(dmin, 0.0) } else { d };

            // (acoef S - bcoef T) v = 0, upper triangular back substitution
            work[..=je].fill(ZERO);
            work[je] = ONE;
            for j in (0..je).rev() {
                let sum: C64 = (j + 1..=je).map(|k| coef(j, k) * work[k]).sum();
                work[j] = -sum / pivot(coef(j, j));
                guard_growth(&mut work[j..=je]);
            }
            let mut x = vec![ZERO; n];
            for (k, &wk) in work[..=je].iter().enumerate() {
                if wk == ZERO {
                    continue;
                }
                for (xi, &zik) in x.iter_mut().zip(z.col(k)) {
                    *xi += zik * wk;
                }
            }
            normalize(&mut x);

            // wᴴ (acoef S - bcoef T) = 0, forward substitution on the adjoint
            work[je..].fill(ZERO);
            work[je] = ONE;
            for j in je + 1..n {
                let sum: C64 = (je..j).map(|k| coef(k, j).conj() * work[k]).sum();
                work[j] = -sum / pivot(coef(j, j)).conj();
                guard_growth(&mut work[je..=j]);
            }
            let mut y = vec![ZERO; n];
            for (k, &wk) in work.iter().enumerate().skip(je) {
                if wk == ZERO {
                    continue;
                }
                for (yi, &qik) in y.iter_mut().zip(q.col(k)) {
                    *yi += qik * wk;
                }
            }
            normalize(&mut y);
            (x, y)
        };

        pairs.push(EigPair {
            value: value.unwrap_or(HomogeneousEigenvalue { alpha: ZERO, beta: ZERO }),
            right,
            left,
        });
    }
    Ok(EigDecomposition { pairs })
}

fn guard_growth(w: &mut [C64]) {
    const BIG: f64 = 1e150;
    if w.iter().any(|z| abs1(*z) > BIG) {
        for z in w.iter_mut() {
            *z /= BIG;
        }
    }
}

/// Eigenvalues and eigenvectors of a square matrix.
pub fn eig(a: &CMatrix) -> Result<EigDecomposition> {
    generalized_eig(a, &CMatrix::identity(a.rows()))
}

/// Eigenvalues of a square matrix as plain complex numbers.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    Ok(generalized_schur(a, &CMatrix::identity(a.rows()))
        .map(|f| (0..a.rows()).map(|i| f.s[(i, i)] / f.t[(i, i)]).collect())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::vec_norm;
    use crate::rng;

    fn residual(a: &CMatrix, b: &CMatrix, p: &EigPair) -> (f64, f64) {
        let m = &a.scale(p.value.beta) - &b.scale(p.value.alpha);
        let r = vec_norm(&m.matvec(&p.right));
        let l = vec_norm(&m.adjoint_matvec(&p.left));
        (r, l)
    }

    #[test]
    fn diagonal_pencil() {
        let a = CMatrix::from_real_diag(&[1.0, 2.0]);
        let d = generalized_eig(&a, &CMatrix::identity(2)).unwrap();
        let mut vals: Vec<f64> = d.pairs.iter().map(|p| p.value.lambda().unwrap().re).collect();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - 1.0).abs() < 1e-15 && (vals[1] - 2.0).abs() < 1e-15);
        for p in &d.pairs {
            // standard basis vectors up to phase
            let big = p.right.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!((big - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_b_gives_infinite_eigenvalue() {
        let d = generalized_eig(&CMatrix::identity(2), &CMatrix::from_real_diag(&[1.0, 0.0])).unwrap();
        let inf = d.pairs.iter().filter(|p| p.value.is_infinite()).count();
        assert_eq!(inf, 1);
        let fin: Vec<C64> = d.pairs.iter().filter_map(|p| p.value.lambda()).collect();
        assert_eq!(fin.len(), 1);
        assert!((fin[0] - ONE).norm() < 1e-15);
    }

    #[test]
    fn schur_form_reconstructs_pencil() {
        let mut g = rng::seeded(21);
        for n in [1, 2, 3, 8, 17] {
            let a = rng::complex_gaussian_matrix(n, n, &mut g);
            let b = rng::complex_gaussian_matrix(n, n, &mut g);
            let f = generalized_schur(&a, &b).unwrap();
            let a2 = &(&f.q * &f.s) * &f.z.adjoint();
            let b2 = &(&f.q * &f.t) * &f.z.adjoint();
            assert!((&a2 - &a).norm_fro() < 1e-13 * n as f64 * a.norm_fro());
            assert!((&b2 - &b).norm_fro() < 1e-13 * n as f64 * b.norm_fro());
            for j in 0..n {
                for i in j + 1..n {
                    assert!(f.s[(i, j)].norm() < 1e-14 * a.norm_fro(), "S not triangular");
                    assert_eq!(f.t[(i, j)], ZERO);
                }
            }
        }
    }

    #[test]
    fn residual_contract_on_random_pencils() {
        let mut g = rng::seeded(99);
        for trial in 0..100 {
            let n = 2 + trial % 29;
            let a = rng::complex_gaussian_matrix(n, n, &mut g);
            let b = rng::complex_gaussian_matrix(n, n, &mut g);
            let d = generalized_eig(&a, &b).unwrap();
            assert_eq!(d.pairs.len(), n);
            let bound = 10.0 * n as f64 * f64::EPSILON * (a.norm_fro() + b.norm_fro());
            for p in &d.pairs {
                assert!((vec_norm(&p.right) - 1.0).abs() < 1e-13);
                assert!((vec_norm(&p.left) - 1.0).abs() < 1e-13);
                let (r, l) = residual(&a, &b, p);
                assert!(r <= bound && l <= bound, "n={n}: residuals {r:e} {l:e} > {bound:e}");
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let e = generalized_eig(&CMatrix::identity(2), &CMatrix::identity(3));
        assert!(matches!(e, Err(Error::Dimension(_))));
        let e = generalized_eig(&CMatrix::zeros(2, 3), &CMatrix::zeros(2, 3));
        assert!(matches!(e, Err(Error::Dimension(_))));
    }
}

//! Householder reflectors and QR factorization.

use crate::matrix::{vec_norm, CMatrix, C64, ONE, ZERO};

/// Elementary reflector `H = I - tau v vᴴ` with `v[0] = 1` and `Hᴴ x = beta e₁`.
pub(crate) struct Reflector {
    pub v: Vec<C64>,
    pub tau: C64,
    pub beta: f64,
}

pub(crate) fn householder(x: &[C64]) -> Reflector {
    let alpha = x[0];
    let xnorm = vec_norm(&x[1..]);
    let mut v = vec![ZERO; x.len()];
    v[0] = ONE;
    if xnorm == 0.0 && alpha.im == 0.0 {
        return Reflector {
            v,
            tau: ZERO,
            beta: alpha.re,
        };
    }
    let mag = alpha.norm().hypot(xnorm);
    let beta = if alpha.re >= 0.0 { -mag } else { mag };
    let tau = C64::new((beta - alpha.re) / beta, -alpha.im / beta);
    let scal = ONE / (alpha - beta);
    for (vi, &xi) in v.iter_mut().zip(x).skip(1) {
        *vi = xi * scal;
    }
    Reflector { v, tau, beta }
}

impl Reflector {
    /// `M[r0.., c] ← Hᴴ M[r0.., c]` for every column `c` in `cols`.
    pub fn apply_left(&self, m: &mut CMatrix, r0: usize, cols: std::ops::Range<usize>) {
        if self.tau == ZERO {
            return;
        }
        let tau_c = self.tau.conj();
        for c in cols {
            let col = &mut m.col_mut(c)[r0..r0 + self.v.len()];
            let w: C64 = self.v.iter().zip(col.iter()).map(|(v, x)| v.conj() * x).sum();
            let f = tau_c * w;
            for (x, v) in col.iter_mut().zip(&self.v) {
                *x -= f * v;
            }
        }
    }

    /// `M[r, c0..] ← M[r, c0..] H` for every row `r` in `rows`.
    pub fn apply_right(&self, m: &mut CMatrix, c0: usize, rows: std::ops::Range<usize>) {
        if self.tau == ZERO {
            return;
        }
        for r in rows {
            let w: C64 = self
                .v
                .iter()
                .enumerate()
                .map(|(k, v)| m[(r, c0 + k)] * v)
                .sum();
            let f = w * self.tau;
            for (k, v) in self.v.iter().enumerate() {
                m[(r, c0 + k)] -= f * v.conj();
            }
        }
    }
}

/// Full QR factorization `A = Q R` with `Q` unitary `m × m` and `R` upper
/// trapezoidal `m × n`.
pub fn qr(a: &CMatrix) -> (CMatrix, CMatrix) {
    let (m, n) = a.shape();
    let mut r = a.clone();
    let mut q = CMatrix::identity(m);
    for j in 0..n.min(m.saturating_sub(1)) {
        let refl = householder(&r.col(j)[j..]);
        refl.apply_left(&mut r, j, j + 1..n);
        r[(j, j)] = C64::new(refl.beta, 0.0);
        for i in j + 1..m {
            r[(i, j)] = ZERO;
        }
        refl.apply_right(&mut q, j, 0..m);
    }
    (q, r)
}

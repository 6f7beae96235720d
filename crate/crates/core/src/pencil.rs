//! The pencil data model: scaling, squarification and normal rank.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rank_report, RankTol};
use crate::matrix::{CMatrix, C64};
use crate::rng::{self, Rng};

/// A matrix pencil `A - λB` with `A`, `B` of equal shape.
///
/// `scale_alpha` and `scale_beta` remember by how much `A` and `B` were
/// divided, so eigenvalues of the scaled pencil map back to the original one
/// through [`Pencil::back_factor`].
#[derive(Clone, Debug, PartialEq)]
pub struct Pencil {
    pub a: CMatrix,
    pub b: CMatrix,
    pub scale_alpha: f64,
    pub scale_beta: f64,
    pub scaled: bool,
}

impl Pencil {
    pub fn new(a: CMatrix, b: CMatrix) -> Result<Self> {
        a.check_same_shape(&b, "pencil")?;
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument("pencil has non-finite entries".into()));
        }
        Ok(Self {
            a,
            b,
            scale_alpha: 1.0,
            scale_beta: 1.0,
            scaled: false,
        })
    }

    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    pub fn is_square(&self) -> bool {
        self.a.is_square()
    }

    /// Divides `A` and `B` by their 1-norms.
    pub fn scale(&self) -> Result<Pencil> {
        let alpha = self.a.norm_one();
        let beta = self.b.norm_one();
        if alpha == 0.0 || beta == 0.0 {
            return Err(Error::InvalidArgument(format!(
                "cannot scale a pencil with a zero matrix (‖A‖₁ = {alpha}, ‖B‖₁ = {beta})"
            )));
        }
        Ok(Pencil {
            a: self.a.scale_real(1.0 / alpha),
            b: self.b.scale_real(1.0 / beta),
            scale_alpha: self.scale_alpha * alpha,
            scale_beta: self.scale_beta * beta,
            scaled: true,
        })
    }

    /// Factor mapping eigenvalues of this pencil back to the unscaled one.
    pub fn back_factor(&self) -> f64 {
        self.scale_alpha / self.scale_beta
    }

    /// Pads with zero rows or columns to a square pencil of size `max(rows, cols)`.
    pub fn squarify(&self) -> Pencil {
        if self.is_square() {
            return self.clone();
        }
        let n = self.rows().max(self.cols());
        Pencil {
            a: self.a.padded(n, n),
            b: self.b.padded(n, n),
            ..*self
        }
    }

    /// Normal rank, estimated as the largest rank of `A - ζB` over random
    /// probes `ζ` on the unit circle.
    ///
    /// An unscaled pencil is normalized internally first; zero matrices are
    /// left as they are.
    pub fn normal_rank(&self, rng: &mut Rng, tol: RankTol, probes: usize) -> Result<NormalRankReport> {
        let normalize = |m: &CMatrix| {
            let nrm = m.norm_one();
            if self.scaled || nrm == 0.0 {
                m.clone()
            } else {
                m.scale_real(1.0 / nrm)
            }
        };
        let a = normalize(&self.a);
        let b = normalize(&self.b);

        let probes = probes.max(1);
        let mut zeta_samples = Vec::with_capacity(probes);
        let mut best = (0, 0.0);
        for i in 0..probes {
            let zeta = rng::unit_circle(rng);
            zeta_samples.push(zeta);
            let m = &a - &b.scale(zeta);
            let (r, t) = rank_report(&m, tol)?;
            if i == 0 || r > best.0 {
                best = (r, t);
            }
        }
        let size = self.rows().max(self.cols());
        Ok(NormalRankReport {
            nrank: best.0,
            k: size - best.0,
            zeta_samples,
            tol_used: best.1,
        })
    }
}

/// Outcome of a normal-rank estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalRankReport {
    pub nrank: usize,
    /// Rank deficiency of the squarified pencil: `max(rows, cols) - nrank`.
    pub k: usize,
    pub zeta_samples: Vec<C64>,
    pub tol_used: f64,
}

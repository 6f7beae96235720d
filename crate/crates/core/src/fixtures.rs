//! Reference problems with known answers.

use crate::matrix::{CMatrix, C64};
use crate::pencil::Pencil;
use crate::two_param::TwoParamProblem;

fn pencil(a: &[&[f64]], b: &[&[f64]]) -> Pencil {
    Pencil::new(CMatrix::from_real_rows(a), CMatrix::from_real_rows(b)).expect("fixture shapes")
}

/// `diag(1,2,3,0,0,0) - λ diag(2,3,4,0,0,0)`: regular part with eigenvalues
/// 1/2, 2/3, 3/4 and three zero rows and columns.
pub fn intro_diagonal() -> Pencil {
    Pencil::new(
        CMatrix::from_real_diag(&[1.0, 2.0, 3.0, 0.0, 0.0, 0.0]),
        CMatrix::from_real_diag(&[2.0, 3.0, 4.0, 0.0, 0.0, 0.0]),
    )
    .expect("fixture shapes")
}

/// `diag(1, 0) - λ diag(1, 0)`: eigenvalue 1 plus an `L₀`, `L₀ᵀ` pair.
pub fn intro_2x2() -> Pencil {
    pencil(&[&[1.0, 0.0], &[0.0, 0.0]], &[&[1.0, 0.0], &[0.0, 0.0]])
}

/// 7×7 pencil with Kronecker blocks `J₁(1/2)`, `J₁(1/3)`, `N₁`, `L₁`, `L₂ᵀ`.
pub fn blocks7() -> Pencil {
    pencil(
        &[
            &[-1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0],
            &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            &[1.0, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0],
            &[1.0, 2.0, 3.0, 3.0, 3.0, 3.0, 3.0],
            &[1.0, 2.0, 3.0, 2.0, 2.0, 2.0, 2.0],
            &[1.0, 2.0, 3.0, 4.0, 3.0, 3.0, 3.0],
            &[1.0, 2.0, 3.0, 4.0, 5.0, 5.0, 4.0],
        ],
        &[
            &[-2.0, -2.0, -2.0, -2.0, -2.0, -2.0, -2.0],
            &[2.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0],
            &[2.0, 5.0, 5.0, 5.0, 5.0, 5.0, 5.0],
            &[2.0, 5.0, 5.0, 4.0, 4.0, 4.0, 4.0],
            &[2.0, 5.0, 5.0, 6.0, 5.0, 5.0, 5.0],
            &[2.0, 5.0, 5.0, 6.0, 7.0, 7.0, 7.0],
            &[2.0, 5.0, 5.0, 6.0, 7.0, 6.0, 6.0],
        ],
    )
}

/// 4×5 control-theory pencil with blocks `L₂`, `J₁(1)`, `J₁(2)`.
pub fn control() -> Pencil {
    pencil(
        &[
            &[1.0, -2.0, 100.0, 0.0, 0.0],
            &[1.0, 0.0, -1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0, -75.0],
            &[0.0, 0.0, 0.0, 0.0, 2.0],
        ],
        &[
            &[0.0, 1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0, 1.0],
        ],
    )
}

/// Value of `δ` used in [`near_double`].
pub const NEAR_DOUBLE_DELTA: f64 = 1.5e-8;

/// 3×4 pencil with blocks `J₂(0)` and `L₁`, parametrized by `δ`.
pub fn near_double(delta: f64) -> Pencil {
    pencil(
        &[&[0.0, 0.0, 1.0, 0.0], &[0.0, 0.0, 0.0, 1.0], &[0.0, 0.0, 0.0, 0.0]],
        &[&[delta, 0.0, 0.0, 0.0], &[0.0, delta, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0]],
    )
}

/// Coefficients of the cubic pair solved by [`bivariate_cubic_2ep`], in the
/// monomial order `1, λ, μ, λ², λμ, μ², λ³, λ²μ, λμ², μ³`.
pub const CUBIC_P1: [f64; 10] = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0];
pub const CUBIC_P2: [f64; 10] = [10.0, 9.0, 8.0, 7.0, 6.0, 5.0, 4.0, 3.0, 2.0, 1.0];

/// Evaluates a bivariate cubic with coefficients in the [`CUBIC_P1`] order.
pub fn eval_cubic(coef: &[f64; 10], l: C64, m: C64) -> C64 {
    let mono = [
        C64::new(1.0, 0.0),
        l,
        m,
        l * l,
        l * m,
        m * m,
        l * l * l,
        l * l * m,
        l * m * m,
        m * m * m,
    ];
    coef.iter().zip(mono).map(|(&c, x)| x * c).sum()
}

/// Uniform determinantal representation of the cubic pair: `det(Aᵢ + λBᵢ + μCᵢ)`
/// equals `pᵢ(λ, μ)` up to sign.
pub fn bivariate_cubic_2ep() -> TwoParamProblem {
    // entries are (constant, λ, μ) coefficients
    type Lin = (f64, f64, f64);
    fn split(m: [[Lin; 5]; 5]) -> (CMatrix, CMatrix, CMatrix) {
        let pick = |k: usize| {
            CMatrix::from_fn(5, 5, |i, j| {
                let (c, l, u) = m[i][j];
                C64::new([c, l, u][k], 0.0)
            })
        };
        (pick(0), pick(1), pick(2))
    }
    const Z: Lin = (0.0, 0.0, 0.0);
    const ONE: Lin = (1.0, 0.0, 0.0);
    const NEG_L: Lin = (0.0, -1.0, 0.0);
    const NEG_M: Lin = (0.0, 0.0, -1.0);
    let m1 = [
        [Z, Z, (4.0, 7.0, 0.0), ONE, Z],
        [Z, (5.0, 8.0, 0.0), (2.0, 0.0, 0.0), NEG_L, ONE],
        [(6.0, 9.0, 10.0), (3.0, 0.0, 0.0), ONE, Z, NEG_L],
        [ONE, NEG_M, Z, Z, Z],
        [Z, ONE, NEG_M, Z, Z],
    ];
    let m2 = [
        [Z, Z, (7.0, 4.0, 0.0), ONE, Z],
        [Z, (6.0, 3.0, 0.0), (9.0, 0.0, 0.0), NEG_L, ONE],
        [(5.0, 2.0, 1.0), (8.0, 0.0, 0.0), (10.0, 0.0, 0.0), Z, NEG_L],
        [ONE, NEG_M, Z, Z, Z],
        [Z, ONE, NEG_M, Z, Z],
    ];
    let (a1, b1, c1) = split(m1);
    let (a2, b2, c2) = split(m2);
    TwoParamProblem::new(a1, b1, c1, a2, b2, c2).expect("fixture shapes")
}

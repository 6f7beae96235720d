//! Finite eigenvalues of singular matrix pencils.
//!
//! A square pencil `A - λB` whose determinant vanishes identically is made
//! regular by adding a random perturbation of rank `k = n - nrank(A, B)`.
//! The perturbed spectrum contains the original eigenvalues unchanged, `k`
//! prescribed eigenvalues planted by the perturbation, and random ones coming
//! from the singular part. Left and right eigenvectors of true eigenvalues are
//! orthogonal to the perturbation subspaces, which is how they are told apart.
//!
//! On top of that core the crate solves singular two-parameter eigenvalue
//! problems, finds parameter values where `A + λB` has a double eigenvalue,
//! and generates test pencils with a prescribed Kronecker structure.

pub mod error;
pub mod fixtures;
pub mod kcf;
pub mod linalg;
pub mod matrix;
pub mod mtx;
pub mod pencil;
pub mod rng;
pub mod solver;
pub mod two_param;

pub use error::{Error, Result};
pub use linalg::{generalized_eig, EigDecomposition, HomogeneousEigenvalue, RankTol};
pub use matrix::{CMatrix, C64};
pub use pencil::{NormalRankReport, Pencil};
pub use solver::{EigenClass, EigenRecord, SolveOptions, SolveResult};

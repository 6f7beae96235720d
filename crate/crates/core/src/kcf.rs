//! Test pencils with a prescribed Kronecker canonical form.
//!
//! Blocks are laid out block-diagonally (regular blocks first, then `L_m`,
//! then `L_nᵀ`) and the result is optionally hidden by a strict equivalence
//! `P (A - λB) Q`.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::random_unitary;
use crate::matrix::{CMatrix, C64};
use crate::pencil::Pencil;
use crate::rng::Rng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KcfBlock {
    /// `J_size(eigenvalue)`: `(λ₀I + N) - λI`.
    Jordan { size: usize, eigenvalue: C64 },
    /// `N_size`: `I - λN`, an infinite eigenvalue of multiplicity `size`.
    Nilpotent { size: usize },
    /// `L_m = [0 I_m] - λ[I_m 0]`, `m × (m+1)`.
    RightSingular { m: usize },
    /// `L_nᵀ`, `(n+1) × n`.
    LeftSingular { n: usize },
}

impl KcfBlock {
    pub fn shape(&self) -> (usize, usize) {
        match *self {
            KcfBlock::Jordan { size, .. } | KcfBlock::Nilpotent { size } => (size, size),
            KcfBlock::RightSingular { m } => (m, m + 1),
            KcfBlock::LeftSingular { n } => (n + 1, n),
        }
    }

    fn order(&self) -> u8 {
        match self {
            KcfBlock::Jordan { .. } | KcfBlock::Nilpotent { .. } => 0,
            KcfBlock::RightSingular { .. } => 1,
            KcfBlock::LeftSingular { .. } => 2,
        }
    }

    /// The canonical `(A, B)` of this block.
    pub fn matrices(&self) -> (CMatrix, CMatrix) {
        let (rows, cols) = self.shape();
        let one = C64::new(1.0, 0.0);
        let mut a = CMatrix::zeros(rows, cols);
        let mut b = CMatrix::zeros(rows, cols);
        match *self {
            KcfBlock::Jordan { size, eigenvalue } => {
                for i in 0..size {
                    a[(i, i)] = eigenvalue;
                    b[(i, i)] = one;
                    if i + 1 < size {
                        a[(i, i + 1)] = one;
                    }
                }
            }
            KcfBlock::Nilpotent { size } => {
                for i in 0..size {
                    a[(i, i)] = one;
                    if i + 1 < size {
                        b[(i, i + 1)] = one;
                    }
                }
            }
            KcfBlock::RightSingular { m } => {
                for i in 0..m {
                    a[(i, i + 1)] = one;
                    b[(i, i)] = one;
                }
            }
            KcfBlock::LeftSingular { n } => {
                for j in 0..n {
                    a[(j + 1, j)] = one;
                    b[(j, j)] = one;
                }
            }
        }
        (a, b)
    }
}

/// How the canonical form is disguised.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Transform {
    /// The canonical form itself.
    None,
    /// `P`, `Q` Haar-random unitary.
    #[default]
    Unitary,
    /// `P`, `Q` with 2-norm condition number exactly `condition`.
    General { condition: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KcfSpec {
    pub blocks: Vec<KcfBlock>,
    #[serde(default)]
    pub transform: Transform,
    /// Require equally many `L_m` and `L_nᵀ` blocks so the pencil is square.
    #[serde(default = "default_true")]
    pub square: bool,
}

fn default_true() -> bool {
    true
}

impl KcfSpec {
    pub fn new(blocks: Vec<KcfBlock>, transform: Transform) -> Self {
        Self {
            blocks,
            transform,
            square: true,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        self.blocks.iter().fold((0, 0), |(r, c), b| {
            let (br, bc) = b.shape();
            (r + br, c + bc)
        })
    }

    fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::InvalidArgument("KCF spec has no blocks".into()));
        }
        for b in &self.blocks {
            match *b {
                KcfBlock::Jordan { size: 0, .. } | KcfBlock::Nilpotent { size: 0 } => {
                    return Err(Error::InvalidArgument(format!("{b:?}: regular blocks need size ≥ 1")));
                }
                KcfBlock::Jordan { eigenvalue, .. } if !eigenvalue.is_finite() => {
                    return Err(Error::InvalidArgument(format!("{b:?}: eigenvalue must be finite")));
                }
                _ => {}
            }
        }
        if let Transform::General { condition } = self.transform {
            if !(condition >= 1.0 && condition.is_finite()) {
                return Err(Error::InvalidArgument(format!("condition bound {condition} must be ≥ 1")));
            }
        }
        let (rows, cols) = self.shape();
        if self.square && rows != cols {
            return Err(Error::InvalidArgument(format!(
                "square pencil needs as many L_m as L_nᵀ blocks (got a {rows}×{cols} structure)"
            )));
        }
        Ok(())
    }
}

/// What the block structure says about the pencil.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    /// Finite eigenvalues, repeated by algebraic multiplicity.
    pub finite: Vec<C64>,
    pub infinite: usize,
    pub rows: usize,
    pub cols: usize,
    pub nrank: usize,
    /// Size of the regular part.
    pub r: usize,
    /// `max(rows, cols) - nrank`.
    pub k: usize,
    /// Sum of right minimal indices.
    pub m_sum: usize,
    /// Sum of left minimal indices.
    pub n_sum: usize,
    pub right_indices: Vec<usize>,
    pub left_indices: Vec<usize>,
}

pub fn oracle_eigenvalues(spec: &KcfSpec) -> GroundTruth {
    let (rows, cols) = spec.shape();
    let mut g = GroundTruth {
        finite: Vec::new(),
        infinite: 0,
        rows,
        cols,
        nrank: 0,
        r: 0,
        k: 0,
        m_sum: 0,
        n_sum: 0,
        right_indices: Vec::new(),
        left_indices: Vec::new(),
    };
    for b in &spec.blocks {
        match *b {
            KcfBlock::Jordan { size, eigenvalue } => {
                g.finite.extend(std::iter::repeat_n(eigenvalue, size));
                g.r += size;
                g.nrank += size;
            }
            KcfBlock::Nilpotent { size } => {
                g.infinite += size;
                g.r += size;
                g.nrank += size;
            }
            KcfBlock::RightSingular { m } => {
                g.right_indices.push(m);
                g.m_sum += m;
                g.nrank += m;
            }
            KcfBlock::LeftSingular { n } => {
                g.left_indices.push(n);
                g.n_sum += n;
                g.nrank += n;
            }
        }
    }
    g.k = rows.max(cols) - g.nrank;
    g
}

/// Invertible matrix `U₁ diag(σ) U₂` with `σ` log-spaced from 1 down to `1/c`.
fn conditioned(n: usize, c: f64, rng: &mut Rng) -> CMatrix {
    let u1 = random_unitary(n, rng);
    let u2 = random_unitary(n, rng);
    let sigma: Vec<f64> = (0..n)
        .map(|i| if n == 1 { 1.0 } else { c.powf(-(i as f64) / (n - 1) as f64) })
        .collect();
    let mut d = u1;
    for (j, s) in sigma.iter().enumerate() {
        for z in d.col_mut(j) {
            *z *= *s;
        }
    }
    &d * &u2
}

pub fn build(spec: &KcfSpec, rng: &mut Rng) -> Result<(Pencil, GroundTruth)> {
    spec.validate()?;
    let (rows, cols) = spec.shape();
    let mut blocks: Vec<&KcfBlock> = spec.blocks.iter().collect();
    blocks.sort_by_key(|b| b.order());

    let mut a = CMatrix::zeros(rows, cols);
    let mut b = CMatrix::zeros(rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for blk in blocks {
        let (ba, bb) = blk.matrices();
        a.set_block(r0, c0, &ba);
        b.set_block(r0, c0, &bb);
        r0 += ba.rows();
        c0 += ba.cols();
    }

    let (p, q) = match spec.transform {
        Transform::None => (None, None),
        Transform::Unitary => (Some(random_unitary(rows, rng)), Some(random_unitary(cols, rng))),
        Transform::General { condition } => (Some(conditioned(rows, condition, rng)), Some(conditioned(cols, condition, rng))),
    };
    if let (Some(p), Some(q)) = (p, q) {
        a = &(&p * &a) * &q;
        b = &(&p * &b) * &q;
    }
    Ok((Pencil::new(a, b)?, oracle_eigenvalues(spec)))
}

/// A random square spec of total size at most `max_size` (at least 8) with
/// simple finite eigenvalues, at most two `N_1` blocks and zero to three pairs
/// of singular blocks with indices up to 4.
///
/// Finite eigenvalues are drawn from the disk of radius 3 with pairwise
/// distance at least 0.2.
pub fn random_spec(rng: &mut Rng, max_size: usize, transform: Transform) -> KcfSpec {
    let max_size = max_size.max(8);
    let mut blocks = Vec::new();
    let mut size = 0;
    for _ in 0..rng.random_range(0..=3usize) {
        let m = rng.random_range(0..=4usize);
        let n = rng.random_range(0..=4usize);
        if size + m + n + 1 > max_size {
            break;
        }
        size += m + n + 1;
        blocks.push(KcfBlock::RightSingular { m });
        blocks.push(KcfBlock::LeftSingular { n });
    }
    for _ in 0..rng.random_range(0..=2usize) {
        if size < max_size {
            size += 1;
            blocks.push(KcfBlock::Nilpotent { size: 1 });
        }
    }
    let want = rng.random_range(1..=10usize).min(max_size - size).max(1);
    let mut eigs: Vec<C64> = Vec::new();
    while eigs.len() < want {
        let z = C64::from_polar(3.0 * rng.random::<f64>().sqrt(), std::f64::consts::TAU * rng.random::<f64>());
        if eigs.iter().all(|e| (e - z).norm() >= 0.2) {
            eigs.push(z);
        }
    }
    blocks.extend(eigs.into_iter().map(|eigenvalue| KcfBlock::Jordan { size: 1, eigenvalue }));
    KcfSpec::new(blocks, transform)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{singular_values, RankTol};
    use crate::rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn blocks7_spec(transform: Transform) -> KcfSpec {
        KcfSpec::new(
            vec![
                KcfBlock::Jordan { size: 1, eigenvalue: c(0.5) },
                KcfBlock::Jordan { size: 1, eigenvalue: c(1.0 / 3.0) },
                KcfBlock::Nilpotent { size: 1 },
                KcfBlock::RightSingular { m: 1 },
                KcfBlock::LeftSingular { n: 2 },
            ],
            transform,
        )
    }

    #[test]
    fn block_matrices() {
        let (a, b) = KcfBlock::RightSingular { m: 2 }.matrices();
        assert_eq!(a, CMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]));
        assert_eq!(b, CMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]));
        let (a, b) = KcfBlock::LeftSingular { n: 2 }.matrices();
        assert_eq!(a, CMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]));
        assert_eq!(b, CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]));
        let (a, b) = KcfBlock::Jordan { size: 2, eigenvalue: c(5.0) }.matrices();
        assert_eq!(a, CMatrix::from_real_rows(&[&[5.0, 1.0], &[0.0, 5.0]]));
        assert_eq!(b, CMatrix::identity(2));
        assert_eq!(KcfBlock::RightSingular { m: 0 }.shape(), (0, 1));
    }

    #[test]
    fn oracle_readouts() {
        let g = oracle_eigenvalues(&KcfSpec::new(vec![KcfBlock::Jordan { size: 3, eigenvalue: c(5.0) }], Transform::None));
        assert_eq!(g.finite, vec![c(5.0); 3]);
        assert_eq!((g.r, g.k, g.nrank), (3, 0, 3));

        let g = oracle_eigenvalues(&KcfSpec::new(
            vec![KcfBlock::RightSingular { m: 0 }, KcfBlock::LeftSingular { n: 0 }],
            Transform::None,
        ));
        assert_eq!((g.rows, g.cols, g.nrank, g.k), (1, 1, 0, 1));
        assert!(g.finite.is_empty());

        let spec = KcfSpec::new(
            vec![KcfBlock::Nilpotent { size: 2 }, KcfBlock::RightSingular { m: 1 }, KcfBlock::LeftSingular { n: 1 }],
            Transform::Unitary,
        );
        let g = oracle_eigenvalues(&spec);
        assert_eq!((g.infinite, g.m_sum, g.n_sum, g.rows, g.nrank, g.k), (2, 1, 1, 5, 4, 1));
        let (p, _) = build(&spec, &mut rng::seeded(2)).unwrap();
        let nr = p.normal_rank(&mut rng::seeded(3), RankTol::Auto, 2).unwrap();
        assert_eq!(nr.nrank, g.nrank);
    }

    #[test]
    fn example_structures() {
        let mut g = rng::seeded(61);
        let (p, truth) = build(&blocks7_spec(Transform::Unitary), &mut g).unwrap();
        assert_eq!(p.a.shape(), (7, 7));
        assert_eq!((truth.nrank, truth.k, truth.infinite), (6, 1, 1));

        let spec = KcfSpec::new(
            vec![
                KcfBlock::RightSingular { m: 2 },
                KcfBlock::Jordan { size: 1, eigenvalue: c(1.0) },
                KcfBlock::Jordan { size: 1, eigenvalue: c(2.0) },
                KcfBlock::LeftSingular { n: 0 },
            ],
            Transform::None,
        );
        let (p, truth) = build(&spec, &mut g).unwrap();
        assert_eq!(p.a.shape(), (5, 5));
        assert_eq!(truth.finite, vec![c(1.0), c(2.0)]);

        let spec = KcfSpec {
            blocks: vec![KcfBlock::Jordan { size: 2, eigenvalue: c(0.0) }, KcfBlock::RightSingular { m: 1 }],
            transform: Transform::None,
            square: false,
        };
        let (p, truth) = build(&spec, &mut g).unwrap();
        assert_eq!(p.a.shape(), (3, 4));
        assert_eq!((truth.nrank, truth.k), (3, 1));
    }

    #[test]
    fn unbalanced_square_request_fails() {
        let spec = KcfSpec::new(vec![KcfBlock::RightSingular { m: 1 }], Transform::None);
        assert!(build(&spec, &mut rng::seeded(0)).is_err());
        assert!(build(&KcfSpec::new(vec![], Transform::None), &mut rng::seeded(0)).is_err());
        let zero = KcfSpec::new(vec![KcfBlock::Nilpotent { size: 0 }], Transform::None);
        assert!(build(&zero, &mut rng::seeded(0)).is_err());
    }

    #[test]
    fn general_transform_has_requested_condition() {
        let p = conditioned(6, 1e3, &mut rng::seeded(5));
        let s = singular_values(&p).unwrap();
        assert!((s[0] / s[5] / 1e3 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn spec_json_shape() {
        let spec = blocks7_spec(Transform::General { condition: 10.0 });
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains(r#"{"kind":"jordan","size":1,"eigenvalue":[0.5,0.0]}"#), "{text}");
        assert!(text.contains(r#""transform":{"kind":"general","condition":10.0}"#), "{text}");
        let back: KcfSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        let minimal: KcfSpec = serde_json::from_str(r#"{"blocks":[{"kind":"nilpotent","size":2}]}"#).unwrap();
        assert_eq!(minimal.transform, Transform::Unitary);
        assert!(minimal.square);
    }
}

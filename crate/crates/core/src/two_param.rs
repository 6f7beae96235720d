//! Singular two-parameter eigenvalue problems
//!
//! ```text
//! (A₁ + λB₁ + μC₁) x₁ = 0
//! (A₂ + λB₂ + μC₂) x₂ = 0
//! ```
//!
//! The `λ` components are the finite true eigenvalues of `Δ₁ - λΔ₀`. For each
//! of them the `μ` components are the eigenvalues shared by the two one
//! parameter pencils obtained by fixing `λ`.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, min_singular_triplet, rank_with_tol};
use crate::matrix::{CMatrix, C64};
use crate::pencil::{NormalRankReport, Pencil};
use crate::rng::{self, Rng};
use crate::solver::{solve_with_rng, SolveOptions, SolveResult};

#[derive(Clone, Debug, PartialEq)]
pub struct TwoParamProblem {
    pub a1: CMatrix,
    pub b1: CMatrix,
    pub c1: CMatrix,
    pub a2: CMatrix,
    pub b2: CMatrix,
    pub c2: CMatrix,
}

impl TwoParamProblem {
    pub fn new(a1: CMatrix, b1: CMatrix, c1: CMatrix, a2: CMatrix, b2: CMatrix, c2: CMatrix) -> Result<Self> {
        for (i, (a, b, c)) in [(&a1, &b1, &c1), (&a2, &b2, &c2)].into_iter().enumerate() {
            if !a.is_square() {
                return Err(Error::Dimension(format!("A{} is {}×{}, expected square", i + 1, a.rows(), a.cols())));
            }
            a.check_same_shape(b, "B")?;
            a.check_same_shape(c, "C")?;
            if !(a.is_finite() && b.is_finite() && c.is_finite()) {
                return Err(Error::InvalidArgument(format!("equation {} has non-finite entries", i + 1)));
            }
        }
        Ok(Self { a1, b1, c1, a2, b2, c2 })
    }

    fn equation(&self, i: usize) -> (&CMatrix, &CMatrix, &CMatrix) {
        match i {
            0 => (&self.a1, &self.b1, &self.c1),
            _ => (&self.a2, &self.b2, &self.c2),
        }
    }

    /// `A_i + λB_i + μC_i` for equation `i ∈ {0, 1}`.
    pub fn evaluate(&self, i: usize, lambda: C64, mu: C64) -> CMatrix {
        let (a, b, c) = self.equation(i);
        &(a + &b.scale(lambda)) + &c.scale(mu)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaTriple {
    pub d0: CMatrix,
    pub d1: CMatrix,
    pub d2: CMatrix,
}

pub fn operator_determinants(p: &TwoParamProblem) -> DeltaTriple {
    DeltaTriple {
        d0: &p.b1.kron(&p.c2) - &p.c1.kron(&p.b2),
        d1: &p.c1.kron(&p.a2) - &p.a1.kron(&p.c2),
        d2: &p.a1.kron(&p.b2) - &p.b1.kron(&p.a2),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eigenpair2EP {
    pub lambda: C64,
    pub mu: C64,
    /// `|μ⁽¹⁾ - μ⁽²⁾|` of the accepted pair.
    pub mu_discrepancy: f64,
    /// `σ_min(A₁ + λB₁ + μC₁)`
    pub residual1: f64,
    /// `σ_min(A₂ + λB₂ + μC₂)`
    pub residual2: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoParamOptions {
    /// Acceptance threshold on `|μ⁽¹⁾ - μ⁽²⁾|`.
    pub delta: f64,
    /// Accept the closest `μ` pair for every `λ` regardless of `delta`.
    pub unique_lambda: bool,
    pub solve: SolveOptions,
}

impl Default for TwoParamOptions {
    fn default() -> Self {
        Self {
            delta: f64::EPSILON.sqrt(),
            unique_lambda: false,
            solve: SolveOptions::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TwoParamSolution {
    pub pairs: Vec<Eigenpair2EP>,
    /// Finite true eigenvalues of `Δ₁ - λΔ₀`.
    pub lambdas: Vec<C64>,
    pub delta_nrank: NormalRankReport,
}

/// Greedy matching of two candidate lists: the globally closest unmatched pair
/// is taken first, ties going to the lower index in `mus1`, then in `mus2`.
/// Sorted by ascending discrepancy.
pub fn pair_mu_candidates(mus1: &[C64], mus2: &[C64]) -> Vec<(C64, C64, f64)> {
    let mut all: Vec<(f64, usize, usize)> = Vec::with_capacity(mus1.len() * mus2.len());
    for (i, a) in mus1.iter().enumerate() {
        for (j, b) in mus2.iter().enumerate() {
            all.push(((a - b).norm(), i, j));
        }
    }
    all.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut used1 = vec![false; mus1.len()];
    let mut used2 = vec![false; mus2.len()];
    let mut out = Vec::with_capacity(mus1.len().min(mus2.len()));
    for (d, i, j) in all {
        if !used1[i] && !used2[j] {
            used1[i] = true;
            used2[j] = true;
            out.push((mus1[i], mus2[j], d));
        }
    }
    out
}

/// Eigenvalues `μ` of `(A + λB) + μC`, i.e. of the pencil `(A + λB) - μ(-C)`.
/// `None` when `C = 0`: the equation then puts no constraint on `μ`.
fn mu_candidates(a: &CMatrix, b: &CMatrix, c: &CMatrix, lambda: C64, opts: &SolveOptions, rng: &mut Rng) -> Result<Option<Vec<C64>>> {
    if c.max_abs() == 0.0 {
        return Ok(None);
    }
    let m = a + &b.scale(lambda);
    if m.max_abs() == 0.0 {
        // μC x = 0 has the root μ = 0 with multiplicity rank(C)
        let r = rank_with_tol(c, opts.rank_tol)?;
        return Ok(Some(vec![C64::new(0.0, 0.0); r]));
    }
    let res = solve_with_rng(&Pencil::new(m, -c)?, opts, rng)?;
    Ok(Some(res.finite_true))
}

/// Groups values closer than `tol · max(1, |λ|)`; returns (mean, size) per group.
fn cluster(values: &[C64], tol: f64) -> Vec<(C64, usize)> {
    let mut groups: Vec<(C64, Vec<C64>)> = Vec::new();
    for &v in values {
        match groups.iter_mut().find(|(rep, _)| (rep - v).norm() <= tol * rep.norm().max(1.0)) {
            Some((_, members)) => members.push(v),
            None => groups.push((v, vec![v])),
        }
    }
    groups
        .into_iter()
        .map(|(_, m)| (m.iter().sum::<C64>() / m.len() as f64, m.len()))
        .collect()
}

/// Finite regular eigenvalues of a possibly singular 2EP.
///
/// Each distinct `λ` gets its own random stream `derive(base, j + 1)` with
/// `base` drawn from `rng`, so the result does not depend on loop order.
pub fn solve_2ep(p: &TwoParamProblem, opts: &TwoParamOptions, rng: &mut Rng) -> Result<TwoParamSolution> {
    if !(opts.delta > 0.0) {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {}", opts.delta)));
    }
    let delta = operator_determinants(p);
    let outer: SolveResult = solve_with_rng(&Pencil::new(delta.d1, delta.d0)?, &opts.solve, rng)?;
    let base: u64 = rng.random();

    let mut pairs = Vec::new();
    for (j, (lambda, mult)) in cluster(&outer.finite_true, opts.delta).into_iter().enumerate() {
        let mut sub = rng::derive(base, j as u64 + 1);
        let (a1, b1, c1) = p.equation(0);
        let (a2, b2, c2) = p.equation(1);
        let mus1 = mu_candidates(a1, b1, c1, lambda, &opts.solve, &mut sub)?;
        let mus2 = mu_candidates(a2, b2, c2, lambda, &opts.solve, &mut sub)?;

        let matched: Vec<(C64, f64)> = match (mus1, mus2) {
            (Some(m1), Some(m2)) => {
                let ranked = pair_mu_candidates(&m1, &m2);
                if opts.unique_lambda {
                    ranked.into_iter().take(1).map(|(x, y, d)| ((x + y) * 0.5, d)).collect()
                } else {
                    ranked
                        .into_iter()
                        .filter(|&(_, _, d)| d < opts.delta)
                        .take(mult)
                        .map(|(x, y, d)| ((x + y) * 0.5, d))
                        .collect()
                }
            }
            (Some(m), None) | (None, Some(m)) => m.into_iter().take(mult).map(|x| (x, 0.0)).collect(),
            (None, None) => Vec::new(),
        };

        for (mu, d) in matched {
            let residual1 = min_singular_triplet(&p.evaluate(0, lambda, mu))?.0;
            let residual2 = min_singular_triplet(&p.evaluate(1, lambda, mu))?.0;
            pairs.push(Eigenpair2EP {
                lambda,
                mu,
                mu_discrepancy: d,
                residual1,
                residual2,
            });
        }
    }
    Ok(TwoParamSolution {
        pairs,
        lambdas: outer.finite_true,
        delta_nrank: outer.nrank_report,
    })
}

/// `(Δ₁, Δ₀)` of size `3n² × 3n²` whose finite regular eigenvalues are the
/// `λ` for which `A + λB` has a double eigenvalue.
///
/// They are the operator determinants of the 2EP
/// `(A + λB - μI) x = 0`, `(P + λQ + μR) y = 0`, where
/// `det(P + λQ + μR) = det((A + λB - μI)²)`:
///
/// ```text
///     | A²  AB+BA  -2A |       | 0   B²  -B |       |  0  -B  I |
/// P = | 0     I     0  |   Q = | -I  0    0 |   R = |  0   0  0 |
///     | 0     0     I  |       | 0   0    0 |       | -I   0  0 |
/// ```
///
/// so `Δ₁ = -(A⊗R + I⊗P)` and `Δ₀ = B⊗R + I⊗Q`.
pub fn double_eig_linearization(a: &CMatrix, b: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let p = double_eig_problem(a, b)?;
    let d = operator_determinants(&p);
    Ok((d.d1, d.d0))
}

/// The 2EP behind [`double_eig_linearization`].
pub fn double_eig_problem(a: &CMatrix, b: &CMatrix) -> Result<TwoParamProblem> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("A is {}×{}, expected square", a.rows(), a.cols())));
    }
    a.check_same_shape(b, "B")?;
    let n = a.rows();
    let id = CMatrix::identity(n);
    let zero = CMatrix::zeros(n, n);
    let blocks = |m: [[&CMatrix; 3]; 3]| {
        let mut out = CMatrix::zeros(3 * n, 3 * n);
        for (i, row) in m.iter().enumerate() {
            for (j, blk) in row.iter().enumerate() {
                out.set_block(i * n, j * n, blk);
            }
        }
        out
    };
    let a2 = a * a;
    let b2 = b * b;
    let ab_ba = &(a * b) + &(b * a);
    let m2a = a.scale_real(-2.0);
    let mb = -b;
    let mi = -&id;
    let p = blocks([[&a2, &ab_ba, &m2a], [&zero, &id, &zero], [&zero, &zero, &id]]);
    let q = blocks([[&zero, &b2, &mb], [&mi, &zero, &zero], [&zero, &zero, &zero]]);
    let r = blocks([[&zero, &mb, &id], [&zero, &zero, &zero], [&mi, &zero, &zero]]);
    TwoParamProblem::new(a.clone(), b.clone(), mi, p, q, r)
}

#[derive(Clone, Debug)]
pub struct DoubleEigResult {
    pub values: Vec<C64>,
    /// Smallest distance between two eigenvalues of `A + λB`, per value.
    pub gaps: Vec<f64>,
    /// Finite true eigenvalues of the linearization before refinement.
    pub unrefined: Vec<C64>,
    pub unrefined_gaps: Vec<f64>,
    pub solve: SolveResult,
    /// The linearization does not have the generic normal rank `3n² - n`.
    pub degenerate: bool,
}

/// The two closest eigenvalues of `m`.
fn closest_pair(m: &CMatrix) -> Result<Option<(C64, C64)>> {
    let ev = eigenvalues(m)?;
    let mut best: Option<(f64, C64, C64)> = None;
    for i in 0..ev.len() {
        for j in i + 1..ev.len() {
            let d = (ev[i] - ev[j]).norm();
            if best.is_none_or(|b| d < b.0) {
                best = Some((d, ev[i], ev[j]));
            }
        }
    }
    Ok(best.map(|(_, x, y)| (x, y)))
}

/// Smallest pairwise distance between eigenvalues of `m`.
pub fn min_eigen_gap(m: &CMatrix) -> Result<f64> {
    Ok(closest_pair(m)?.map_or(f64::INFINITY, |(x, y)| (x - y).norm()))
}

/// Secant iteration on `(μ₁ - μ₂)²`, the squared distance of the closest
/// eigenvalue pair of `A + λB`, which has a simple zero at a double eigenvalue.
/// Returns the iterate with the smallest gap, starting from `lambda`.
pub fn refine_double_eigenvalue(a: &CMatrix, b: &CMatrix, lambda: C64) -> Result<(C64, f64)> {
    let disc = |l: C64| -> Result<C64> {
        Ok(closest_pair(&(a + &b.scale(l)))?.map_or(C64::new(f64::INFINITY, 0.0), |(x, y)| (x - y) * (x - y)))
    };
    let mut best = (lambda, disc(lambda)?.norm().sqrt());
    let mut l0 = lambda;
    let mut f0 = disc(l0)?;
    let mut l1 = lambda + 1e-8 * lambda.norm().max(1.0);
    let mut f1 = disc(l1)?;
    for _ in 0..30 {
        let gap = f1.norm().sqrt();
        if gap < best.1 {
            best = (l1, gap);
        }
        let df = f1 - f0;
        if df.norm() == 0.0 || !df.is_finite() {
            break;
        }
        let step = f1 * (l1 - l0) / df;
        if !step.is_finite() || step.norm() <= 4.0 * f64::EPSILON * l1.norm().max(1.0) {
            break;
        }
        (l0, f0) = (l1, f1);
        l1 -= step;
        f1 = disc(l1)?;
    }
    Ok(best)
}

/// Values `λ` at which `A + λB` has a multiple eigenvalue.
///
/// With `refine`, each finite true eigenvalue of the linearization is polished
/// by [`refine_double_eigenvalue`]; the result is kept only if its gap is not
/// larger than the unrefined one.
pub fn double_eig(a: &CMatrix, b: &CMatrix, opts: &SolveOptions, refine: bool, rng: &mut Rng) -> Result<DoubleEigResult> {
    let (d1, d0) = double_eig_linearization(a, b)?;
    let n = a.rows();
    let solve = solve_with_rng(&Pencil::new(d1, d0)?, opts, rng)?;
    let degenerate = solve.nrank_report.nrank != 3 * n * n - n;
    let unrefined = solve.finite_true.clone();
    let unrefined_gaps: Vec<f64> = unrefined
        .iter()
        .map(|&l| min_eigen_gap(&(a + &b.scale(l))))
        .collect::<Result<_>>()?;
    let mut values = unrefined.clone();
    let mut gaps = unrefined_gaps.clone();
    if refine {
        for (v, g) in values.iter_mut().zip(gaps.iter_mut()) {
            let (l, gap) = refine_double_eigenvalue(a, b, *v)?;
            if gap <= *g {
                (*v, *g) = (l, gap);
            }
        }
    }
    Ok(DoubleEigResult {
        values,
        gaps,
        unrefined,
        unrefined_gaps,
        solve,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn scalar(x: f64) -> CMatrix {
        CMatrix::from_real_diag(&[x])
    }

    #[test]
    fn delta_identity_case() {
        let z = CMatrix::zeros(2, 2);
        let i = CMatrix::identity(2);
        let p = TwoParamProblem::new(z.clone(), i.clone(), z.clone(), z.clone(), z.clone(), i).unwrap();
        let d = operator_determinants(&p);
        assert_eq!(d.d0, CMatrix::identity(4));
    }

    #[test]
    fn scalar_problem_is_cramer() {
        // 2 + 1λ + 3μ = 0, 1 − 1λ + 2μ = 0  →  λ = −1/5, μ = −3/5
        let p = TwoParamProblem::new(scalar(2.0), scalar(1.0), scalar(3.0), scalar(1.0), scalar(-1.0), scalar(2.0)).unwrap();
        let d = operator_determinants(&p);
        let (l, m) = (d.d1[(0, 0)] / d.d0[(0, 0)], d.d2[(0, 0)] / d.d0[(0, 0)]);
        assert!((l - c(-0.2)).norm() < 1e-15 && (m - c(-0.6)).norm() < 1e-15);

        let s = solve_2ep(&p, &TwoParamOptions::default(), &mut rng::seeded(0)).unwrap();
        assert_eq!(s.pairs.len(), 1);
        assert!((s.pairs[0].lambda - c(-0.2)).norm() < 1e-14);
        assert!((s.pairs[0].mu - c(-0.6)).norm() < 1e-14);
    }

    #[test]
    fn decoupled_problem() {
        let z = CMatrix::zeros(2, 2);
        let i = CMatrix::identity(2);
        let p = TwoParamProblem::new(
            CMatrix::from_real_diag(&[1.0, 2.0]),
            -&i,
            z.clone(),
            CMatrix::from_real_diag(&[3.0, 4.0]),
            z,
            -&i,
        )
        .unwrap();
        let s = solve_2ep(&p, &TwoParamOptions::default(), &mut rng::seeded(0)).unwrap();
        let mut got: Vec<(f64, f64)> = s.pairs.iter().map(|e| (e.lambda.re, e.mu.re)).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let want = [(1.0, 3.0), (1.0, 4.0), (2.0, 3.0), (2.0, 4.0)];
        assert_eq!(got.len(), 4);
        for (g, w) in got.iter().zip(&want) {
            assert!((g.0 - w.0).abs() < 1e-12 && (g.1 - w.1).abs() < 1e-12, "{got:?}");
        }
    }

    #[test]
    fn pairing_examples() {
        let p = pair_mu_candidates(&[c(1.0), c(5.0)], &[c(5.0001), c(0.9999)]);
        assert_eq!(p.len(), 2);
        assert!(p.contains(&(c(1.0), c(0.9999), (c(1.0) - c(0.9999)).norm())));
        assert!(p.contains(&(c(5.0), c(5.0001), (c(5.0) - c(5.0001)).norm())));
        assert!(p.iter().all(|x| (x.2 - 1e-4).abs() < 1e-12));
        assert!(p[0].2 <= p[1].2);
        assert!(pair_mu_candidates(&[], &[c(3.0)]).is_empty());

        let p = pair_mu_candidates(&[c(2.0), c(2.1)], &[c(2.05)]);
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].0, c(2.0));

        // exact tie: lower index in the first list wins
        let p = pair_mu_candidates(&[c(1.0), c(3.0)], &[c(2.0)]);
        assert_eq!(p[0].0, c(1.0));
    }

    #[test]
    fn cubic_fixture_matches_polynomials() {
        let p = fixtures::bivariate_cubic_2ep();
        let mut g = rng::seeded(1);
        for _ in 0..5 {
            let l = rng::complex_normal(&mut g);
            let m = rng::complex_normal(&mut g);
            for (i, coef) in [fixtures::CUBIC_P1, fixtures::CUBIC_P2].iter().enumerate() {
                let det: C64 = eigenvalues(&p.evaluate(i, l, m)).unwrap().iter().product();
                let want = fixtures::eval_cubic(coef, l, m);
                assert!((det - want).norm() < 1e-9 * want.norm().max(1.0) || (det + want).norm() < 1e-9 * want.norm().max(1.0), "{det} vs {want}");
            }
        }
    }

    #[test]
    fn linearization_shape_and_rank() {
        let mut g = rng::seeded(3);
        let a = rng::complex_gaussian_matrix(2, 2, &mut g);
        let b = rng::complex_gaussian_matrix(2, 2, &mut g);
        let (d1, d0) = double_eig_linearization(&a, &b).unwrap();
        assert_eq!(d1.shape(), (12, 12));
        let nr = Pencil::new(d1, d0).unwrap().normal_rank(&mut g, crate::linalg::RankTol::Auto, 2).unwrap();
        assert_eq!(nr.nrank, 10);
        assert!(double_eig_linearization(&a, &CMatrix::identity(3)).is_err());

        // the second equation linearizes the square of the first
        let p = double_eig_problem(&a, &b).unwrap();
        for _ in 0..3 {
            let (l, m) = (rng::complex_normal(&mut g), rng::complex_normal(&mut g));
            let lin: C64 = eigenvalues(&p.evaluate(1, l, m)).unwrap().iter().product();
            let first: C64 = eigenvalues(&p.evaluate(0, l, m)).unwrap().iter().product();
            assert!((lin - first * first).norm() < 1e-10 * lin.norm().max(1.0));
        }
    }

    #[test]
    fn double_eig_nilpotent_example() {
        let a = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let b = CMatrix::from_real_diag(&[1.0, -1.0]);
        let r = double_eig(&a, &b, &SolveOptions::default(), true, &mut rng::seeded(0)).unwrap();
        assert!(!r.values.is_empty());
        assert!(r.values.iter().all(|l| l.norm() < 1e-6), "{:?}", r.values);
    }
}

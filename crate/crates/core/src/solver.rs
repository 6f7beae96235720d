//! Finite eigenvalues of a singular pencil by a rank-completing perturbation.
//!
//! The pencil is scaled to unit 1-norms, its normal rank `n - k` estimated,
//! and a random perturbation `τ U (D_A - λ D_B) Vᴴ` of rank `k` added. For each
//! eigentriple `(λ, x, y)` of the perturbed pencil the quantities
//! `s = yᴴ B̃ x`, `‖Vᴴx‖` and `‖Uᴴy‖` decide whether `λ` belongs to the original
//! pencil (both norms vanish), was planted by the perturbation (neither
//! vanishes), or comes from a singular block (exactly one vanishes).

use std::cmp::Ordering;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{generalized_eig, random_orthonormal, HomogeneousEigenvalue, RankTol};
use crate::matrix::{dotc, vec_norm, CMatrix, C64};
use crate::pencil::{NormalRankReport, Pencil};
use crate::rng::{self, Rng};

/// The rank-`k` perturbation `τ U diag(d_a) Vᴴ - λ τ U diag(d_b) Vᴴ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationSpec {
    pub u: CMatrix,
    pub v: CMatrix,
    pub d_a: Vec<C64>,
    pub d_b: Vec<C64>,
    pub tau: C64,
}

impl PerturbationSpec {
    pub fn k(&self) -> usize {
        self.d_a.len()
    }

    /// The planted eigenvalues `γᵢ = d_a[i] / d_b[i]`.
    pub fn prescribed(&self) -> Vec<HomogeneousEigenvalue> {
        self.d_a
            .iter()
            .zip(&self.d_b)
            .filter_map(|(&a, &b)| HomogeneousEigenvalue::new(a, b))
            .collect()
    }
}

/// How the diagonals of `D_A` and `D_B` are chosen.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaMode {
    /// Entries i.i.d. uniform on `[1, 2]`.
    #[default]
    #[serde(rename = "uniform_1_2")]
    Uniform12,
    Explicit { d_a: Vec<C64>, d_b: Vec<C64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveOptions {
    pub tau: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub seed: u64,
    pub gamma_mode: GammaMode,
    pub retry_on_collision: bool,
    pub max_retries: usize,
    pub rank_tol: RankTol,
    pub probes: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tau: 1e-2,
            delta1: f64::EPSILON.sqrt(),
            delta2: 1e2 * f64::EPSILON,
            seed: 0,
            gamma_mode: GammaMode::Uniform12,
            retry_on_collision: true,
            max_retries: 3,
            rank_tol: RankTol::Auto,
            probes: 2,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Error::InvalidArgument(format!("{what} must be positive and finite, got {v}"));
        if !(self.delta1 > 0.0 && self.delta1.is_finite()) {
            return Err(bad("delta1", self.delta1));
        }
        if !(self.delta2 > 0.0 && self.delta2.is_finite()) {
            return Err(bad("delta2", self.delta2));
        }
        if !(self.tau.is_finite() && self.tau != 0.0) {
            return Err(Error::InvalidArgument(format!("tau must be finite and nonzero, got {}", self.tau)));
        }
        if let RankTol::Value(t) = self.rank_tol {
            if !(t >= 0.0) {
                return Err(Error::InvalidArgument(format!("rank tolerance {t} must be nonnegative")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EigenClass {
    FiniteTrue,
    InfiniteTrue,
    Prescribed,
    /// Right eigenvector orthogonal to `V`, left one not: comes from an `L_p` block.
    RandomRight,
    /// Left eigenvector orthogonal to `U`, right one not: comes from an `L_pᵀ` block.
    RandomLeft,
    Unclassified,
}

impl EigenClass {
    pub fn is_true(self) -> bool {
        matches!(self, EigenClass::FiniteTrue | EigenClass::InfiniteTrue)
    }

    pub fn is_random(self) -> bool {
        matches!(self, EigenClass::RandomRight | EigenClass::RandomLeft)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EigenClass::FiniteTrue => "FiniteTrue",
            EigenClass::InfiniteTrue => "InfiniteTrue",
            EigenClass::Prescribed => "Prescribed",
            EigenClass::RandomRight => "RandomRight",
            EigenClass::RandomLeft => "RandomLeft",
            EigenClass::Unclassified => "Unclassified",
        }
    }
}

impl std::str::FromStr for EigenClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            EigenClass::FiniteTrue,
            EigenClass::InfiniteTrue,
            EigenClass::Prescribed,
            EigenClass::RandomRight,
            EigenClass::RandomLeft,
            EigenClass::Unclassified,
        ]
        .into_iter()
        .find(|c| c.as_str() == s)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown eigenvalue class `{s}`")))
    }
}

/// One eigenvalue of the perturbed pencil with its diagnostics.
///
/// `lambda` is mapped back to the coordinates of the original pencil; the
/// eigenvectors and diagnostics belong to the scaled, perturbed one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenRecord {
    pub lambda: HomogeneousEigenvalue,
    pub x: Vec<C64>,
    pub y: Vec<C64>,
    pub s_abs: f64,
    pub vx_norm: f64,
    pub uy_norm: f64,
    pub zeta: f64,
    pub class: EigenClass,
}

/// Table 1 sign pattern for one eigenvalue.
pub fn class_of(s_abs: f64, vx_norm: f64, uy_norm: f64, delta1: f64, delta2: f64) -> EigenClass {
    if !(s_abs.is_finite() && vx_norm.is_finite() && uy_norm.is_finite()) {
        return EigenClass::Unclassified;
    }
    match (vx_norm < delta1, uy_norm < delta1) {
        (true, true) if s_abs > delta2 => EigenClass::FiniteTrue,
        (true, true) => EigenClass::InfiniteTrue,
        (false, false) => EigenClass::Prescribed,
        (true, false) => EigenClass::RandomRight,
        (false, true) => EigenClass::RandomLeft,
    }
}

pub fn classify(records: &mut [EigenRecord], delta1: f64, delta2: f64) {
    for r in records {
        r.zeta = r.vx_norm.max(r.uy_norm);
        r.class = class_of(r.s_abs, r.vx_norm, r.uy_norm, delta1, delta2);
    }
}

/// Separation between the groups of a classified spectrum. `None` when a
/// group is empty.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub max_true_zeta: Option<f64>,
    pub min_nontrue_zeta: Option<f64>,
    pub max_infinite_s: Option<f64>,
    pub min_finite_s: Option<f64>,
    /// Records whose `ζ` or `|s|` is within a factor 10 of its threshold.
    pub near_threshold: Vec<usize>,
}

impl GapReport {
    pub fn from_records(records: &[EigenRecord], delta1: f64, delta2: f64) -> Self {
        let fold_max = |it: &mut dyn Iterator<Item = f64>| it.fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
        let fold_min = |it: &mut dyn Iterator<Item = f64>| it.fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.min(v))));
        let near = |v: f64, t: f64| v > t / 10.0 && v < t * 10.0;
        Self {
            max_true_zeta: fold_max(&mut records.iter().filter(|r| r.class.is_true()).map(|r| r.zeta)),
            min_nontrue_zeta: fold_min(&mut records.iter().filter(|r| !r.class.is_true()).map(|r| r.zeta)),
            max_infinite_s: fold_max(&mut records.iter().filter(|r| r.class == EigenClass::InfiniteTrue).map(|r| r.s_abs)),
            min_finite_s: fold_min(&mut records.iter().filter(|r| r.class == EigenClass::FiniteTrue).map(|r| r.s_abs)),
            near_threshold: records
                .iter()
                .enumerate()
                .filter(|(_, r)| near(r.zeta, delta1) || (r.zeta < delta1 && near(r.s_abs, delta2)))
                .map(|(i, _)| i)
                .collect(),
        }
    }

    /// `min ζ(non-true) / max ζ(true)`.
    pub fn zeta_separation(&self) -> Option<f64> {
        Some(self.min_nontrue_zeta? / self.max_true_zeta?)
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    /// All `n` eigenvalues, sorted by class and then by value.
    pub records: Vec<EigenRecord>,
    /// Back-scaled finite true eigenvalues, in the order of `records`.
    pub finite_true: Vec<C64>,
    pub nrank_report: NormalRankReport,
    /// `None` when the pencil was regular and solved without perturbation.
    pub spec_used: Option<PerturbationSpec>,
    pub gap_report: GapReport,
    /// A prescribed eigenvalue stayed too close to a true one after all retries.
    pub collision_warning: bool,
    pub retries: usize,
    /// `α/β`: multiply eigenvalues of the scaled pencil by this.
    pub back_factor: f64,
}

impl SolveResult {
    pub fn count(&self, class: EigenClass) -> usize {
        self.records.iter().filter(|r| r.class == class).count()
    }
}

/// Draws `U`, `V` and the diagonals of `D_A`, `D_B` for an `n × n` pencil with
/// rank deficiency `k`.
pub fn make_perturbation(n: usize, k: usize, opts: &SolveOptions, rng: &mut Rng) -> Result<PerturbationSpec> {
    if k == 0 {
        return Err(Error::InvalidArgument("rank deficiency k = 0: the pencil needs no perturbation".into()));
    }
    let u = random_orthonormal(n, k, rng)?;
    let v = random_orthonormal(n, k, rng)?;
    let (d_a, d_b) = match &opts.gamma_mode {
        GammaMode::Uniform12 => {
            let d_a = (0..k).map(|_| C64::new(rng::uniform(rng, 1.0, 2.0), 0.0)).collect();
            let d_b = (0..k).map(|_| C64::new(rng::uniform(rng, 1.0, 2.0), 0.0)).collect();
            (d_a, d_b)
        }
        GammaMode::Explicit { d_a, d_b } => {
            if d_a.len() != k || d_b.len() != k {
                return Err(Error::InvalidArgument(format!(
                    "explicit diagonals have lengths {} and {}, expected k = {k}",
                    d_a.len(),
                    d_b.len()
                )));
            }
            if d_a.iter().zip(d_b).any(|(a, b)| a.norm() == 0.0 && b.norm() == 0.0) {
                return Err(Error::InvalidArgument("D_A - λD_B must be regular".into()));
            }
            (d_a.clone(), d_b.clone())
        }
    };
    Ok(PerturbationSpec {
        u,
        v,
        d_a,
        d_b,
        tau: C64::new(opts.tau, 0.0),
    })
}

/// `(A + τ U D_A Vᴴ, B + τ U D_B Vᴴ)`.
pub fn perturb(p: &Pencil, spec: &PerturbationSpec) -> Result<Pencil> {
    if spec.tau == C64::new(0.0, 0.0) || !spec.tau.is_finite() {
        return Err(Error::InvalidArgument("tau must be finite and nonzero".into()));
    }
    let n = p.rows();
    let k = spec.k();
    if !p.is_square()
        || spec.u.shape() != (n, k)
        || spec.v.shape() != (n, k)
        || spec.d_b.len() != k
    {
        return Err(Error::Dimension(format!(
            "perturbation with U {:?}, V {:?}, {} + {} diagonal entries does not fit a {}×{} pencil",
            spec.u.shape(),
            spec.v.shape(),
            spec.d_a.len(),
            spec.d_b.len(),
            p.rows(),
            p.cols()
        )));
    }
    let vh = spec.v.adjoint();
    let low_rank = |d: &[C64]| {
        let mut ud = spec.u.clone();
        for (j, &dj) in d.iter().enumerate() {
            for z in ud.col_mut(j) {
                *z *= dj * spec.tau;
            }
        }
        &ud * &vh
    };
    Ok(Pencil {
        a: &p.a + &low_rank(&spec.d_a),
        b: &p.b + &low_rank(&spec.d_b),
        ..p.clone()
    })
}

/// Eigentriples of the perturbed pencil with diagnostics, classified.
/// `perturbed` holds `(Ã, B̃)`; `uv` is `None` for an unperturbed regular pencil.
fn diagnose(perturbed: &Pencil, uv: Option<(&CMatrix, &CMatrix)>, opts: &SolveOptions, back: f64) -> Result<Vec<EigenRecord>> {
    let dec = generalized_eig(&perturbed.a, &perturbed.b)?;
    let mut records: Vec<EigenRecord> = dec
        .pairs
        .into_iter()
        .map(|pair| {
            let bx = perturbed.b.matvec(&pair.right);
            let s_abs = dotc(&pair.left, &bx).norm();
            let (vx_norm, uy_norm) = match uv {
                Some((u, v)) => (vec_norm(&v.adjoint_matvec(&pair.right)), vec_norm(&u.adjoint_matvec(&pair.left))),
                None => (0.0, 0.0),
            };
            EigenRecord {
                lambda: pair.value.scaled(back),
                x: pair.right,
                y: pair.left,
                s_abs,
                vx_norm,
                uy_norm,
                zeta: 0.0,
                class: EigenClass::Unclassified,
            }
        })
        .collect();
    classify(&mut records, opts.delta1, opts.delta2);
    records.sort_by(record_order);
    Ok(records)
}

fn record_order(a: &EigenRecord, b: &EigenRecord) -> Ordering {
    let key = |r: &EigenRecord| r.lambda.lambda();
    a.class.cmp(&b.class).then_with(|| match (key(a), key(b)) {
        (Some(x), Some(y)) => x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    })
}

/// Does some prescribed `γᵢ` lie within `10·δ₁` of a finite true eigenvalue?
/// Both sides are compared in the coordinates of the scaled pencil.
///
/// A true eigenvalue sitting exactly on `γᵢ` mixes with it and may lose its
/// label, so two or more eigenvalues of any class near one `γᵢ` also count.
fn collides(records: &[EigenRecord], spec: &PerturbationSpec, back: f64, delta1: f64) -> bool {
    let radius = 10.0 * delta1;
    let finite: Vec<(EigenClass, C64)> = records
        .iter()
        .filter_map(|r| r.lambda.lambda().map(|l| (r.class, l / back)))
        .collect();
    spec.prescribed().iter().filter_map(|g| g.lambda()).any(|g| {
        let near = finite.iter().filter(|(_, l)| (g - l).norm() <= radius);
        let (mut count, mut hit_true) = (0, false);
        for (c, _) in near {
            count += 1;
            hit_true |= *c == EigenClass::FiniteTrue;
        }
        hit_true || count >= 2
    })
}

/// Runs the full pipeline with a generator seeded from `opts.seed`.
pub fn solve(p: &Pencil, opts: &SolveOptions) -> Result<SolveResult> {
    solve_with_rng(p, opts, &mut rng::seeded(opts.seed))
}

pub fn solve_with_rng(p: &Pencil, opts: &SolveOptions, rng: &mut Rng) -> Result<SolveResult> {
    opts.validate()?;
    let scaled = p.squarify().scale()?;
    let nrank_report = scaled.normal_rank(rng, opts.rank_tol, opts.probes)?;
    let k = nrank_report.k;
    let back = scaled.back_factor();

    let finish = |records: Vec<EigenRecord>, spec_used, collision_warning, retries, nrank_report| {
        let finite_true = records
            .iter()
            .filter(|r| r.class == EigenClass::FiniteTrue)
            .filter_map(|r| r.lambda.lambda())
            .collect();
        let gap_report = GapReport::from_records(&records, opts.delta1, opts.delta2);
        SolveResult {
            records,
            finite_true,
            nrank_report,
            spec_used,
            gap_report,
            collision_warning,
            retries,
            back_factor: back,
        }
    };

    if k == 0 {
        let records = diagnose(&scaled, None, opts, back)?;
        return Ok(finish(records, None, false, 0, nrank_report));
    }

    let mut retries = 0;
    loop {
        let spec = make_perturbation(scaled.rows(), k, opts, rng)?;
        let perturbed = perturb(&scaled, &spec)?;
        let records = diagnose(&perturbed, Some((&spec.u, &spec.v)), opts, back)?;
        let collision = collides(&records, &spec, back, opts.delta1);
        if collision && opts.retry_on_collision && retries < opts.max_retries {
            retries += 1;
            continue;
        }
        return Ok(finish(records, Some(spec), collision, retries, nrank_report));
    }
}

/// Solves with a caller-supplied perturbation of the scaled, squarified pencil.
/// Useful to compare runs that differ only in `τ`.
pub fn solve_with_spec(p: &Pencil, spec: &PerturbationSpec, opts: &SolveOptions) -> Result<Vec<EigenRecord>> {
    opts.validate()?;
    let scaled = p.squarify().scale()?;
    let perturbed = perturb(&scaled, spec)?;
    diagnose(&perturbed, Some((&spec.u, &spec.v)), opts, scaled.back_factor())
}

/// Eigenvalues common to two independently perturbed pencils.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IntersectionResult {
    /// Midpoints of matched pairs, back-scaled, sorted by distance.
    pub matches: Vec<IntersectionMatch>,
    pub tolerance: f64,
    pub k: usize,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct IntersectionMatch {
    pub lambda: HomogeneousEigenvalue,
    /// Chordal distance between the two members of the pair.
    pub distance: f64,
}

impl IntersectionResult {
    pub fn finite(&self) -> Vec<C64> {
        self.matches.iter().filter_map(|m| m.lambda.lambda()).collect()
    }
}

/// The older two-perturbation baseline: eigenvalues of two independent
/// rank-completing perturbations, intersected within `tol` (chordal metric,
/// default `√ε`). Cannot tell finite true eigenvalues from spurious matches.
pub fn solve_by_intersection(p: &Pencil, opts: &SolveOptions, tol: Option<f64>, rng: &mut Rng) -> Result<IntersectionResult> {
    opts.validate()?;
    let tol = tol.unwrap_or(f64::EPSILON.sqrt());
    let scaled = p.squarify().scale()?;
    let nrank = scaled.normal_rank(rng, opts.rank_tol, opts.probes)?;
    let k = nrank.k;
    let back = scaled.back_factor();

    let spectrum = |rng: &mut Rng| -> Result<Vec<HomogeneousEigenvalue>> {
        let pencil = if k == 0 {
            scaled.clone()
        } else {
            perturb(&scaled, &make_perturbation(scaled.rows(), k, opts, rng)?)?
        };
        Ok(generalized_eig(&pencil.a, &pencil.b)?.values())
    };
    let base: u64 = rng.random();
    let e1 = spectrum(&mut rng::derive(base, 1))?;
    let e2 = if k == 0 { e1.clone() } else { spectrum(&mut rng::derive(base, 2))? };

    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (i, a) in e1.iter().enumerate() {
        for (j, b) in e2.iter().enumerate() {
            let d = a.chordal_distance(b);
            if d <= tol {
                candidates.push((d, i, j));
            }
        }
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut used1 = vec![false; e1.len()];
    let mut used2 = vec![false; e2.len()];
    let mut matches = Vec::new();
    for (d, i, j) in candidates {
        if used1[i] || used2[j] {
            continue;
        }
        used1[i] = true;
        used2[j] = true;
        // align phases before averaging the homogeneous coordinates
        let (a, b) = (e1[i], e2[j]);
        let w = if a.alpha.norm() >= a.beta.norm() { b.alpha / a.alpha } else { b.beta / a.beta };
        let phase = if w.norm() > 0.0 { w / w.norm() } else { C64::new(1.0, 0.0) };
        let mid = HomogeneousEigenvalue::new(a.alpha * phase + b.alpha, a.beta * phase + b.beta).unwrap_or(a);
        matches.push(IntersectionMatch {
            lambda: mid.scaled(back),
            distance: d,
        });
    }
    Ok(IntersectionResult { matches, tolerance: tol, k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn sorted(mut v: Vec<C64>) -> Vec<C64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    fn close(got: &[C64], want: &[f64], tol: f64) -> bool {
        got.len() == want.len() && sorted(got.to_vec()).iter().zip(want).all(|(g, w)| (g - w).norm() <= tol)
    }

    #[test]
    fn classification_table() {
        let (d1, d2) = (f64::EPSILON.sqrt(), 1e2 * f64::EPSILON);
        assert_eq!(class_of(1.5e-2, 1.3e-15, 1.3e-14, d1, d2), EigenClass::FiniteTrue);
        assert_eq!(class_of(3.8e-19, 2.8e-15, 1.3e-14, d1, d2), EigenClass::InfiniteTrue);
        assert_eq!(class_of(7.8e-3, 5.8e-2, 5.6e-15, d1, d2), EigenClass::RandomLeft);
        assert_eq!(class_of(2.1e-4, 2.6e-2, 4.2e-1, d1, d2), EigenClass::Prescribed);
        assert_eq!(class_of(2.6e-4, 9.2e-15, 5.2e-1, d1, d2), EigenClass::RandomRight);
        assert_eq!(class_of(f64::NAN, 0.0, 0.0, d1, d2), EigenClass::Unclassified);
    }

    #[test]
    fn class_names_round_trip() {
        for c in [EigenClass::FiniteTrue, EigenClass::RandomLeft, EigenClass::Unclassified] {
            assert_eq!(c.as_str().parse::<EigenClass>().unwrap(), c);
        }
        assert!("finite".parse::<EigenClass>().is_err());
    }

    #[test]
    fn perturbation_draws() {
        let opts = SolveOptions::default();
        let mut g = rng::seeded(4);
        let spec = make_perturbation(7, 1, &opts, &mut g).unwrap();
        assert_eq!(spec.u.shape(), (7, 1));
        assert!((spec.u.norm_fro() - 1.0).abs() < 1e-14);
        let gamma = spec.prescribed()[0].lambda().unwrap();
        assert!(gamma.re >= 0.5 && gamma.re <= 2.0 && gamma.im == 0.0);

        let again = make_perturbation(7, 1, &opts, &mut rng::seeded(4)).unwrap();
        assert_eq!(again, spec);

        let explicit = SolveOptions {
            gamma_mode: GammaMode::Explicit {
                d_a: vec![C64::new(1.0, 0.0)],
                d_b: vec![C64::new(2.0, 0.0)],
            },
            ..opts.clone()
        };
        let spec = make_perturbation(3, 1, &explicit, &mut g).unwrap();
        assert_eq!(spec.prescribed()[0].lambda().unwrap(), C64::new(0.5, 0.0));
        assert!(make_perturbation(3, 2, &explicit, &mut g).is_err());
        assert!(make_perturbation(3, 0, &opts, &mut g).is_err());
    }

    #[test]
    fn perturb_intro_2x2() {
        let p = fixtures::intro_2x2();
        let e2 = CMatrix::from_column(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        let spec = PerturbationSpec {
            u: e2.clone(),
            v: e2,
            d_a: vec![C64::new(1.0, 0.0)],
            d_b: vec![C64::new(2.0, 0.0)],
            tau: C64::new(1.0, 0.0),
        };
        let t = perturb(&p, &spec).unwrap();
        assert_eq!(t.a, CMatrix::from_real_diag(&[1.0, 1.0]));
        assert_eq!(t.b, CMatrix::from_real_diag(&[1.0, 2.0]));

        let zero = PerturbationSpec { tau: C64::new(0.0, 0.0), ..spec.clone() };
        assert!(perturb(&p, &zero).is_err());
        let tiny = PerturbationSpec { tau: C64::new(1e-300, 0.0), ..spec };
        let t = perturb(&p, &tiny).unwrap();
        assert!((&t.a - &p.a).max_abs() <= 1e-298);
    }

    #[test]
    fn perturbation_has_rank_k() {
        let opts = SolveOptions::default();
        let mut g = rng::seeded(9);
        let p = Pencil::new(CMatrix::zeros(6, 6), CMatrix::zeros(6, 6)).unwrap();
        for k in 1..=3 {
            let spec = make_perturbation(6, k, &opts, &mut g).unwrap();
            let t = perturb(&p, &spec).unwrap();
            assert_eq!(crate::linalg::rank_with_tol(&t.a, RankTol::Auto).unwrap(), k);
            assert_eq!(crate::linalg::rank_with_tol(&t.b, RankTol::Auto).unwrap(), k);
        }
    }

    #[test]
    fn blocks7() {
        let r = solve(&fixtures::blocks7(), &SolveOptions::default()).unwrap();
        assert_eq!(r.nrank_report.k, 1);
        assert!(close(&r.finite_true, &[1.0 / 3.0, 0.5], 1e-8), "{:?}", r.finite_true);
        assert_eq!(r.count(EigenClass::InfiniteTrue), 1);
        assert_eq!(r.count(EigenClass::Prescribed), 1);
        assert_eq!(r.count(EigenClass::RandomLeft), 2);
        assert_eq!(r.count(EigenClass::RandomRight), 1);
        assert!(r.gap_report.zeta_separation().unwrap() > 1e6);
    }

    #[test]
    fn intro_diagonal() {
        let r = solve(&fixtures::intro_diagonal(), &SolveOptions::default()).unwrap();
        assert!(close(&r.finite_true, &[0.5, 2.0 / 3.0, 0.75], 1e-10), "{:?}", r.finite_true);
    }

    #[test]
    fn no_regular_part() {
        let p = Pencil::new(
            CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]),
            CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]),
        )
        .unwrap();
        let r = solve(&p, &SolveOptions::default()).unwrap();
        assert!(r.finite_true.is_empty());
        assert_eq!(r.count(EigenClass::Prescribed), 1);
        assert_eq!(r.records.iter().filter(|x| x.class.is_random()).count(), 1);
    }

    #[test]
    fn regular_pencil_skips_perturbation() {
        let p = Pencil::new(CMatrix::from_real_diag(&[1.0, 2.0, 0.0]), CMatrix::from_real_diag(&[1.0, 1.0, 1.0])).unwrap();
        let r = solve(&p, &SolveOptions::default()).unwrap();
        assert!(r.spec_used.is_none());
        assert!(close(&r.finite_true, &[0.0, 1.0, 2.0], 1e-14));

        let p = Pencil::new(CMatrix::identity(2), CMatrix::from_real_diag(&[1.0, 0.0])).unwrap();
        let r = solve(&p, &SolveOptions::default()).unwrap();
        assert!(close(&r.finite_true, &[1.0], 1e-14));
        assert_eq!(r.count(EigenClass::InfiniteTrue), 1);
    }

    #[test]
    fn records_are_back_scaled() {
        let p = fixtures::blocks7();
        let p = Pencil::new(p.a.scale_real(1e3), p.b.clone()).unwrap();
        let r = solve(&p, &SolveOptions::default()).unwrap();
        assert!(close(&r.finite_true, &[1e3 / 3.0, 500.0], 1e-5), "{:?}", r.finite_true);
    }

    #[test]
    fn same_seed_same_result() {
        let opts = SolveOptions { seed: 17, ..Default::default() };
        let a = solve(&fixtures::blocks7(), &opts).unwrap();
        let b = solve(&fixtures::blocks7(), &opts).unwrap();
        assert_eq!(a.records, b.records);
    }

    #[test]
    fn collision_triggers_retry() {
        // the true eigenvalue 3/4 in scaled coordinates is (3/4)·(‖B‖₁/‖A‖₁) = 1;
        // planting γ = 1 collides on every attempt
        let p = Pencil::new(CMatrix::from_real_diag(&[3.0, 0.0]), CMatrix::from_real_diag(&[4.0, 0.0])).unwrap();
        let opts = SolveOptions {
            gamma_mode: GammaMode::Explicit {
                d_a: vec![C64::new(1.5, 0.0)],
                d_b: vec![C64::new(1.5, 0.0)],
            },
            ..Default::default()
        };
        let r = solve(&p, &opts).unwrap();
        assert_eq!(r.retries, 3);
        assert!(r.collision_warning);

        let r = solve(&p, &SolveOptions::default()).unwrap();
        assert!(!r.collision_warning);
        assert!(close(&r.finite_true, &[0.75], 1e-12));
    }

    #[test]
    fn invalid_options() {
        let p = fixtures::blocks7();
        for opts in [
            SolveOptions { delta1: 0.0, ..Default::default() },
            SolveOptions { delta2: -1.0, ..Default::default() },
            SolveOptions { tau: 0.0, ..Default::default() },
        ] {
            assert!(matches!(solve(&p, &opts), Err(Error::InvalidArgument(_))));
        }
    }

    #[test]
    fn intersection_baseline() {
        let opts = SolveOptions::default();
        let mut g = rng::seeded(5);
        let r = solve_by_intersection(&fixtures::control(), &opts, None, &mut g).unwrap();
        let direct = solve(&fixtures::control(), &opts).unwrap();
        for l in &direct.finite_true {
            assert!(r.finite().iter().any(|m| (m - l).norm() < 1e-6), "{:?}", r.finite());
        }

        let r = solve_by_intersection(&fixtures::intro_diagonal(), &opts, None, &mut g).unwrap();
        let found = [0.5, 2.0 / 3.0, 0.75]
            .iter()
            .filter(|&&w| r.finite().iter().any(|m| (m - w).norm() < 1e-8))
            .count();
        assert_eq!(found, 3);

        let p = Pencil::new(CMatrix::from_real_diag(&[1.0, 2.0]), CMatrix::identity(2)).unwrap();
        let r = solve_by_intersection(&p, &opts, None, &mut g).unwrap();
        assert!(close(&r.finite(), &[1.0, 2.0], 1e-10));
    }
}

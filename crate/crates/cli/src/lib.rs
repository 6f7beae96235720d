//! Command-line front end for `singpencil`.
//!
//! [`run`] parses arguments, executes one subcommand and returns the process
//! exit status: 0 on success, 2 for bad arguments or unreadable input, 3 when
//! a numerical routine fails.

pub mod args;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::Parser;
use serde::{Deserialize, Serialize};
use singpencil::kcf::{self, GroundTruth, KcfSpec};
use singpencil::mtx::{self, Layout};
use singpencil::solver::{self, EigenClass, EigenRecord, GapReport};
use singpencil::two_param::{self, TwoParamOptions, TwoParamProblem};
use singpencil::{rng, CMatrix, Pencil, C64};

use args::{Cli, Command, Common, Format};
use report::{complex6, sig6};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<singpencil::Error> for Failure {
    fn from(e: singpencil::Error) -> Self {
        let code = if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_USAGE };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Self::usage(e.to_string())
    }
}

/// Runs the command line `args` (program name first), writing the report to
/// `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli.command).and_then(|text| out.write_all(text.as_bytes()).map_err(Failure::from)) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn execute(command: &Command) -> Result<String, Failure> {
    match command {
        Command::Solve { a, b, common } => cmd_solve(&read_pencil(a, b)?, common),
        Command::Nrank { a, b, common } => cmd_nrank(&read_pencil(a, b)?, common),
        Command::Gen { spec, out_dir, common } => cmd_gen(spec, out_dir, common),
        Command::Twoparam {
            manifest,
            delta,
            unique_lambda,
            common,
        } => cmd_twoparam(manifest, *delta, *unique_lambda, common),
        Command::Doubleeig { a, b, no_refine, common } => cmd_doubleeig(a, b, !*no_refine, common),
        Command::Intersect { a, b, match_tol, common } => cmd_intersect(&read_pencil(a, b)?, *match_tol, common),
    }
}

fn read_matrix(path: &Path) -> Result<CMatrix, Failure> {
    mtx::read_file(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn read_pencil(a: &Path, b: &Path) -> Result<Pencil, Failure> {
    Ok(Pencil::new(read_matrix(a)?, read_matrix(b)?)?)
}

fn checked_options(common: &Common) -> Result<singpencil::SolveOptions, Failure> {
    let opts = common.solve_options();
    opts.validate()?;
    Ok(opts)
}

/// One `solve` row as written to CSV; an infinite eigenvalue has
/// `lambda_re = inf`, `lambda_im = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveRow {
    pub index: usize,
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub s_abs: f64,
    pub vx_norm: f64,
    pub uy_norm: f64,
    pub zeta: f64,
    pub class: String,
}

impl SolveRow {
    pub fn new(index: usize, r: &EigenRecord) -> Self {
        let l = r.lambda.lambda().unwrap_or(C64::new(f64::INFINITY, 0.0));
        Self {
            index,
            lambda_re: l.re,
            lambda_im: l.im,
            s_abs: r.s_abs,
            vx_norm: r.vx_norm,
            uy_norm: r.uy_norm,
            zeta: r.zeta,
            class: r.class.as_str().into(),
        }
    }

    pub fn lambda(&self) -> Option<C64> {
        self.lambda_re.is_finite().then(|| C64::new(self.lambda_re, self.lambda_im))
    }

    pub fn class(&self) -> Result<EigenClass, String> {
        self.class.parse().map_err(|_| format!("unknown class `{}`", self.class))
    }
}

#[derive(Serialize)]
struct JsonRecord {
    index: usize,
    lambda: Option<C64>,
    s_abs: f64,
    vx_norm: f64,
    uy_norm: f64,
    zeta: f64,
    class: EigenClass,
}

#[derive(Serialize)]
struct SolveJson {
    nrank: usize,
    k: usize,
    tol_used: f64,
    retries: usize,
    collision_warning: bool,
    back_factor: f64,
    finite_true: Vec<C64>,
    gap_report: GapReport,
    records: Vec<JsonRecord>,
}

fn gap_lines(g: &GapReport) -> String {
    let opt = |x: Option<f64>| x.map_or("-".to_string(), sig6);
    let mut s = format!(
        "zeta: max true {}, min other {}\n|s| of true: min finite {}, max infinite {}\n",
        opt(g.max_true_zeta),
        opt(g.min_nontrue_zeta),
        opt(g.min_finite_s),
        opt(g.max_infinite_s)
    );
    if !g.near_threshold.is_empty() {
        let ks: Vec<String> = g.near_threshold.iter().map(|i| (i + 1).to_string()).collect();
        s += &format!("near a threshold: k = {}\n", ks.join(", "));
    }
    s
}

fn cmd_solve(p: &Pencil, common: &Common) -> Result<String, Failure> {
    let opts = checked_options(common)?;
    let r = solver::solve(p, &opts)?;
    match common.format {
        Format::Csv => {
            let rows: Vec<SolveRow> = r.records.iter().enumerate().map(|(i, rec)| SolveRow::new(i + 1, rec)).collect();
            Ok(report::csv(&rows)?)
        }
        Format::Json => Ok(report::json(&SolveJson {
            nrank: r.nrank_report.nrank,
            k: r.nrank_report.k,
            tol_used: r.nrank_report.tol_used,
            retries: r.retries,
            collision_warning: r.collision_warning,
            back_factor: r.back_factor,
            finite_true: r.finite_true.clone(),
            gap_report: r.gap_report.clone(),
            records: r
                .records
                .iter()
                .enumerate()
                .map(|(i, rec)| JsonRecord {
                    index: i + 1,
                    lambda: rec.lambda.lambda(),
                    s_abs: rec.s_abs,
                    vx_norm: rec.vx_norm,
                    uy_norm: rec.uy_norm,
                    zeta: rec.zeta,
                    class: rec.class,
                })
                .collect(),
        })?),
        Format::Table => {
            let rows: Vec<Vec<String>> = r
                .records
                .iter()
                .enumerate()
                .map(|(i, rec)| {
                    vec![
                        (i + 1).to_string(),
                        complex6(rec.lambda.lambda()),
                        sig6(rec.s_abs),
                        sig6(rec.vx_norm),
                        sig6(rec.uy_norm),
                        rec.class.as_str().to_string(),
                    ]
                })
                .collect();
            let mut s = format!("nrank={} k={}\n", r.nrank_report.nrank, r.nrank_report.k);
            s += &report::table(&["k", "lambda", "|s|", "||V^H x||", "||U^H y||", "class"], &rows);
            let ft: Vec<String> = r.finite_true.iter().map(|&l| complex6(Some(l))).collect();
            s += &format!("finite true: {}\n", if ft.is_empty() { "none".into() } else { ft.join(", ") });
            s += &gap_lines(&r.gap_report);
            if r.collision_warning {
                s += "warning: a prescribed eigenvalue collides with a true one after all retries\n";
            }
            Ok(s)
        }
    }
}

#[derive(Serialize)]
struct NrankJson {
    nrank: usize,
    k: usize,
    tol_used: f64,
}

fn cmd_nrank(p: &Pencil, common: &Common) -> Result<String, Failure> {
    let opts = checked_options(common)?;
    let scaled = p.squarify().scale()?;
    let r = scaled.normal_rank(&mut rng::seeded(opts.seed), opts.rank_tol, opts.probes)?;
    let row = NrankJson {
        nrank: r.nrank,
        k: r.k,
        tol_used: r.tol_used,
    };
    match common.format {
        Format::Table => Ok(format!("nrank={} k={}\n", r.nrank, r.k)),
        Format::Csv => Ok(report::csv(&[row])?),
        Format::Json => Ok(report::json(&row)?),
    }
}

#[derive(Serialize)]
struct GenJson {
    a: PathBuf,
    b: PathBuf,
    truth: PathBuf,
    rows: usize,
    cols: usize,
}

fn cmd_gen(spec_path: &Path, out_dir: &Path, common: &Common) -> Result<String, Failure> {
    let text = fs::read_to_string(spec_path).map_err(|e| Failure::usage(format!("{}: {e}", spec_path.display())))?;
    let spec: KcfSpec = serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", spec_path.display())))?;
    let (p, truth) = kcf::build(&spec, &mut rng::seeded(common.seed))?;
    fs::create_dir_all(out_dir)?;
    let info = GenJson {
        a: out_dir.join("A.mtx"),
        b: out_dir.join("B.mtx"),
        truth: out_dir.join("truth.json"),
        rows: truth.rows,
        cols: truth.cols,
    };
    mtx::write_file(&info.a, &p.a, Layout::Array)?;
    mtx::write_file(&info.b, &p.b, Layout::Array)?;
    fs::write(&info.truth, report::json(&truth)?)?;
    match common.format {
        Format::Table => Ok(format!(
            "{}x{} pencil, nrank {}: wrote {}, {}, {}\n",
            truth.rows,
            truth.cols,
            truth.nrank,
            info.a.display(),
            info.b.display(),
            info.truth.display()
        )),
        Format::Csv => Ok(report::csv(&[info])?),
        Format::Json => Ok(report::json(&info)?),
    }
}

/// Reads a ground-truth file written by `gen`.
pub fn read_truth(path: &Path) -> Result<GroundTruth, Failure> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Paths of the six coefficient matrices, relative to the manifest.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub a1: PathBuf,
    pub b1: PathBuf,
    pub c1: PathBuf,
    pub a2: PathBuf,
    pub b2: PathBuf,
    pub c2: PathBuf,
}

#[derive(Serialize)]
struct PairRow {
    index: usize,
    lambda_re: f64,
    lambda_im: f64,
    mu_re: f64,
    mu_im: f64,
    mu_discrepancy: f64,
    residual1: f64,
    residual2: f64,
}

#[derive(Serialize)]
struct TwoParamJson {
    delta_nrank: usize,
    delta_k: usize,
    lambdas: Vec<C64>,
    pairs: Vec<PairRow>,
}

fn cmd_twoparam(manifest: &Path, delta: f64, unique_lambda: bool, common: &Common) -> Result<String, Failure> {
    let text = fs::read_to_string(manifest).map_err(|e| Failure::usage(format!("{}: {e}", manifest.display())))?;
    let m: Manifest = serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", manifest.display())))?;
    let dir = manifest.parent().unwrap_or(Path::new("."));
    let load = |p: &PathBuf| read_matrix(&dir.join(p));
    let problem = TwoParamProblem::new(load(&m.a1)?, load(&m.b1)?, load(&m.c1)?, load(&m.a2)?, load(&m.b2)?, load(&m.c2)?)?;
    let opts = TwoParamOptions {
        delta,
        unique_lambda,
        solve: checked_options(common)?,
    };
    let s = two_param::solve_2ep(&problem, &opts, &mut rng::seeded(common.seed))?;
    let rows: Vec<PairRow> = s
        .pairs
        .iter()
        .enumerate()
        .map(|(i, e)| PairRow {
            index: i + 1,
            lambda_re: e.lambda.re,
            lambda_im: e.lambda.im,
            mu_re: e.mu.re,
            mu_im: e.mu.im,
            mu_discrepancy: e.mu_discrepancy,
            residual1: e.residual1,
            residual2: e.residual2,
        })
        .collect();
    match common.format {
        Format::Csv => Ok(report::csv(&rows)?),
        Format::Json => Ok(report::json(&TwoParamJson {
            delta_nrank: s.delta_nrank.nrank,
            delta_k: s.delta_nrank.k,
            lambdas: s.lambdas.clone(),
            pairs: rows,
        })?),
        Format::Table => {
            let cells: Vec<Vec<String>> = s
                .pairs
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    vec![
                        (i + 1).to_string(),
                        complex6(Some(e.lambda)),
                        complex6(Some(e.mu)),
                        sig6(e.mu_discrepancy),
                        sig6(e.residual1),
                        sig6(e.residual2),
                    ]
                })
                .collect();
            let mut out = format!("Delta nrank={} k={}\n", s.delta_nrank.nrank, s.delta_nrank.k);
            out += &report::table(&["k", "lambda", "mu", "|mu1-mu2|", "res1", "res2"], &cells);
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct DoubleRow {
    index: usize,
    lambda_re: f64,
    lambda_im: f64,
    gap: f64,
    unrefined_re: f64,
    unrefined_im: f64,
    unrefined_gap: f64,
}

#[derive(Serialize)]
struct DoubleJson {
    n: usize,
    nrank: usize,
    degenerate: bool,
    gap_report: GapReport,
    zeta_separation: Option<f64>,
    values: Vec<DoubleRow>,
}

fn cmd_doubleeig(a: &Path, b: &Path, refine: bool, common: &Common) -> Result<String, Failure> {
    let (a, b) = (read_matrix(a)?, read_matrix(b)?);
    let opts = checked_options(common)?;
    let r = two_param::double_eig(&a, &b, &opts, refine, &mut rng::seeded(common.seed))?;
    let rows: Vec<DoubleRow> = (0..r.values.len())
        .map(|i| DoubleRow {
            index: i + 1,
            lambda_re: r.values[i].re,
            lambda_im: r.values[i].im,
            gap: r.gaps[i],
            unrefined_re: r.unrefined[i].re,
            unrefined_im: r.unrefined[i].im,
            unrefined_gap: r.unrefined_gaps[i],
        })
        .collect();
    match common.format {
        Format::Csv => Ok(report::csv(&rows)?),
        Format::Json => Ok(report::json(&DoubleJson {
            n: a.rows(),
            nrank: r.solve.nrank_report.nrank,
            degenerate: r.degenerate,
            zeta_separation: r.solve.gap_report.zeta_separation(),
            gap_report: r.solve.gap_report.clone(),
            values: rows,
        })?),
        Format::Table => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|row| {
                    vec![
                        row.index.to_string(),
                        complex6(Some(C64::new(row.lambda_re, row.lambda_im))),
                        sig6(row.gap),
                        sig6(row.unrefined_gap),
                    ]
                })
                .collect();
            let mut out = format!(
                "n={} linearization nrank={}{}\n",
                a.rows(),
                r.solve.nrank_report.nrank,
                if r.degenerate { " (not the generic 3n^2-n)" } else { "" }
            );
            out += &report::table(&["k", "lambda", "gap", "unrefined gap"], &cells);
            out += &gap_lines(&r.solve.gap_report);
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct MatchRow {
    index: usize,
    lambda_re: f64,
    lambda_im: f64,
    distance: f64,
}

#[derive(Serialize)]
struct IntersectJson {
    k: usize,
    tolerance: f64,
    matches: Vec<MatchRow>,
}

fn cmd_intersect(p: &Pencil, tol: Option<f64>, common: &Common) -> Result<String, Failure> {
    let opts = checked_options(common)?;
    if let Some(t) = tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::usage(format!("--match-tol must be positive, got {t}")));
        }
    }
    let r = solver::solve_by_intersection(p, &opts, tol, &mut rng::seeded(common.seed))?;
    let rows: Vec<MatchRow> = r
        .matches
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let l = m.lambda.lambda().unwrap_or(C64::new(f64::INFINITY, 0.0));
            MatchRow {
                index: i + 1,
                lambda_re: l.re,
                lambda_im: l.im,
                distance: m.distance,
            }
        })
        .collect();
    match common.format {
        Format::Csv => Ok(report::csv(&rows)?),
        Format::Json => Ok(report::json(&IntersectJson {
            k: r.k,
            tolerance: r.tolerance,
            matches: rows,
        })?),
        Format::Table => {
            let cells: Vec<Vec<String>> = r
                .matches
                .iter()
                .enumerate()
                .map(|(i, m)| vec![(i + 1).to_string(), complex6(m.lambda.lambda()), sig6(m.distance)])
                .collect();
            let mut out = format!("k={} tolerance={}\n", r.k, sig6(r.tolerance));
            out += &report::table(&["k", "lambda", "distance"], &cells);
            Ok(out)
        }
    }
}

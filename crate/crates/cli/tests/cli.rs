use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use singpencil::solver::EigenClass;
use singpencil::C64;
use singpencil_cli::{read_truth, SolveRow};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_singpencil"))
        .args(args)
        .env_remove("SINGPENCIL_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn solve_rows(csv_text: &str) -> Vec<SolveRow> {
    csv::Reader::from_reader(csv_text.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .unwrap()
}

#[test]
fn solve_table_has_the_example_pattern() {
    let (a, b) = (data("blocks7_A.mtx"), data("blocks7_B.mtx"));
    let o = bin(&["solve", path(&a), path(&b), "--seed", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("nrank=6 k=1\n"), "{text}");
    assert!(text.contains("||V^H x||") && text.contains("||U^H y||"));
    let count = |c: &str| text.lines().filter(|l| l.ends_with(&format!(" {c}"))).count();
    assert_eq!(count("FiniteTrue"), 2, "{text}");
    assert_eq!(count("InfiniteTrue"), 1);
    assert_eq!(count("Prescribed"), 1);
    assert_eq!(count("RandomRight") + count("RandomLeft"), 3);
    assert!(text.contains("0.333333") && text.contains("0.500000"));
}

#[test]
fn nrank_of_intro_pencil() {
    let o = bin(&["nrank", path(&data("intro_A.mtx")), path(&data("intro_B.mtx"))]);
    assert_eq!(stdout(&o), "nrank=3 k=3\n");
}

#[test]
fn generated_pencil_solves_to_its_ground_truth() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["gen", path(&data("kcf_example.json")), "--seed", "7", "-o", path(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let truth = read_truth(&dir.path().join("truth.json")).unwrap();
    let o = bin(&["solve", path(&dir.path().join("A.mtx")), path(&dir.path().join("B.mtx")), "--format", "csv"]);
    let rows = solve_rows(&stdout(&o));
    let mut got: Vec<C64> = rows
        .iter()
        .filter(|r| r.class().unwrap() == EigenClass::FiniteTrue)
        .map(|r| r.lambda().unwrap())
        .collect();
    let mut want = truth.finite.clone();
    for v in [&mut got, &mut want] {
        v.sort_by(|a, b| a.re.total_cmp(&b.re));
    }
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).norm() <= 1e-8, "{g} vs {w}");
    }
}

#[test]
fn csv_rows_reparse_to_the_json_diagnostics() {
    let (a, b) = (data("blocks7_A.mtx"), data("blocks7_B.mtx"));
    let rows = solve_rows(&stdout(&bin(&["solve", path(&a), path(&b), "--format", "csv"])));
    let json: serde_json::Value = serde_json::from_str(&stdout(&bin(&["solve", path(&a), path(&b), "--format", "json"]))).unwrap();
    let records = json["records"].as_array().unwrap();
    assert_eq!(rows.len(), records.len());
    for (row, rec) in rows.iter().zip(records) {
        assert_eq!(row.s_abs, rec["s_abs"].as_f64().unwrap());
        assert_eq!(row.vx_norm, rec["vx_norm"].as_f64().unwrap());
        assert_eq!(row.uy_norm, rec["uy_norm"].as_f64().unwrap());
        assert_eq!(row.zeta, rec["zeta"].as_f64().unwrap());
        assert_eq!(row.class().unwrap().as_str(), rec["class"].as_str().unwrap());
        match row.lambda() {
            Some(l) => assert_eq!([l.re, l.im], [rec["lambda"][0].as_f64().unwrap(), rec["lambda"][1].as_f64().unwrap()]),
            None => assert!(rec["lambda"].is_null()),
        }
    }
    // and writing the parsed rows again gives the same bytes
    let again = singpencil_cli::report::csv(&rows).unwrap();
    assert_eq!(again, stdout(&bin(&["solve", path(&a), path(&b), "--format", "csv"])));
}

#[test]
fn seed_from_environment() {
    let (a, b) = (data("control_A.mtx"), data("control_B.mtx"));
    let flag = bin(&["solve", path(&a), path(&b), "--seed", "11", "--format", "json"]);
    let env = Command::new(env!("CARGO_BIN_EXE_singpencil"))
        .args(["solve", path(&a), path(&b), "--format", "json"])
        .env("SINGPENCIL_SEED", "11")
        .output()
        .unwrap();
    let other = bin(&["solve", path(&a), path(&b), "--seed", "12", "--format", "json"]);
    assert_eq!(flag.stdout, env.stdout);
    assert_ne!(flag.stdout, other.stdout);
}

#[test]
fn two_parameter_manifest() {
    let o = bin(&["twoparam", path(&data("cubic.json")), "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pairs"].as_array().unwrap().len(), 9);
    assert_eq!(v["delta_nrank"], 21);
}

#[test]
fn double_eigenvalues_and_intersection() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.mtx");
    let b = dir.path().join("b.mtx");
    std::fs::write(&a, "%%MatrixMarket matrix array real general\n2 2\n1\n3\n2\n-1\n").unwrap();
    std::fs::write(&b, "%%MatrixMarket matrix array real general\n2 2\n0\n1\n1\n2\n").unwrap();
    let o = bin(&["doubleeig", path(&a), path(&b), "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["values"].as_array().unwrap().len(), 2);
    assert!(v["values"].as_array().unwrap().iter().all(|r| r["gap"].as_f64().unwrap() <= 1e-6));

    let o = bin(&["intersect", path(&data("control_A.mtx")), path(&data("control_B.mtx")), "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("index,lambda_re,lambda_im,distance\n"));
}

#[test]
fn exit_codes_and_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mtx");
    std::fs::write(&bad, "%%MatrixMarket matrix array real general\n2 2\n1\n2\nx\n4\n").unwrap();
    let o = bin(&["solve", path(&bad), path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&o.stderr);
    assert!(msg.contains("line 5, column 1"), "{msg}");

    assert_eq!(bin(&["solve", "missing_a.mtx", "missing_b.mtx"]).status.code(), Some(2));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bin(&["solve", path(&data("intro_A.mtx")), path(&data("intro_B.mtx")), "--tau", "0"]).status.code(), Some(2));
    assert_eq!(bin(&["solve", path(&data("intro_A.mtx")), path(&data("blocks7_B.mtx"))]).status.code(), Some(2));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));

    let spec = dir.path().join("spec.json");
    std::fs::write(&spec, "{\"blocks\": [{\"kind\": \"jordan\", \"size\": 1}]}").unwrap();
    let o = bin(&["gen", path(&spec), "-o", path(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1 column"));
}

#[test]
fn numerical_failures_map_to_exit_3() {
    let e = singpencil::Error::NoConvergence {
        routine: "qz",
        iterations: 30,
        first: 0,
        last: 4,
    };
    assert_eq!(singpencil_cli::Failure::from(e).code, singpencil_cli::EXIT_NUMERICAL);
    let e = singpencil::Error::InvalidArgument("x".into());
    assert_eq!(singpencil_cli::Failure::from(e).code, singpencil_cli::EXIT_USAGE);
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gmdisc::gmengine::parse_structured;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gmdisc"));
    c.env_remove("GMDISC_BACKEND").env_remove("GMDISC_MAX_PRECISION");
    c
}

fn gm(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn gmdisc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn domain(name: &str) -> String {
    repo().join("docs/domains").join(name).display().to_string()
}

struct CorpusEntry {
    name: String,
    a: String,
    b: String,
    expected: String,
}

fn corpus() -> Vec<CorpusEntry> {
    let text = std::fs::read_to_string(repo().join("crates/core/tests/data/corpus.txt")).unwrap();
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split('|').map(str::trim).collect();
            CorpusEntry {
                name: f[0].into(),
                a: f[1].into(),
                b: f[2].into(),
                expected: f[3].into(),
            }
        })
        .collect()
}

// a pair that needs three steps before it is certified free
const LONG_A: &str = "[[13445492/245,-36/245],[44118021/6860,-59/3430]]";
const LONG_B: &str = "[[7,0],[-144/7,1/7]]";

#[test]
fn classify_examples() {
    let o = gm(&["classify", "[[2,1],[1,1]]"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("class: hyperbolic"), "{out}");
    assert!(out.contains("trace: 3\n"), "{out}");
    assert!(out.contains("repeller: ") && out.contains("attractor: ") && out.contains("axis: "));

    let o = gm(&["classify", "[[1,1],[0,1]]"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("class: parabolic"));
    assert!(stdout(&o).contains("fixed point: ∞"));

    let o = gm(&["classify", "[[1,0],[0,2]]"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).starts_with("error: determinant:"), "{}", stderr(&o));

    let o = gm(&["classify", "[[1,0],[0,1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).starts_with("error: parse:"));
}

#[test]
fn classify_structured_and_elliptic_orders() {
    let o = gm(&["--format", "structured", "classify", "[[0,-1],[1,0]]"]);
    assert_eq!(stdout(&o), "gmclassify v1\nmatrix: [[0, -1], [1, 0]]\nbackend: rational\ntrace: 0\nclass: elliptic\norder: finite(2)\n");

    let o = gm(&["classify", "[[1/2,-1],[1,0]]"]);
    assert!(stdout(&o).contains("order: infinite"));

    // trace √2 has order 4
    let o = gm(&["--backend", "algebraic", "--field", "x^2 - 2 in [1, 3/2]", "classify", "[[g/2,-1/2],[1,g/2]]"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("order: finite(4)"));
}

#[test]
fn exit_codes_and_reports_across_corpus() {
    for e in corpus() {
        let o = gm(&["--format", "structured", "run-gm", &e.a, &e.b]);
        let want = match e.expected.as_str() {
            "discrete-free" | "jorgensen" | "infinite-elliptic" => 0,
            _ => 1,
        };
        assert_eq!(code(&o), want, "{} ({})", e.name, e.expected);
        let out = stdout(&o);
        let golden = repo().join(format!("crates/core/tests/golden/reports/{}.txt", e.name));
        assert_eq!(out, std::fs::read_to_string(golden).unwrap(), "{}", e.name);
        let parsed = parse_structured(&out).unwrap();
        assert_eq!(parsed.to_structured(), out, "{} does not round-trip", e.name);
    }
}

#[test]
fn run_errors_are_input_errors() {
    let o = gm(&["run-gm", "[[1,0],[0,1]]", "[[2,1],[1,1]]"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).starts_with("error: identity-generator:"), "{}", stderr(&o));

    let o = gm(&["run-gm", "[[2,1],[1,1]]", "[[2,1],[1]]"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).starts_with("error: parse:"));

    let o = gm(&["--backend", "complex", "run-gm", "[[2,1],[1,1]]", "[[2,1],[1,1]]"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).starts_with("error: config:"));

    let o = gm(&["--max-precision", "7", "bit-demo", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).starts_with("error: config:"));

    let o = gm(&["run-gm", "--budget-constant", "0", LONG_A, LONG_B]);
    assert_eq!(code(&o), 2);

    let o = gm(&["classify", "[[g,0],[0,1]]"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).starts_with("error: parse:"));
}

#[test]
fn step_budget_exceeded() {
    let o = gm(&["--format", "structured", "run-gm", "--max-steps", "1", LONG_A, LONG_B]);
    assert_eq!(code(&o), 1);
    let r = parse_structured(&stdout(&o)).unwrap();
    assert_eq!(r.reason.as_deref(), Some("step-budget-exceeded"));
    assert_eq!(r.budget, Some(1));

    let o = gm(&["run-gm", "--max-steps", "3", LONG_A, LONG_B]);
    assert_eq!(code(&o), 0);
}

#[test]
fn interval_backend_on_parabolic_product() {
    let (a, b) = ("[[2,0],[0,1/2]]", "[[8,-9],[1,-1]]");
    let o = gm(&["--format", "structured", "run-gm", a, b]);
    assert_eq!(code(&o), 1);
    let exact = parse_structured(&stdout(&o)).unwrap();
    assert_eq!(exact.reason.as_deref(), Some("parabolic-case"));
    assert_eq!(exact.last_branch.as_deref(), Some("parabolic-boundary"));

    let o = bin()
        .args(["--format", "structured", "run-gm", a, b])
        .env("GMDISC_BACKEND", "interval")
        .env("GMDISC_MAX_PRECISION", "48")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    let r = parse_structured(&stdout(&o)).unwrap();
    assert_eq!(r.backend, "interval");
    assert_eq!(r.reason.as_deref(), Some("oracle-indeterminate"));
    let oracle = r.oracle.expect("escalation log");
    assert_eq!(oracle.precision, 48);
    assert_eq!(oracle.rows.len(), 48);
    assert!(oracle.rows.iter().all(|(_, _, certified)| !certified));
}

#[test]
fn bit_demo_examples() {
    let o = gm(&["--max-precision", "64", "--format", "structured", "bit-demo", "0"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().filter(|l| l.starts_with("row: ")).collect();
    assert_eq!(rows.len(), 64);
    assert!(rows.iter().all(|r| r.ends_with(" no")));
    assert!(out.ends_with("sign: indeterminate (no certificate up to m = 64)\n"));

    let o = gm(&["--format", "structured", "bit-demo", "2^-5"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let last = out.lines().rfind(|l| l.starts_with("row: ")).unwrap();
    let m: u32 = last.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!(m <= 7 && last.ends_with(" yes"), "{last}");
    assert!(out.contains("sign: positive"));

    let o = gm(&["bit-demo", "-1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("sign: negative (certified at m = 1)\n"), "{}", stdout(&o));

    let o = gm(&["--max-precision", "16", "bit-demo", "wobbling-zero"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn sa_member_examples() {
    let disk = domain("unit_disk.sexp");
    let o = gm(&["sa-member", &disk, "1/2", "1/2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("member: true"));

    let o = gm(&["sa-member", &disk, "2", "0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("member: false"));

    let o = gm(&["--format", "structured", "sa-member", &domain("toy_trace.sexp"), "3", "3", "7"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("gmmember v1\n"));
    assert!(out.contains("member: true"));
    let atoms: Vec<&str> = out.lines().filter(|l| l.starts_with("atom: ")).collect();
    assert_eq!(atoms.len(), 4, "{out}");
    assert!(atoms.iter().all(|a| a.ends_with("| true")));
    // x*y*z - x^2 - y^2 - z^2 = 63 - 67
    assert!(atoms[3].contains("| -4 |"), "{}", atoms[3]);

    let o = gm(&["sa-member", &disk, "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).starts_with("error: dimension:"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.sexp");
    std::fs::write(&bad, "(domain (vars x) (formula (< x y)))").unwrap();
    let o = gm(&["sa-member", bad.to_str().unwrap(), "0"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).starts_with("error: domain-parse:"), "{}", stderr(&o));

    let o = gm(&["sa-member", dir.path().join("missing.sexp").to_str().unwrap(), "0"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).starts_with("error: io:"));
}

#[test]
fn batch_is_ordered_and_deterministic() {
    let entries: Vec<CorpusEntry> = corpus();
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("pairs.txt");
    let mut text = String::from("# corpus\n");
    for e in &entries {
        text.push_str(&format!("{} | {} | {}\n", e.name, e.a, e.b));
    }
    text.push_str("[[2,1],[1,1]] [[1,0],[0,2]]\n");
    std::fs::write(&file, text).unwrap();

    let run = || gm(&["--format", "structured", "run-gm", "--batch", file.to_str().unwrap()]);
    let (first, second) = (run(), run());
    assert_eq!(stdout(&first), stdout(&second));
    assert_eq!(code(&first), 2);

    let out = stdout(&first);
    let names: Vec<&str> = out.lines().filter_map(|l| l.strip_prefix("# ")).collect();
    let mut want: Vec<String> = entries.iter().map(|e| e.name.clone()).collect();
    want.push(format!("line{}", entries.len() + 2));
    assert_eq!(names, want);
    assert!(out.ends_with("error: determinant: determinant is 2, expected 1\n"));

    // each block is the single-run report
    let single = gm(&["--format", "structured", "run-gm", &entries[12].a, &entries[12].b]);
    assert!(out.contains(&format!("# c13\n{}# c14\n", stdout(&single))));
}

#[test]
fn figures_are_written_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let render = |sub: &str| {
        let d = dir.path().join(sub);
        let o = gm(&["run-gm", "--render-dir", d.to_str().unwrap(), LONG_A, LONG_B]);
        assert_eq!(code(&o), 0);
        let mut files: Vec<_> = std::fs::read_dir(&d).unwrap().map(|e| e.unwrap().path()).collect();
        files.sort();
        files
    };
    let one = render("one");
    let two = render("two");
    // the oriented input plus one pair per step
    assert_eq!(one.len(), 4);
    for (p, q) in one.iter().zip(&two) {
        let svg = std::fs::read_to_string(p).unwrap();
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg, std::fs::read_to_string(q).unwrap());
    }

    let out = dir.path().join("axes.svg");
    let o = gm(&["render", LONG_A, LONG_B, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(std::fs::read_to_string(&out).unwrap().contains("AB^-1"));
    let o = gm(&["render", LONG_A, LONG_B]);
    assert!(stdout(&o).starts_with("<svg"));
}

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use gmdisc::exactnum::{NumError, Scalar, Sign};
use gmdisc::gmengine::{run, Report, RunResult, Word};
use gmdisc::hypgeo::{PairConfiguration, Scene};
use gmdisc::moebius::{axis, classify, elliptic_order, fixed_points, ElementClass, Mat2};
use gmdisc::semialg::load_domain;
use rayon::prelude::*;

use crate::config::{OutputFormat, RunConfig};
use crate::literal::parse_oracle_value;
use crate::{Cli, CliError, Command, EXIT_CERTIFIED, EXIT_INPUT_ERROR, EXIT_UNRESOLVED};

/// What a subcommand prints and the status it exits with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Classify { matrix } => cmd_classify(&RunConfig::from_args(&cli.global, None)?, matrix),
        Command::RunGm(args) => {
            let cfg = RunConfig::from_args(&cli.global, Some(args))?;
            match (&args.batch, &args.a, &args.b) {
                (Some(file), _, _) => cmd_batch(&cfg, file),
                (None, Some(a), Some(b)) => cmd_run_gm(&cfg, a, b),
                _ => Err(CliError::Config("run-gm needs A and B, or --batch".into())),
            }
        }
        Command::BitDemo { value } => cmd_bit_demo(&RunConfig::from_args(&cli.global, None)?, value),
        Command::SaMember { domain, point } => cmd_sa_member(&RunConfig::from_args(&cli.global, None)?, domain, point),
        Command::Render { a, b, out } => cmd_render(&RunConfig::from_args(&cli.global, None)?, a, b, out.as_deref()),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// `key: value` lines; the structured form adds a versioned header.
fn key_values(header: &str, format: OutputFormat, rows: &[(&str, String)]) -> String {
    let mut out = String::new();
    if format == OutputFormat::Structured {
        let _ = writeln!(out, "{header}");
    }
    for (k, v) in rows {
        let _ = writeln!(out, "{k}: {v}");
    }
    out
}

// ---------------------------------------------------------------- classify

pub fn cmd_classify(cfg: &RunConfig, src: &str) -> Result<Outcome, CliError> {
    let m = cfg.scalars().matrix(src)?;
    let mut rows = vec![
        ("matrix", m.to_string()),
        ("backend", cfg.backend.to_string()),
        ("trace", m.trace()?.to_string()),
    ];
    let class = match classify(&m) {
        Ok(c) => c,
        Err(NumError::Indeterminate { precision }) => {
            rows.push(("class", "undetermined".into()));
            rows.push(("precision", precision.to_string()));
            return Ok(Outcome {
                stdout: key_values("gmclassify v1", cfg.format, &rows),
                code: EXIT_UNRESOLVED,
            });
        }
        Err(e) => return Err(e.into()),
    };
    rows.push(("class", class.to_string()));
    match class {
        ElementClass::Hyperbolic => {
            let fp = fixed_points(&m)?;
            rows.push(("repeller", fp[0].point.to_string()));
            rows.push(("attractor", fp[1].point.to_string()));
            rows.push(("axis", axis(&m)?.to_string()));
        }
        ElementClass::Parabolic => {
            rows.push(("fixed point", fixed_points(&m)?[0].point.to_string()));
        }
        ElementClass::Elliptic if cfg.backend.is_exact() => {
            rows.push(("order", elliptic_order(&m)?.to_string()));
        }
        _ => {}
    }
    Ok(Outcome {
        stdout: key_values("gmclassify v1", cfg.format, &rows),
        code: EXIT_CERTIFIED,
    })
}

// ------------------------------------------------------------------ run-gm

fn exit_for(res: &RunResult) -> u8 {
    if res.verdict.is_certified() {
        EXIT_CERTIFIED
    } else {
        EXIT_UNRESOLVED
    }
}

/// Words of every pair the loop looked at, starting with the oriented input.
pub fn visited_words(res: &RunResult) -> Vec<(Word, Word)> {
    let s = &res.state;
    if s.pair.is_none() {
        return Vec::new();
    }
    let (mut w1, mut w2) = (Word::a(), Word::b());
    if s.swapped {
        std::mem::swap(&mut w1, &mut w2);
    }
    if s.inverted {
        w2 = w2.inverse();
    }
    let mut out = vec![(w1, w2)];
    out.extend(s.steps.iter().map(|st| (st.first_word.clone(), st.second_word.clone())));
    out
}

fn add_axis(scene: Scene, m: &Mat2, label: &str) -> Scene {
    match classify(m) {
        Ok(ElementClass::Hyperbolic) => match axis(m) {
            Ok(g) => scene.geodesic(&g, label),
            Err(_) => scene,
        },
        _ => scene,
    }
}

fn axes_scene(title: &str, first: &Mat2, second: &Mat2, labels: [&str; 3]) -> Result<Scene, CliError> {
    let product = first.mul(&second.inverse())?;
    let scene = Scene::new().with_title(title);
    let scene = add_axis(scene, first, labels[0]);
    let scene = add_axis(scene, second, labels[1]);
    Ok(add_axis(scene, &product, labels[2]))
}

/// One SVG per visited pair, named `pair-000.svg`, `pair-001.svg`, …
pub fn render_run(res: &RunResult, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    create_dir(dir)?;
    let [a, b] = &res.state.input;
    let mut written = Vec::new();
    for (i, (w1, w2)) in visited_words(res).iter().enumerate() {
        let first = w1.evaluate(a, b)?;
        let second = w2.evaluate(a, b)?;
        let product_label = w1.mul(&w2.inverse()).to_string();
        let title = format!("pair {i}: ({w1}, {w2})");
        let scene = axes_scene(&title, &first, &second, [&w1.to_string(), &w2.to_string(), &product_label])?;
        let path = dir.join(format!("pair-{i:03}.svg"));
        write(&path, &scene.to_svg())?;
        written.push(path);
    }
    Ok(written)
}

fn run_pair(cfg: &RunConfig, a: &str, b: &str, render_dir: Option<&Path>, timed: bool) -> Result<Outcome, CliError> {
    let ctx = cfg.scalars();
    let (ma, mb) = (ctx.matrix(a)?, ctx.matrix(b)?);
    let start = Instant::now();
    let res = run(&ma, &mb, cfg.budget())?;
    let elapsed = start.elapsed();
    if let Some(dir) = render_dir {
        render_run(&res, dir)?;
    }
    let report = Report::from_run(&res);
    let stdout = match cfg.format {
        OutputFormat::Structured => report.to_structured(),
        OutputFormat::Text => {
            let mut t = report.to_text(timed.then_some(elapsed));
            if res.state.configuration == Some(PairConfiguration::Intersecting) {
                t.push_str("note: axes cross, which is outside the implemented cases\n");
            }
            t
        }
    };
    Ok(Outcome {
        stdout,
        code: exit_for(&res),
    })
}

pub fn cmd_run_gm(cfg: &RunConfig, a: &str, b: &str) -> Result<Outcome, CliError> {
    run_pair(cfg, a, b, cfg.render_dir.as_deref(), true)
}

/// One pair from a batch file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatchEntry {
    pub name: String,
    pub a: String,
    pub b: String,
}

/// Lines are `name | A | B`, `A | B` or `A B`; blank lines and `#`
/// comments are skipped. Unnamed entries are called `lineN`.
pub fn parse_batch(text: &str) -> Result<Vec<BatchEntry>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let default_name = format!("line{}", i + 1);
        let parts: Vec<&str> = if line.contains('|') {
            line.split('|').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        let entry = match parts.as_slice() {
            [name, a, b] if line.contains('|') => BatchEntry {
                name: name.to_string(),
                a: a.to_string(),
                b: b.to_string(),
            },
            [a, b] => BatchEntry {
                name: default_name,
                a: a.to_string(),
                b: b.to_string(),
            },
            _ => return Err(CliError::Parse(format!("batch line {}: expected `name | A | B` or `A B`", i + 1))),
        };
        out.push(entry);
    }
    Ok(out)
}

/// Runs every entry in parallel; output keeps file order. The exit status
/// is the worst over all entries.
pub fn cmd_batch(cfg: &RunConfig, file: &Path) -> Result<Outcome, CliError> {
    let entries = parse_batch(&read(file)?)?;
    let results: Vec<(String, u8)> = entries
        .par_iter()
        .map(|e| {
            let dir = cfg.render_dir.as_ref().map(|d| d.join(&e.name));
            match run_pair(cfg, &e.a, &e.b, dir.as_deref(), false) {
                Ok(o) => (o.stdout, o.code),
                Err(err) => (format!("error: {}: {err}\n", err.code()), EXIT_INPUT_ERROR),
            }
        })
        .collect();
    let mut stdout = String::new();
    for (e, (body, _)) in entries.iter().zip(&results) {
        match cfg.format {
            OutputFormat::Structured => {
                let _ = writeln!(stdout, "# {}", e.name);
            }
            OutputFormat::Text => {
                let _ = writeln!(stdout, "== {} ==", e.name);
            }
        }
        stdout.push_str(body);
    }
    let code = results.iter().map(|r| r.1).max().unwrap_or(EXIT_CERTIFIED);
    Ok(Outcome { stdout, code })
}

// ---------------------------------------------------------------- bit-demo

pub fn cmd_bit_demo(cfg: &RunConfig, value: &str) -> Result<Outcome, CliError> {
    let oracle = parse_oracle_value(value)?;
    let esc = oracle.escalate(cfg.max_precision);
    let last = esc.rows.last().map(|r| r.precision).unwrap_or(0);
    let (sign, code) = match esc.sign {
        Sign::Positive => (format!("positive (certified at m = {last})"), EXIT_CERTIFIED),
        Sign::Negative => (format!("negative (certified at m = {last})"), EXIT_CERTIFIED),
        Sign::Zero => ("zero".to_string(), EXIT_CERTIFIED),
        Sign::Indeterminate(p) => (format!("indeterminate (no certificate up to m = {p})"), EXIT_UNRESOLVED),
    };
    let mut out = String::new();
    match cfg.format {
        OutputFormat::Structured => {
            let _ = writeln!(out, "gmbitdemo v1");
            let _ = writeln!(out, "value: {value}");
            let _ = writeln!(out, "max_precision: {}", cfg.max_precision);
            for r in &esc.rows {
                let _ = writeln!(out, "row: {} {} {}", r.precision, r.value, if r.certified { "yes" } else { "no" });
            }
            let _ = writeln!(out, "sign: {sign}");
        }
        OutputFormat::Text => {
            let _ = writeln!(out, "value {value}, precision ceiling {}", cfg.max_precision);
            let _ = writeln!(out, "{:>5}  {:<28}  certified", "m", "φ(m)");
            for r in &esc.rows {
                let _ = writeln!(
                    out,
                    "{:>5}  {:<28}  {}",
                    r.precision,
                    r.value.to_string(),
                    if r.certified { "yes" } else { "no" }
                );
            }
            let _ = writeln!(out, "sign: {sign}");
        }
    }
    Ok(Outcome { stdout: out, code })
}

// --------------------------------------------------------------- sa-member

pub fn cmd_sa_member(cfg: &RunConfig, domain: &Path, point: &[String]) -> Result<Outcome, CliError> {
    let d = load_domain(&read(domain)?)?;
    let ctx = cfg.scalars();
    let coords: Vec<Scalar> = point.iter().map(|p| ctx.scalar(p)).collect::<Result<_, _>>()?;
    let member = d.contains(&coords)?;
    let rows = d.explain(&coords)?;
    let atoms: Vec<String> = d
        .formula
        .atoms()
        .iter()
        .map(|a| format!("{} {} 0", a.poly.display_with(&d.vars), a.rel.symbol()))
        .collect();
    let shown: Vec<String> = coords.iter().map(Scalar::to_string).collect();
    let mut out = String::new();
    match cfg.format {
        OutputFormat::Structured => {
            let _ = writeln!(out, "gmmember v1");
            let _ = writeln!(out, "vars: {}", d.vars.join(" "));
            let _ = writeln!(out, "point: {}", shown.join(" "));
            let _ = writeln!(out, "member: {member}");
            for (atom, r) in atoms.iter().zip(&rows) {
                let _ = writeln!(out, "atom: {atom} | {} | {}", r.value, r.holds);
            }
        }
        OutputFormat::Text => {
            if let Some(note) = &d.note {
                let _ = writeln!(out, "domain: {note}");
            }
            let _ = writeln!(out, "point: ({}) = ({})", d.vars.join(", "), shown.join(", "));
            let _ = writeln!(out, "member: {member}");
            let width = atoms.iter().map(|a| a.chars().count()).max().unwrap_or(4).max(4);
            let _ = writeln!(out, "{:<width$}  {:<16}  holds", "atom", "value");
            for (atom, r) in atoms.iter().zip(&rows) {
                let _ = writeln!(out, "{atom:<width$}  {:<16}  {}", r.value.to_string(), r.holds);
            }
        }
    }
    Ok(Outcome {
        stdout: out,
        code: EXIT_CERTIFIED,
    })
}

// ------------------------------------------------------------------ render

pub fn cmd_render(cfg: &RunConfig, a: &str, b: &str, out: Option<&Path>) -> Result<Outcome, CliError> {
    let ctx = cfg.scalars();
    let (ma, mb) = (ctx.matrix(a)?, ctx.matrix(b)?);
    let svg = axes_scene("axes of A, B and AB^-1", &ma, &mb, ["A", "B", "AB^-1"])?.to_svg();
    match out {
        Some(path) => {
            write(path, &svg)?;
            Ok(Outcome {
                stdout: format!("wrote {}\n", path.display()),
                code: EXIT_CERTIFIED,
            })
        }
        None => Ok(Outcome {
            stdout: svg,
            code: EXIT_CERTIFIED,
        }),
    }
}

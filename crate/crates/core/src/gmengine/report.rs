//! Run reports: instrumentation figures and a versioned line-oriented
//! `key: value` format that parses back to the same report.

use std::fmt::Write;
use std::time::Duration;

use num_bigint::BigInt;
use thiserror::Error;

use super::{RunResult, StepKind, Witness};

pub const REPORT_HEADER: &str = "gmreport v1";

/// Step counts and size growth of a finished run.
#[derive(Clone, Debug, PartialEq)]
pub struct InstrumentationReport {
    pub steps: u64,
    pub max_initial_trace: Option<f64>,
    /// `steps / T`.
    pub step_ratio: Option<f64>,
    pub linear_steps: usize,
    pub fibonacci_steps: usize,
    pub d: Option<u32>,
    pub seminorm_trajectory: Vec<BigInt>,
    /// Steps where `SN(AB⁻¹) > SN(A)·SN(B)`.
    pub seminorm_violations: Vec<usize>,
    pub max_trace_decreasing: Option<bool>,
}

pub fn instrumentation_report(run: &RunResult) -> InstrumentationReport {
    let s = &run.state;
    let t = s.max_initial_trace.as_ref().map(|t| t.approx_f64());
    InstrumentationReport {
        steps: s.step_index,
        max_initial_trace: t,
        step_ratio: t.map(|t| s.step_index as f64 / t),
        linear_steps: s.step_kinds.iter().filter(|k| **k == StepKind::Linear).count(),
        fibonacci_steps: s.step_kinds.iter().filter(|k| **k == StepKind::Fibonacci).count(),
        d: s.d,
        seminorm_trajectory: s.seminorm_history.clone(),
        seminorm_violations: s.seminorm_violations(),
        max_trace_decreasing: s.max_trace_strictly_decreasing().ok(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ReportStep {
    pub kind: String,
    pub first: String,
    pub second: String,
    pub trace_first: String,
    pub trace_second: String,
    pub trace_product: String,
    pub seminorm_product: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ReportWitness {
    pub kind: String,
    pub words: Vec<String>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ReportOracle {
    pub stage: String,
    pub precision: u32,
    /// `(m, φ(m), certified)`.
    pub rows: Vec<(u32, String, bool)>,
}

/// Everything a run report shows, as strings, so that a report read back
/// from its structured form compares equal to the original.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Report {
    pub backend: String,
    pub input: [String; 2],
    pub classes: Option<[String; 2]>,
    pub verdict: String,
    pub reason: Option<String>,
    pub witness: Option<ReportWitness>,
    pub configuration: Option<String>,
    pub max_initial_trace: Option<String>,
    pub budget: Option<u64>,
    pub swapped: bool,
    pub inverted: bool,
    pub last_branch: Option<String>,
    pub d: Option<u32>,
    pub steps: Vec<ReportStep>,
    pub final_words: Option<[String; 2]>,
    pub linear_steps: usize,
    pub fibonacci_steps: usize,
    pub seminorm_envelope: Option<bool>,
    pub trace_monotone: Option<bool>,
    pub oracle: Option<ReportOracle>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReportError {
    #[error("missing or wrong header (expected `{REPORT_HEADER}`)")]
    Header,
    #[error("line {0}: expected `key: value`")]
    Syntax(usize),
    #[error("line {line}: unexpected key `{key}`")]
    UnexpectedKey { line: usize, key: String },
    #[error("missing key `{0}`")]
    Missing(String),
    #[error("key `{key}`: bad value `{value}`")]
    Value { key: String, value: String },
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl Report {
    pub fn from_run(run: &RunResult) -> Report {
        let s = &run.state;
        let instr = instrumentation_report(run);
        let witness = run.verdict.witness().map(|w| match w {
            Witness::Jorgensen { x, y, sum } => ReportWitness {
                kind: w.kind().into(),
                words: vec![x.to_string(), y.to_string()],
                value: sum.to_string(),
            },
            Witness::InfiniteOrderElliptic { word, trace } => ReportWitness {
                kind: w.kind().into(),
                words: vec![word.to_string()],
                value: trace.to_string(),
            },
        });
        let loop_entered = s.pair.is_some();
        Report {
            backend: s.backend.name().into(),
            input: [s.input[0].to_string(), s.input[1].to_string()],
            classes: s.classes.map(|c| [c[0].name().into(), c[1].name().into()]),
            verdict: run.verdict.name().into(),
            reason: run.verdict.reason().map(|r| r.name().into()),
            witness,
            configuration: s.configuration.map(|c| c.name().into()),
            max_initial_trace: s.max_initial_trace.as_ref().map(|t| t.to_string()),
            budget: s.budget,
            swapped: s.swapped,
            inverted: s.inverted,
            last_branch: s.last_branch.map(|b| b.name().into()),
            d: s.d,
            steps: s
                .steps
                .iter()
                .map(|st| ReportStep {
                    kind: st.kind.name().into(),
                    first: st.first_word.to_string(),
                    second: st.second_word.to_string(),
                    trace_first: st.trace_first.to_string(),
                    trace_second: st.trace_second.to_string(),
                    trace_product: st.trace_product.to_string(),
                    seminorm_product: st.seminorm_product.as_ref().map(|x| x.to_string()),
                })
                .collect(),
            final_words: s
                .pair
                .as_ref()
                .map(|p| [p.first_word.to_string(), p.second_word.to_string()]),
            linear_steps: instr.linear_steps,
            fibonacci_steps: instr.fibonacci_steps,
            seminorm_envelope: (loop_entered && s.backend.is_exact()).then_some(instr.seminorm_violations.is_empty()),
            trace_monotone: if loop_entered { instr.max_trace_decreasing } else { None },
            oracle: s.oracle_failure.as_ref().map(|o| ReportOracle {
                stage: o.stage.clone(),
                precision: o.precision,
                rows: o
                    .log
                    .iter()
                    .map(|r| (r.precision, r.value.to_string(), r.certified))
                    .collect(),
            }),
        }
    }

    fn pairs(&self) -> Vec<(String, String)> {
        let mut kv: Vec<(String, String)> = Vec::new();
        let mut put = |k: &str, v: String| kv.push((k.to_string(), v));
        put("backend", self.backend.clone());
        put("input.a", self.input[0].clone());
        put("input.b", self.input[1].clone());
        if let Some([x, y]) = &self.classes {
            put("class.a", x.clone());
            put("class.b", y.clone());
        }
        put("verdict", self.verdict.clone());
        if let Some(r) = &self.reason {
            put("reason", r.clone());
        }
        if let Some(w) = &self.witness {
            put("witness.kind", w.kind.clone());
            put("witness.words", w.words.join(" "));
            put("witness.value", w.value.clone());
        }
        if let Some(c) = &self.configuration {
            put("configuration", c.clone());
        }
        if let Some(t) = &self.max_initial_trace {
            put("max_initial_trace", t.clone());
        }
        if let Some(b) = self.budget {
            put("budget", b.to_string());
        }
        put("swapped", yes_no(self.swapped).into());
        put("inverted", yes_no(self.inverted).into());
        if let Some(b) = &self.last_branch {
            put("branch", b.clone());
        }
        if let Some(d) = self.d {
            put("d", d.to_string());
        }
        put("steps", self.steps.len().to_string());
        for (i, st) in self.steps.iter().enumerate() {
            let p = format!("step.{}", i + 1);
            put(&format!("{p}.kind"), st.kind.clone());
            put(&format!("{p}.first"), st.first.clone());
            put(&format!("{p}.second"), st.second.clone());
            put(&format!("{p}.trace_first"), st.trace_first.clone());
            put(&format!("{p}.trace_second"), st.trace_second.clone());
            put(&format!("{p}.trace_product"), st.trace_product.clone());
            if let Some(sn) = &st.seminorm_product {
                put(&format!("{p}.seminorm_product"), sn.clone());
            }
        }
        if let Some([x, y]) = &self.final_words {
            put("final.first", x.clone());
            put("final.second", y.clone());
        }
        put("instr.linear", self.linear_steps.to_string());
        put("instr.fibonacci", self.fibonacci_steps.to_string());
        if let Some(ok) = self.seminorm_envelope {
            put("instr.seminorm_envelope", yes_no(ok).into());
        }
        if let Some(ok) = self.trace_monotone {
            put("instr.trace_monotone", yes_no(ok).into());
        }
        if let Some(o) = &self.oracle {
            put("oracle.stage", o.stage.clone());
            put("oracle.precision", o.precision.to_string());
            put("oracle.rows", o.rows.len().to_string());
            for (i, (m, v, c)) in o.rows.iter().enumerate() {
                put(&format!("oracle.row.{}", i + 1), format!("{m} {v} {}", yes_no(*c)));
            }
        }
        kv
    }

    /// Structured form: the header line, then one `key: value` per line.
    pub fn to_structured(&self) -> String {
        let mut out = String::from(REPORT_HEADER);
        out.push('\n');
        for (k, v) in self.pairs() {
            let _ = writeln!(out, "{k}: {v}");
        }
        out
    }

    /// Human-readable form; `elapsed` is shown only here so that the
    /// structured form stays reproducible.
    pub fn to_text(&self, elapsed: Option<Duration>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "A = {}", self.input[0]);
        let _ = writeln!(out, "B = {}", self.input[1]);
        let _ = writeln!(out, "backend: {}", self.backend);
        match &self.reason {
            Some(r) => {
                let _ = writeln!(out, "verdict: {} ({r})", self.verdict);
            }
            None => {
                let _ = writeln!(out, "verdict: {}", self.verdict);
            }
        }
        if let Some(w) = &self.witness {
            let _ = writeln!(out, "witness: {} [{}] value {}", w.kind, w.words.join(", "), w.value);
        }
        if let Some(c) = &self.configuration {
            let _ = writeln!(out, "axes: {c}");
        }
        if let (Some(t), Some(b)) = (&self.max_initial_trace, self.budget) {
            let _ = writeln!(out, "T = {t}, budget {b} steps");
        }
        if let Some(d) = self.d {
            let _ = writeln!(out, "first finite-order elliptic: order {d}");
        }
        if !self.steps.is_empty() {
            let _ = writeln!(out, "{:>4}  {:<9}  {:<14}  {:<14}  tr AB⁻¹", "step", "kind", "first", "second");
            for (i, st) in self.steps.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{:>4}  {:<9}  {:<14}  {:<14}  {}",
                    i + 1,
                    st.kind,
                    st.first,
                    st.second,
                    st.trace_product
                );
            }
        }
        let _ = writeln!(
            out,
            "steps: {} ({} linear, {} fibonacci)",
            self.steps.len(),
            self.linear_steps,
            self.fibonacci_steps
        );
        if let Some(b) = &self.last_branch {
            let _ = writeln!(out, "last branch: {b}");
        }
        if let Some(o) = &self.oracle {
            let _ = writeln!(out, "oracle gave up at stage {} (precision {})", o.stage, o.precision);
            for (m, v, c) in &o.rows {
                let _ = writeln!(out, "  m={m:<4} φ(m)={v:<24} {}", if *c { "certified" } else { "straddles" });
            }
        }
        if let Some(e) = elapsed {
            let _ = writeln!(out, "time: {:.3} ms", e.as_secs_f64() * 1e3);
        }
        out
    }
}

struct Fields {
    kv: Vec<(usize, String, String)>,
    pos: usize,
}

impl Fields {
    fn peek(&self, key: &str) -> bool {
        self.kv.get(self.pos).is_some_and(|(_, k, _)| k == key)
    }

    fn opt(&mut self, key: &str) -> Option<String> {
        if self.peek(key) {
            self.pos += 1;
            Some(self.kv[self.pos - 1].2.clone())
        } else {
            None
        }
    }

    fn req(&mut self, key: &str) -> Result<String, ReportError> {
        self.opt(key).ok_or_else(|| ReportError::Missing(key.to_string()))
    }

    fn num<T: std::str::FromStr>(key: &str, v: String) -> Result<T, ReportError> {
        v.parse().map_err(|_| ReportError::Value {
            key: key.to_string(),
            value: v,
        })
    }

    fn flag(key: &str, v: String) -> Result<bool, ReportError> {
        match v.as_str() {
            "yes" => Ok(true),
            "no" => Ok(false),
            _ => Err(ReportError::Value {
                key: key.to_string(),
                value: v,
            }),
        }
    }
}

/// Reads the structured form back.
pub fn parse_structured(text: &str) -> Result<Report, ReportError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end() == REPORT_HEADER => {}
        _ => return Err(ReportError::Header),
    }
    let mut kv = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once(": ").ok_or(ReportError::Syntax(i + 1))?;
        kv.push((i + 1, k.to_string(), v.to_string()));
    }
    let mut f = Fields { kv, pos: 0 };
    let mut r = Report {
        backend: f.req("backend")?,
        input: [f.req("input.a")?, f.req("input.b")?],
        ..Report::default()
    };
    if let Some(a) = f.opt("class.a") {
        r.classes = Some([a, f.req("class.b")?]);
    }
    r.verdict = f.req("verdict")?;
    r.reason = f.opt("reason");
    if let Some(kind) = f.opt("witness.kind") {
        let words = f.req("witness.words")?.split(' ').map(String::from).collect();
        r.witness = Some(ReportWitness {
            kind,
            words,
            value: f.req("witness.value")?,
        });
    }
    r.configuration = f.opt("configuration");
    r.max_initial_trace = f.opt("max_initial_trace");
    r.budget = f.opt("budget").map(|v| Fields::num("budget", v)).transpose()?;
    r.swapped = Fields::flag("swapped", f.req("swapped")?)?;
    r.inverted = Fields::flag("inverted", f.req("inverted")?)?;
    r.last_branch = f.opt("branch");
    r.d = f.opt("d").map(|v| Fields::num("d", v)).transpose()?;
    let n: usize = Fields::num("steps", f.req("steps")?)?;
    for i in 1..=n {
        let p = format!("step.{i}");
        r.steps.push(ReportStep {
            kind: f.req(&format!("{p}.kind"))?,
            first: f.req(&format!("{p}.first"))?,
            second: f.req(&format!("{p}.second"))?,
            trace_first: f.req(&format!("{p}.trace_first"))?,
            trace_second: f.req(&format!("{p}.trace_second"))?,
            trace_product: f.req(&format!("{p}.trace_product"))?,
            seminorm_product: f.opt(&format!("{p}.seminorm_product")),
        });
    }
    if let Some(x) = f.opt("final.first") {
        r.final_words = Some([x, f.req("final.second")?]);
    }
    r.linear_steps = Fields::num("instr.linear", f.req("instr.linear")?)?;
    r.fibonacci_steps = Fields::num("instr.fibonacci", f.req("instr.fibonacci")?)?;
    r.seminorm_envelope = f
        .opt("instr.seminorm_envelope")
        .map(|v| Fields::flag("instr.seminorm_envelope", v))
        .transpose()?;
    r.trace_monotone = f
        .opt("instr.trace_monotone")
        .map(|v| Fields::flag("instr.trace_monotone", v))
        .transpose()?;
    if let Some(stage) = f.opt("oracle.stage") {
        let precision = Fields::num("oracle.precision", f.req("oracle.precision")?)?;
        let n: usize = Fields::num("oracle.rows", f.req("oracle.rows")?)?;
        let mut rows = Vec::new();
        for i in 1..=n {
            let key = format!("oracle.row.{i}");
            let v = f.req(&key)?;
            let bad = || ReportError::Value {
                key: key.clone(),
                value: v.clone(),
            };
            let mut parts = v.split(' ');
            let m = parts.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
            let val = parts.next().ok_or_else(bad)?.to_string();
            let cert = Fields::flag(&key, parts.next().ok_or_else(bad)?.to_string())?;
            rows.push((m, val, cert));
        }
        r.oracle = Some(ReportOracle { stage, precision, rows });
    }
    if let Some((line, key, _)) = f.kv.get(f.pos) {
        return Err(ReportError::UnexpectedKey {
            line: *line,
            key: key.clone(),
        });
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::super::{run, StepBudget};
    use super::*;
    use crate::exactnum::Scalar;
    use crate::moebius::Mat2;

    #[test]
    fn round_trip() {
        let a = Mat2::diagonal(Scalar::rational(3, 2)).unwrap();
        let (q, p, one) = (Scalar::integer(1), Scalar::integer(10), Scalar::integer(1));
        let b = Mat2::diagonal(Scalar::integer(3)).unwrap().conjugate([&q, &p, &one, &one]).unwrap();
        let r = Report::from_run(&run(&a, &b, StepBudget::default()).unwrap());
        let text = r.to_structured();
        assert!(text.starts_with("gmreport v1\n"));
        assert_eq!(parse_structured(&text).unwrap(), r);
    }

    #[test]
    fn rejects_garbage() {
        assert_eq!(parse_structured("hello"), Err(ReportError::Header));
        assert!(matches!(
            parse_structured("gmreport v1\nbackend rational"),
            Err(ReportError::Syntax(2))
        ));
    }
}

//! S-expression syntax for domains and formulas.
//!
//! ```text
//! domain  := (domain (vars NAME*) [(note STRING)] (formula F))
//! F       := (and F F*) | (or F F*) | (not F) | (REL P P)
//! REL     := = | != | < | <= | > | >=
//! P       := NUMBER | NAME | (+ P*) | (* P*) | (- P P*) | (^ P NAT)
//! ```
//!
//! Numbers are integers, `p/q` or decimals. `;` starts a comment.

use std::fmt;

use num_traits::One;

use super::{Formula, MPoly, Relation, SaError, TraceParameterDomain};
use crate::exactnum::parse_rational;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Position {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug)]
enum Sexp {
    Atom(String, Position),
    Str(String, Position),
    List(Vec<Sexp>, Position),
}

impl Sexp {
    fn pos(&self) -> Position {
        match self {
            Sexp::Atom(_, p) | Sexp::Str(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

fn err(pos: Position, message: impl Into<String>) -> SaError {
    SaError::Parse {
        pos,
        message: message.into(),
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Position,
}

impl Reader<'_> {
    fn new(text: &str) -> Reader<'_> {
        Reader {
            chars: text.chars().peekable(),
            pos: Position { line: 1, col: 1 },
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_blank(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while self.chars.peek().is_some_and(|&c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Sexp, SaError> {
        self.skip_blank();
        let start = self.pos;
        match self.chars.peek().copied() {
            None => Err(err(start, "unexpected end of input")),
            Some(')') => Err(err(start, "unexpected `)`")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_blank();
                    match self.chars.peek() {
                        None => return Err(err(start, "unclosed `(`")),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items, start));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some('"') => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(err(start, "unterminated string")),
                        Some('"') => return Ok(Sexp::Str(s, start)),
                        Some('\\') => match self.bump() {
                            Some(c @ ('"' | '\\')) => s.push(c),
                            Some('n') => s.push('\n'),
                            _ => return Err(err(self.pos, "bad escape")),
                        },
                        Some(c) => s.push(c),
                    }
                }
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';') {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Sexp::Atom(s, start))
            }
        }
    }

    fn read_only(mut self) -> Result<Sexp, SaError> {
        let e = self.read()?;
        self.skip_blank();
        if self.chars.peek().is_some() {
            return Err(err(self.pos, "trailing input"));
        }
        Ok(e)
    }
}

fn is_name(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_alphabetic() || c == '_') && cs.all(|c| c.is_alphanumeric() || c == '_')
}

fn head(items: &[Sexp]) -> Option<&str> {
    match items.first() {
        Some(Sexp::Atom(s, _)) => Some(s),
        _ => None,
    }
}

struct Ctx<'a> {
    vars: &'a [String],
}

impl Ctx<'_> {
    fn poly(&self, e: &Sexp) -> Result<MPoly, SaError> {
        let n = self.vars.len();
        match e {
            Sexp::Str(_, p) => Err(err(*p, "string where a polynomial was expected")),
            Sexp::Atom(s, p) => {
                if let Some(i) = self.vars.iter().position(|v| v == s) {
                    return Ok(MPoly::var(i, n));
                }
                if let Some(r) = parse_rational(s) {
                    return Ok(MPoly::constant(r, n));
                }
                if is_name(s) {
                    return Err(SaError::UnboundVariable {
                        pos: *p,
                        name: s.clone(),
                    });
                }
                Err(err(*p, format!("bad number `{s}`")))
            }
            Sexp::List(items, p) => {
                let op = head(items).ok_or_else(|| err(*p, "expected an operator"))?;
                let args = &items[1..];
                match op {
                    "+" => args.iter().try_fold(MPoly::zero(n), |acc, a| Ok(acc.add(&self.poly(a)?))),
                    "*" => args
                        .iter()
                        .try_fold(MPoly::constant_int(1, n), |acc, a| Ok(acc.mul(&self.poly(a)?))),
                    "-" => {
                        let (first, rest) = args.split_first().ok_or_else(|| err(*p, "`-` needs an argument"))?;
                        let first = self.poly(first)?;
                        if rest.is_empty() {
                            return Ok(first.neg());
                        }
                        rest.iter().try_fold(first, |acc, a| Ok(acc.sub(&self.poly(a)?)))
                    }
                    "^" => {
                        let [base, exp] = args else {
                            return Err(err(*p, "`^` takes a base and an exponent"));
                        };
                        let k = match exp {
                            Sexp::Atom(s, _) => s.parse::<u32>().ok(),
                            _ => None,
                        }
                        .ok_or_else(|| err(exp.pos(), "exponent must be a non-negative integer"))?;
                        Ok(self.poly(base)?.pow(k))
                    }
                    other => Err(err(*p, format!("unknown operator `{other}`"))),
                }
            }
        }
    }

    fn formula(&self, e: &Sexp) -> Result<Formula, SaError> {
        let Sexp::List(items, p) = e else {
            return Err(err(e.pos(), "expected a formula"));
        };
        let op = head(items).ok_or_else(|| err(*p, "expected a connective or relation"))?;
        let args = &items[1..];
        match op {
            "and" | "or" => {
                if args.is_empty() {
                    return Err(err(*p, format!("empty `{op}`")));
                }
                let fs = args.iter().map(|a| self.formula(a)).collect::<Result<Vec<_>, _>>()?;
                Ok(if op == "and" { Formula::And(fs) } else { Formula::Or(fs) })
            }
            "not" => match args {
                [f] => Ok(Formula::Not(Box::new(self.formula(f)?))),
                _ => Err(err(*p, "`not` takes one formula")),
            },
            rel => {
                let rel = Relation::from_symbol(rel).ok_or_else(|| err(*p, format!("unknown connective `{rel}`")))?;
                match args {
                    [l, r] => Ok(Formula::compare(&self.poly(l)?, rel, &self.poly(r)?)),
                    _ => Err(err(*p, format!("`{}` takes two polynomials", rel.symbol()))),
                }
            }
        }
    }
}

/// Parses a bare formula over the given variables.
pub fn parse_formula(text: &str, vars: &[String]) -> Result<Formula, SaError> {
    let reader = Reader::new(text);
    let mut probe = Reader::new(text);
    probe.skip_blank();
    if probe.chars.peek().is_none() {
        return Err(SaError::EmptyFormula);
    }
    Ctx { vars }.formula(&reader.read_only()?)
}

pub fn load_domain(text: &str) -> Result<TraceParameterDomain, SaError> {
    let top = Reader::new(text).read_only()?;
    let Sexp::List(items, p) = &top else {
        return Err(err(top.pos(), "expected `(domain ...)`"));
    };
    if head(items) != Some("domain") {
        return Err(err(*p, "expected `(domain ...)`"));
    }
    let mut vars: Option<Vec<String>> = None;
    let mut note = None;
    let mut formula_sexp = None;
    for clause in &items[1..] {
        let Sexp::List(parts, cp) = clause else {
            return Err(err(clause.pos(), "expected a clause"));
        };
        match head(parts) {
            Some("vars") => {
                if vars.is_some() {
                    return Err(err(*cp, "duplicate `vars`"));
                }
                let mut names = Vec::new();
                for v in &parts[1..] {
                    match v {
                        Sexp::Atom(s, vp) if is_name(s) => {
                            if names.contains(s) {
                                return Err(err(*vp, format!("variable `{s}` declared twice")));
                            }
                            names.push(s.clone());
                        }
                        other => return Err(err(other.pos(), "expected a variable name")),
                    }
                }
                vars = Some(names);
            }
            Some("note") => match &parts[1..] {
                [Sexp::Str(s, _)] if note.is_none() => note = Some(s.clone()),
                _ => return Err(err(*cp, "`note` takes one string and appears once")),
            },
            Some("formula") => match &parts[1..] {
                [] => return Err(SaError::EmptyFormula),
                [f] if formula_sexp.is_none() => formula_sexp = Some(f),
                _ => return Err(err(*cp, "`formula` takes one formula and appears once")),
            },
            _ => return Err(err(*cp, "unknown clause")),
        }
    }
    let vars = vars.ok_or_else(|| err(*p, "missing `vars`"))?;
    let f = formula_sexp.ok_or(SaError::EmptyFormula)?;
    let formula = Ctx { vars: &vars }.formula(f)?;
    Ok(TraceParameterDomain { vars, note, formula })
}

fn print_poly(p: &MPoly, names: &[String]) -> String {
    let terms: Vec<String> = p
        .terms()
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .map(|(e, c)| {
            let mut factors = Vec::new();
            if !c.is_one() || e.iter().all(|&k| k == 0) {
                factors.push(c.to_string());
            }
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(names[v].clone()),
                    k => factors.push(format!("(^ {} {k})", names[v])),
                }
            }
            if factors.len() == 1 {
                factors.pop().unwrap_or_default()
            } else {
                format!("(* {})", factors.join(" "))
            }
        })
        .collect();
    match terms.len() {
        0 => "0".into(),
        1 => terms.into_iter().next().unwrap_or_default(),
        _ => format!("(+ {})", terms.join(" ")),
    }
}

fn print_into(f: &Formula, names: &[String], out: &mut String) {
    match f {
        Formula::Atom(a) => {
            out.push_str(&format!("({} {} 0)", a.rel.symbol(), print_poly(&a.poly, names)));
        }
        Formula::And(fs) | Formula::Or(fs) => {
            out.push_str(if matches!(f, Formula::And(_)) { "(and" } else { "(or" });
            for g in fs {
                out.push(' ');
                print_into(g, names, out);
            }
            out.push(')');
        }
        Formula::Not(g) => {
            out.push_str("(not ");
            print_into(g, names, out);
            out.push(')');
        }
    }
}

/// Canonical text of a formula; atoms come out as `(rel P 0)`.
pub fn print_formula(f: &Formula, names: &[String]) -> String {
    let mut out = String::new();
    print_into(f, names, &mut out);
    out
}

pub fn print_domain(d: &TraceParameterDomain) -> String {
    let mut out = format!("(domain\n  (vars {})\n", d.vars.join(" "));
    if let Some(n) = &d.note {
        let escaped = n.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n");
        out.push_str(&format!("  (note \"{escaped}\")\n"));
    }
    out.push_str(&format!("  (formula {}))\n", print_formula(&d.formula, &d.vars)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Scalar;

    const SAMPLE: &str = r#"
; lens between two circles
(domain
  (vars x y)
  (note "two discs")
  (formula
    (and (< (+ (^ x 2) (^ y 2)) 4)
         (< (+ (^ (- x 1) 2) (^ y 2)) 4)
         (not (= y 1/2)))))
"#;

    #[test]
    fn load_and_round_trip() {
        let d = load_domain(SAMPLE).unwrap();
        assert_eq!(d.vars, ["x", "y"]);
        assert_eq!(d.note.as_deref(), Some("two discs"));
        let printed = print_domain(&d);
        assert_eq!(load_domain(&printed).unwrap(), d);
        assert!(d.contains(&[Scalar::rational(1, 2), Scalar::integer(0)]).unwrap());
        assert!(!d.contains(&[Scalar::rational(1, 2), Scalar::rational(1, 2)]).unwrap());
        assert!(!d.contains(&[Scalar::integer(3), Scalar::integer(0)]).unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let e = load_domain("(domain (vars x)\n  (formula (< x zz)))").unwrap_err();
        assert_eq!(
            e,
            SaError::UnboundVariable {
                pos: Position { line: 2, col: 17 },
                name: "zz".into()
            }
        );
        assert!(matches!(load_domain("(domain (vars x) (formula))"), Err(SaError::EmptyFormula)));
        assert!(matches!(load_domain("(domain (vars x) (formula (and)))"), Err(SaError::Parse { .. })));
        assert!(matches!(load_domain("(domain (vars x) (formula (< x 1))"), Err(SaError::Parse { .. })));
        assert!(matches!(parse_formula("  ", &[]), Err(SaError::EmptyFormula)));
    }

    #[test]
    fn printer_shapes() {
        let vars = vec!["t".to_string()];
        let f = parse_formula("(>= (* 3 (- t 1/2)) (^ t 3))", &vars).unwrap();
        assert_eq!(print_formula(&f, &vars), "(>= (+ (* -1 (^ t 3)) (* 3 t) -3/2) 0)");
    }
}

//! Semialgebraic sets: boolean combinations of polynomial sign conditions,
//! evaluated exactly at rational or algebraic points.

mod parse;
mod poly;

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::exactnum::{NumError, Scalar};

pub use parse::{load_domain, parse_formula, print_domain, print_formula, Position};
pub use poly::MPoly;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SaError {
    #[error("{pos}: {message}")]
    Parse { pos: Position, message: String },
    #[error("{pos}: unbound variable `{name}`")]
    UnboundVariable { pos: Position, name: String },
    #[error("empty formula")]
    EmptyFormula,
    #[error("point has {got} coordinates, formula expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("membership needs exact coordinates; oracle reals are not accepted")]
    OracleScalar,
    #[error(transparent)]
    Num(#[from] NumError),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Relation {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Ne => "!=",
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Relation> {
        Some(match s {
            "=" => Relation::Eq,
            "!=" => Relation::Ne,
            "<" => Relation::Lt,
            "<=" => Relation::Le,
            ">" => Relation::Gt,
            ">=" => Relation::Ge,
            _ => return None,
        })
    }

    /// Whether a value with this sign satisfies `value rel 0`.
    pub fn holds(self, sign: Ordering) -> bool {
        match self {
            Relation::Eq => sign == Ordering::Equal,
            Relation::Ne => sign != Ordering::Equal,
            Relation::Lt => sign == Ordering::Less,
            Relation::Le => sign != Ordering::Greater,
            Relation::Gt => sign == Ordering::Greater,
            Relation::Ge => sign != Ordering::Less,
        }
    }

    pub fn negate(self) -> Relation {
        match self {
            Relation::Eq => Relation::Ne,
            Relation::Ne => Relation::Eq,
            Relation::Lt => Relation::Ge,
            Relation::Le => Relation::Gt,
            Relation::Gt => Relation::Le,
            Relation::Ge => Relation::Lt,
        }
    }
}

/// `poly rel 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Atom {
    pub poly: MPoly,
    pub rel: Relation,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Formula {
    Atom(Atom),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
}

impl Formula {
    pub fn atom(poly: MPoly, rel: Relation) -> Formula {
        Formula::Atom(Atom { poly, rel })
    }

    /// `lhs rel rhs`.
    pub fn compare(lhs: &MPoly, rel: Relation, rhs: &MPoly) -> Formula {
        Formula::atom(lhs.sub(rhs), rel)
    }

    pub fn nvars(&self) -> usize {
        match self {
            Formula::Atom(a) => a.poly.nvars(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(|f| f.nvars()).max().unwrap_or(0),
            Formula::Not(f) => f.nvars(),
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Formula::Atom(a) => out.push(a),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_atoms(out)),
            Formula::Not(f) => f.collect_atoms(out),
        }
    }

    /// Pushes negations to the atoms (de Morgan), flipping relations there.
    pub fn negation_normal_form(&self) -> Formula {
        self.nnf(false)
    }

    fn nnf(&self, negate: bool) -> Formula {
        match (self, negate) {
            (Formula::Atom(a), false) => Formula::Atom(a.clone()),
            (Formula::Atom(a), true) => Formula::atom(a.poly.clone(), a.rel.negate()),
            (Formula::Not(f), n) => f.nnf(!n),
            (Formula::And(fs), false) => Formula::And(fs.iter().map(|f| f.nnf(false)).collect()),
            (Formula::And(fs), true) => Formula::Or(fs.iter().map(|f| f.nnf(true)).collect()),
            (Formula::Or(fs), false) => Formula::Or(fs.iter().map(|f| f.nnf(false)).collect()),
            (Formula::Or(fs), true) => Formula::And(fs.iter().map(|f| f.nnf(true)).collect()),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} 0", self.poly, self.rel.symbol())
    }
}

fn check_point(nvars: usize, point: &[Scalar]) -> Result<(), SaError> {
    if point.len() != nvars {
        return Err(SaError::DimensionMismatch {
            expected: nvars,
            got: point.len(),
        });
    }
    if point.iter().any(|x| !x.backend().is_exact()) {
        return Err(SaError::OracleScalar);
    }
    Ok(())
}

fn eval_formula(f: &Formula, point: &[Scalar]) -> Result<bool, SaError> {
    Ok(match f {
        Formula::Atom(a) => a.rel.holds(a.poly.eval(point)?.cmp_zero()?),
        Formula::And(fs) => {
            for g in fs {
                if !eval_formula(g, point)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(fs) => {
            for g in fs {
                if eval_formula(g, point)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Not(g) => !eval_formula(g, point)?,
    })
}

/// Exact membership of `point` (one coordinate per variable).
pub fn eval_membership(f: &Formula, nvars: usize, point: &[Scalar]) -> Result<bool, SaError> {
    check_point(nvars, point)?;
    eval_formula(f, point)
}

/// Value and truth of each atom at `point`, in reading order.
#[derive(Clone, Debug)]
pub struct AtomRow {
    pub atom: String,
    pub value: Scalar,
    pub holds: bool,
}

pub fn explain(f: &Formula, nvars: usize, point: &[Scalar]) -> Result<Vec<AtomRow>, SaError> {
    check_point(nvars, point)?;
    f.atoms()
        .into_iter()
        .map(|a| {
            let value = a.poly.eval(point)?;
            let holds = a.rel.holds(value.cmp_zero()?);
            Ok(AtomRow {
                atom: a.to_string(),
                value,
                holds,
            })
        })
        .collect()
}

/// A countable union given by its members, scanned up to `bound`.
pub struct SaFamily {
    nvars: usize,
    bound: usize,
    member: Box<dyn Fn(usize) -> Formula + Send + Sync>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FamilyVerdict {
    /// The point lies in member `i` (certain).
    InUnion(usize),
    /// The point lies in none of members `0..bound`; says nothing beyond.
    NotInFirstN(usize),
}

impl SaFamily {
    pub fn new(nvars: usize, bound: usize, member: impl Fn(usize) -> Formula + Send + Sync + 'static) -> SaFamily {
        SaFamily {
            nvars,
            bound,
            member: Box::new(member),
        }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn member(&self, i: usize) -> Formula {
        (self.member)(i)
    }
}

pub fn eval_family(family: &SaFamily, point: &[Scalar]) -> Result<FamilyVerdict, SaError> {
    check_point(family.nvars, point)?;
    for i in 0..family.bound {
        if eval_formula(&family.member(i), point)? {
            return Ok(FamilyVerdict::InUnion(i));
        }
    }
    Ok(FamilyVerdict::NotInFirstN(family.bound))
}

/// A region of trace-parameter space cut out by a formula.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceParameterDomain {
    pub vars: Vec<String>,
    pub note: Option<String>,
    pub formula: Formula,
}

impl TraceParameterDomain {
    pub fn contains(&self, point: &[Scalar]) -> Result<bool, SaError> {
        eval_membership(&self.formula, self.vars.len(), point)
    }

    pub fn explain(&self, point: &[Scalar]) -> Result<Vec<AtomRow>, SaError> {
        explain(&self.formula, self.vars.len(), point)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk() -> Formula {
        let x = MPoly::var(0, 2);
        let y = MPoly::var(1, 2);
        Formula::compare(&x.mul(&x).add(&y.mul(&y)), Relation::Lt, &MPoly::constant_int(1, 2))
    }

    #[test]
    fn unit_disk() {
        let f = disk();
        let h = Scalar::rational(1, 2);
        assert!(eval_membership(&f, 2, &[h.clone(), h.clone()]).unwrap());
        assert!(!eval_membership(&f, 2, &[Scalar::integer(1), Scalar::integer(0)]).unwrap());
        assert!(matches!(
            eval_membership(&f, 2, &[h]),
            Err(SaError::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn families() {
        let fam = SaFamily::new(1, 10, |n| {
            Formula::compare(&MPoly::var(0, 1), Relation::Eq, &MPoly::constant_int(n as i64, 1))
        });
        assert_eq!(eval_family(&fam, &[Scalar::integer(3)]).unwrap(), FamilyVerdict::InUnion(3));
        assert_eq!(
            eval_family(&fam, &[Scalar::rational(1, 2)]).unwrap(),
            FamilyVerdict::NotInFirstN(10)
        );
    }

    #[test]
    fn oracle_points_rejected() {
        use crate::exactnum::{DemoConstant, DyadicOracle};
        let p = [Scalar::Oracle(DyadicOracle::demo(DemoConstant::Sqrt2)), Scalar::integer(0)];
        assert_eq!(eval_membership(&disk(), 2, &p), Err(SaError::OracleScalar));
    }

    #[test]
    fn de_morgan() {
        let f = Formula::Not(Box::new(Formula::And(vec![disk(), Formula::Not(Box::new(disk()))])));
        let g = f.negation_normal_form();
        for (x, y) in [(0, 0), (1, 0), (2, 3)] {
            let p = [Scalar::integer(x), Scalar::integer(y)];
            assert_eq!(eval_membership(&f, 2, &p).unwrap(), eval_membership(&g, 2, &p).unwrap());
        }
    }
}

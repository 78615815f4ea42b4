//! Textual inputs: arithmetic expressions, matrix literals, number-field
//! specifications and oracle values.

use std::sync::Arc;

use gmdisc::exactnum::{
    parse_rational, AlgebraicNumber, Backend, DemoConstant, DyadicOracle, Interval, NumberField, Poly, Scalar,
};
use gmdisc::moebius::Mat2;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
enum Expr {
    Num(BigRational),
    Var(char),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    var: char,
}

fn perr(src: &str, pos: usize, msg: &str) -> CliError {
    CliError::Parse(format!("{msg} at column {} in `{src}`", pos + 1))
}

impl Parser<'_> {
    fn peek(&mut self) -> Option<char> {
        self.src[self.pos..].chars().find(|c| !c.is_whitespace()).inspect(|_| {
            let skipped = self.src[self.pos..].len() - self.src[self.pos..].trim_start().len();
            self.pos += skipped;
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(c) if c == self.var || c == '(') {
                // juxtaposition, as in `3g` or `2(g + 1)`
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, CliError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let start = self.pos;
            let neg = self.eat('-');
            let digits: String = self.src[self.pos..].chars().take_while(|c| c.is_ascii_digit()).collect();
            if digits.is_empty() {
                return Err(perr(self.src, start, "expected an integer exponent"));
            }
            self.pos += digits.len();
            let k: i32 = digits.parse().map_err(|_| perr(self.src, start, "exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), if neg { -k } else { k }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, CliError> {
        let start = self.pos;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(perr(self.src, self.pos, "expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c == self.var => {
                self.pos += c.len_utf8();
                Ok(Expr::Var(c))
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let s: String = self.src[self.pos..].chars().take_while(|c| c.is_ascii_digit() || *c == '.').collect();
                self.pos += s.len();
                parse_rational(&s)
                    .map(Expr::Num)
                    .ok_or_else(|| perr(self.src, start, "malformed number"))
            }
            Some(_) => Err(perr(self.src, start, "unexpected character")),
            None => Err(perr(self.src, start, "unexpected end of expression")),
        }
    }
}

fn parse_expr(src: &str, var: char) -> Result<Expr, CliError> {
    let mut p = Parser { src, pos: 0, var };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(perr(src, p.pos, "trailing input"));
    }
    Ok(e)
}

trait Ring: Sized + Clone {
    fn lift(&self, r: BigRational) -> Self;
    fn var(&self) -> Result<Self, CliError>;
    fn add(&self, o: &Self) -> Result<Self, CliError>;
    fn sub(&self, o: &Self) -> Result<Self, CliError>;
    fn mul(&self, o: &Self) -> Result<Self, CliError>;
    fn div(&self, o: &Self) -> Result<Self, CliError>;
    fn neg(&self) -> Self;
}

fn eval<R: Ring>(e: &Expr, ctx: &R) -> Result<R, CliError> {
    Ok(match e {
        Expr::Num(r) => ctx.lift(r.clone()),
        Expr::Var(_) => ctx.var()?,
        Expr::Neg(x) => eval(x, ctx)?.neg(),
        Expr::Add(x, y) => eval(x, ctx)?.add(&eval(y, ctx)?)?,
        Expr::Sub(x, y) => eval(x, ctx)?.sub(&eval(y, ctx)?)?,
        Expr::Mul(x, y) => eval(x, ctx)?.mul(&eval(y, ctx)?)?,
        Expr::Div(x, y) => eval(x, ctx)?.div(&eval(y, ctx)?)?,
        Expr::Pow(x, k) => {
            let base = eval(x, ctx)?;
            let mut acc = ctx.lift(BigRational::one());
            for _ in 0..k.unsigned_abs() {
                acc = acc.mul(&base)?;
            }
            if *k < 0 {
                ctx.lift(BigRational::one()).div(&acc)?
            } else {
                acc
            }
        }
    })
}

/// Scalars of the active backend; `generator` is `g` when a field is set.
#[derive(Clone)]
pub struct ScalarContext {
    proto: Scalar,
    generator: Option<Scalar>,
}

impl ScalarContext {
    pub fn new(backend: Backend, max_precision: u32, field: Option<Arc<NumberField>>) -> ScalarContext {
        let (proto, generator) = match backend {
            Backend::Rational => (Scalar::integer(0), None),
            Backend::Algebraic => {
                let f = field.unwrap_or_else(|| Arc::new(NumberField::rationals()));
                let g = (f.degree() > 1).then(|| Scalar::Algebraic(AlgebraicNumber::generator(f.clone())));
                (Scalar::Algebraic(AlgebraicNumber::from_rational(f, BigRational::zero())), g)
            }
            Backend::Interval => (
                Scalar::Oracle(DyadicOracle::from_rational(BigRational::zero()).with_max_precision(max_precision)),
                None,
            ),
        };
        ScalarContext { proto, generator }
    }

    pub fn scalar(&self, src: &str) -> Result<Scalar, CliError> {
        let e = parse_expr(src.trim(), 'g')?;
        let s = eval(&e, &ScalarRing { ctx: self, value: self.proto.clone() })?;
        Ok(s.value)
    }

    pub fn matrix(&self, src: &str) -> Result<Mat2, CliError> {
        let entries = split_matrix(src)?;
        let [a, b, c, d] = entries.map(|e| self.scalar(&e));
        Ok(Mat2::new(a?, b?, c?, d?)?)
    }
}

#[derive(Clone)]
struct ScalarRing<'a> {
    ctx: &'a ScalarContext,
    value: Scalar,
}

impl Ring for ScalarRing<'_> {
    fn lift(&self, r: BigRational) -> Self {
        ScalarRing {
            ctx: self.ctx,
            value: self.ctx.proto.embed(r),
        }
    }
    fn var(&self) -> Result<Self, CliError> {
        let g = self.ctx.generator.clone().ok_or_else(|| {
            CliError::Parse("`g` needs the algebraic backend and a --field of degree at least 2".into())
        })?;
        Ok(ScalarRing { ctx: self.ctx, value: g })
    }
    fn add(&self, o: &Self) -> Result<Self, CliError> {
        Ok(ScalarRing { ctx: self.ctx, value: self.value.add(&o.value)? })
    }
    fn sub(&self, o: &Self) -> Result<Self, CliError> {
        Ok(ScalarRing { ctx: self.ctx, value: self.value.sub(&o.value)? })
    }
    fn mul(&self, o: &Self) -> Result<Self, CliError> {
        Ok(ScalarRing { ctx: self.ctx, value: self.value.mul(&o.value)? })
    }
    fn div(&self, o: &Self) -> Result<Self, CliError> {
        Ok(ScalarRing { ctx: self.ctx, value: self.value.div(&o.value)? })
    }
    fn neg(&self) -> Self {
        ScalarRing { ctx: self.ctx, value: self.value.neg() }
    }
}

impl Ring for Poly {
    fn lift(&self, r: BigRational) -> Self {
        Poly::constant(r)
    }
    fn var(&self) -> Result<Self, CliError> {
        Ok(Poly::x())
    }
    fn add(&self, o: &Self) -> Result<Self, CliError> {
        Ok(Poly::add(self, o))
    }
    fn sub(&self, o: &Self) -> Result<Self, CliError> {
        Ok(Poly::sub(self, o))
    }
    fn mul(&self, o: &Self) -> Result<Self, CliError> {
        Ok(Poly::mul(self, o))
    }
    fn div(&self, o: &Self) -> Result<Self, CliError> {
        let c = o
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| CliError::Parse("polynomials may only be divided by non-zero constants".into()))?;
        Ok(self.scale(&(BigRational::one() / c)))
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
}

/// `[[a,b],[c,d]]` into its four entry strings.
pub fn split_matrix(src: &str) -> Result<[String; 4], CliError> {
    let compact: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = compact
        .strip_prefix("[[")
        .and_then(|s| s.strip_suffix("]]"))
        .ok_or_else(|| CliError::Parse(format!("matrix literal must look like [[a,b],[c,d]]: `{src}`")))?;
    let rows: Vec<&str> = inner.split("],[").collect();
    let cells: Vec<String> = rows.iter().flat_map(|r| r.split(',')).map(str::to_string).collect();
    if rows.len() != 2 || cells.len() != 4 || cells.iter().any(|c| c.is_empty()) {
        return Err(CliError::Parse(format!("matrix literal must have two rows of two entries: `{src}`")));
    }
    Ok([cells[0].clone(), cells[1].clone(), cells[2].clone(), cells[3].clone()])
}

/// `POLY in [lo, hi]`, e.g. `x^3 - x^2 - 2x + 1 in [9/5, 181/100]`.
pub fn parse_field(src: &str) -> Result<Arc<NumberField>, CliError> {
    let (poly, iv) = src
        .split_once(" in ")
        .ok_or_else(|| CliError::Parse(format!("field must look like `POLY in [lo, hi]`: `{src}`")))?;
    let p = eval(&parse_expr(poly.trim(), 'x')?, &Poly::zero())?;
    let bounds = iv
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .and_then(|s| s.split_once(','))
        .ok_or_else(|| CliError::Parse(format!("root interval must look like [lo, hi]: `{iv}`")))?;
    let num = |s: &str| parse_rational(s).ok_or_else(|| CliError::Parse(format!("bad interval bound `{s}`")));
    let (lo, hi) = (num(bounds.0)?, num(bounds.1)?);
    if lo > hi {
        return Err(CliError::Parse("root interval has lo > hi".into()));
    }
    Ok(Arc::new(NumberField::new(p, Interval::new(lo, hi))?))
}

/// Values for the bit-model demonstration: a rational expression such as
/// `0`, `-1`, `2^-5`, `1/3`, or a built-in name (`sqrt2`, `wobbling-zero`).
pub fn parse_oracle_value(src: &str) -> Result<DyadicOracle, CliError> {
    let src = src.trim();
    if let Some(c) = DemoConstant::from_name(src) {
        return Ok(DyadicOracle::demo(c));
    }
    let e = parse_expr(src, 'g')?;
    let r = eval(&e, &Poly::zero())?
        .as_constant()
        .ok_or_else(|| CliError::Parse(format!("`{src}` is not a rational value")))?;
    Ok(DyadicOracle::from_rational(r))
}

/// The `2^-k` helper used in tests and docs.
pub fn two_to_minus(k: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << k as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_expressions() {
        let ctx = ScalarContext::new(Backend::Rational, 64, None);
        for (src, want) in [("3/4", rat(3, 4)), ("-1.25", rat(-5, 4)), ("2^-5", rat(1, 32)), ("(1+2)*3 - 4/2", rat(7, 1))] {
            assert_eq!(ctx.scalar(src).unwrap().as_rational().unwrap(), want, "{src}");
        }
        assert!(ctx.scalar("g").is_err());
        assert!(ctx.scalar("1 +").is_err());
    }

    #[test]
    fn matrices_and_fields() {
        let ctx = ScalarContext::new(Backend::Rational, 64, None);
        let m = ctx.matrix("[[2, 1], [1, 1]]").unwrap();
        assert_eq!(m.trace().unwrap().as_rational().unwrap(), rat(3, 1));
        assert!(matches!(ctx.matrix("[[1,0],[0,2]]"), Err(CliError::Matrix(_))));
        assert!(matches!(ctx.matrix("[1,0,0,1]"), Err(CliError::Parse(_))));

        let f = parse_field("x^2 - 2 in [1, 3/2]").unwrap();
        let ctx = ScalarContext::new(Backend::Algebraic, 64, Some(f));
        let m = ctx.matrix("[[g, -1], [1, 0]]").unwrap();
        assert!((m.trace().unwrap().approx_f64() - 2f64.sqrt()).abs() < 1e-6);
        assert!(parse_field("x^2 - 2 in [2, 3]").is_err());
    }

    #[test]
    fn oracle_values() {
        assert_eq!(parse_oracle_value("2^-5").unwrap().query(10).to_rational(), two_to_minus(5));
        assert!(parse_oracle_value("sqrt2").is_ok());
        assert!(parse_oracle_value("x").is_err());
    }
}

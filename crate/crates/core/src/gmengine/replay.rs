//! Independent re-certification of a finished run. Everything is recomputed
//! from the input matrices and the stored words; nothing is taken from the
//! engine's own matrices.

use std::cmp::Ordering;

use thiserror::Error;

use super::{RunResult, StepKind, Verdict, Witness, Word};
use crate::exactnum::{NumError, Scalar};
use crate::moebius::{classify, elliptic_order_by_powers, niven_order, order_search_bound, ElementClass, EllipticOrder, Mat2};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReplayError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("step {step}: {what}")]
    Step { step: usize, what: String },
    #[error("verdict not re-certified: {0}")]
    Verdict(String),
}

fn fail(step: usize, what: &str) -> ReplayError {
    ReplayError::Step {
        step,
        what: what.to_string(),
    }
}

struct Checker<'a> {
    a: &'a Mat2,
    b: &'a Mat2,
}

impl Checker<'_> {
    fn eval(&self, w: &Word) -> Result<Mat2, NumError> {
        w.evaluate(self.a, self.b)?.normalized()
    }

    fn gt(&self, x: &Scalar, n: i64) -> Result<bool, NumError> {
        Ok(x.compare(&x.embed_int(n))? == Ordering::Greater)
    }

    /// Loop preconditions for the pair `(X, Y)`: both hyperbolic with
    /// `tr X ≥ tr Y > 2`, `tr XY > 2`, and disjoint axes.
    fn check_pair(&self, step: usize, x: &Mat2, y: &Mat2) -> Result<(), ReplayError> {
        let (tx, ty) = (x.trace()?, y.trace()?);
        if !self.gt(&ty, 2)? {
            return Err(fail(step, "second trace is not above 2"));
        }
        if tx.compare(&ty)? == Ordering::Less {
            return Err(fail(step, "pair not ordered by trace"));
        }
        if !self.gt(&x.mul(y)?.trace()?, 2)? {
            return Err(fail(step, "pair not coherently oriented"));
        }
        if !self.gt(&x.commutator(y)?.trace()?, 2)? {
            return Err(fail(step, "axes not disjoint"));
        }
        Ok(())
    }

    fn non_elementary(&self) -> Result<bool, NumError> {
        let k = self.a.commutator(self.b)?.trace()?;
        Ok(!k.sub(&k.embed_int(2))?.is_zero()?)
    }
}

/// Replays the word ledger step by step and re-certifies the verdict.
pub fn replay(result: &RunResult) -> Result<(), ReplayError> {
    let state = &result.state;
    let [a, b] = &state.input;
    let ck = Checker { a, b };

    let mut words = None;
    if let Some(pair) = &state.pair {
        let (mut w1, mut w2) = (Word::a(), Word::b());
        if state.swapped {
            std::mem::swap(&mut w1, &mut w2);
        }
        if state.inverted {
            w2 = w2.inverse();
        }
        for (i, step) in state.steps.iter().enumerate() {
            let (x, y) = (ck.eval(&w1)?, ck.eval(&w2)?);
            ck.check_pair(i, &x, &y)?;
            let t = x.mul(&y.inverse())?.trace()?;
            if !ck.gt(&t, 2)? {
                return Err(fail(i, "step taken without tr AB⁻¹ > 2"));
            }
            let c = w1.mul(&w2.inverse());
            let (n1, n2) = match step.kind {
                StepKind::Linear => (c, w2.clone()),
                StepKind::Fibonacci => (w2.clone(), c),
            };
            let flipped = n2.inverse();
            if step.first_word != n1 || (step.second_word != n2 && step.second_word != flipped) {
                return Err(fail(i, "word ledger does not follow the step kind"));
            }
            w1 = step.first_word.clone();
            w2 = step.second_word.clone();
        }
        let (x, y) = (ck.eval(&w1)?, ck.eval(&w2)?);
        if !x.projectively_equal(&pair.first)? || !y.projectively_equal(&pair.second)? {
            return Err(fail(state.steps.len(), "final words do not evaluate to the final pair"));
        }
        words = Some((w1, w2, x, y));
    }

    match &result.verdict {
        Verdict::DiscreteFree => {
            let (_, _, x, y) = words.ok_or_else(|| ReplayError::Verdict("no pair recorded".into()))?;
            ck.check_pair(state.steps.len(), &x, &y)?;
            let t = x.mul(&y.inverse())?.trace()?;
            if t.compare(&t.embed_int(-2))? == Ordering::Greater {
                return Err(ReplayError::Verdict(format!("tr AB⁻¹ = {t} is above -2")));
            }
            if !ck.non_elementary()? {
                return Err(ReplayError::Verdict("input pair is elementary".into()));
            }
        }
        Verdict::NotDiscrete(w) | Verdict::NotDiscreteOrElementary(w) => match w {
            Witness::Jorgensen { x, y, .. } => {
                let (mx, my) = (ck.eval(x)?, ck.eval(y)?);
                let tx = mx.trace()?;
                let k = mx.commutator(&my)?.trace()?;
                let excess = k.sub(&k.embed_int(2))?;
                if excess.is_zero()? {
                    return Err(ReplayError::Verdict("witness pair is elementary".into()));
                }
                let sum = tx.square().sub(&tx.embed_int(4))?.abs()?.add(&excess.abs()?)?;
                if sum.compare(&sum.embed_int(1))? != Ordering::Less {
                    return Err(ReplayError::Verdict(format!("Jørgensen sum {sum} is not below 1")));
                }
            }
            Witness::InfiniteOrderElliptic { word, .. } => {
                let m = ck.eval(word)?;
                if classify(&m)? != ElementClass::Elliptic {
                    return Err(ReplayError::Verdict("witness word is not elliptic".into()));
                }
                let t = m.trace()?;
                let order = match t.as_rational() {
                    Some(r) => niven_order(&r),
                    None => elliptic_order_by_powers(&m, order_search_bound(t.field_degree()))?,
                };
                if matches!(order, EllipticOrder::Finite(_)) {
                    return Err(ReplayError::Verdict(format!("witness has {order} order")));
                }
            }
        },
        Verdict::Unresolved(_) => {}
    }
    Ok(())
}

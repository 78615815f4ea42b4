//! The reduction loop for two-generator subgroups with hyperbolic
//! generators: screen with Jørgensen's inequality, branch on `tr AB⁻¹`,
//! and replace the pair by `(AB⁻¹, B)` or `(B, AB⁻¹)` until a stop.

mod replay;
mod report;
mod word;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::exactnum::{Backend, EscalationRow, NumError, Scalar};
use crate::hypgeo::PairConfiguration;
use crate::moebius::{
    classify, coherently_orient, commutator_excess, elliptic_order, maximal_initial_trace, ElementClass, EllipticOrder,
    Mat2, MoebiusError,
};

pub use replay::{replay, ReplayError};
pub use report::{instrumentation_report, parse_structured, InstrumentationReport, Report, ReportError};
pub use word::{Letter, Word};

pub const DEFAULT_BUDGET_CONSTANT: u32 = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("generator {0} is ±I")]
    IdentityGenerator(char),
    #[error("generators use different backends ({0} and {1})")]
    BackendMismatch(Backend, Backend),
    #[error(transparent)]
    Num(NumError),
    #[error(transparent)]
    Moebius(MoebiusError),
    #[error("elementary pair")]
    Elementary,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum StepKind {
    /// `(A, B) → (AB⁻¹, B)`.
    Linear,
    /// `(A, B) → (B, AB⁻¹)`.
    Fibonacci,
}

impl StepKind {
    pub fn name(self) -> &'static str {
        match self {
            StepKind::Linear => "linear",
            StepKind::Fibonacci => "fibonacci",
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An ordered pair of trace-positive matrices with their words in the
/// original generators (words evaluate to the matrices up to sign).
#[derive(Clone, Debug)]
pub struct GeneratorPair {
    pub first: Mat2,
    pub second: Mat2,
    pub first_word: Word,
    pub second_word: Word,
}

impl GeneratorPair {
    pub fn new(first: Mat2, second: Mat2) -> GeneratorPair {
        GeneratorPair {
            first,
            second,
            first_word: Word::a(),
            second_word: Word::b(),
        }
    }

    /// `first · second⁻¹` and its word.
    pub fn product(&self) -> Result<(Mat2, Word), NumError> {
        Ok((
            self.first.mul(&self.second.inverse())?,
            self.first_word.mul(&self.second_word.inverse()),
        ))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum UnresolvedReason {
    ElementaryInput,
    ParabolicCase,
    EllipticCaseBeyondScope,
    OracleIndeterminate,
    StepBudgetExceeded,
}

impl UnresolvedReason {
    pub fn name(self) -> &'static str {
        match self {
            UnresolvedReason::ElementaryInput => "elementary-input",
            UnresolvedReason::ParabolicCase => "parabolic-case",
            UnresolvedReason::EllipticCaseBeyondScope => "elliptic-case-beyond-scope",
            UnresolvedReason::OracleIndeterminate => "oracle-indeterminate",
            UnresolvedReason::StepBudgetExceeded => "step-budget-exceeded",
        }
    }

    pub fn from_name(s: &str) -> Option<UnresolvedReason> {
        [
            UnresolvedReason::ElementaryInput,
            UnresolvedReason::ParabolicCase,
            UnresolvedReason::EllipticCaseBeyondScope,
            UnresolvedReason::OracleIndeterminate,
            UnresolvedReason::StepBudgetExceeded,
        ]
        .into_iter()
        .find(|r| r.name() == s)
    }
}

/// Evidence behind a non-discreteness verdict.
#[derive(Clone, Debug)]
pub enum Witness {
    /// `|tr² X − 4| + |tr[X,Y] − 2| = sum < 1` for the words `X`, `Y`.
    Jorgensen { x: Word, y: Word, sum: Scalar },
    /// The word is elliptic of infinite order.
    InfiniteOrderElliptic { word: Word, trace: Scalar },
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::Jorgensen { .. } => "jorgensen",
            Witness::InfiniteOrderElliptic { .. } => "infinite-order-elliptic",
        }
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    DiscreteFree,
    NotDiscrete(Witness),
    /// Jørgensen violation without a separate non-elementarity certificate.
    NotDiscreteOrElementary(Witness),
    Unresolved(UnresolvedReason),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        !matches!(self, Verdict::Unresolved(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::DiscreteFree => "discrete-free",
            Verdict::NotDiscrete(_) => "not-discrete",
            Verdict::NotDiscreteOrElementary(_) => "not-discrete-or-elementary",
            Verdict::Unresolved(_) => "unresolved",
        }
    }

    pub fn reason(&self) -> Option<UnresolvedReason> {
        match self {
            Verdict::Unresolved(r) => Some(*r),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::NotDiscrete(w) | Verdict::NotDiscreteOrElementary(w) => Some(w),
            _ => None,
        }
    }

    /// Verdict kind and reason, ignoring witness details.
    pub fn same_kind(&self, other: &Verdict) -> bool {
        self.name() == other.name() && self.reason() == other.reason()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Unresolved(r) => write!(f, "unresolved({})", r.name()),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum JorgensenOutcome {
    Pass,
    Violation,
}

/// `|tr² A − 4| + |tr[A,B] − 2|` and its comparison with 1. The pair must
/// be non-elementary.
pub fn jorgensen_test(a: &Mat2, b: &Mat2) -> Result<(JorgensenOutcome, Scalar), EngineError> {
    let ta = a.trace().map_err(EngineError::Num)?;
    let k = a.commutator(b).and_then(|c| c.trace()).map_err(EngineError::Num)?;
    let two = ta.embed_int(2);
    let excess = k.sub(&two).map_err(EngineError::Num)?;
    if excess.is_zero().map_err(EngineError::Num)? {
        return Err(EngineError::Elementary);
    }
    let sum = ta
        .square()
        .sub(&ta.embed_int(4))
        .and_then(|x| x.abs())
        .and_then(|x| x.add(&excess.abs()?))
        .map_err(EngineError::Num)?;
    let outcome = match sum.compare(&sum.embed_int(1)).map_err(EngineError::Num)? {
        Ordering::Less => JorgensenOutcome::Violation,
        _ => JorgensenOutcome::Pass,
    };
    Ok((outcome, sum))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BranchKind {
    DiscreteFree,
    Continue,
    ParabolicBoundary,
    EllipticProduct,
}

impl BranchKind {
    pub fn name(self) -> &'static str {
        match self {
            BranchKind::DiscreteFree => "discrete-free",
            BranchKind::Continue => "continue",
            BranchKind::ParabolicBoundary => "parabolic-boundary",
            BranchKind::EllipticProduct => "elliptic-product",
        }
    }

    pub fn from_name(s: &str) -> Option<BranchKind> {
        [
            BranchKind::DiscreteFree,
            BranchKind::Continue,
            BranchKind::ParabolicBoundary,
            BranchKind::EllipticProduct,
        ]
        .into_iter()
        .find(|b| b.name() == s)
    }
}

#[derive(Clone, Debug)]
pub struct BranchOutcome {
    pub kind: BranchKind,
    /// `AB⁻¹`, not sign-normalized.
    pub product: Mat2,
    pub product_word: Word,
    pub trace: Scalar,
}

/// Splits on `t = tr AB⁻¹`: `t ≤ −2` stops with a discrete free group,
/// `t > 2` continues, `t = 2` is parabolic, anything between is elliptic.
pub fn branch(pair: &GeneratorPair) -> Result<BranchOutcome, NumError> {
    let (product, product_word) = pair.product()?;
    let t = product.trace()?;
    let two = t.embed_int(2);
    let kind = if t.add(&two)?.cmp_zero()? != Ordering::Greater {
        BranchKind::DiscreteFree
    } else {
        match t.sub(&two)?.cmp_zero()? {
            Ordering::Greater => BranchKind::Continue,
            Ordering::Equal => BranchKind::ParabolicBoundary,
            Ordering::Less => BranchKind::EllipticProduct,
        }
    };
    Ok(BranchOutcome {
        kind,
        product,
        product_word,
        trace: t,
    })
}

/// The pair after a `Continue` branch: `(AB⁻¹, B)` when `tr AB⁻¹ ≥ tr B`,
/// otherwise `(B, AB⁻¹)`.
pub fn next_pair(pair: &GeneratorPair, outcome: &BranchOutcome) -> Result<(GeneratorPair, StepKind), NumError> {
    let c = outcome.product.normalized()?;
    let tb = pair.second.trace()?;
    let tc = c.trace()?;
    Ok(if tc.compare(&tb)? != Ordering::Less {
        (
            GeneratorPair {
                first: c,
                second: pair.second.clone(),
                first_word: outcome.product_word.clone(),
                second_word: pair.second_word.clone(),
            },
            StepKind::Linear,
        )
    } else {
        (
            GeneratorPair {
                first: pair.second.clone(),
                second: c,
                first_word: pair.second_word.clone(),
                second_word: outcome.product_word.clone(),
            },
            StepKind::Fibonacci,
        )
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StepBudget {
    /// `ceil(c · T)` steps.
    Proportional(u32),
    Fixed(u64),
}

impl Default for StepBudget {
    fn default() -> Self {
        StepBudget::Proportional(DEFAULT_BUDGET_CONSTANT)
    }
}

impl StepBudget {
    pub fn limit(self, t_upper: &BigRational) -> u64 {
        match self {
            StepBudget::Fixed(n) => n,
            StepBudget::Proportional(c) => {
                let x = t_upper * BigRational::from_integer(BigInt::from(c));
                let (q, r) = x.numer().div_rem(x.denom());
                let ceil = if r.is_zero() { q } else { q + 1 };
                ceil.to_u64().unwrap_or(u64::MAX)
            }
        }
    }
}

/// One replacement step, with the data of the pair it started from.
#[derive(Clone, Debug)]
pub struct StepRecord {
    pub kind: StepKind,
    pub trace_first: Scalar,
    pub trace_second: Scalar,
    pub trace_product: Scalar,
    pub seminorm_first: Option<BigInt>,
    pub seminorm_second: Option<BigInt>,
    pub seminorm_product: Option<BigInt>,
    pub first_word: Word,
    pub second_word: Word,
}

/// Where an oracle comparison failed, with its precision log.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleFailure {
    pub stage: String,
    pub precision: u32,
    pub log: Vec<EscalationRow>,
}

#[derive(Clone, Debug)]
pub struct ReductionState {
    pub backend: Backend,
    pub input: [Mat2; 2],
    pub classes: Option<[ElementClass; 2]>,
    pub configuration: Option<PairConfiguration>,
    pub max_initial_trace: Option<Scalar>,
    pub budget: Option<u64>,
    pub swapped: bool,
    pub inverted: bool,
    pub pair: Option<GeneratorPair>,
    pub step_index: u64,
    /// `tr` of the first (larger-trace) element at each loop entry.
    pub trace_history: Vec<Scalar>,
    /// Seminorm of each new product `AB⁻¹`.
    pub seminorm_history: Vec<BigInt>,
    pub step_kinds: Vec<StepKind>,
    pub steps: Vec<StepRecord>,
    pub last_branch: Option<BranchKind>,
    /// Order of the first finite-order elliptic met.
    pub d: Option<u32>,
    /// Continue steps whose successor pair needed re-orientation.
    pub orientation_flips: u32,
    pub oracle_failure: Option<OracleFailure>,
}

impl ReductionState {
    fn new(a: &Mat2, b: &Mat2) -> ReductionState {
        ReductionState {
            backend: a.backend(),
            input: [a.clone(), b.clone()],
            classes: None,
            configuration: None,
            max_initial_trace: None,
            budget: None,
            swapped: false,
            inverted: false,
            pair: None,
            step_index: 0,
            trace_history: Vec::new(),
            seminorm_history: Vec::new(),
            step_kinds: Vec::new(),
            steps: Vec::new(),
            last_branch: None,
            d: None,
            orientation_flips: 0,
            oracle_failure: None,
        }
    }

    /// Whether the larger trace strictly dropped across every step.
    pub fn max_trace_strictly_decreasing(&self) -> Result<bool, NumError> {
        for w in self.trace_history.windows(2) {
            if w[1].compare(&w[0])? != Ordering::Less {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Steps whose product seminorm exceeds the product of its factors'.
    pub fn seminorm_violations(&self) -> Vec<usize> {
        self.steps
            .iter()
            .enumerate()
            .filter_map(|(i, s)| match (&s.seminorm_first, &s.seminorm_second, &s.seminorm_product) {
                (Some(x), Some(y), Some(z)) if z > &(x * y) => Some(i),
                _ => None,
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub verdict: Verdict,
    pub state: ReductionState,
}

enum Interrupt {
    Indeterminate { stage: &'static str, precision: u32, log: Vec<EscalationRow> },
    Fatal(EngineError),
}

fn interrupt(e: NumError, stage: &'static str) -> Interrupt {
    match e {
        NumError::Indeterminate { precision } => Interrupt::Indeterminate {
            stage,
            precision,
            log: Vec::new(),
        },
        other => Interrupt::Fatal(EngineError::Num(other)),
    }
}

trait Staged<T> {
    fn at(self, stage: &'static str) -> Result<T, Interrupt>;
}

impl<T> Staged<T> for Result<T, NumError> {
    fn at(self, stage: &'static str) -> Result<T, Interrupt> {
        self.map_err(|e| interrupt(e, stage))
    }
}

impl<T> Staged<T> for Result<T, MoebiusError> {
    fn at(self, stage: &'static str) -> Result<T, Interrupt> {
        self.map_err(|e| match e {
            MoebiusError::Num(n) => interrupt(n, stage),
            other => Interrupt::Fatal(EngineError::Moebius(other)),
        })
    }
}

impl<T> Staged<T> for Result<T, EngineError> {
    fn at(self, stage: &'static str) -> Result<T, Interrupt> {
        self.map_err(|e| match e {
            EngineError::Num(n) => interrupt(n, stage),
            other => Interrupt::Fatal(other),
        })
    }
}

/// Escalation log of the first of `xs` whose sign the oracle cannot fix.
fn escalation_of(xs: &[Scalar]) -> Vec<EscalationRow> {
    for x in xs {
        if let Scalar::Oracle(o) = x {
            let e = o.escalate(o.max_precision());
            if matches!(e.sign, crate::exactnum::Sign::Indeterminate(_)) {
                return e.rows;
            }
        }
    }
    Vec::new()
}

fn upper_abs(x: &Scalar) -> BigRational {
    x.upper_bound().max(x.neg().upper_bound())
}

/// Decides discreteness of `⟨A, B⟩` as far as the implemented cases go.
/// The state is returned in full whatever the verdict.
pub fn run(a: &Mat2, b: &Mat2, budget: StepBudget) -> Result<RunResult, EngineError> {
    if a.backend() != b.backend() {
        return Err(EngineError::BackendMismatch(a.backend(), b.backend()));
    }
    let mut state = ReductionState::new(a, b);
    let verdict = match drive(a, b, budget, &mut state) {
        Ok(v) => v,
        Err(Interrupt::Fatal(e)) => return Err(e),
        Err(Interrupt::Indeterminate { stage, precision, log }) => {
            state.oracle_failure = Some(OracleFailure {
                stage: stage.to_string(),
                precision,
                log,
            });
            Verdict::Unresolved(UnresolvedReason::OracleIndeterminate)
        }
    };
    Ok(RunResult { verdict, state })
}

fn drive(a: &Mat2, b: &Mat2, budget: StepBudget, state: &mut ReductionState) -> Result<Verdict, Interrupt> {
    let ca = classify(a).at("classify")?;
    let cb = classify(b).at("classify")?;
    state.classes = Some([ca, cb]);
    if ca == ElementClass::Identity {
        return Err(Interrupt::Fatal(EngineError::IdentityGenerator('A')));
    }
    if cb == ElementClass::Identity {
        return Err(Interrupt::Fatal(EngineError::IdentityGenerator('B')));
    }

    let excess = commutator_excess(a, b).at("elementary-screen")?;
    if excess == Ordering::Equal {
        return Ok(Verdict::Unresolved(UnresolvedReason::ElementaryInput));
    }

    if ca != ElementClass::Hyperbolic || cb != ElementClass::Hyperbolic {
        if a.backend().is_exact() {
            for m in [a, b] {
                if classify(m).at("classify")? == ElementClass::Elliptic {
                    if let EllipticOrder::Finite(n) = elliptic_order(m).at("elliptic-order")? {
                        state.d.get_or_insert(n);
                    }
                }
            }
        }
        let reason = if ca == ElementClass::Parabolic || cb == ElementClass::Parabolic {
            UnresolvedReason::ParabolicCase
        } else {
            UnresolvedReason::EllipticCaseBeyondScope
        };
        return Ok(Verdict::Unresolved(reason));
    }

    // Hyperbolic axes are disjoint exactly when tr[A,B] > 2.
    if excess == Ordering::Less {
        state.configuration = Some(PairConfiguration::Intersecting);
        return Ok(Verdict::Unresolved(UnresolvedReason::EllipticCaseBeyondScope));
    }
    state.configuration = Some(PairConfiguration::Disjoint);

    let t = maximal_initial_trace(a, b).at("maximal-initial-trace")?;
    let limit = budget.limit(&upper_abs(&t));
    state.max_initial_trace = Some(t);
    state.budget = Some(limit);

    let o = coherently_orient(a, b).at("orientation")?;
    state.swapped = o.swapped;
    state.inverted = o.inverted;
    let (mut w1, mut w2) = (Word::a(), Word::b());
    if o.swapped {
        std::mem::swap(&mut w1, &mut w2);
    }
    if o.inverted {
        w2 = w2.inverse();
    }
    let mut pair = GeneratorPair {
        first: o.first,
        second: o.second,
        first_word: w1,
        second_word: w2,
    };

    loop {
        state.trace_history.push(pair.first.trace().at("trace")?);
        state.pair = Some(pair.clone());

        for (x, y, wx, wy) in [
            (&pair.first, &pair.second, &pair.first_word, &pair.second_word),
            (&pair.second, &pair.first, &pair.second_word, &pair.first_word),
        ] {
            let (outcome, sum) = jorgensen_test(x, y).at("jorgensen")?;
            if outcome == JorgensenOutcome::Violation {
                // The elementary screen already certified the group
                // non-elementary, and Nielsen moves keep the group.
                return Ok(Verdict::NotDiscrete(Witness::Jorgensen {
                    x: wx.clone(),
                    y: wy.clone(),
                    sum,
                }));
            }
        }

        let outcome = match branch(&pair) {
            Ok(o) => o,
            Err(NumError::Indeterminate { precision }) => {
                let t = pair.product().at("branch")?.0.trace().at("branch")?;
                let two = t.embed_int(2);
                let probes = [t.add(&two).at("branch")?, t.sub(&two).at("branch")?];
                return Err(Interrupt::Indeterminate {
                    stage: "branch",
                    precision,
                    log: escalation_of(&probes),
                });
            }
            Err(e) => return Err(Interrupt::Fatal(EngineError::Num(e))),
        };
        state.last_branch = Some(outcome.kind);
        match outcome.kind {
            BranchKind::DiscreteFree => return Ok(Verdict::DiscreteFree),
            BranchKind::ParabolicBoundary => return Ok(Verdict::Unresolved(UnresolvedReason::ParabolicCase)),
            BranchKind::EllipticProduct => {
                if !outcome.product.backend().is_exact() {
                    return Err(Interrupt::Indeterminate {
                        stage: "elliptic-order",
                        precision: 0,
                        log: Vec::new(),
                    });
                }
                return Ok(match elliptic_order(&outcome.product).at("elliptic-order")? {
                    EllipticOrder::Finite(n) => {
                        state.d.get_or_insert(n);
                        Verdict::Unresolved(UnresolvedReason::EllipticCaseBeyondScope)
                    }
                    _ => Verdict::NotDiscrete(Witness::InfiniteOrderElliptic {
                        word: outcome.product_word.clone(),
                        trace: outcome.trace.clone(),
                    }),
                });
            }
            BranchKind::Continue => {}
        }

        if state.step_index >= limit {
            return Ok(Verdict::Unresolved(UnresolvedReason::StepBudgetExceeded));
        }
        let (mut next, kind) = next_pair(&pair, &outcome).at("next-pair")?;
        let product_trace = next.first.mul(&next.second).at("orientation")?.trace().at("orientation")?;
        if product_trace.compare(&product_trace.embed_int(2)).at("orientation")? != Ordering::Greater {
            state.orientation_flips += 1;
            next.second = next.second.inverse();
            next.second_word = next.second_word.inverse();
        }
        let sn_product = outcome.product.seminorm();
        if let Some(sn) = &sn_product {
            state.seminorm_history.push(sn.clone());
        }
        state.steps.push(StepRecord {
            kind,
            trace_first: pair.first.trace().at("trace")?,
            trace_second: pair.second.trace().at("trace")?,
            trace_product: outcome.trace.clone(),
            seminorm_first: pair.first.seminorm(),
            seminorm_second: pair.second.seminorm(),
            seminorm_product: sn_product,
            first_word: next.first_word.clone(),
            second_word: next.second_word.clone(),
        });
        state.step_kinds.push(kind);
        state.step_index += 1;
        pair = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(n: i64, d: i64) -> Mat2 {
        Mat2::diagonal(Scalar::rational(n, d)).unwrap()
    }

    fn with_fixed_points(q: i64, p: i64, mu: (i64, i64)) -> Mat2 {
        let (q, p, one) = (Scalar::integer(q), Scalar::integer(p), Scalar::integer(1));
        diag(mu.0, mu.1).conjugate([&q, &p, &one, &one]).unwrap()
    }

    #[test]
    fn jorgensen_examples() {
        let a = Mat2::from_ints(1, 1, 0, 1).unwrap();
        let b = Mat2::from_ints(1, 0, 1, 1).unwrap();
        let (o, sum) = jorgensen_test(&a, &b).unwrap();
        assert_eq!(o, JorgensenOutcome::Pass);
        assert!(sum.same_repr(&Scalar::integer(1)));
        let a = Mat2::from_ratios([(1, 1), (1, 10), (0, 1), (1, 1)]).unwrap();
        let b = Mat2::from_ratios([(1, 1), (0, 1), (1, 10), (1, 1)]).unwrap();
        assert_eq!(jorgensen_test(&a, &b).unwrap().0, JorgensenOutcome::Violation);
        let h = diag(2, 1);
        assert!(matches!(jorgensen_test(&h, &h), Err(EngineError::Elementary)));
    }

    #[test]
    fn parabolic_boundary_fixture() {
        let a = diag(2, 1);
        let b = Mat2::from_ints(8, -9, 1, -1).unwrap();
        let r = run(&a, &b, StepBudget::default()).unwrap();
        assert_eq!(r.verdict.reason(), Some(UnresolvedReason::ParabolicCase));
        assert_eq!(r.state.last_branch, Some(BranchKind::ParabolicBoundary));
        assert_eq!(r.state.step_index, 0);
    }

    #[test]
    fn jorgensen_catches_small_trace() {
        // tr AB⁻¹ = 2 here too, but |tr² B − 4| + |tr[A,B] − 2| = 93/100.
        let b = Mat2::from_ratios([(8, 5), (-1, 25), (1, 1), (3, 5)]).unwrap();
        let r = run(&diag(2, 1), &b, StepBudget::default()).unwrap();
        assert!(matches!(r.verdict, Verdict::NotDiscrete(Witness::Jorgensen { .. })));
        replay(&r).unwrap();
    }

    #[test]
    fn discrete_free_without_steps() {
        let r = run(&diag(3, 1), &with_fixed_points(1, 2, (3, 1)), StepBudget::default()).unwrap();
        assert!(matches!(r.verdict, Verdict::DiscreteFree));
        assert_eq!(r.state.step_index, 0);
    }

    #[test]
    fn continue_then_stop() {
        let r = run(&diag(3, 2), &with_fixed_points(1, 10, (3, 1)), StepBudget::default()).unwrap();
        assert!(r.state.step_index >= 1, "{:?}", r.verdict);
        assert!(r.state.max_trace_strictly_decreasing().unwrap());
        assert!(r.state.seminorm_violations().is_empty());
    }

    #[test]
    fn elementary_input() {
        let a = diag(2, 1);
        let r = run(&a, &a.mul(&a).unwrap(), StepBudget::default()).unwrap();
        assert_eq!(r.verdict.reason(), Some(UnresolvedReason::ElementaryInput));
        let t = Mat2::from_ints(1, 1, 0, 1).unwrap();
        let r = run(&a, &t, StepBudget::default()).unwrap();
        assert_eq!(r.verdict.reason(), Some(UnresolvedReason::ElementaryInput));
    }

    #[test]
    fn identity_rejected() {
        let i = Mat2::from_ints(1, 0, 0, 1).unwrap();
        assert!(matches!(run(&i, &diag(2, 1), StepBudget::default()), Err(EngineError::IdentityGenerator('A'))));
    }

    #[test]
    fn budget_limit() {
        assert_eq!(StepBudget::Proportional(8).limit(&BigRational::new(17.into(), 4.into())), 34);
        assert_eq!(StepBudget::Proportional(1).limit(&BigRational::new(10.into(), 3.into())), 4);
    }
}

//! Geodesics in the upper half-plane and their configurations.

mod render;
mod surd;

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::exactnum::{NumError, Scalar};
use crate::moebius::{axis, classify, ElementClass, Mat2, MoebiusError};

pub use render::{render_scene, Scene, SceneItem};
pub use surd::{sign_surd, sign_two_surds, Surd};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeoError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error("geodesics {0} and {1} are not disjoint")]
    NotDisjoint(usize, usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// A point of `R ∪ {∞}`.
#[derive(Clone, Debug)]
pub enum BoundaryPoint {
    Finite(Surd),
    Infinity,
}

impl BoundaryPoint {
    pub fn finite(x: Scalar) -> BoundaryPoint {
        BoundaryPoint::Finite(Surd::from_scalar(x))
    }

    /// Order on the chart `R ∪ {∞}` with `∞` largest.
    pub fn compare(&self, other: &BoundaryPoint) -> Result<Ordering, NumError> {
        match (self, other) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => Ok(Ordering::Equal),
            (BoundaryPoint::Infinity, _) => Ok(Ordering::Greater),
            (_, BoundaryPoint::Infinity) => Ok(Ordering::Less),
            (BoundaryPoint::Finite(x), BoundaryPoint::Finite(y)) => x.compare(y),
        }
    }

    pub fn approx_f64(&self) -> Option<f64> {
        match self {
            BoundaryPoint::Finite(x) => Some(x.approx_f64()),
            BoundaryPoint::Infinity => None,
        }
    }

    /// Image under the Möbius map of `m`.
    pub fn image(&self, m: &Mat2) -> Result<BoundaryPoint, NumError> {
        let [a, b, c, d] = m.entries();
        match self {
            BoundaryPoint::Infinity => {
                if c.is_zero()? {
                    Ok(BoundaryPoint::Infinity)
                } else {
                    Ok(BoundaryPoint::finite(a.div(c)?))
                }
            }
            BoundaryPoint::Finite(x) => Ok(match x.mobius(a, b, c, d)? {
                Some(y) => BoundaryPoint::Finite(y),
                None => BoundaryPoint::Infinity,
            }),
        }
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Finite(x) => write!(f, "{x}"),
            BoundaryPoint::Infinity => f.write_str("∞"),
        }
    }
}

/// A complete geodesic given by its two distinct endpoints. When oriented,
/// it runs from `ends[0]` to `ends[1]`.
#[derive(Clone, Debug)]
pub struct Geodesic {
    ends: [BoundaryPoint; 2],
    oriented: bool,
}

impl Geodesic {
    pub fn new(p: BoundaryPoint, q: BoundaryPoint) -> Geodesic {
        Geodesic {
            ends: [p, q],
            oriented: false,
        }
    }

    pub fn oriented(from: BoundaryPoint, to: BoundaryPoint) -> Geodesic {
        Geodesic {
            ends: [from, to],
            oriented: true,
        }
    }

    pub fn ends(&self) -> &[BoundaryPoint; 2] {
        &self.ends
    }

    pub fn is_oriented(&self) -> bool {
        self.oriented
    }

    /// Endpoints in chart order.
    pub fn sorted(&self) -> Result<(&BoundaryPoint, &BoundaryPoint), NumError> {
        let [p, q] = &self.ends;
        Ok(match p.compare(q)? {
            Ordering::Greater => (q, p),
            _ => (p, q),
        })
    }

    pub fn image(&self, m: &Mat2) -> Result<Geodesic, NumError> {
        Ok(Geodesic {
            ends: [self.ends[0].image(m)?, self.ends[1].image(m)?],
            oriented: self.oriented,
        })
    }

    /// Whether `x` lies strictly between the endpoints in chart order.
    fn encloses(&self, x: &BoundaryPoint) -> Result<bool, NumError> {
        let (lo, hi) = self.sorted()?;
        Ok(lo.compare(x)? == Ordering::Less && x.compare(hi)? == Ordering::Less)
    }
}

impl fmt::Display for Geodesic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.oriented { " → " } else { ", " };
        write!(f, "({}{sep}{})", self.ends[0], self.ends[1])
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PairConfiguration {
    Disjoint,
    Intersecting,
    SharedEndpoint,
}

impl PairConfiguration {
    pub fn name(self) -> &'static str {
        match self {
            PairConfiguration::Disjoint => "disjoint",
            PairConfiguration::Intersecting => "intersecting",
            PairConfiguration::SharedEndpoint => "shared-endpoint",
        }
    }
}

impl fmt::Display for PairConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Relative position of two geodesics, from the cyclic order of endpoints.
pub fn disjoint(g: &Geodesic, h: &Geodesic) -> Result<PairConfiguration, NumError> {
    for x in g.ends() {
        for y in h.ends() {
            if x.compare(y)? == Ordering::Equal {
                return Ok(PairConfiguration::SharedEndpoint);
            }
        }
    }
    let a = g.encloses(&h.ends[0])?;
    let b = g.encloses(&h.ends[1])?;
    Ok(if a != b {
        PairConfiguration::Intersecting
    } else {
        PairConfiguration::Disjoint
    })
}

/// Whether `g` separates `h1` from `h2`; all three must be pairwise disjoint.
pub fn separates(g: &Geodesic, h1: &Geodesic, h2: &Geodesic) -> Result<bool, GeoError> {
    let all = [g, h1, h2];
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if disjoint(all[i], all[j])? != PairConfiguration::Disjoint {
            return Err(GeoError::NotDisjoint(i, j));
        }
    }
    Ok(g.encloses(&h1.ends[0])? != g.encloses(&h2.ends[0])?)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TripleConfiguration {
    /// Pairwise disjoint, none separating the other two.
    BoundsRegion,
    /// Pairwise disjoint, the geodesic at this index separating the others.
    OneSeparates(usize),
    Intersecting(usize, usize),
    SharedEndpoint(usize, usize),
}

impl fmt::Display for TripleConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TripleConfiguration::BoundsRegion => f.write_str("bounds-region"),
            TripleConfiguration::OneSeparates(i) => write!(f, "one-separates({i})"),
            TripleConfiguration::Intersecting(i, j) => write!(f, "intersecting({i},{j})"),
            TripleConfiguration::SharedEndpoint(i, j) => write!(f, "shared-endpoint({i},{j})"),
        }
    }
}

pub fn triple_configuration(g: [&Geodesic; 3]) -> Result<TripleConfiguration, GeoError> {
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        match disjoint(g[i], g[j])? {
            PairConfiguration::Disjoint => {}
            PairConfiguration::Intersecting => return Ok(TripleConfiguration::Intersecting(i, j)),
            PairConfiguration::SharedEndpoint => return Ok(TripleConfiguration::SharedEndpoint(i, j)),
        }
    }
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        if separates(g[i], g[j], g[k])? {
            return Ok(TripleConfiguration::OneSeparates(i));
        }
    }
    Ok(TripleConfiguration::BoundsRegion)
}

/// What the sign of `tr AB⁻¹` predicts for the axes of `A`, `B`, `AB⁻¹`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TracePrediction {
    /// `tr AB⁻¹ < −2`.
    BoundsRegion,
    /// `tr AB⁻¹ > 2`.
    OneSeparates,
}

#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    pub trace_ab_inv: Scalar,
    pub predicted: TracePrediction,
    pub observed: TripleConfiguration,
    pub agree: bool,
}

/// Compares the trace prediction with the geometry of the three axes, for a
/// coherently oriented hyperbolic pair with `AB⁻¹` hyperbolic.
pub fn geometric_trace_consistency(a: &Mat2, b: &Mat2) -> Result<ConsistencyReport, GeoError> {
    let two = a.a().embed_int(2);
    let (ta, tb) = (a.trace()?, b.trace()?);
    if tb.compare(&two)? != Ordering::Greater || ta.compare(&tb)? == Ordering::Less {
        return Err(GeoError::Precondition("need tr A ≥ tr B > 2".into()));
    }
    if a.mul(b)?.trace()?.compare(&two)? != Ordering::Greater {
        return Err(GeoError::Precondition("pair is not coherently oriented".into()));
    }
    let c = a.mul(&b.inverse())?;
    if classify(&c)? != ElementClass::Hyperbolic {
        return Err(GeoError::Precondition("AB⁻¹ is not hyperbolic".into()));
    }
    let t = c.trace()?;
    let predicted = if t.cmp_zero()? == Ordering::Less {
        TracePrediction::BoundsRegion
    } else {
        TracePrediction::OneSeparates
    };
    let (xa, xb, xc) = (axis(a)?, axis(b)?, axis(&c)?);
    let observed = triple_configuration([&xa, &xb, &xc])?;
    let agree = matches!(
        (predicted, observed),
        (TracePrediction::BoundsRegion, TripleConfiguration::BoundsRegion)
            | (TracePrediction::OneSeparates, TripleConfiguration::OneSeparates(_))
    );
    Ok(ConsistencyReport {
        trace_ab_inv: t,
        predicted,
        observed,
        agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(n: i64) -> BoundaryPoint {
        BoundaryPoint::finite(Scalar::integer(n))
    }

    fn geo(p: i64, q: i64) -> Geodesic {
        Geodesic::new(pt(p), pt(q))
    }

    #[test]
    fn pair_configurations() {
        assert_eq!(disjoint(&geo(0, 1), &geo(2, 3)).unwrap(), PairConfiguration::Disjoint);
        assert_eq!(disjoint(&geo(0, 3), &geo(1, 2)).unwrap(), PairConfiguration::Disjoint);
        assert_eq!(disjoint(&geo(0, 2), &geo(1, 3)).unwrap(), PairConfiguration::Intersecting);
        assert_eq!(disjoint(&geo(0, 2), &geo(2, 3)).unwrap(), PairConfiguration::SharedEndpoint);
        let vertical = Geodesic::new(pt(0), BoundaryPoint::Infinity);
        assert_eq!(disjoint(&vertical, &geo(-1, 1)).unwrap(), PairConfiguration::Intersecting);
        assert_eq!(disjoint(&vertical, &geo(1, 2)).unwrap(), PairConfiguration::Disjoint);
    }

    #[test]
    fn separation() {
        assert!(separates(&geo(1, 2), &geo(0, 3), &geo(4, 5)).is_ok());
        assert!(!separates(&geo(1, 2), &geo(0, 3), &geo(4, 5)).unwrap());
        assert!(separates(&geo(0, 3), &geo(1, 2), &geo(4, 5)).unwrap());
        assert_eq!(
            triple_configuration([&geo(1, 2), &geo(0, 3), &geo(4, 5)]).unwrap(),
            TripleConfiguration::OneSeparates(1)
        );
        assert_eq!(
            triple_configuration([&geo(0, 1), &geo(2, 3), &geo(4, 5)]).unwrap(),
            TripleConfiguration::BoundsRegion
        );
        assert!(matches!(separates(&geo(0, 2), &geo(1, 3), &geo(4, 5)), Err(GeoError::NotDisjoint(0, 1))));
    }

    #[test]
    fn images() {
        let m = Mat2::from_ints(0, -1, 1, 0).unwrap();
        let g = geo(1, 2).image(&m).unwrap();
        let (lo, hi) = g.sorted().unwrap();
        assert_eq!(lo.compare(&pt(-1)).unwrap(), Ordering::Equal);
        assert_eq!(hi.compare(&BoundaryPoint::finite(Scalar::rational(-1, 2))).unwrap(), Ordering::Equal);
        assert!(matches!(pt(0).image(&m).unwrap(), BoundaryPoint::Infinity));
    }

    /// `C diag(μ, 1/μ) C⁻¹` with `C = [[q, p], [1, 1]]`: fixed points `q`, `p`.
    fn with_fixed_points(q: i64, p: i64, mu: i64) -> Mat2 {
        let d = Mat2::diagonal(Scalar::integer(mu)).unwrap();
        let (q, p, one) = (Scalar::integer(q), Scalar::integer(p), Scalar::integer(1));
        d.conjugate([&q, &p, &one, &one]).unwrap()
    }

    #[test]
    fn trace_and_geometry_agree() {
        let a = Mat2::diagonal(Scalar::integer(3)).unwrap();
        let o = crate::moebius::coherently_orient(&a, &with_fixed_points(1, 2, 3)).unwrap();
        let r = geometric_trace_consistency(&o.first, &o.second).unwrap();
        assert_eq!(r.predicted, TracePrediction::BoundsRegion);
        assert!(r.agree, "{r:?}");

        let a = Mat2::diagonal(Scalar::rational(3, 2)).unwrap();
        let o = crate::moebius::coherently_orient(&a, &with_fixed_points(1, 10, 3)).unwrap();
        let r = geometric_trace_consistency(&o.first, &o.second).unwrap();
        assert_eq!(r.predicted, TracePrediction::OneSeparates);
        assert!(r.agree, "{r:?}");
    }
}

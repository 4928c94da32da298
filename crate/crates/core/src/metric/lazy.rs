//! Closed-form metrics on countable carriers, evaluated at any finite depth.
//!
//! Carriers and their point meanings:
//!
//! | carrier     | point `k` at depth `N`       | label        |
//! |-------------|------------------------------|--------------|
//! | `indexed`   | `x_{k+1}`                    | `x1`, `x2`…  |
//! | `grid`      | `k·step`                     | the value    |
//! | `symmetric` | `-1 + 2k/(N-1)` in `[-1, 1]` | the value    |
//! | `plane`     | the `k`-th listed point      | `(u,v)`      |
//!
//! Only the symmetric grid changes with depth; two depths are nested (the
//! smaller point set is a subset) when `N_small - 1` divides `N_big - 1`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::matrix::{comparing_function_metric, Classification, MetricMatrix};
use crate::error::{Error, Result};
use crate::rational::{q, Rational};

pub type Point2 = [Rational; 2];

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Carrier {
    #[default]
    Indexed,
    Grid { step: Rational },
    Symmetric,
    Plane { points: Vec<Point2> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Index(u64),
    Real(Rational),
    Plane(Point2),
}

impl Carrier {
    pub fn check_depth(&self, depth: usize) -> Result<()> {
        if depth < 2 {
            return Err(Error::params(format!("depth must be at least 2, got {depth}")));
        }
        match self {
            Carrier::Grid { step } if !step.is_positive() => {
                Err(Error::params(format!("grid step must be positive, got {step}")))
            }
            Carrier::Plane { points } if depth > points.len() => Err(Error::params(format!(
                "depth {depth} exceeds the {} listed points",
                points.len()
            ))),
            _ => Ok(()),
        }
    }

    pub fn point(&self, depth: usize, k: usize) -> Point {
        match self {
            Carrier::Indexed => Point::Index(k as u64 + 1),
            Carrier::Grid { step } => Point::Real(step * Rational::from_integer(k as i64)),
            Carrier::Symmetric => Point::Real(q(2 * k as i64, depth as i64 - 1) - Rational::one()),
            Carrier::Plane { points } => Point::Plane(points[k].clone()),
        }
    }

    pub fn label(&self, depth: usize, k: usize) -> String {
        match self.point(depth, k) {
            Point::Index(n) => format!("x{n}"),
            Point::Real(x) => x.to_string(),
            Point::Plane([u, v]) => format!("({u},{v})"),
        }
    }

    pub fn labels(&self, depth: usize) -> Arc<[String]> {
        (0..depth).map(|k| self.label(depth, k)).collect()
    }

    /// Whether the depth-`small` points are all among the depth-`big` ones.
    pub fn nested(&self, small: usize, big: usize) -> bool {
        match self {
            Carrier::Symmetric => small >= 2 && (big - 1) % (small - 1) == 0,
            _ => small <= big,
        }
    }
}

fn real(p: &Point) -> &Rational {
    match p {
        Point::Real(x) => x,
        other => panic!("expected a real carrier point, got {other:?}"),
    }
}

fn plane(p: &Point) -> &Point2 {
    match p {
        Point::Plane(x) => x,
        other => panic!("expected a plane carrier point, got {other:?}"),
    }
}

fn index(p: &Point) -> u64 {
    match p {
        Point::Index(n) => *n,
        other => panic!("expected an indexed carrier point, got {other:?}"),
    }
}

/// A named metric with parameters, or a combination of such.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum LazyMetric {
    /// 1 between distinct points.
    Discrete {
        #[serde(default)]
        carrier: Carrier,
    },
    /// `|x - y|` on `{0, step, 2·step, …}`.
    UsualGrid { step: Rational },
    /// `|x - y|` on the symmetric grid of `[-1, 1]`.
    UsualSymmetric,
    /// `|1/n - 1/m|` on `x_1, x_2, …`.
    Shrinking,
    /// `|x-y|` when both `|x|, |y| ≤ 1/2`; 2 between other distinct points.
    Kappa,
    /// `|u-v| + (1/n)|u'-v'|` on listed plane points.
    CauchyDn { n: u64, points: Vec<Point2> },
    /// `|u-v|`, the pointwise limit of `CauchyDn`. Not a metric.
    CauchyLimit { points: Vec<Point2> },
    Scaled { alpha: Rational, base: Box<LazyMetric> },
    Bounded { base: Box<LazyMetric> },
    Capped { base: Box<LazyMetric> },
    Sum { a: Box<LazyMetric>, b: Box<LazyMetric> },
    Zero {
        #[serde(default)]
        carrier: Carrier,
    },
}

impl LazyMetric {
    pub fn scaled(alpha: Rational, base: LazyMetric) -> Self {
        LazyMetric::Scaled { alpha: alpha.abs(), base: Box::new(base) }
    }

    pub fn sum(a: LazyMetric, b: LazyMetric) -> Result<Self> {
        if a.carrier() != b.carrier() {
            return Err(Error::LabelMismatch);
        }
        Ok(LazyMetric::Sum { a: Box::new(a), b: Box::new(b) })
    }

    pub fn carrier(&self) -> Carrier {
        match self {
            LazyMetric::Discrete { carrier } | LazyMetric::Zero { carrier } => carrier.clone(),
            LazyMetric::UsualGrid { step } => Carrier::Grid { step: step.clone() },
            LazyMetric::UsualSymmetric | LazyMetric::Kappa => Carrier::Symmetric,
            LazyMetric::Shrinking => Carrier::Indexed,
            LazyMetric::CauchyDn { points, .. } | LazyMetric::CauchyLimit { points } => {
                Carrier::Plane { points: points.clone() }
            }
            LazyMetric::Scaled { base, .. } | LazyMetric::Bounded { base } | LazyMetric::Capped { base } => {
                base.carrier()
            }
            LazyMetric::Sum { a, .. } => a.carrier(),
        }
    }

    fn check_params(&self) -> Result<()> {
        match self {
            LazyMetric::UsualGrid { step } if !step.is_positive() => {
                Err(Error::params(format!("grid step must be positive, got {step}")))
            }
            LazyMetric::CauchyDn { n: 0, .. } => Err(Error::params("cauchy-dn needs n >= 1")),
            LazyMetric::CauchyDn { points, .. } | LazyMetric::CauchyLimit { points } => {
                for (a, p) in points.iter().enumerate() {
                    if points[..a].contains(p) {
                        return Err(Error::params(format!("duplicate plane point {p:?}")));
                    }
                }
                Ok(())
            }
            LazyMetric::Scaled { base, .. } | LazyMetric::Bounded { base } | LazyMetric::Capped { base } => {
                base.check_params()
            }
            LazyMetric::Sum { a, b } => {
                if a.carrier() != b.carrier() {
                    return Err(Error::LabelMismatch);
                }
                a.check_params()?;
                b.check_params()
            }
            _ => Ok(()),
        }
    }

    /// Distance between carrier points `i` and `j` at the given depth.
    pub fn eval(&self, depth: usize, i: usize, j: usize) -> Rational {
        let carrier = self.carrier();
        self.eval_points(&carrier.point(depth, i), &carrier.point(depth, j))
    }

    fn eval_points(&self, x: &Point, y: &Point) -> Rational {
        if x == y {
            return Rational::zero();
        }
        let half = q(1, 2);
        match self {
            LazyMetric::Discrete { .. } => Rational::one(),
            LazyMetric::Zero { .. } => Rational::zero(),
            LazyMetric::UsualGrid { .. } | LazyMetric::UsualSymmetric => (real(x) - real(y)).abs(),
            LazyMetric::Shrinking => (q(1, index(x) as i64) - q(1, index(y) as i64)).abs(),
            LazyMetric::Kappa => {
                let (a, b) = (real(x), real(y));
                if a.abs() <= half && b.abs() <= half {
                    (a - b).abs()
                } else {
                    Rational::from_integer(2)
                }
            }
            LazyMetric::CauchyDn { n, .. } => {
                let ([u, u2], [v, v2]) = (plane(x), plane(y));
                (u - v).abs() + (u2 - v2).abs() * q(1, *n as i64)
            }
            LazyMetric::CauchyLimit { .. } => {
                let ([u, _], [v, _]) = (plane(x), plane(y));
                (u - v).abs()
            }
            LazyMetric::Scaled { alpha, base } => alpha * base.eval_points(x, y),
            LazyMetric::Bounded { base } => {
                let b = base.eval_points(x, y);
                &b / (Rational::one() + &b)
            }
            LazyMetric::Capped { base } => {
                let b = base.eval_points(x, y);
                if b > Rational::one() {
                    Rational::one()
                } else {
                    b
                }
            }
            LazyMetric::Sum { a, b } => a.eval_points(x, y) + b.eval_points(x, y),
        }
    }

    /// The first `depth` carrier points as an exact table.
    pub fn materialize(&self, depth: usize) -> Result<MetricMatrix> {
        self.check_params()?;
        let carrier = self.carrier();
        carrier.check_depth(depth)?;
        let points: Vec<Point> = (0..depth).map(|k| carrier.point(depth, k)).collect();
        MetricMatrix::from_fn(carrier.labels(depth), |i, j| self.eval_points(&points[i], &points[j]))
    }

    /// A lower bound on every distance between distinct carrier points, valid
    /// at all depths at once. 0 means none is known (or the infimum is 0).
    pub fn distance_lower_bound(&self) -> Rational {
        match self {
            LazyMetric::Discrete { .. } => Rational::one(),
            LazyMetric::UsualGrid { step } => step.clone(),
            LazyMetric::UsualSymmetric | LazyMetric::Shrinking | LazyMetric::Kappa | LazyMetric::Zero { .. } => {
                Rational::zero()
            }
            LazyMetric::CauchyDn { points, .. } | LazyMetric::CauchyLimit { points } => {
                self.listed_extreme(points, false).unwrap_or_else(Rational::zero)
            }
            LazyMetric::Scaled { alpha, base } => alpha * base.distance_lower_bound(),
            LazyMetric::Bounded { base } => {
                let b = base.distance_lower_bound();
                &b / (Rational::one() + &b)
            }
            LazyMetric::Capped { base } => Rational::min_of([&base.distance_lower_bound(), &Rational::one()])
                .expect("two values"),
            LazyMetric::Sum { a, b } => a.distance_lower_bound() + b.distance_lower_bound(),
        }
    }

    /// An upper bound on every distance, if the metric is bounded.
    pub fn distance_upper_bound(&self) -> Option<Rational> {
        match self {
            LazyMetric::Discrete { .. } => Some(Rational::one()),
            LazyMetric::UsualGrid { .. } => None,
            LazyMetric::UsualSymmetric | LazyMetric::Kappa => Some(Rational::from_integer(2)),
            LazyMetric::Shrinking => Some(Rational::one()),
            LazyMetric::Zero { .. } => Some(Rational::zero()),
            LazyMetric::CauchyDn { points, .. } | LazyMetric::CauchyLimit { points } => {
                Some(self.listed_extreme(points, true).unwrap_or_else(Rational::zero))
            }
            LazyMetric::Scaled { alpha, base } => base.distance_upper_bound().map(|u| alpha * u),
            LazyMetric::Bounded { base } => Some(match base.distance_upper_bound() {
                Some(u) => &u / (Rational::one() + &u),
                None => Rational::one(),
            }),
            LazyMetric::Capped { base } => Some(match base.distance_upper_bound() {
                Some(u) if u < Rational::one() => u,
                _ => Rational::one(),
            }),
            LazyMetric::Sum { a, b } => Some(a.distance_upper_bound()? + b.distance_upper_bound()?),
        }
    }

    fn listed_extreme(&self, points: &[Point2], max: bool) -> Option<Rational> {
        let pts: Vec<Point> = points.iter().cloned().map(Point::Plane).collect();
        let values = (0..pts.len())
            .flat_map(|i| (i + 1..pts.len()).map(move |j| (i, j)))
            .map(|(i, j)| self.eval_points(&pts[i], &pts[j]));
        if max {
            values.max()
        } else {
            values.min()
        }
    }

    /// Splits `c·base` into `(c, base)`, peeling nested scalings.
    fn coefficient_and_base(&self) -> (Rational, &LazyMetric) {
        match self {
            LazyMetric::Scaled { alpha, base } => {
                let (c, b) = base.coefficient_and_base();
                (alpha * c, b)
            }
            other => (Rational::one(), other),
        }
    }
}

/// Exact `C_d(ρ)` when both are multiples of one base metric.
pub fn structural_ratio(d: &LazyMetric, rho: &LazyMetric) -> Option<Rational> {
    let (cd, bd) = d.coefficient_and_base();
    let (cr, br) = rho.coefficient_and_base();
    (bd == br && cd.is_positive() && !matches!(bd, LazyMetric::Zero { .. })).then(|| cr / cd)
}

/// Parameters accepted by [`builtin_lazy`] and [`builtin_metric`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct BuiltinParams {
    pub step: Option<Rational>,
    pub n: Option<u64>,
    pub points: Option<Vec<Point2>>,
    pub carrier: Option<Carrier>,
}

pub const BUILTIN_NAMES: [&str; 6] = ["discrete", "usual-grid", "usual-symmetric", "shrinking", "kappa", "cauchy-dn"];

pub fn builtin_lazy(name: &str, params: &BuiltinParams) -> Result<LazyMetric> {
    let metric = match name {
        "discrete" => LazyMetric::Discrete {
            carrier: params.carrier.clone().unwrap_or_default(),
        },
        "usual-grid" => LazyMetric::UsualGrid {
            step: params.step.clone().unwrap_or_else(Rational::one),
        },
        "usual-symmetric" => LazyMetric::UsualSymmetric,
        "shrinking" => LazyMetric::Shrinking,
        "kappa" => LazyMetric::Kappa,
        "cauchy-dn" => LazyMetric::CauchyDn {
            n: params.n.ok_or_else(|| Error::params("cauchy-dn needs n"))?,
            points: params
                .points
                .clone()
                .ok_or_else(|| Error::params("cauchy-dn needs points"))?,
        },
        other => return Err(Error::UnknownBuiltin(other.to_string())),
    };
    metric.check_params()?;
    Ok(metric)
}

/// The depth of the symmetric grid of `[-1, 1]` with spacing `step`.
pub fn symmetric_depth_for_step(step: &Rational) -> Result<usize> {
    if !step.is_positive() {
        return Err(Error::params(format!("grid step must be positive, got {step}")));
    }
    let intervals = Rational::from_integer(2) / step;
    if !intervals.is_integer() {
        return Err(Error::params(format!("step {step} does not divide [-1, 1] evenly")));
    }
    let n: usize = intervals
        .numer()
        .try_into()
        .map_err(|_| Error::params("grid too fine"))?;
    Ok(n + 1)
}

/// Materializes a named metric on its first `depth` canonical points. For
/// the symmetric-grid families a `step` parameter, if given, must agree with
/// `depth` (step 1/10 means 21 points).
pub fn builtin_metric(name: &str, params: &BuiltinParams, depth: usize) -> Result<MetricMatrix> {
    let metric = builtin_lazy(name, params)?;
    if metric.carrier() == Carrier::Symmetric {
        if let Some(step) = &params.step {
            let expected = symmetric_depth_for_step(step)?;
            if expected != depth {
                return Err(Error::params(format!(
                    "step {step} gives {expected} grid points, but depth is {depth}"
                )));
            }
        }
    }
    metric.materialize(depth)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PartialComparing {
    pub depths: Vec<usize>,
    pub values: Vec<Rational>,
    pub nonincreasing: bool,
    pub strictly_decreasing: bool,
}

/// Exact pair minima of `ρ/d` over the first `depths[k]` points. Each is an
/// upper bound for the carrier-wide infimum.
pub fn partial_comparing_function(d: &LazyMetric, rho: &LazyMetric, depths: &[usize]) -> Result<PartialComparing> {
    if depths.is_empty() {
        return Err(Error::params("at least one depth is required"));
    }
    if depths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::params("depths must be strictly increasing"));
    }
    let carrier = d.carrier();
    if carrier != rho.carrier() {
        return Err(Error::LabelMismatch);
    }
    if let Some(w) = depths.windows(2).find(|w| !carrier.nested(w[0], w[1])) {
        return Err(Error::params(format!(
            "depth {} points are not a subset of depth {} points on this carrier",
            w[0], w[1]
        )));
    }
    let values = depths
        .iter()
        .map(|&n| Ok(comparing_function_metric(&d.materialize(n)?, &rho.materialize(n)?)?.value))
        .collect::<Result<Vec<_>>>()?;
    Ok(PartialComparing {
        nonincreasing: values.windows(2).all(|w| w[0] >= w[1]),
        strictly_decreasing: values.windows(2).all(|w| w[0] > w[1]),
        depths: depths.to_vec(),
        values,
    })
}

/// One direction of a lazy comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum DirectionVerdict {
    /// `α·d ≤ ρ` on the whole carrier; `exact` when `α` equals `C_d(ρ)`.
    Certified { alpha: Rational, exact: bool },
    /// Depth minima strictly decrease: evidence for `C_d(ρ) = 0`, not proof.
    Decaying { bounds: PartialComparing },
    Inconclusive { bounds: PartialComparing },
}

impl DirectionVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, DirectionVerdict::Certified { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LazyComparison {
    pub first_second: DirectionVerdict,
    pub second_first: DirectionVerdict,
    pub classification: Classification,
    /// True when any part of the classification rests on a depth trend
    /// rather than a carrier-wide certificate.
    pub trend_based: bool,
}

/// Carrier-wide certificate for `ρ ∈ L(d)`, if one follows from exact
/// bounds: `ρ ≥ inf ρ ≥ (inf ρ / sup d)·d`.
pub fn lazy_certificate(d: &LazyMetric, rho: &LazyMetric) -> Option<(Rational, bool)> {
    if let Some(r) = structural_ratio(d, rho) {
        return Some((r, true));
    }
    let lower = rho.distance_lower_bound();
    let upper = d.distance_upper_bound()?;
    (lower.is_positive() && upper.is_positive()).then(|| (lower / upper, false))
}

fn direction(d: &LazyMetric, rho: &LazyMetric, depths: &[usize]) -> Result<DirectionVerdict> {
    let bounds = partial_comparing_function(d, rho, depths)?;
    if let Some((alpha, exact)) = lazy_certificate(d, rho) {
        return Ok(DirectionVerdict::Certified { alpha, exact });
    }
    if depths.len() >= 2 && bounds.strictly_decreasing {
        Ok(DirectionVerdict::Decaying { bounds })
    } else {
        Ok(DirectionVerdict::Inconclusive { bounds })
    }
}

pub fn classify_lazy(d: &LazyMetric, rho: &LazyMetric, depths: &[usize]) -> Result<LazyComparison> {
    let first_second = direction(d, rho, depths)?;
    let second_first = direction(rho, d, depths)?;
    let inconclusive = |v: &DirectionVerdict| matches!(v, DirectionVerdict::Inconclusive { .. });
    let classification = if inconclusive(&first_second) || inconclusive(&second_first) {
        Classification::Inconclusive
    } else {
        Classification::from_positivity(first_second.is_certified(), second_first.is_certified())
    };
    let trend_based = !(first_second.is_certified() && second_first.is_certified());
    Ok(LazyComparison {
        first_second,
        second_first,
        classification,
        trend_based,
    })
}

impl super::matrix::Transformable for LazyMetric {
    fn bounded(&self) -> Result<Self> {
        if matches!(self, LazyMetric::Zero { .. }) {
            return Err(Error::ZeroElement("the bounded transform needs a nonzero metric".into()));
        }
        Ok(LazyMetric::Bounded { base: Box::new(self.clone()) })
    }

    fn capped(&self) -> Result<Self> {
        if matches!(self, LazyMetric::Zero { .. }) {
            return Err(Error::ZeroElement("the capped transform needs a nonzero metric".into()));
        }
        Ok(LazyMetric::Capped { base: Box::new(self.clone()) })
    }
}

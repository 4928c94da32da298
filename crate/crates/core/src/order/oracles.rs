//! Comparing-function oracles for the shipped instances.

use std::sync::Arc;

use super::{Comparing, ComparingOracle};
use crate::error::{Error, Result};
use crate::evs::Evs;
use crate::instances::{ConeSpace, HyperSpace};
use crate::metric::{
    comparing_function_metric, lazy_certificate, partial_comparing_function, Carrier, LazyMetric, MetricMatrix,
    MetricSpace,
};
use crate::norm::{independence_witness, NormElement, NormMode, NormSpace, Side, Weighting};
use crate::rational::{Rational, Scalar};

impl ComparingOracle for MetricSpace {
    fn comparing(&self, x: &MetricMatrix, y: &MetricMatrix) -> Comparing {
        match comparing_function_metric(x, y) {
            Ok(c) => Comparing::Exact { value: c.value },
            Err(e) => Comparing::Unavailable { reason: e.to_string() },
        }
    }
}

/// Closed-form metrics on one countable carrier. Order and equality are
/// evaluated on the deepest configured truncation; comparing values come
/// from carrier-wide certificates or depth-indexed bounds.
#[derive(Clone, Debug)]
pub struct LazyMetricSpace {
    carrier: Carrier,
    depths: Arc<[usize]>,
}

impl LazyMetricSpace {
    pub fn new(carrier: Carrier, depths: &[usize]) -> Result<Self> {
        let Some(&deepest) = depths.last() else {
            return Err(Error::params("at least one depth is required"));
        };
        carrier.check_depth(deepest)?;
        if depths.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::params("depths must be strictly increasing"));
        }
        Ok(LazyMetricSpace { carrier, depths: depths.into() })
    }

    pub fn depths(&self) -> &[usize] {
        &self.depths
    }

    fn deepest(&self) -> usize {
        *self.depths.last().expect("nonempty")
    }

    fn table(&self, m: &LazyMetric) -> MetricMatrix {
        m.materialize(self.deepest())
            .expect("element was admitted at the deepest truncation")
    }
}

impl Evs for LazyMetricSpace {
    type Element = LazyMetric;

    fn name(&self) -> String {
        format!("D(X), lazy metrics, depths {:?}", self.depths)
    }

    fn zero(&self) -> LazyMetric {
        LazyMetric::Zero { carrier: self.carrier.clone() }
    }

    fn add(&self, a: &LazyMetric, b: &LazyMetric) -> LazyMetric {
        match (a, b) {
            (LazyMetric::Zero { .. }, other) | (other, LazyMetric::Zero { .. }) => other.clone(),
            _ => LazyMetric::Sum { a: Box::new(a.clone()), b: Box::new(b.clone()) },
        }
    }

    fn scale(&self, alpha: &Scalar, a: &LazyMetric) -> LazyMetric {
        if alpha.is_zero() || matches!(a, LazyMetric::Zero { .. }) {
            self.zero()
        } else {
            LazyMetric::scaled(alpha.clone(), a.clone())
        }
    }

    fn leq(&self, a: &LazyMetric, b: &LazyMetric) -> bool {
        let (x, y) = (self.table(a), self.table(b));
        x.rows().iter().zip(y.rows()).all(|(r, s)| r.iter().zip(s).all(|(p, q)| p <= q))
    }

    fn equal(&self, a: &LazyMetric, b: &LazyMetric) -> bool {
        a == b || self.table(a).rows() == self.table(b).rows()
    }

    fn admits(&self, e: &LazyMetric) -> Result<()> {
        if e.carrier() != self.carrier {
            return Err(Error::LabelMismatch);
        }
        e.materialize(self.deepest()).map(|_| ())
    }

    fn is_zero(&self, a: &LazyMetric) -> bool {
        matches!(a, LazyMetric::Zero { .. }) || self.table(a).is_zero()
    }
}

impl ComparingOracle for LazyMetricSpace {
    fn comparing(&self, x: &LazyMetric, y: &LazyMetric) -> Comparing {
        if let Some((alpha, exact)) = lazy_certificate(x, y) {
            return if exact {
                Comparing::Exact { value: alpha }
            } else {
                Comparing::Certified { alpha }
            };
        }
        match partial_comparing_function(x, y, &self.depths) {
            Ok(bounds) if bounds.depths.len() >= 2 && bounds.strictly_decreasing => Comparing::Decaying { bounds },
            Ok(bounds) => Comparing::Bounded { bounds },
            Err(e) => Comparing::Unavailable { reason: e.to_string() },
        }
    }
}

fn family_eps(a: &Rational, b: &Rational) -> Rational {
    let gamma = if a < b { a } else { b };
    gamma.pow(-30)
}

impl ComparingOracle for NormSpace {
    fn comparing(&self, x: &NormElement, y: &NormElement) -> Comparing {
        let (Some((cx, wx)), Some((cy, wy))) = (x.as_single(), y.as_single()) else {
            return Comparing::Unavailable {
                reason: "comparing values are only computed between single weighted sup norms".into(),
            };
        };
        match self.mode() {
            NormMode::Finite => {
                let (Ok(fx), Ok(fy)) = (self.finite_weights_of(wx), self.finite_weights_of(wy)) else {
                    return Comparing::Unavailable { reason: "weights do not cover the index set".into() };
                };
                if !fx.indices().eq(fy.indices()) {
                    return Comparing::Unavailable { reason: "weight maps over different index sets".into() };
                }
                // inf_x max(v|λ|)/max(w|λ|) = min_h v(h)/w(h), attained at a unit vector.
                let value = fx
                    .iter()
                    .zip(fy.iter())
                    .map(|((_, w), (_, v))| (cy * v) / (cx * w))
                    .min()
                    .expect("nonempty index set");
                Comparing::Exact { value }
            }
            NormMode::Family => {
                let (Weighting::Family { params: p }, Weighting::Family { params: q }) = (wx, wy) else {
                    return Comparing::Unavailable { reason: "family mode compares family norms only".into() };
                };
                if p.subset_c == q.subset_c && p.gamma == q.gamma {
                    return Comparing::Exact { value: cy / cx };
                }
                let eps = family_eps(&p.gamma, &q.gamma);
                // The witness must beat eps after the coefficients rescale it.
                let mut target = &eps * cx / cy;
                if target >= Rational::one() {
                    target = Rational::new(1, 2);
                }
                match independence_witness(p, q, &target) {
                    Ok(report) => {
                        let d = report
                            .directions
                            .iter()
                            .find(|d| d.numerator == Side::Q)
                            .expect("one direction has q on top");
                        Comparing::EpsWitness {
                            eps,
                            index: d.basis_index.clone(),
                            ratio: &d.ratio * cy / cx,
                        }
                    }
                    Err(e) => Comparing::Unavailable { reason: e.to_string() },
                }
            }
        }
    }
}

impl ComparingOracle for ConeSpace {
    fn comparing(&self, _: &Self::Element, _: &Self::Element) -> Comparing {
        Comparing::Unavailable { reason: "the cone is not zero-primitive; search a universe instead".into() }
    }

    fn zero_primitive(&self) -> bool {
        false
    }
}

impl ComparingOracle for HyperSpace {
    fn comparing(&self, _: &Self::Element, _: &Self::Element) -> Comparing {
        Comparing::Unavailable {
            reason: "the hyperspace is not zero-primitive; search a universe instead".into(),
        }
    }

    fn zero_primitive(&self) -> bool {
        false
    }
}

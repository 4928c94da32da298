//! `d_n = |u-v| + (1/n)|u'-v'|` is Cauchy in `n`, but its pointwise limit
//! `|u-v|` is not a metric on the plane.

use serde::{Deserialize, Serialize};

use super::lazy::{LazyMetric, Point2};
use super::matrix::{validate_metric, MetricValidation};
use crate::error::{Error, Result};
use crate::rational::{q, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GapCheck {
    pub pair: usize,
    pub n: u64,
    pub m: u64,
    pub gap: Rational,
    pub bound: Rational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CauchyDemoReport {
    pub depths: Vec<u64>,
    pub pairs: Vec<[Point2; 2]>,
    /// `C = max |u' - v'|` over the sampled pairs.
    pub constant: Rational,
    pub gaps: Vec<GapCheck>,
    pub all_gaps_hold: bool,
    /// First pair with equal first and distinct second coordinates.
    pub witness: [Point2; 2],
    pub limit_value: Rational,
    pub limit_validation: MetricValidation,
}

impl CauchyDemoReport {
    /// The demo succeeds when every gap bound holds and the limit is
    /// rejected as a metric.
    pub fn pass(&self) -> bool {
        self.all_gaps_hold && self.limit_value.is_zero() && !self.limit_validation.pass
    }
}

fn dn(n: u64, [u, u2]: &Point2, [v, v2]: &Point2) -> Rational {
    (u - v).abs() + (u2 - v2).abs() * q(1, n as i64)
}

pub fn cauchy_incompleteness_demo(depths: &[u64], pairs: &[[Point2; 2]]) -> Result<CauchyDemoReport> {
    if pairs.is_empty() {
        return Err(Error::input("at least one point pair is required"));
    }
    if depths.contains(&0) {
        return Err(Error::params("depth indices n must be at least 1"));
    }
    let witness = pairs
        .iter()
        .find(|[x, y]| x[0] == y[0] && x[1] != y[1])
        .cloned()
        .ok_or_else(|| {
            Error::input("no pair with equal first and distinct second coordinates to witness the limit")
        })?;
    let constant = pairs
        .iter()
        .map(|[x, y]| (&x[1] - &y[1]).abs())
        .max()
        .expect("nonempty");

    let mut gaps = Vec::new();
    for (k, [x, y]) in pairs.iter().enumerate() {
        for (a, &n) in depths.iter().enumerate() {
            for &m in &depths[a + 1..] {
                let gap = (dn(n, x, y) - dn(m, x, y)).abs();
                let bound = &constant * (q(1, n as i64) - q(1, m as i64)).abs();
                gaps.push(GapCheck { pair: k, n, m, holds: gap <= bound, gap, bound });
            }
        }
    }

    let limit = LazyMetric::CauchyLimit { points: witness.to_vec() };
    let limit_value = limit.eval(2, 0, 1);
    let limit_validation = validate_metric(&limit.materialize(2)?)?;
    Ok(CauchyDemoReport {
        depths: depths.to_vec(),
        pairs: pairs.to_vec(),
        constant,
        all_gaps_hold: gaps.iter().all(|g| g.holds),
        gaps,
        witness,
        limit_value,
        limit_validation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::matrix::MetricViolation;

    fn p(u: i64, v: i64) -> Point2 {
        [q(u, 1), q(v, 1)]
    }

    #[test]
    fn single_witness_pair() {
        let r = cauchy_incompleteness_demo(&[10, 20], &[[p(0, 0), p(0, 1)]]).unwrap();
        assert_eq!(r.gaps[0].gap, q(1, 20));
        assert_eq!(r.gaps[0].bound, q(1, 20));
        assert!(r.pass());
        assert_eq!(r.limit_value, Rational::zero());
        assert_eq!(r.limit_validation.violation, Some(MetricViolation::Indiscernible { i: 0, j: 1 }));
    }

    #[test]
    fn missing_witness_is_an_input_error() {
        let err = cauchy_incompleteness_demo(&[10, 20], &[[p(0, 0), p(1, 0)]]).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
        assert!(cauchy_incompleteness_demo(&[10], &[]).is_err());
    }
}

//! `D(X)`: metrics on a fixed finite carrier, plus `O`, as an evs.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::matrix::{add_metrics, indexed_labels, random_metric, scale_metric, MetricMatrix};
use crate::error::{Error, Result};
use crate::evs::{Evs, Sampler};
use crate::rational::{Rational, Scalar};

#[derive(Clone, Debug)]
pub struct MetricSpace {
    labels: Arc<[String]>,
}

impl MetricSpace {
    pub fn new(labels: Arc<[String]>) -> Self {
        MetricSpace { labels }
    }

    /// Carrier `x1 … xn`.
    pub fn indexed(n: usize) -> Self {
        Self::new(indexed_labels(n))
    }

    pub fn labels(&self) -> Arc<[String]> {
        Arc::clone(&self.labels)
    }

    pub fn discrete(&self) -> MetricMatrix {
        MetricMatrix::discrete(self.labels())
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> MetricMatrix {
        random_metric(rng, self.labels())
    }
}

impl Evs for MetricSpace {
    type Element = MetricMatrix;

    fn name(&self) -> String {
        format!("D(X), |X| = {}", self.labels.len())
    }

    fn zero(&self) -> MetricMatrix {
        MetricMatrix::zero(self.labels())
    }

    fn add(&self, a: &MetricMatrix, b: &MetricMatrix) -> MetricMatrix {
        add_metrics(a, b).expect("elements admitted on one carrier")
    }

    fn scale(&self, alpha: &Scalar, a: &MetricMatrix) -> MetricMatrix {
        scale_metric(alpha, a)
    }

    fn leq(&self, a: &MetricMatrix, b: &MetricMatrix) -> bool {
        a.rows().iter().zip(b.rows()).all(|(r, s)| r.iter().zip(s).all(|(x, y)| x <= y))
    }

    fn equal(&self, a: &MetricMatrix, b: &MetricMatrix) -> bool {
        a.rows() == b.rows()
    }

    fn admits(&self, e: &MetricMatrix) -> Result<()> {
        if *e.labels() != *self.labels {
            return Err(Error::LabelMismatch);
        }
        Ok(())
    }

    fn is_zero(&self, a: &MetricMatrix) -> bool {
        a.is_zero()
    }
}

impl Sampler for MetricSpace {
    /// `O`, then random metrics interleaved with multiples and sums of
    /// earlier ones so that comparable pairs occur.
    fn sample(&self, rng: &mut ChaCha8Rng, n: usize) -> Vec<MetricMatrix> {
        let mut out = vec![self.zero()];
        while out.len() < n {
            let k = out.len();
            let next = match k % 4 {
                2 => scale_metric(&Rational::new(rng.random_range(1..=5), rng.random_range(1..=3)), &out[k - 1]),
                3 => self.add(&out[k - 1], &out[k - 2]),
                _ => self.random(rng),
            };
            out.push(next);
        }
        out.truncate(n);
        out
    }
}

/// `D(X)` with `α` applied without the absolute value: a deliberately broken
/// instance on which homogeneity must fail.
#[derive(Clone, Debug)]
pub struct SignedScaleMutant(pub MetricSpace);

impl Evs for SignedScaleMutant {
    type Element = MetricMatrix;

    fn name(&self) -> String {
        format!("{} (signed scaling)", self.0.name())
    }
    fn zero(&self) -> MetricMatrix {
        self.0.zero()
    }
    fn add(&self, a: &MetricMatrix, b: &MetricMatrix) -> MetricMatrix {
        self.0.add(a, b)
    }
    fn scale(&self, alpha: &Scalar, a: &MetricMatrix) -> MetricMatrix {
        a.map(|x| alpha * x)
    }
    fn leq(&self, a: &MetricMatrix, b: &MetricMatrix) -> bool {
        self.0.leq(a, b)
    }
    fn equal(&self, a: &MetricMatrix, b: &MetricMatrix) -> bool {
        self.0.equal(a, b)
    }
}

impl Sampler for SignedScaleMutant {
    fn sample(&self, rng: &mut ChaCha8Rng, n: usize) -> Vec<MetricMatrix> {
        self.0.sample(rng, n)
    }
}

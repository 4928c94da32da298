use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::evs::{Evs, Sampler};
use crate::rational::{Rational, Scalar};

/// A nonempty finite subset of `ℚ^k`; duplicates collapse. Serialized as a
/// list of coordinate arrays.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FinitePointSet(BTreeSet<Vec<Rational>>);

impl<'de> Deserialize<'de> for FinitePointSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let points = Vec::<Vec<Rational>>::deserialize(d)?;
        FinitePointSet::new(points).map_err(serde::de::Error::custom)
    }
}

impl FinitePointSet {
    pub fn new(points: impl IntoIterator<Item = Vec<Rational>>) -> Result<Self> {
        let set: BTreeSet<Vec<Rational>> = points.into_iter().collect();
        let Some(first) = set.iter().next() else {
            return Err(Error::input("a point set must be nonempty"));
        };
        let k = first.len();
        if let Some(bad) = set.iter().find(|p| p.len() != k) {
            return Err(Error::DimensionMismatch { expected: k, found: bad.len() });
        }
        Ok(FinitePointSet(set))
    }

    pub fn singleton(p: Vec<Rational>) -> Self {
        FinitePointSet(BTreeSet::from([p]))
    }

    pub fn points(&self) -> impl Iterator<Item = &Vec<Rational>> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_singleton(&self) -> bool {
        self.0.len() == 1
    }

    pub fn dim(&self) -> usize {
        self.0.iter().next().map_or(0, Vec::len)
    }
}

/// Finite point sets under Minkowski sum, elementwise scaling and inclusion.
#[derive(Clone, Debug)]
pub struct HyperSpace {
    pub dim: usize,
}

impl HyperSpace {
    pub fn new(dim: usize) -> Self {
        HyperSpace { dim }
    }

    fn check(&self, a: &FinitePointSet) -> Result<()> {
        if a.is_empty() {
            return Err(Error::input("a point set must be nonempty"));
        }
        if a.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: a.dim() });
        }
        Ok(())
    }

    pub fn hyper_add(&self, a: &FinitePointSet, b: &FinitePointSet) -> Result<FinitePointSet> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn hyper_scale(&self, alpha: &Scalar, a: &FinitePointSet) -> Result<FinitePointSet> {
        self.check(a)?;
        Ok(self.scale(alpha, a))
    }

    pub fn hyper_leq(&self, a: &FinitePointSet, b: &FinitePointSet) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.leq(a, b))
    }
}

impl Evs for HyperSpace {
    type Element = FinitePointSet;

    fn name(&self) -> String {
        format!("finite subsets of Q^{}", self.dim)
    }

    fn zero(&self) -> FinitePointSet {
        FinitePointSet::singleton(vec![Rational::zero(); self.dim])
    }

    fn add(&self, a: &FinitePointSet, b: &FinitePointSet) -> FinitePointSet {
        FinitePointSet(
            a.points()
                .flat_map(|x| b.points().map(move |y| x.iter().zip(y).map(|(s, t)| s + t).collect()))
                .collect(),
        )
    }

    fn scale(&self, alpha: &Scalar, a: &FinitePointSet) -> FinitePointSet {
        FinitePointSet(a.points().map(|x| x.iter().map(|s| alpha * s).collect()).collect())
    }

    fn leq(&self, a: &FinitePointSet, b: &FinitePointSet) -> bool {
        a.0.is_subset(&b.0)
    }

    fn equal(&self, a: &FinitePointSet, b: &FinitePointSet) -> bool {
        a == b
    }

    fn admits(&self, e: &FinitePointSet) -> Result<()> {
        self.check(e)
    }
}

impl Sampler for HyperSpace {
    /// Zero, then repeatedly a singleton `{a}` followed by a random set of one
    /// to three points containing `a`.
    fn sample(&self, rng: &mut ChaCha8Rng, n: usize) -> Vec<FinitePointSet> {
        let mut out = vec![self.zero()];
        let point = |rng: &mut ChaCha8Rng| -> Vec<Rational> {
            (0..self.dim).map(|_| Rational::from_integer(rng.random_range(-2..=2))).collect()
        };
        while out.len() < n {
            let a = point(rng);
            let mut set = vec![a.clone()];
            for _ in 0..rng.random_range(0..=2) {
                set.push(point(rng));
            }
            out.push(FinitePointSet::singleton(a));
            out.push(FinitePointSet::new(set).expect("nonempty"));
        }
        out.truncate(n);
        out
    }
}

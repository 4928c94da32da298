use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evs::{Evs, Sampler};
use crate::rational::{Rational, Scalar};

/// `(r, v)` with `r ≥ 0` and `v ∈ ℚ^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConeElement {
    pub r: Rational,
    pub v: Vec<Rational>,
}

impl ConeElement {
    pub fn new(r: Rational, v: Vec<Rational>) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::input(format!("cone radius must be nonnegative, got {r}")));
        }
        Ok(ConeElement { r, v })
    }
}

/// `[0, ∞) × ℚ^k` with `(r,a) ≤ (s,b)` iff `r ≤ s` and `a = b`.
#[derive(Clone, Debug)]
pub struct ConeSpace {
    pub dim: usize,
}

impl ConeSpace {
    pub fn new(dim: usize) -> Self {
        ConeSpace { dim }
    }

    fn check(&self, a: &ConeElement) -> Result<()> {
        if a.v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: a.v.len() });
        }
        if a.r.is_negative() {
            return Err(Error::input("cone radius must be nonnegative"));
        }
        Ok(())
    }

    pub fn cone_add(&self, a: &ConeElement, b: &ConeElement) -> Result<ConeElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn cone_scale(&self, alpha: &Scalar, a: &ConeElement) -> Result<ConeElement> {
        self.check(a)?;
        Ok(self.scale(alpha, a))
    }

    pub fn cone_leq(&self, a: &ConeElement, b: &ConeElement) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.leq(a, b))
    }
}

impl Evs for ConeSpace {
    type Element = ConeElement;

    fn name(&self) -> String {
        format!("[0, inf) x Q^{}", self.dim)
    }

    fn zero(&self) -> ConeElement {
        ConeElement { r: Rational::zero(), v: vec![Rational::zero(); self.dim] }
    }

    fn add(&self, a: &ConeElement, b: &ConeElement) -> ConeElement {
        ConeElement {
            r: &a.r + &b.r,
            v: a.v.iter().zip(&b.v).map(|(x, y)| x + y).collect(),
        }
    }

    fn scale(&self, alpha: &Scalar, a: &ConeElement) -> ConeElement {
        ConeElement {
            r: alpha.abs() * &a.r,
            v: a.v.iter().map(|x| alpha * x).collect(),
        }
    }

    fn leq(&self, a: &ConeElement, b: &ConeElement) -> bool {
        a.r <= b.r && a.v == b.v
    }

    fn equal(&self, a: &ConeElement, b: &ConeElement) -> bool {
        a == b
    }

    fn admits(&self, e: &ConeElement) -> Result<()> {
        self.check(e)
    }
}

impl Sampler for ConeSpace {
    /// Zero, then for each fresh direction `v` its primitive `(0, v)` followed
    /// by one or two elements above it.
    fn sample(&self, rng: &mut ChaCha8Rng, n: usize) -> Vec<ConeElement> {
        let mut out = vec![self.zero()];
        let coord = |rng: &mut ChaCha8Rng| Rational::new(rng.random_range(-3..=3), rng.random_range(1..=2));
        while out.len() < n {
            let v: Vec<Rational> = (0..self.dim).map(|_| coord(rng)).collect();
            out.push(ConeElement { r: Rational::zero(), v: v.clone() });
            for _ in 0..rng.random_range(1..=2) {
                let r = Rational::new(rng.random_range(1..=6), rng.random_range(1..=2));
                out.push(ConeElement { r, v: v.clone() });
            }
        }
        out.truncate(n);
        out
    }
}

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::rational::{Rational, Scalar};

/// A finitely supported vector over basis indices `h0, h1, …`. Zero
/// coordinates are never stored; the empty map is `θ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FSVector(BTreeMap<String, Rational>);

impl<'de> Deserialize<'de> for FSVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, Rational>::deserialize(d)?;
        Ok(FSVector::from_map(raw))
    }
}

/// The label of basis index `k`.
pub fn basis_label(k: u64) -> String {
    format!("h{k}")
}

/// Position `k` of label `hk`.
pub fn parse_basis_label(label: &str) -> Result<u64> {
    label
        .strip_prefix('h')
        .filter(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
        .and_then(|rest| rest.parse().ok())
        .ok_or_else(|| Error::input(format!("basis index must look like h0, h1, …; got {label:?}")))
}

impl FSVector {
    pub fn zero() -> Self {
        FSVector(BTreeMap::new())
    }

    pub fn from_map(map: BTreeMap<String, Rational>) -> Self {
        FSVector(map.into_iter().filter(|(_, v)| !v.is_zero()).collect())
    }

    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, Rational)>) -> Self {
        Self::from_map(pairs.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn unit(index: impl Into<String>) -> Self {
        Self::from_pairs([(index.into(), Rational::one())])
    }

    /// `(λ_0, λ_1, …)` on `h0, h1, …`.
    pub fn from_dense(coords: &[Rational]) -> Self {
        Self::from_pairs(coords.iter().enumerate().map(|(k, v)| (basis_label(k as u64), v.clone())))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: &str) -> Rational {
        self.0.get(index).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rational)> {
        self.0.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &String> {
        self.0.keys()
    }

    pub fn add(&self, other: &FSVector) -> FSVector {
        let mut out = self.0.clone();
        for (k, v) in &other.0 {
            let entry = out.entry(k.clone()).or_insert_with(Rational::zero);
            *entry += v;
        }
        Self::from_map(out)
    }

    pub fn scale(&self, alpha: &Scalar) -> FSVector {
        Self::from_map(self.0.iter().map(|(k, v)| (k.clone(), alpha * v)).collect())
    }

    pub fn sub(&self, other: &FSVector) -> FSVector {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Checks every support label parses as a basis index.
    pub fn check_labels(&self) -> Result<()> {
        self.support().try_for_each(|k| parse_basis_label(k).map(|_| ()))
    }
}

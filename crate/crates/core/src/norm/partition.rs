//! A deterministic partition of the basis `h0, h1, …` into `B` and, for each
//! `b ∈ B`, two countable fibers `D_b` and `E_b`.
//!
//! Even positions `h_{2a}` form `B`, with `b_a = h_{2a}`. Odd position
//! `h_{2k+1}` decodes `k` by the Cantor pairing `π(a, j) = (a+j)(a+j+1)/2 + a`;
//! it belongs to the fiber of `b_a`, going to `D_{b_a, j/2+1}` when `j` is even
//! and `E_{b_a, (j+1)/2}` when `j` is odd. Positional, so deepening never
//! re-tags an existing index.

use std::collections::BTreeSet;

use num_integer::Roots;
use serde::{Deserialize, Serialize};

use super::vector::{basis_label, parse_basis_label};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "class")]
pub enum Tag {
    B,
    /// `d_{t,i}`, with `t` the label of a `B` member.
    D { t: String, i: u64 },
    /// `e_{t,i}`.
    E { t: String, i: u64 },
}

pub fn cantor_pair(a: u64, j: u64) -> u64 {
    (a + j) * (a + j + 1) / 2 + a
}

pub fn cantor_unpair(k: u64) -> (u64, u64) {
    let mut w = ((8 * k + 1).sqrt() - 1) / 2;
    // Guard the integer square root at the boundary.
    while w * (w + 1) / 2 > k {
        w -= 1;
    }
    while (w + 1) * (w + 2) / 2 <= k {
        w += 1;
    }
    let a = k - w * (w + 1) / 2;
    (a, w - a)
}

/// The tag of basis position `p`.
pub fn tag_of(p: u64) -> Tag {
    if p % 2 == 0 {
        return Tag::B;
    }
    let (a, j) = cantor_unpair((p - 1) / 2);
    let t = basis_label(2 * a);
    if j % 2 == 0 {
        Tag::D { t, i: j / 2 + 1 }
    } else {
        Tag::E { t, i: j.div_ceil(2) }
    }
}

/// The basis position holding `d_{t,i}` or `e_{t,i}`.
pub fn position_of(tag: &Tag) -> Result<u64> {
    let (t, j) = match tag {
        Tag::B => return Err(Error::input("B members are their own positions")),
        Tag::D { t, i } if *i >= 1 => (t, 2 * (i - 1)),
        Tag::E { t, i } if *i >= 1 => (t, 2 * i - 1),
        _ => return Err(Error::input("fiber index i starts at 1")),
    };
    let tp = parse_basis_label(t)?;
    if tp % 2 != 0 {
        return Err(Error::input(format!("{t} is not a B member")));
    }
    Ok(2 * cantor_pair(tp / 2, j) + 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TaggedIndex {
    pub index: String,
    #[serde(flatten)]
    pub tag: Tag,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PartitionSpec {
    pub depth: usize,
    pub b: Vec<String>,
    pub tags: Vec<TaggedIndex>,
}

impl PartitionSpec {
    pub fn b_members(&self) -> &[String] {
        &self.b
    }
}

pub fn build_partition(depth: usize) -> Result<PartitionSpec> {
    if depth < 4 {
        return Err(Error::input(format!(
            "depth {depth} is too small: at least 4 indices are needed for nonempty B, D and E"
        )));
    }
    let tags: Vec<TaggedIndex> = (0..depth as u64)
        .map(|p| TaggedIndex { index: basis_label(p), tag: tag_of(p) })
        .collect();
    let b = tags.iter().filter(|t| t.tag == Tag::B).map(|t| t.index.clone()).collect();
    Ok(PartitionSpec { depth, b, tags })
}

/// `(depth, C, γ)`: one member of the norm family.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NormFamilyParams {
    pub depth: usize,
    #[serde(rename = "subsetC")]
    pub subset_c: BTreeSet<String>,
    pub gamma: Rational,
}

impl NormFamilyParams {
    pub fn new<S: Into<String>>(depth: usize, subset_c: impl IntoIterator<Item = S>, gamma: Rational) -> Result<Self> {
        let p = NormFamilyParams {
            depth,
            subset_c: subset_c.into_iter().map(Into::into).collect(),
            gamma,
        };
        p.validate()?;
        Ok(p)
    }

    /// `∅ ⊊ C ⊊ B` at this depth and `γ > 1`.
    pub fn validate(&self) -> Result<()> {
        let partition = build_partition(self.depth)?;
        if self.gamma <= Rational::one() {
            return Err(Error::params(format!("gamma must exceed 1, got {}", self.gamma)));
        }
        if self.subset_c.is_empty() {
            return Err(Error::params("subsetC must be nonempty"));
        }
        if let Some(bad) = self.subset_c.iter().find(|c| !partition.b.contains(c)) {
            return Err(Error::params(format!("{bad} is not a B member at depth {}", self.depth)));
        }
        if self.subset_c.len() == partition.b.len() {
            return Err(Error::params("subsetC must be a proper subset of B"));
        }
        Ok(())
    }

    /// `w_{C,γ}` at any basis position.
    pub fn weight_at(&self, p: u64) -> Rational {
        match tag_of(p) {
            Tag::B => Rational::one(),
            Tag::D { t, i } if self.subset_c.contains(&t) => self.gamma.pow(i as i32),
            Tag::E { t, i } if self.subset_c.contains(&t) => self.gamma.pow(-(i as i32)),
            _ => Rational::one(),
        }
    }

    pub fn weight(&self, label: &str) -> Result<Rational> {
        Ok(self.weight_at(parse_basis_label(label)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn d(t: &str, i: u64) -> Tag {
        Tag::D { t: t.into(), i }
    }
    fn e(t: &str, i: u64) -> Tag {
        Tag::E { t: t.into(), i }
    }

    #[test]
    fn depth_four() {
        let p = build_partition(4).unwrap();
        assert_eq!(p.b, vec!["h0", "h2"]);
        assert_eq!(p.tags[1].tag, d("h0", 1));
        assert_eq!(p.tags[3].tag, e("h0", 1));
        assert!(build_partition(3).is_err());
    }

    #[test]
    fn depth_twelve_odd_positions() {
        let p = build_partition(12).unwrap();
        assert_eq!(p.b.len(), 6);
        let odd: Vec<Tag> = p.tags.iter().skip(1).step_by(2).map(|t| t.tag.clone()).collect();
        assert_eq!(odd, vec![d("h0", 1), e("h0", 1), d("h2", 1), d("h0", 2), e("h2", 1), d("h4", 1)]);
    }

    #[test]
    fn pairing_round_trips() {
        for k in 0..2000 {
            let (a, j) = cantor_unpair(k);
            assert_eq!(cantor_pair(a, j), k);
        }
        for p in (1..4001).step_by(2) {
            assert_eq!(position_of(&tag_of(p)).unwrap(), p);
        }
    }

    #[test]
    fn weights() {
        let params = NormFamilyParams::new(12, ["h0"], q(2, 1)).unwrap();
        let dp = position_of(&d("h0", 3)).unwrap();
        let ep = position_of(&e("h0", 3)).unwrap();
        assert_eq!(params.weight_at(dp), q(8, 1));
        assert_eq!(params.weight_at(ep), q(1, 8));
        assert_eq!(params.weight_at(position_of(&d("h2", 3)).unwrap()), q(1, 1));
        assert_eq!(params.weight("h4").unwrap(), q(1, 1));
    }

    #[test]
    fn invalid_params() {
        assert!(NormFamilyParams::new(12, Vec::<String>::new(), q(2, 1)).is_err());
        assert!(NormFamilyParams::new(12, ["h0"], q(1, 1)).is_err());
        assert!(NormFamilyParams::new(12, ["h1"], q(2, 1)).is_err());
        assert!(NormFamilyParams::new(4, ["h0", "h2"], q(2, 1)).is_err());
        let json = r#"{"depth": 12, "subsetC": ["h2", "h4"], "gamma": "3/2"}"#;
        let p: NormFamilyParams = serde_json::from_str(json).unwrap();
        assert!(p.validate().is_ok());
    }
}

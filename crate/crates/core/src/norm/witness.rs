//! Decay witnesses for the orderly independence of two family norms.
//!
//! With `t ∈ C∖C'`, the vectors `e_{t,i}` give `‖e‖_p/‖e‖_q = γ_p^{-i}` and
//! `d_{t,i}` give `‖d‖_q/‖d‖_p = γ_p^{-i}`. When `C = C'` and `γ ≠ γ'`, the same
//! two families give `(γ_small/γ_big)^i` in both directions. Ratios are found
//! by evaluating the norms, never from the closed form.

use serde::{Deserialize, Serialize};

use super::partition::{position_of, NormFamilyParams, Tag};
use super::vector::{basis_label, parse_basis_label, FSVector};
use super::weights::Norm;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Search ceiling; with `γ` close to 1 and a tiny `ε` the index can be large.
pub const MAX_WITNESS_INDEX: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fiber {
    D,
    E,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Side {
    P,
    Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessDirection {
    /// The norm in the numerator; the ratio bounds `C_denominator(numerator)`.
    pub numerator: Side,
    pub fiber: Fiber,
    pub t: String,
    pub i: u64,
    pub basis_index: String,
    pub ratio: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessReport {
    pub case: u8,
    pub eps: Rational,
    pub p: NormFamilyParams,
    pub q: NormFamilyParams,
    pub directions: [WitnessDirection; 2],
    /// Both ratios are below `ε`.
    pub independent_at_eps: bool,
}

pub fn fiber_vector(fiber: Fiber, t: &str, i: u64) -> Result<(String, FSVector)> {
    let tag = match fiber {
        Fiber::D => Tag::D { t: t.to_string(), i },
        Fiber::E => Tag::E { t: t.to_string(), i },
    };
    let label = basis_label(position_of(&tag)?);
    Ok((label.clone(), FSVector::unit(label)))
}

/// `‖v‖_top / ‖v‖_bottom` along the `fiber` of `t` at index `i`.
pub fn fiber_ratio(top: &NormFamilyParams, bottom: &NormFamilyParams, fiber: Fiber, t: &str, i: u64) -> Result<Rational> {
    let (_, v) = fiber_vector(fiber, t, i)?;
    Ok(top.norm(&v)? / bottom.norm(&v)?)
}

fn search(
    p: &NormFamilyParams,
    q: &NormFamilyParams,
    numerator: Side,
    fiber: Fiber,
    t: &str,
    eps: &Rational,
) -> Result<WitnessDirection> {
    let (top, bottom) = match numerator {
        Side::P => (p, q),
        Side::Q => (q, p),
    };
    for i in 1..=MAX_WITNESS_INDEX {
        let ratio = fiber_ratio(top, bottom, fiber, t, i)?;
        if ratio < *eps {
            let (basis_index, _) = fiber_vector(fiber, t, i)?;
            return Ok(WitnessDirection {
                numerator,
                fiber,
                t: t.to_string(),
                i,
                basis_index,
                ratio,
            });
        }
    }
    Err(Error::params(format!(
        "no witness index up to {MAX_WITNESS_INDEX}; eps {eps} is too small for these ratios"
    )))
}

fn first_by_position<'a>(items: impl Iterator<Item = &'a String>) -> Option<&'a String> {
    items.min_by_key(|l| parse_basis_label(l).unwrap_or(u64::MAX))
}

pub fn independence_witness(p: &NormFamilyParams, q: &NormFamilyParams, eps: &Rational) -> Result<WitnessReport> {
    p.validate()?;
    q.validate()?;
    if !(eps.is_positive() && *eps < Rational::one()) {
        return Err(Error::params(format!("eps must lie in (0, 1), got {eps}")));
    }
    if p == q {
        return Err(Error::NoWitness);
    }
    if p.subset_c == q.subset_c && p.gamma == q.gamma {
        return Err(Error::ParameterEquality);
    }
    let (case, directions) = if p.subset_c != q.subset_c {
        // Case 1: the norm owning t decays along e, the other along d.
        let (owner, t) = match first_by_position(p.subset_c.difference(&q.subset_c)) {
            Some(t) => (Side::P, t),
            None => (Side::Q, first_by_position(q.subset_c.difference(&p.subset_c)).expect("sets differ")),
        };
        let other = match owner {
            Side::P => Side::Q,
            Side::Q => Side::P,
        };
        (1, [search(p, q, owner, Fiber::E, t, eps)?, search(p, q, other, Fiber::D, t, eps)?])
    } else {
        // Case 2: the larger γ decays along e, the smaller along d.
        let t = first_by_position(p.subset_c.iter()).expect("C nonempty");
        let (big, small) = if p.gamma > q.gamma { (Side::P, Side::Q) } else { (Side::Q, Side::P) };
        (2, [search(p, q, big, Fiber::E, t, eps)?, search(p, q, small, Fiber::D, t, eps)?])
    };
    Ok(WitnessReport {
        case,
        eps: eps.clone(),
        p: p.clone(),
        q: q.clone(),
        independent_at_eps: directions.iter().all(|d| d.ratio < *eps),
        directions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn params(c: &[&str], gamma: Rational) -> NormFamilyParams {
        NormFamilyParams::new(12, c.iter().copied(), gamma).unwrap()
    }

    #[test]
    fn case_one_gamma_two() {
        let p = params(&["h0"], q(2, 1));
        let r = params(&["h2", "h4"], q(2, 1));
        let w = independence_witness(&p, &r, &q(1, 1000)).unwrap();
        assert_eq!(w.case, 1);
        for d in &w.directions {
            assert_eq!((d.i, d.ratio.clone(), d.t.as_str()), (10, q(1, 1024), "h0"));
        }
        assert_eq!(w.directions[0].fiber, Fiber::E);
        assert_eq!(w.directions[0].numerator, Side::P);
        assert!(w.independent_at_eps);
    }

    #[test]
    fn case_two_two_thirds() {
        let p = params(&["h0"], q(3, 1));
        let r = params(&["h0"], q(2, 1));
        let w = independence_witness(&p, &r, &q(1, 100)).unwrap();
        assert_eq!(w.case, 2);
        for d in &w.directions {
            assert_eq!(d.i, 12);
            assert_eq!(d.ratio, q(4096, 531441));
        }
        let tiny = independence_witness(&p, &r, &q(1, 1_000_000)).unwrap();
        assert_eq!(tiny.directions[0].i, 35);
    }

    #[test]
    fn errors() {
        let p = params(&["h0"], q(2, 1));
        assert_eq!(independence_witness(&p, &p, &q(1, 10)), Err(Error::NoWitness));
        let mut deeper = p.clone();
        deeper.depth = 14;
        assert_eq!(independence_witness(&p, &deeper, &q(1, 10)), Err(Error::ParameterEquality));
        assert!(independence_witness(&p, &params(&["h2"], q(2, 1)), &q(1, 1)).is_err());
    }
}

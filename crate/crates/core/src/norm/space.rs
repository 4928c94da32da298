//! `N(X)`: nonnegative combinations of weighted sup norms, plus `O`, as an evs.
//!
//! A sum of sup norms is not itself a sup norm, so elements are kept as
//! canonical sums `Σ c_k ‖·‖_{w_k}`. Pointwise equality and order over all of
//! `X` are not decidable from that form in general; they are evaluated on a
//! fixed probe set chosen by the space. Two modes:
//!
//! - `finite`: `X = span(h0 … h_{N-1})`; probes are the unit vectors and a
//!   fixed batch of seeded random vectors.
//! - `family`: `X` has the whole countable basis and elements are family
//!   norms; probes add the first fiber vectors `d_{t,i}`, `e_{t,i}`.

use std::cmp::Ordering;
use std::sync::Arc;

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::partition::{build_partition, NormFamilyParams};
use super::vector::{basis_label, parse_basis_label, FSVector};
use super::weights::{Norm, WeightMap};
use super::witness::{fiber_vector, Fiber};
use crate::error::{Error, Result};
use crate::evs::{Evs, Sampler};
use crate::rational::{q, Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Weighting {
    Finite { weights: WeightMap },
    Family { params: NormFamilyParams },
}

impl Norm for Weighting {
    fn norm(&self, x: &FSVector) -> Result<Rational> {
        match self {
            Weighting::Finite { weights } => weights.norm(x),
            Weighting::Family { params } => params.norm(x),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormTerm {
    pub coef: Rational,
    pub weighting: Arc<Weighting>,
}

/// `Σ coef·‖·‖`, sorted by weighting with positive coefficients. The empty
/// sum is `O`. Probe values are cached by the space that built the element.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormElement {
    terms: Vec<NormTerm>,
    #[serde(skip)]
    values: Option<Arc<[Rational]>>,
}

impl PartialEq for NormElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl NormElement {
    pub fn from_terms(terms: impl IntoIterator<Item = (Rational, Weighting)>) -> Self {
        let terms = terms
            .into_iter()
            .map(|(coef, w)| NormTerm { coef, weighting: Arc::new(w) })
            .collect();
        NormElement { terms: canonical(terms), values: None }
    }

    pub fn single(w: Weighting) -> Self {
        Self::from_terms([(Rational::one(), w)])
    }

    pub fn finite(weights: WeightMap) -> Self {
        Self::single(Weighting::Finite { weights })
    }

    pub fn family(params: NormFamilyParams) -> Self {
        Self::single(Weighting::Family { params })
    }

    pub fn terms(&self) -> &[NormTerm] {
        &self.terms
    }

    /// `(c, w)` when the element is one scaled sup norm.
    pub fn as_single(&self) -> Option<(&Rational, &Weighting)> {
        match self.terms.as_slice() {
            [t] => Some((&t.coef, &t.weighting)),
            _ => None,
        }
    }
}

impl Norm for NormElement {
    fn norm(&self, x: &FSVector) -> Result<Rational> {
        self.terms
            .iter()
            .try_fold(Rational::zero(), |acc, t| Ok(acc + &t.coef * t.weighting.norm(x)?))
    }
}

fn canonical(mut terms: Vec<NormTerm>) -> Vec<NormTerm> {
    terms.retain(|t| t.coef.is_positive());
    terms.sort_by(|a, b| a.weighting.cmp(&b.weighting));
    let mut out: Vec<NormTerm> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.last_mut() {
            Some(last) if last.weighting.cmp(&t.weighting) == Ordering::Equal => last.coef += &t.coef,
            _ => out.push(t),
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMode {
    Finite,
    Family,
}

#[derive(Clone, Debug)]
pub struct NormSpace {
    depth: usize,
    mode: NormMode,
    probes: Vec<FSVector>,
}

/// Seeded random probes in the finite mode.
const RANDOM_PROBES: usize = 12;
/// Fiber vectors `d_{t,i}`, `e_{t,i}` probed for `i ≤ FIBER_PROBES` in family mode.
const FIBER_PROBES: u64 = 3;

impl NormSpace {
    pub fn finite(depth: usize) -> Result<Self> {
        build_partition(depth)?;
        let mut probes: Vec<FSVector> = (0..depth as u64).map(|k| FSVector::unit(basis_label(k))).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..RANDOM_PROBES {
            let coords: Vec<Rational> = (0..depth)
                .map(|_| q(rng.random_range(-4..=4), rng.random_range(1..=3)))
                .collect();
            let v = FSVector::from_dense(&coords);
            if !v.is_zero() {
                probes.push(v);
            }
        }
        Ok(NormSpace { depth, mode: NormMode::Finite, probes })
    }

    pub fn family(depth: usize) -> Result<Self> {
        let partition = build_partition(depth)?;
        let mut probes: Vec<FSVector> = (0..depth as u64).map(|k| FSVector::unit(basis_label(k))).collect();
        for t in partition.b_members() {
            for i in 1..=FIBER_PROBES {
                for fiber in [Fiber::D, Fiber::E] {
                    let (label, v) = fiber_vector(fiber, t, i)?;
                    if parse_basis_label(&label)? >= depth as u64 {
                        probes.push(v);
                    }
                }
            }
        }
        Ok(NormSpace { depth, mode: NormMode::Family, probes })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn mode(&self) -> NormMode {
        self.mode
    }

    pub fn probes(&self) -> &[FSVector] {
        &self.probes
    }

    fn evaluate(&self, terms: &[NormTerm]) -> Result<Arc<[Rational]>> {
        self.probes
            .iter()
            .map(|x| {
                terms
                    .iter()
                    .try_fold(Rational::zero(), |acc, t| Ok(acc + &t.coef * t.weighting.norm(x)?))
            })
            .collect()
    }

    fn values<'a>(&self, e: &'a NormElement) -> std::borrow::Cow<'a, [Rational]> {
        match &e.values {
            Some(v) if v.len() == self.probes.len() => std::borrow::Cow::Borrowed(v),
            _ => std::borrow::Cow::Owned(
                self.evaluate(&e.terms)
                    .expect("element was admitted, so every probe index has a weight")
                    .to_vec(),
            ),
        }
    }

    /// Attaches cached probe values, failing on uncovered probe indices.
    pub fn element(&self, e: NormElement) -> Result<NormElement> {
        let values = self.evaluate(&e.terms)?;
        Ok(NormElement { terms: e.terms, values: Some(values) })
    }

    fn with_values(&self, terms: Vec<NormTerm>, values: Vec<Rational>) -> NormElement {
        NormElement { terms, values: Some(values.into()) }
    }

    pub fn finite_weights_of(&self, w: &Weighting) -> Result<WeightMap> {
        match w {
            Weighting::Finite { weights } => Ok(weights.clone()),
            Weighting::Family { params } => WeightMap::new(
                (0..self.depth as u64)
                    .map(|p| (basis_label(p), params.weight_at(p)))
                    .collect(),
            ),
        }
    }

    pub fn random_weights<R: Rng + ?Sized>(&self, rng: &mut R) -> WeightMap {
        WeightMap::new(
            (0..self.depth as u64)
                .map(|p| (basis_label(p), q(rng.random_range(1..=6), rng.random_range(1..=3))))
                .collect(),
        )
        .expect("positive weights")
    }

    pub fn random_family<R: Rng + ?Sized>(&self, rng: &mut R) -> NormFamilyParams {
        let b = build_partition(self.depth).expect("depth checked").b;
        let size = rng.random_range(1..b.len());
        let subset: Vec<String> = b.into_iter().choose_multiple(rng, size);
        let gammas = [q(2, 1), q(3, 1), q(3, 2), q(5, 2)];
        NormFamilyParams::new(self.depth, subset, gammas[rng.random_range(0..gammas.len())].clone())
            .expect("valid by construction")
    }
}

impl Evs for NormSpace {
    type Element = NormElement;

    fn name(&self) -> String {
        match self.mode {
            NormMode::Finite => format!("N(X), X = span(h0..h{})", self.depth - 1),
            NormMode::Family => format!("N(X), family norms, partition depth {}", self.depth),
        }
    }

    fn zero(&self) -> NormElement {
        self.with_values(Vec::new(), vec![Rational::zero(); self.probes.len()])
    }

    fn add(&self, a: &NormElement, b: &NormElement) -> NormElement {
        let terms = canonical(a.terms.iter().chain(&b.terms).cloned().collect());
        let values = self.values(a).iter().zip(self.values(b).iter()).map(|(x, y)| x + y).collect();
        self.with_values(terms, values)
    }

    fn scale(&self, alpha: &Scalar, a: &NormElement) -> NormElement {
        let s = alpha.abs();
        let terms = canonical(
            a.terms
                .iter()
                .map(|t| NormTerm { coef: &s * &t.coef, weighting: Arc::clone(&t.weighting) })
                .collect(),
        );
        let values = self.values(a).iter().map(|v| &s * v).collect();
        self.with_values(terms, values)
    }

    fn leq(&self, a: &NormElement, b: &NormElement) -> bool {
        self.values(a).iter().zip(self.values(b).iter()).all(|(x, y)| x <= y)
    }

    fn equal(&self, a: &NormElement, b: &NormElement) -> bool {
        self.values(a) == self.values(b)
    }

    fn admits(&self, e: &NormElement) -> Result<()> {
        for t in &e.terms {
            if let Weighting::Family { params } = &*t.weighting {
                params.validate()?;
            }
            if self.mode == NormMode::Family && matches!(&*t.weighting, Weighting::Finite { .. }) {
                return Err(Error::input("family mode only admits family norms"));
            }
        }
        self.evaluate(&e.terms).map(|_| ())
    }

    fn is_zero(&self, a: &NormElement) -> bool {
        self.values(a).iter().all(Rational::is_zero)
    }
}

impl Sampler for NormSpace {
    fn sample(&self, rng: &mut ChaCha8Rng, n: usize) -> Vec<NormElement> {
        let mut out = vec![self.zero()];
        while out.len() < n {
            let k = out.len();
            let next = match (k % 4, self.mode) {
                (2, _) => self.scale(&q(rng.random_range(1..=4), rng.random_range(1..=3)), &out[k - 1]),
                (3, _) => self.add(&out[k - 1], &out[k - 2]),
                (0, _) | (_, NormMode::Family) => NormElement::family(self.random_family(rng)),
                _ => NormElement::finite(self.random_weights(rng)),
            };
            out.push(self.element(next).expect("sampled norms cover every probe"));
        }
        out.truncate(n);
        out
    }
}

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::partition::{build_partition, NormFamilyParams};
use super::vector::{parse_basis_label, FSVector};
use crate::error::{Error, Result};
use crate::metric::MetricMatrix;
use crate::rational::Rational;

/// Positive weights on finitely many basis indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, Rational>", into = "BTreeMap<String, Rational>")]
pub struct WeightMap(BTreeMap<String, Rational>);

impl TryFrom<BTreeMap<String, Rational>> for WeightMap {
    type Error = Error;
    fn try_from(map: BTreeMap<String, Rational>) -> Result<Self> {
        WeightMap::new(map)
    }
}

impl From<WeightMap> for BTreeMap<String, Rational> {
    fn from(w: WeightMap) -> Self {
        w.0
    }
}

impl WeightMap {
    pub fn new(map: BTreeMap<String, Rational>) -> Result<Self> {
        for (k, w) in &map {
            parse_basis_label(k)?;
            if !w.is_positive() {
                return Err(Error::params(format!("weight for {k} must be positive, got {w}")));
            }
        }
        Ok(WeightMap(map))
    }

    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, Rational)>) -> Result<Self> {
        Self::new(pairs.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    /// All weights 1 on `h0 … h{n-1}`.
    pub fn uniform(n: usize) -> Self {
        WeightMap((0..n).map(|k| (format!("h{k}"), Rational::one())).collect())
    }

    pub fn get(&self, index: &str) -> Option<&Rational> {
        self.0.get(index)
    }

    pub fn indices(&self) -> impl Iterator<Item = &String> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rational)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `w(h)` on `h0 … h_{depth-1}` for the family member `params`.
pub fn weight_function(params: &NormFamilyParams) -> Result<WeightMap> {
    params.validate()?;
    let partition = build_partition(params.depth)?;
    WeightMap::new(
        partition
            .tags
            .iter()
            .enumerate()
            .map(|(p, t)| (t.index.clone(), params.weight_at(p as u64)))
            .collect(),
    )
}

/// `‖x‖_w = max_h w(h)|λ_h|`; an uncovered support index is an error.
pub fn eval_weighted_norm(w: &WeightMap, x: &FSVector) -> Result<Rational> {
    x.iter().try_fold(Rational::zero(), |acc, (k, v)| {
        let weight = w.get(k).ok_or_else(|| Error::MissingWeight(k.clone()))?;
        let term = weight * v.abs();
        Ok(if term > acc { term } else { acc })
    })
}

/// Anything that evaluates as a norm (or seminorm sum) on `FSVector`s.
pub trait Norm {
    fn norm(&self, x: &FSVector) -> Result<Rational>;
}

impl Norm for WeightMap {
    fn norm(&self, x: &FSVector) -> Result<Rational> {
        eval_weighted_norm(self, x)
    }
}

impl Norm for NormFamilyParams {
    /// Total: the family weight rule covers every basis index.
    fn norm(&self, x: &FSVector) -> Result<Rational> {
        x.iter().try_fold(Rational::zero(), |acc, (k, v)| {
            let term = self.weight(k)? * v.abs();
            Ok(if term > acc { term } else { acc })
        })
    }
}

impl<N: Norm + ?Sized> Norm for &N {
    fn norm(&self, x: &FSVector) -> Result<Rational> {
        (**self).norm(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ComparingBound {
    /// `min g(x)/f(x)` over the sample: an upper bound for `C_f(g)`.
    pub value: Rational,
    pub argmin: usize,
}

pub fn sample_comparing_bound(f: &impl Norm, g: &impl Norm, sample: &[FSVector]) -> Result<ComparingBound> {
    if sample.is_empty() {
        return Err(Error::input("sample is empty"));
    }
    let mut best: Option<(Rational, usize)> = None;
    for (k, x) in sample.iter().enumerate() {
        if x.is_zero() {
            return Err(Error::input(format!("sample vector {k} is the zero vector")));
        }
        let ratio = g.norm(x)? / f.norm(x)?;
        if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
            best = Some((ratio, k));
        }
    }
    let (value, argmin) = best.expect("nonempty");
    Ok(ComparingBound { value, argmin })
}

/// `ψ(f)(x, y) = f(x - y)` on the listed points, labeled `p1 … pn`.
pub fn embed_norm_to_metric(f: &impl Norm, points: &[FSVector]) -> Result<MetricMatrix> {
    if points.len() < 2 {
        return Err(Error::input("embedding needs at least two points"));
    }
    for (a, x) in points.iter().enumerate() {
        if let Some(b) = points[..a].iter().position(|y| y == x) {
            return Err(Error::input(format!("points {} and {} coincide", b + 1, a + 1)));
        }
    }
    let labels: Arc<[String]> = (1..=points.len()).map(|k| format!("p{k}")).collect();
    let n = points.len();
    let mut rows = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = f.norm(&points[i].sub(&points[j]))?;
            rows[i][j] = v.clone();
            rows[j][i] = v;
        }
    }
    MetricMatrix::with_labels(labels, rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MutualBound {
    pub alpha: Rational,
    pub beta: Rational,
    /// `α f(x) ≤ g(x) ≤ β f(x)` on every sample vector.
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BasisCertificate {
    pub indices: Vec<String>,
    pub bounds: Vec<MutualBound>,
    pub all_verified: bool,
}

/// On a finite index set every weighted sup norm is mutually dependent with
/// `f`; the sampled `α = min g/f`, `β = max g/f` witness it.
pub fn finite_dim_basis_certificate(f: &WeightMap, others: &[WeightMap], sample: &[FSVector]) -> Result<BasisCertificate> {
    let indices: Vec<String> = f.indices().cloned().collect();
    if indices.is_empty() {
        return Err(Error::input("reference weight map is empty"));
    }
    for (k, g) in others.iter().enumerate() {
        if !g.indices().eq(f.indices()) {
            return Err(Error::input(format!("weight map {k} is over a different index set")));
        }
    }
    for (k, x) in sample.iter().enumerate() {
        if x.is_zero() {
            return Err(Error::input(format!("sample vector {k} is the zero vector")));
        }
        if let Some(bad) = x.support().find(|h| f.get(h).is_none()) {
            return Err(Error::input(format!("sample vector {k} uses {bad}, outside the index set")));
        }
    }
    if let Some(missing) = indices
        .iter()
        .find(|h| !sample.iter().any(|x| x.support().eq(std::iter::once(*h))))
    {
        return Err(Error::input(format!("sample lacks a unit coordinate vector along {missing}")));
    }
    let f_values: Vec<Rational> = sample.iter().map(|x| f.norm(x)).collect::<Result<_>>()?;
    let bounds = others
        .iter()
        .map(|g| {
            let g_values: Vec<Rational> = sample.iter().map(|x| g.norm(x)).collect::<Result<_>>()?;
            let ratios: Vec<Rational> = g_values.iter().zip(&f_values).map(|(g, f)| g / f).collect();
            let alpha = Rational::min_of(&ratios).expect("nonempty");
            let beta = Rational::max_of(&ratios).expect("nonempty");
            let verified = g_values
                .iter()
                .zip(&f_values)
                .all(|(g, f)| &alpha * f <= *g && *g <= &beta * f);
            Ok(MutualBound { alpha, beta, verified })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BasisCertificate {
        indices,
        all_verified: bounds.iter().all(|b| b.verified),
        bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::partition::{position_of, Tag};
    use crate::norm::vector::basis_label;
    use crate::rational::q;

    #[test]
    fn family_norm_examples() {
        let p = NormFamilyParams::new(12, ["h0"], q(2, 1)).unwrap();
        let e5 = basis_label(position_of(&Tag::E { t: "h0".into(), i: 5 }).unwrap());
        assert_eq!(p.norm(&FSVector::unit(e5)).unwrap(), q(1, 32));
        assert_eq!(p.norm(&FSVector::zero()).unwrap(), Rational::zero());

        let p3 = NormFamilyParams::new(12, ["h0"], q(3, 1)).unwrap();
        let d2 = basis_label(position_of(&Tag::D { t: "h0".into(), i: 2 }).unwrap());
        let x = FSVector::from_pairs([("h0".to_string(), q(2, 1)), (d2, q(1, 1))]);
        assert_eq!(p3.norm(&x).unwrap(), q(9, 1));
        let w = weight_function(&p3).unwrap();
        assert_eq!(w.len(), 12);
        assert_eq!(w.norm(&x).unwrap(), q(9, 1));
    }

    #[test]
    fn missing_weight() {
        let w = WeightMap::uniform(2);
        assert_eq!(
            eval_weighted_norm(&w, &FSVector::unit("h5")),
            Err(Error::MissingWeight("h5".into()))
        );
        assert!(WeightMap::from_pairs([("h0", q(0, 1))]).is_err());
    }

    #[test]
    fn embedding_example() {
        let w = WeightMap::from_pairs([("h0", q(1, 1)), ("h1", q(3, 1))]).unwrap();
        let pts = vec![
            FSVector::zero(),
            FSVector::from_dense(&[q(1, 1), q(0, 1)]),
            FSVector::from_dense(&[q(0, 1), q(2, 1)]),
        ];
        let m = embed_norm_to_metric(&w, &pts).unwrap();
        assert_eq!((m.get(0, 1), m.get(0, 2), m.get(1, 2)), (&q(1, 1), &q(6, 1), &q(6, 1)));
        assert!(embed_norm_to_metric(&w, &[pts[0].clone(), pts[0].clone()]).is_err());
        assert!(embed_norm_to_metric(&w, &pts[..1]).is_err());
    }

    #[test]
    fn comparing_bounds() {
        let f = WeightMap::uniform(3);
        let g = WeightMap::from_pairs([("h0", q(1, 2)), ("h1", q(4, 1)), ("h2", q(1, 1))]).unwrap();
        let units: Vec<FSVector> = (0..3).map(|k| FSVector::unit(basis_label(k))).collect();
        assert_eq!(sample_comparing_bound(&f, &g, &units).unwrap().value, q(1, 2));
        assert_eq!(sample_comparing_bound(&f, &f, &units).unwrap().value, q(1, 1));
        assert!(sample_comparing_bound(&f, &g, &[FSVector::zero()]).is_err());

        let cert = finite_dim_basis_certificate(&f, &[g.clone(), f.clone()], &units).unwrap();
        assert_eq!((cert.bounds[0].alpha.clone(), cert.bounds[0].beta.clone()), (q(1, 2), q(4, 1)));
        assert_eq!((cert.bounds[1].alpha.clone(), cert.bounds[1].beta.clone()), (q(1, 1), q(1, 1)));
        assert!(cert.all_verified);
        assert!(finite_dim_basis_certificate(&f, &[WeightMap::uniform(2)], &units).is_err());
        assert!(finite_dim_basis_certificate(&f, &[g], &units[..2]).is_err());
    }
}

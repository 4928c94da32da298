//! Exact metrics on finite labeled carriers.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{Rational, Scalar};

/// A square table of exact distances over labeled points. The all-zero table
/// is the distinguished element `O`; it is representable but is not a metric
/// on carriers with two or more points.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixFile", into = "MatrixFile")]
pub struct MetricMatrix {
    labels: Arc<[String]>,
    rows: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    labels: Vec<String>,
    rows: Vec<Vec<Rational>>,
}

impl TryFrom<MatrixFile> for MetricMatrix {
    type Error = Error;
    fn try_from(f: MatrixFile) -> Result<Self> {
        MetricMatrix::new(f.labels, f.rows)
    }
}

impl From<MetricMatrix> for MatrixFile {
    fn from(m: MetricMatrix) -> Self {
        MatrixFile {
            labels: m.labels.to_vec(),
            rows: m.rows,
        }
    }
}

impl fmt::Debug for MetricMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricMatrix")
            .field("labels", &self.labels)
            .field("rows", &self.rows)
            .finish()
    }
}

impl MetricMatrix {
    /// Checks shape only: square, one label per row, distinct labels.
    /// Metric axioms are checked by [`validate_metric`].
    pub fn new(labels: Vec<String>, rows: Vec<Vec<Rational>>) -> Result<Self> {
        Self::with_labels(labels.into(), rows)
    }

    pub fn with_labels(labels: Arc<[String]>, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::input("a metric needs at least one carrier point"));
        }
        if rows.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: rows.len() });
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        let mut sorted: Vec<&String> = labels.iter().collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::input(format!("duplicate label {:?}", w[0])));
        }
        Ok(MetricMatrix { labels, rows })
    }

    /// Builds the table from a distance function on indices.
    pub fn from_fn(labels: Arc<[String]>, mut f: impl FnMut(usize, usize) -> Rational) -> Result<Self> {
        let n = labels.len();
        let rows = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        Self::with_labels(labels, rows)
    }

    pub fn zero(labels: Arc<[String]>) -> Self {
        let n = labels.len();
        MetricMatrix {
            rows: vec![vec![Rational::zero(); n]; n],
            labels,
        }
    }

    /// The discrete metric: 1 off the diagonal.
    pub fn discrete(labels: Arc<[String]>) -> Self {
        Self::from_fn(labels, |i, j| if i == j { Rational::zero() } else { Rational::one() })
            .expect("shape is square")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn shared_labels(&self) -> Arc<[String]> {
        Arc::clone(&self.labels)
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Rational::is_zero)
    }

    pub fn same_carrier(&self, other: &MetricMatrix) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }

    /// Off-diagonal index pairs with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }

    pub fn min_off_diagonal(&self) -> Option<Rational> {
        self.pairs().map(|(i, j)| &self.rows[i][j]).min().cloned()
    }

    pub fn max_off_diagonal(&self) -> Option<Rational> {
        self.pairs().map(|(i, j)| &self.rows[i][j]).max().cloned()
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> MetricMatrix {
        MetricMatrix {
            labels: self.shared_labels(),
            rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    fn zip(&self, other: &MetricMatrix, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<MetricMatrix> {
        self.require_same_carrier(other)?;
        Ok(MetricMatrix {
            labels: self.shared_labels(),
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
                .collect(),
        })
    }

    pub fn require_same_carrier(&self, other: &MetricMatrix) -> Result<()> {
        if self.same_carrier(other) {
            Ok(())
        } else {
            Err(Error::LabelMismatch)
        }
    }

    /// Parses the CSV form: a header row of labels then one row per point.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let labels: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record?;
            let row = record
                .iter()
                .map(|cell| cell.parse::<Rational>())
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::new(labels, rows)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.labels.iter()).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|x| x.to_string())).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

/// Which metric axiom failed, with the offending indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "kebab-case")]
pub enum MetricViolation {
    Diagonal { i: usize, value: Rational },
    Negative { i: usize, j: usize, value: Rational },
    /// A zero distance between distinct points.
    Indiscernible { i: usize, j: usize },
    /// `d(i,k) > d(i,j) + d(j,k)`.
    Triangle { i: usize, j: usize, k: usize },
}

impl MetricViolation {
    pub fn indices(&self) -> Vec<usize> {
        match *self {
            MetricViolation::Diagonal { i, .. } => vec![i],
            MetricViolation::Negative { i, j, .. } | MetricViolation::Indiscernible { i, j } => vec![i, j],
            MetricViolation::Triangle { i, j, k } => vec![i, j, k],
        }
    }

    /// Re-checks the violation against `m`.
    pub fn holds_in(&self, m: &MetricMatrix) -> bool {
        let d = |a: usize, b: usize| m.get(a, b);
        let n = m.len();
        if self.indices().iter().any(|&k| k >= n) {
            return false;
        }
        match *self {
            MetricViolation::Diagonal { i, .. } => !d(i, i).is_zero(),
            MetricViolation::Negative { i, j, .. } => d(i, j).is_negative(),
            MetricViolation::Indiscernible { i, j } => i != j && d(i, j).is_zero(),
            MetricViolation::Triangle { i, j, k } => *d(i, k) > d(i, j) + d(j, k),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MetricValidation {
    pub pass: bool,
    pub size: usize,
    /// Triangle triples examined before stopping (all `n^3` on a pass).
    pub triples_checked: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<MetricViolation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violating_labels: Vec<String>,
}

/// Checks every metric axiom. Asymmetry is a shape error, not a verdict.
pub fn validate_metric(m: &MetricMatrix) -> Result<MetricValidation> {
    let n = m.len();
    for (i, j) in m.pairs() {
        if m.get(i, j) != m.get(j, i) {
            return Err(Error::input(format!(
                "matrix is not symmetric at ({}, {})",
                m.labels()[i],
                m.labels()[j]
            )));
        }
    }
    let fail = |v: MetricViolation, triples| {
        let violating_labels = v.indices().iter().map(|&k| m.labels()[k].clone()).collect();
        Ok(MetricValidation {
            pass: false,
            size: n,
            triples_checked: triples,
            violation: Some(v),
            violating_labels,
        })
    };
    for i in 0..n {
        if !m.get(i, i).is_zero() {
            return fail(MetricViolation::Diagonal { i, value: m.get(i, i).clone() }, 0);
        }
    }
    for (i, j) in m.pairs() {
        if m.get(i, j).is_negative() {
            return fail(MetricViolation::Negative { i, j, value: m.get(i, j).clone() }, 0);
        }
    }
    for (i, j) in m.pairs() {
        if m.get(i, j).is_zero() {
            return fail(MetricViolation::Indiscernible { i, j }, 0);
        }
    }
    let mut triples = 0u64;
    for i in 0..n {
        for j in 0..n {
            let dij = m.get(i, j);
            for k in 0..n {
                triples += 1;
                if *m.get(i, k) > dij + m.get(j, k) {
                    return fail(MetricViolation::Triangle { i, j, k }, triples);
                }
            }
        }
    }
    Ok(MetricValidation {
        pass: true,
        size: n,
        triples_checked: triples,
        violation: None,
        violating_labels: Vec::new(),
    })
}

pub fn add_metrics(a: &MetricMatrix, b: &MetricMatrix) -> Result<MetricMatrix> {
    a.zip(b, |x, y| x + y)
}

/// `(αρ)(x,y) = |α| ρ(x,y)`.
pub fn scale_metric(alpha: &Scalar, a: &MetricMatrix) -> MetricMatrix {
    let s = alpha.abs();
    a.map(|x| &s * x)
}

pub fn leq_metrics(a: &MetricMatrix, b: &MetricMatrix) -> Result<bool> {
    a.require_same_carrier(b)?;
    Ok(a.rows.iter().zip(&b.rows).all(|(r, s)| r.iter().zip(s).all(|(x, y)| x <= y)))
}

/// A comparing-function value together with a pair attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ComparingValue {
    pub value: Rational,
    pub tight_pair: [String; 2],
}

/// `C_d(ρ) = min ρ(x,y)/d(x,y)` over distinct pairs: the largest `α` with
/// `α d ≤ ρ`.
pub fn comparing_function_metric(d: &MetricMatrix, rho: &MetricMatrix) -> Result<ComparingValue> {
    d.require_same_carrier(rho)?;
    if d.is_zero() {
        return Err(Error::UndefinedRelative);
    }
    let mut best: Option<(Rational, usize, usize)> = None;
    for (i, j) in d.pairs() {
        let dij = d.get(i, j);
        if !dij.is_positive() {
            return Err(Error::input(format!(
                "reference has non-positive distance {dij} at ({}, {}); not a metric",
                d.labels()[i],
                d.labels()[j]
            )));
        }
        let ratio = rho.get(i, j) / dij;
        if best.as_ref().is_none_or(|(b, _, _)| ratio < *b) {
            best = Some((ratio, i, j));
        }
    }
    let (value, i, j) = best.expect("non-zero matrix has an off-diagonal pair");
    Ok(ComparingValue {
        value,
        tight_pair: [d.labels()[i].clone(), d.labels()[j].clone()],
    })
}

/// The four order-theoretic relations between two nonzero elements, plus
/// `Inconclusive` for lazy comparisons where one direction has neither a
/// certificate nor a decay witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    #[serde(rename = "mutually-dependent")]
    MutuallyDependent,
    /// `C_d(ρ) > 0` only: the second argument lies in `L` of the first.
    #[serde(rename = "one-sided-second-in-L-first")]
    SecondInFirst,
    /// `C_ρ(d) > 0` only.
    #[serde(rename = "one-sided-first-in-L-second")]
    FirstInSecond,
    #[serde(rename = "orderly-independent")]
    OrderlyIndependent,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl Classification {
    pub fn from_positivity(second_in_first: bool, first_in_second: bool) -> Self {
        match (second_in_first, first_in_second) {
            (true, true) => Classification::MutuallyDependent,
            (true, false) => Classification::SecondInFirst,
            (false, true) => Classification::FirstInSecond,
            (false, false) => Classification::OrderlyIndependent,
        }
    }

    pub fn swapped(self) -> Self {
        match self {
            Classification::SecondInFirst => Classification::FirstInSecond,
            Classification::FirstInSecond => Classification::SecondInFirst,
            other => other,
        }
    }
}

/// `C_ρ(d)·ρ ≤ d ≤ C_d(ρ)^{-1}·ρ`, both sides evaluated exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Sandwich {
    pub lower_factor: Rational,
    pub upper_factor: Rational,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ComparisonReport {
    /// `C_d(ρ)`: how far `ρ` dominates a multiple of `d`.
    pub c_first_second: ComparingValue,
    /// `C_ρ(d)`.
    pub c_second_first: ComparingValue,
    pub classification: Classification,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sandwich: Option<Sandwich>,
}

pub fn classify_pair(d: &MetricMatrix, rho: &MetricMatrix) -> Result<ComparisonReport> {
    if d.is_zero() || rho.is_zero() {
        return Err(Error::ZeroElement("classify_pair needs two nonzero metrics".into()));
    }
    let forward = comparing_function_metric(d, rho)?;
    let backward = comparing_function_metric(rho, d)?;
    let classification =
        Classification::from_positivity(forward.value.is_positive(), backward.value.is_positive());
    let sandwich = (classification == Classification::MutuallyDependent).then(|| {
        let lower_factor = backward.value.clone();
        let upper_factor = forward.value.recip().expect("positive");
        Sandwich {
            lower_holds: leq_metrics(&scale_metric(&lower_factor, rho), d).unwrap_or(false),
            upper_holds: leq_metrics(d, &scale_metric(&upper_factor, rho)).unwrap_or(false),
            lower_factor,
            upper_factor,
        }
    });
    Ok(ComparisonReport {
        c_first_second: forward,
        c_second_first: backward,
        classification,
        sandwich,
    })
}

/// Metrics that admit the bounded transform `ρ/(1+ρ)` and the capped
/// transform `min{1, ρ}`.
pub trait Transformable: Sized {
    fn bounded(&self) -> Result<Self>;
    fn capped(&self) -> Result<Self>;
}

impl Transformable for MetricMatrix {
    fn bounded(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroElement("the bounded transform needs a nonzero metric".into()));
        }
        let one = Rational::one();
        Ok(self.map(|x| x / (&one + x)))
    }

    fn capped(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroElement("the capped transform needs a nonzero metric".into()));
        }
        let one = Rational::one();
        Ok(self.map(|x| if *x > one { one.clone() } else { x.clone() }))
    }
}

/// `ρ_b = ρ/(1+ρ)`.
pub fn transform_bounded<T: Transformable>(rho: &T) -> Result<T> {
    rho.bounded()
}

/// `ρ_min = min{1, ρ}`.
pub fn transform_min<T: Transformable>(rho: &T) -> Result<T> {
    rho.capped()
}

pub fn indexed_labels(n: usize) -> Arc<[String]> {
    (1..=n).map(|k| format!("x{k}")).collect()
}

/// A random rational metric: shortest-path closure of random positive edge
/// weights `p/q` with `1 ≤ p ≤ 20`, `1 ≤ q ≤ 6`.
pub fn random_metric<R: Rng + ?Sized>(rng: &mut R, labels: Arc<[String]>) -> MetricMatrix {
    let n = labels.len();
    let mut w = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = Rational::new(rng.random_range(1..=20), rng.random_range(1..=6));
            w[i][j] = v.clone();
            w[j][i] = v;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &w[i][k] + &w[k][j];
                if via < w[i][j] {
                    w[i][j] = via;
                }
            }
        }
    }
    MetricMatrix::with_labels(labels, w).expect("square by construction")
}

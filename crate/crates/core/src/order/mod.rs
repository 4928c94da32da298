//! Testing sets `L(x)`, orderly (in)dependence, generators, bases and
//! feasibility, all relative to explicit finite universes.
//!
//! For zero-primitive homogeneous instances `y ∈ L(x)` iff `C_x(y) > 0`, so
//! membership reduces to the instance's comparing oracle. The cone and the
//! hyperspace are not zero-primitive; [`in_l_by_search`] handles them by
//! trying `y ≥ αx + p` over sampled primitives `p` and listed scalars `α`.

mod oracles;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub use oracles::LazyMetricSpace;

use crate::error::{Error, Result};
use crate::evs::{sample_primitives, Evs};
use crate::metric::{LazyMetric, MetricSpace, PartialComparing};
use crate::rational::{Rational, Scalar};

/// What an oracle knows about `C_x(y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Comparing {
    Exact { value: Rational },
    /// `α·x ≤ y` holds carrier-wide, so `C_x(y) ≥ α`.
    Certified { alpha: Rational },
    /// Depth-indexed upper bounds that strictly decrease.
    Decaying { bounds: PartialComparing },
    /// A witness vector whose ratio, an upper bound for `C_x(y)`, is below `eps`.
    EpsWitness { eps: Rational, index: String, ratio: Rational },
    /// Depth-indexed upper bounds without a decreasing trend.
    Bounded { bounds: PartialComparing },
    Unavailable { reason: String },
}

/// An instance that can say something about its comparing function.
pub trait ComparingOracle: Evs {
    fn comparing(&self, x: &Self::Element, y: &Self::Element) -> Comparing;

    /// Whether `L(x) = {z : z ≥ αx}` (the primitive term collapses to `θ`).
    fn zero_primitive(&self) -> bool {
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
#[serde(bound(serialize = "E: Serialize", deserialize = "E: DeserializeOwned"))]
pub enum LCertificate<E> {
    /// `α·x (+ p) ≤ y`. `exact` when `α = C_x(y)`.
    Member {
        alpha: Rational,
        exact: bool,
        #[serde(default = "none", skip_serializing_if = "Option::is_none")]
        primitive: Option<E>,
    },
    /// `C_x(y) = 0` exactly.
    Refuted,
    /// Depth minima decrease toward 0; evidence, not proof.
    RefutedDecaying { bounds: PartialComparing },
    /// A witness bounds `C_x(y)` below `eps`: independent at that scale.
    RefutedAtEps { eps: Rational, index: String, ratio: Rational },
    /// Universe search found no `(α, p)` among the candidates.
    NotFound { candidates: usize },
    Inconclusive { reason: String },
}

fn none<E>() -> Option<E> {
    None
}

impl<E> LCertificate<E> {
    pub fn is_member(&self) -> bool {
        matches!(self, LCertificate::Member { .. })
    }

    pub fn alpha(&self) -> Option<&Rational> {
        match self {
            LCertificate::Member { alpha, .. } => Some(alpha),
            _ => None,
        }
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, LCertificate::Inconclusive { .. })
    }

    /// Refutations resting on a trend or an `ε` rather than an exact zero.
    pub fn is_qualified(&self) -> bool {
        matches!(
            self,
            LCertificate::RefutedDecaying { .. } | LCertificate::RefutedAtEps { .. } | LCertificate::NotFound { .. }
        )
    }
}

fn require_nonzero<I: Evs>(inst: &I, items: &[&I::Element], what: &str) -> Result<()> {
    if items.iter().any(|e| inst.is_zero(e)) {
        return Err(Error::ZeroElement(format!("{what} takes nonzero elements")));
    }
    Ok(())
}

/// `y ∈ L(x)` via `C_x(y) > 0`.
pub fn in_l<I: ComparingOracle>(inst: &I, x: &I::Element, y: &I::Element) -> Result<LCertificate<I::Element>> {
    require_nonzero(inst, &[x, y], "in_l")?;
    if !inst.zero_primitive() {
        return Ok(LCertificate::Inconclusive {
            reason: "instance is not zero-primitive; use a universe search".into(),
        });
    }
    Ok(match inst.comparing(x, y) {
        Comparing::Exact { value } if value.is_positive() => LCertificate::Member { alpha: value, exact: true, primitive: None },
        Comparing::Exact { .. } => LCertificate::Refuted,
        Comparing::Certified { alpha } => LCertificate::Member { alpha, exact: false, primitive: None },
        Comparing::Decaying { bounds } => LCertificate::RefutedDecaying { bounds },
        Comparing::EpsWitness { eps, index, ratio } => LCertificate::RefutedAtEps { eps, index, ratio },
        Comparing::Bounded { bounds } => LCertificate::Inconclusive {
            reason: format!("depth bounds {:?} show no decay", bounds.values),
        },
        Comparing::Unavailable { reason } => LCertificate::Inconclusive { reason },
    })
}

/// `y ≥ αx + p` for some listed nonzero `α` and sampled primitive `p`.
pub fn in_l_by_search<I: Evs>(
    inst: &I,
    x: &I::Element,
    y: &I::Element,
    universe: &[I::Element],
    scalars: &[Scalar],
) -> Result<LCertificate<I::Element>> {
    require_nonzero(inst, &[x, y], "in_l_by_search")?;
    let primitives = sample_primitives(inst, universe);
    if primitives.is_empty() {
        return Ok(LCertificate::Inconclusive { reason: "universe holds no primitive candidates".into() });
    }
    let mut alphas: Vec<Rational> = scalars.iter().filter(|a| !a.is_zero()).map(Rational::abs).collect();
    alphas.sort();
    alphas.dedup();
    for alpha in alphas.iter().rev() {
        let ax = inst.scale(alpha, x);
        for p in &primitives {
            if inst.leq(&inst.add(&ax, p), y) {
                return Ok(LCertificate::Member {
                    alpha: alpha.clone(),
                    exact: false,
                    primitive: Some(p.clone()),
                });
            }
        }
    }
    Ok(LCertificate::NotFound { candidates: primitives.len() * alphas.len() })
}

/// `α·x (+ p) ≤ y`, re-evaluated through the instance. Non-members replay
/// trivially to `true`.
pub fn replay_certificate<I: Evs>(inst: &I, x: &I::Element, y: &I::Element, cert: &LCertificate<I::Element>) -> bool {
    match cert {
        LCertificate::Member { alpha, primitive, .. } => {
            let ax = inst.scale(alpha, x);
            let lhs = match primitive {
                Some(p) => inst.add(&ax, p),
                None => ax,
            };
            inst.leq(&lhs, y)
        }
        _ => true,
    }
}

/// Distinct nonzero elements, the setting for every set-level check.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound(serialize = "E: Serialize", deserialize = "E: DeserializeOwned"))]
pub struct Universe<E> {
    elements: Vec<E>,
}

impl<E: Clone> Universe<E> {
    pub fn new<I: Evs<Element = E>>(inst: &I, elements: Vec<E>) -> Result<Self> {
        for (k, e) in elements.iter().enumerate() {
            inst.admits(e)?;
            if inst.is_zero(e) {
                return Err(Error::ZeroElement(format!("universe element {k} is the zero element")));
            }
            if let Some(j) = elements[..k].iter().position(|f| inst.equal(e, f)) {
                return Err(Error::input(format!("universe elements {j} and {k} coincide")));
            }
        }
        Ok(Universe { elements })
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn with_anchor<I: Evs>(inst: &I, a: &I::Element, universe: &Universe<I::Element>, keep: impl Fn(&I::Element) -> bool) -> Vec<I::Element> {
    let mut out = vec![a.clone()];
    out.extend(universe.elements.iter().filter(|u| !inst.equal(u, a) && keep(u)).cloned());
    out
}

/// `a` and every universe element `≥ a`.
pub fn up_set<I: Evs>(inst: &I, a: &I::Element, universe: &Universe<I::Element>) -> Vec<I::Element> {
    with_anchor(inst, a, universe, |u| inst.leq(a, u))
}

/// `a` and every universe element `≤ a`.
pub fn down_set<I: Evs>(inst: &I, a: &I::Element, universe: &Universe<I::Element>) -> Vec<I::Element> {
    with_anchor(inst, a, universe, |u| inst.leq(u, a))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetVerdict {
    Pass,
    /// Passed, but some step rests on a depth trend or an `ε` witness.
    PassQualified,
    Fail,
    Inconclusive,
}

impl SetVerdict {
    pub fn passed(self) -> bool {
        matches!(self, SetVerdict::Pass | SetVerdict::PassQualified)
    }

    fn combine(self, other: SetVerdict) -> SetVerdict {
        use SetVerdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            (PassQualified, _) | (_, PassQualified) => PassQualified,
            _ => Pass,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
#[serde(bound(serialize = "E: Serialize", deserialize = "E: DeserializeOwned"))]
pub struct DependentPair<E> {
    /// `certificate` shows element `member` lies in `L(of)`.
    pub of: usize,
    pub member: usize,
    pub certificate: LCertificate<E>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
#[serde(bound(serialize = "E: Serialize", deserialize = "E: DeserializeOwned"))]
pub struct IndependenceReport<E> {
    pub status: SetVerdict,
    pub pairs_checked: usize,
    #[serde(default = "none", skip_serializing_if = "Option::is_none")]
    pub dependent: Option<DependentPair<E>>,
    /// Pairs whose refutations are trend- or `ε`-based, or inconclusive.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub universe_relative: bool,
}

pub fn orderly_independent_set<I: ComparingOracle>(inst: &I, set: &[I::Element]) -> Result<IndependenceReport<I::Element>> {
    for e in set {
        require_nonzero(inst, &[e], "orderly_independent_set")?;
    }
    let mut status = SetVerdict::Pass;
    let mut notes = Vec::new();
    let mut pairs = 0;
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            pairs += 1;
            for (of, member) in [(i, j), (j, i)] {
                let cert = in_l(inst, &set[of], &set[member])?;
                if cert.is_member() {
                    return Ok(IndependenceReport {
                        status: SetVerdict::Fail,
                        pairs_checked: pairs,
                        dependent: Some(DependentPair { of, member, certificate: cert }),
                        notes,
                        universe_relative: true,
                    });
                }
                if cert.is_inconclusive() {
                    status = status.combine(SetVerdict::Inconclusive);
                    notes.push(format!("L({of}) ∋ {member}: inconclusive"));
                } else if cert.is_qualified() {
                    status = status.combine(SetVerdict::PassQualified);
                    notes.push(format!("L({of}) ∌ {member}: {}", describe(&cert)));
                }
            }
        }
    }
    Ok(IndependenceReport { status, pairs_checked: pairs, dependent: None, notes, universe_relative: true })
}

fn describe<E>(cert: &LCertificate<E>) -> String {
    match cert {
        LCertificate::RefutedDecaying { bounds } => {
            format!("decaying bounds at depths {:?}", bounds.depths)
        }
        LCertificate::RefutedAtEps { eps, index, .. } => format!("independent at eps {eps} via {index}"),
        LCertificate::NotFound { candidates } => format!("no certificate among {candidates} candidates"),
        _ => String::new(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Generated {
    pub element: usize,
    pub generator: usize,
    pub alpha: Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GenerationReport {
    pub status: SetVerdict,
    pub certificates: Vec<Generated>,
    /// First universe element with no certificate from any generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uncovered: Option<usize>,
    pub universe_relative: bool,
}

/// Every universe element lies in `L(b)` for some `b` in `generators`.
pub fn generates<I: ComparingOracle>(
    inst: &I,
    generators: &[I::Element],
    universe: &Universe<I::Element>,
) -> Result<GenerationReport> {
    for b in generators {
        require_nonzero(inst, &[b], "generates")?;
    }
    let mut certificates = Vec::new();
    let mut status = SetVerdict::Pass;
    for (k, u) in universe.elements.iter().enumerate() {
        let mut found = None;
        let mut unsure = false;
        for (g, b) in generators.iter().enumerate() {
            let cert = in_l(inst, b, u)?;
            if let Some(alpha) = cert.alpha() {
                found = Some(Generated { element: k, generator: g, alpha: alpha.clone() });
                break;
            }
            unsure |= cert.is_inconclusive();
        }
        match found {
            Some(c) => certificates.push(c),
            None if unsure => status = status.combine(SetVerdict::Inconclusive),
            None => {
                return Ok(GenerationReport {
                    status: SetVerdict::Fail,
                    certificates,
                    uncovered: Some(k),
                    universe_relative: true,
                })
            }
        }
    }
    Ok(GenerationReport { status, certificates, uncovered: None, universe_relative: true })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
#[serde(bound(serialize = "E: Serialize", deserialize = "E: DeserializeOwned"))]
pub struct BasisReport<E> {
    pub status: SetVerdict,
    pub generation: GenerationReport,
    pub independence: IndependenceReport<E>,
    pub universe_relative: bool,
}

pub fn is_basis<I: ComparingOracle>(
    inst: &I,
    basis: &[I::Element],
    universe: &Universe<I::Element>,
) -> Result<BasisReport<I::Element>> {
    let generation = generates(inst, basis, universe)?;
    let independence = orderly_independent_set(inst, basis)?;
    Ok(BasisReport {
        status: generation.status.combine(independence.status),
        generation,
        independence,
        universe_relative: true,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
#[serde(bound(serialize = "E: Serialize", deserialize = "E: DeserializeOwned"))]
pub struct FeasibilityReport<E> {
    pub status: SetVerdict,
    /// Universe indices of the nonzero elements below `x`.
    pub below: Vec<usize>,
    pub certificates: Vec<LCertificate<E>>,
    /// The smallest positive certificate: how close `x` is to failing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_certificate: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<usize>,
    pub universe_relative: bool,
}

/// `x ∈ Q(X)` relative to the universe: every nonzero `y ≤ x` lies in `L(x)`.
pub fn feasible_in_universe<I: ComparingOracle>(
    inst: &I,
    x: &I::Element,
    universe: &Universe<I::Element>,
) -> Result<FeasibilityReport<I::Element>> {
    require_nonzero(inst, &[x], "feasible_in_universe")?;
    let mut report = FeasibilityReport {
        status: SetVerdict::Pass,
        below: Vec::new(),
        certificates: Vec::new(),
        min_certificate: None,
        witness: None,
        universe_relative: true,
    };
    for (k, y) in universe.elements.iter().enumerate() {
        if !inst.leq(y, x) {
            continue;
        }
        let cert = in_l(inst, x, y)?;
        report.below.push(k);
        match cert.alpha() {
            Some(a) => {
                if report.min_certificate.as_ref().is_none_or(|m| a < m) {
                    report.min_certificate = Some(a.clone());
                }
            }
            None if cert.is_inconclusive() => report.status = report.status.combine(SetVerdict::Inconclusive),
            None => {
                report.status = SetVerdict::Fail;
                report.witness.get_or_insert(k);
            }
        }
        report.certificates.push(cert);
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FeasibilityTrend {
    pub depths: Vec<usize>,
    pub statuses: Vec<SetVerdict>,
    pub min_certificates: Vec<Option<Rational>>,
    /// Certificates shrink with depth: the finite passes hide a carrier-wide
    /// failure.
    pub strictly_decreasing: bool,
}

/// Runs [`feasible_in_universe`] on the materialized truncations of lazy
/// metrics at each depth.
pub fn feasibility_trend(x: &LazyMetric, universe: &[LazyMetric], depths: &[usize]) -> Result<FeasibilityTrend> {
    if depths.is_empty() {
        return Err(Error::params("at least one depth is required"));
    }
    let mut statuses = Vec::new();
    let mut mins = Vec::new();
    for &n in depths {
        let xm = x.materialize(n)?;
        let space = MetricSpace::new(xm.shared_labels());
        let elements = universe.iter().map(|u| u.materialize(n)).collect::<Result<Vec<_>>>()?;
        let report = feasible_in_universe(&space, &xm, &Universe::new(&space, elements)?)?;
        statuses.push(report.status);
        mins.push(report.min_certificate);
    }
    let strictly_decreasing = mins.windows(2).all(|w| match (&w[0], &w[1]) {
        (Some(a), Some(b)) => b < a,
        _ => false,
    });
    Ok(FeasibilityTrend { depths: depths.to_vec(), statuses, min_certificates: mins, strictly_decreasing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{ConeElement, ConeSpace};
    use crate::metric::{Carrier, MetricMatrix, Transformable};
    use crate::rational::q;

    fn usual(n: usize) -> MetricMatrix {
        MetricMatrix::from_fn(crate::metric::indexed_labels(n), |i, j| {
            Rational::from_integer((i as i64 - j as i64).abs())
        })
        .unwrap()
    }

    #[test]
    fn membership_closed_forms() {
        let rho = usual(5);
        let space = MetricSpace::new(rho.shared_labels());
        let capped = rho.capped().unwrap();
        assert!(in_l(&space, &capped, &rho).unwrap().alpha().unwrap() >= &q(1, 1));
        // M = 4.
        assert_eq!(in_l(&space, &rho, &rho.bounded().unwrap()).unwrap().alpha(), Some(&q(1, 5)));
        assert_eq!(in_l(&space, &rho, &rho).unwrap().alpha(), Some(&q(1, 1)));
        assert!(in_l(&space, &rho, &space.zero()).is_err());
    }

    #[test]
    fn up_and_down_sets() {
        let rho = usual(3).bounded().unwrap();
        let space = MetricSpace::new(rho.shared_labels());
        let b = rho.bounded().unwrap();
        let m = rho.capped().unwrap();
        let u = Universe::new(&space, vec![rho.clone(), b.clone(), space.add(&rho, &rho)]).unwrap();
        let down = down_set(&space, &rho, &u);
        assert!(down.contains(&b) && down.contains(&rho) && down.len() == 2);
        assert_eq!(m, rho);
        assert_eq!(up_set(&space, &space.zero(), &u).len(), 4);
        let single = Universe::new(&space, vec![rho.clone()]).unwrap();
        assert_eq!(down_set(&space, &rho, &single), vec![rho]);
    }

    #[test]
    fn universe_rejects_zero_and_duplicates() {
        let rho = usual(3);
        let space = MetricSpace::new(rho.shared_labels());
        assert!(Universe::new(&space, vec![space.zero()]).is_err());
        assert!(Universe::new(&space, vec![rho.clone(), rho]).is_err());
    }

    #[test]
    fn basis_checks() {
        let rho = usual(4);
        let space = MetricSpace::new(rho.shared_labels());
        let u = Universe::new(&space, vec![rho.clone()]).unwrap();
        let pair = [rho.clone(), rho.bounded().unwrap()];
        assert_eq!(generates(&space, &pair, &u).unwrap().status, SetVerdict::Pass);
        let basis = is_basis(&space, &pair, &u).unwrap();
        assert_eq!(basis.status, SetVerdict::Fail);
        assert!(basis.independence.dependent.is_some());
        assert_eq!(generates(&space, &[], &u).unwrap().status, SetVerdict::Fail);
        assert_eq!(orderly_independent_set(&space, &pair[..1]).unwrap().status, SetVerdict::Pass);
    }

    #[test]
    fn lazy_independence_is_qualified() {
        let space = LazyMetricSpace::new(Carrier::Indexed, &[10, 25, 50]).unwrap();
        let d = LazyMetric::Discrete { carrier: Carrier::Indexed };
        let s = LazyMetric::Shrinking;
        let cert = in_l(&space, &s, &d).unwrap();
        assert_eq!(cert.alpha(), Some(&q(1, 1)));
        assert!(replay_certificate(&space, &s, &d, &cert));
        assert!(matches!(in_l(&space, &d, &s).unwrap(), LCertificate::RefutedDecaying { .. }));
    }

    #[test]
    fn cone_membership_needs_a_search() {
        let cone = ConeSpace::new(1);
        let e = |r: i64, v: i64| ConeElement { r: q(r, 1), v: vec![q(v, 1)] };
        let x = e(1, 1);
        assert!(in_l(&cone, &x, &e(3, 2)).unwrap().is_inconclusive());
        let universe = vec![cone.zero(), e(0, 1), e(3, 2)];
        let scalars = crate::evs::default_scalars();
        let cert = in_l_by_search(&cone, &x, &e(3, 2), &universe, &scalars).unwrap();
        assert_eq!(cert.alpha(), Some(&q(2, 1)));
        // 2·(1, 1) + (0, 1) = (2, 3).
        let cert = in_l_by_search(&cone, &x, &e(5, 3), &universe, &scalars).unwrap();
        assert_eq!(cert.alpha(), Some(&q(2, 1)));
        assert!(replay_certificate(&cone, &x, &e(5, 3), &cert));
        let cert = in_l_by_search(&cone, &x, &e(1, 7), &universe, &scalars).unwrap();
        assert!(matches!(cert, LCertificate::NotFound { .. }));
    }
}

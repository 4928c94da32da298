//! The exponential vector space contract and a sample-driven verifier.
//!
//! An instance supplies addition, a scalar action, a partial order, a zero
//! element and an equality. [`check_axioms`] runs the six evs axioms over
//! every pair/triple of a finite sample and every scalar combination;
//! [`check_properties`] does the same for the named evs properties.
//!
//! A5 and A6 quantify over the whole carrier. Here they are evaluated
//! relative to the sample: an element is a sample primitive when nothing else
//! in the sample lies below it *and* `z + (-1)z` is the zero element. Both
//! results are flagged `sampleRelative`. The verifier can refute carrier-wide
//! minimality but never confirm it.
//!
//! Every failing check carries a [`Counterexample`]; [`replay_axiom`] and
//! [`replay_property`] re-evaluate it through the instance operations.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{q, Scalar};

/// An exponential vector space over the rationals.
pub trait Evs {
    type Element: Clone + fmt::Debug + Serialize + DeserializeOwned;

    fn name(&self) -> String;
    fn zero(&self) -> Self::Element;
    fn add(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn scale(&self, alpha: &Scalar, a: &Self::Element) -> Self::Element;
    fn leq(&self, a: &Self::Element, b: &Self::Element) -> bool;
    fn equal(&self, a: &Self::Element, b: &Self::Element) -> bool;

    /// Rejects elements that do not belong to this instance's carrier
    /// (wrong labels, wrong dimension).
    fn admits(&self, _e: &Self::Element) -> Result<()> {
        Ok(())
    }

    fn is_zero(&self, a: &Self::Element) -> bool {
        self.equal(a, &self.zero())
    }
}

/// Seeded random element generation. Samples always contain the zero element
/// and, for every generated element, some primitive lying below it, so that
/// the sample-relative A5/A6 checks are meaningful.
pub trait Sampler: Evs {
    fn sample(&self, rng: &mut ChaCha8Rng, n: usize) -> Vec<Self::Element>;
}

pub const DEFAULT_SAMPLE_SIZE: usize = 50;

pub fn seeded_sample<I: Sampler>(instance: &I, seed: u64, n: usize) -> Vec<I::Element> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    instance.sample(&mut rng, n)
}

/// `{0, 1, -1, 1/2, -1/2, 2, -2}`.
pub fn default_scalars() -> Vec<Scalar> {
    vec![q(0, 1), q(1, 1), q(-1, 1), q(1, 2), q(-1, 2), q(2, 1), q(-2, 1)]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axiom {
    #[serde(rename = "A1")]
    A1,
    #[serde(rename = "A2")]
    A2,
    #[serde(rename = "A3(i)")]
    A3i,
    #[serde(rename = "A3(ii)")]
    A3ii,
    #[serde(rename = "A3(iii)")]
    A3iii,
    #[serde(rename = "A3(iv)")]
    A3iv,
    #[serde(rename = "A4")]
    A4,
    #[serde(rename = "A5")]
    A5,
    #[serde(rename = "A6")]
    A6,
    /// Reflexivity, antisymmetry and transitivity of `leq` on the sample.
    #[serde(rename = "partial-order")]
    PartialOrder,
}

impl Axiom {
    pub const ALL: [Axiom; 10] = [
        Axiom::A1,
        Axiom::A2,
        Axiom::A3i,
        Axiom::A3ii,
        Axiom::A3iii,
        Axiom::A3iv,
        Axiom::A4,
        Axiom::A5,
        Axiom::A6,
        Axiom::PartialOrder,
    ];

    pub fn is_sample_relative(self) -> bool {
        matches!(self, Axiom::A5 | Axiom::A6)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("axiom serializes");
        write!(f, "{}", s.as_str().unwrap_or("?"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
    Inconclusive,
}

/// The concrete elements and scalars witnessing a violation. `context`
/// carries auxiliary elements (the sample primitives) for checks whose
/// violation is relative to them.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound(deserialize = "E: Deserialize<'de>"))]
pub struct Counterexample<E> {
    pub elements: Vec<E>,
    #[serde(default)]
    pub scalars: Vec<Scalar>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub context: Vec<E>,
    pub note: String,
}

impl<E> Counterexample<E> {
    fn new(elements: Vec<E>, scalars: Vec<Scalar>, note: impl Into<String>) -> Self {
        Counterexample {
            elements,
            scalars,
            context: Vec::new(),
            note: note.into(),
        }
    }

    fn with_context(mut self, context: Vec<E>) -> Self {
        self.context = context;
        self
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
#[serde(bound(deserialize = "E: Deserialize<'de>"))]
pub struct AxiomCheck<E> {
    pub axiom: Axiom,
    pub status: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample<E>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub sample_relative: bool,
    /// For A3(iii): a witness where the inequality is strict.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strict_witness: Option<Counterexample<E>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
#[serde(bound(deserialize = "E: Deserialize<'de>"))]
pub struct AxiomReport<E> {
    pub instance: String,
    pub sample_size: usize,
    pub scalar_count: usize,
    pub seed: u64,
    pub checks: Vec<AxiomCheck<E>>,
}

impl<E> AxiomReport<E> {
    pub fn get(&self, axiom: Axiom) -> &AxiomCheck<E> {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .expect("every axiom is reported")
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Verdict::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck<E>> {
        self.checks.iter().filter(|c| c.status == Verdict::Fail)
    }
}

fn validate_inputs<I: Evs>(instance: &I, sample: &[I::Element], scalars: &[Scalar]) -> Result<()> {
    if sample.is_empty() {
        return Err(Error::input("sample is empty"));
    }
    for e in sample {
        instance.admits(e)?;
    }
    let zero = instance.zero();
    if !sample.iter().any(|e| instance.equal(e, &zero)) {
        return Err(Error::input("sample must contain the zero element"));
    }
    for required in [q(0, 1), q(1, 1), q(-1, 1)] {
        if !scalars.contains(&required) {
            return Err(Error::input(format!("scalar list must contain {required}")));
        }
    }
    Ok(())
}

// Violation predicates, shared by the checker and by replay.

fn commutativity_fails<I: Evs>(i: &I, x: &I::Element, y: &I::Element) -> bool {
    !i.equal(&i.add(x, y), &i.add(y, x))
}

fn associativity_fails<I: Evs>(i: &I, x: &I::Element, y: &I::Element, z: &I::Element) -> bool {
    !i.equal(&i.add(&i.add(x, y), z), &i.add(x, &i.add(y, z)))
}

fn identity_fails<I: Evs>(i: &I, x: &I::Element) -> bool {
    let zero = i.zero();
    !i.equal(&i.add(x, &zero), x) || !i.equal(&i.add(&zero, x), x)
}

fn translation_fails<I: Evs>(i: &I, x: &I::Element, y: &I::Element, z: &I::Element) -> bool {
    i.leq(x, y) && !i.leq(&i.add(x, z), &i.add(y, z))
}

fn dilation_fails<I: Evs>(i: &I, x: &I::Element, y: &I::Element, a: &Scalar) -> bool {
    i.leq(x, y) && !i.leq(&i.scale(a, x), &i.scale(a, y))
}

fn distributivity_fails<I: Evs>(i: &I, x: &I::Element, y: &I::Element, a: &Scalar) -> bool {
    !i.equal(&i.scale(a, &i.add(x, y)), &i.add(&i.scale(a, x), &i.scale(a, y)))
}

fn compatibility_fails<I: Evs>(i: &I, x: &I::Element, a: &Scalar, b: &Scalar) -> bool {
    !i.equal(&i.scale(a, &i.scale(b, x)), &i.scale(&(a * b), x))
}

fn subadditivity_fails<I: Evs>(i: &I, x: &I::Element, a: &Scalar, b: &Scalar) -> bool {
    !i.leq(&i.scale(&(a + b), x), &i.add(&i.scale(a, x), &i.scale(b, x)))
}

fn subadditivity_strict<I: Evs>(i: &I, x: &I::Element, a: &Scalar, b: &Scalar) -> bool {
    let lhs = i.scale(&(a + b), x);
    let rhs = i.add(&i.scale(a, x), &i.scale(b, x));
    i.leq(&lhs, &rhs) && !i.equal(&lhs, &rhs)
}

fn unit_fails<I: Evs>(i: &I, x: &I::Element) -> bool {
    !i.equal(&i.scale(&q(1, 1), x), x)
}

fn annihilation_fails<I: Evs>(i: &I, x: &I::Element, a: &Scalar) -> bool {
    let vanishes = i.is_zero(&i.scale(a, x));
    vanishes != (a.is_zero() || i.is_zero(x))
}

/// `z + (-1)z = θ`, the algebraic side of A5.
pub fn cancels<I: Evs>(i: &I, z: &I::Element) -> bool {
    i.is_zero(&i.add(z, &i.scale(&q(-1, 1), z)))
}

fn strictly_below<I: Evs>(i: &I, y: &I::Element, z: &I::Element) -> bool {
    i.leq(y, z) && !i.equal(y, z)
}

/// Elements of `universe` with no distinct universe element below them: the
/// sample-relative primitive space.
pub fn minimal_elements<I: Evs>(universe: &[I::Element], instance: &I) -> Result<Vec<I::Element>> {
    if universe.is_empty() {
        return Err(Error::input("universe is empty"));
    }
    Ok(minimal_indices(instance, universe)
        .into_iter()
        .map(|k| universe[k].clone())
        .collect())
}

fn minimal_indices<I: Evs>(i: &I, universe: &[I::Element]) -> Vec<usize> {
    (0..universe.len())
        .filter(|&k| !universe.iter().any(|y| strictly_below(i, y, &universe[k])))
        .collect()
}

/// Sample elements that are both minimal in the sample and satisfy
/// `z + (-1)z = θ`.
pub fn sample_primitives<I: Evs>(i: &I, sample: &[I::Element]) -> Vec<I::Element> {
    minimal_indices(i, sample)
        .into_iter()
        .filter(|&k| cancels(i, &sample[k]))
        .map(|k| sample[k].clone())
        .collect()
}

/// Primitives (from `primitives`) lying below `x`, deduplicated.
fn primitives_below<I: Evs>(i: &I, x: &I::Element, primitives: &[I::Element]) -> Vec<I::Element> {
    let mut out: Vec<I::Element> = Vec::new();
    for p in primitives {
        if i.leq(p, x) && !out.iter().any(|o| i.equal(o, p)) {
            out.push(p.clone());
        }
    }
    out
}

struct Checker<'a, I: Evs> {
    i: &'a I,
    sample: &'a [I::Element],
    scalars: &'a [Scalar],
}

type Found<E> = Option<Counterexample<E>>;

impl<I: Evs> Checker<'_, I> {
    fn pairs(&self) -> impl Iterator<Item = (&I::Element, &I::Element)> {
        self.sample
            .iter()
            .flat_map(move |x| self.sample.iter().map(move |y| (x, y)))
    }

    fn a1(&self) -> Found<I::Element> {
        for x in self.sample {
            if identity_fails(self.i, x) {
                return Some(Counterexample::new(vec![x.clone()], vec![], "identity"));
            }
        }
        for (x, y) in self.pairs() {
            if commutativity_fails(self.i, x, y) {
                return Some(Counterexample::new(vec![x.clone(), y.clone()], vec![], "commutativity"));
            }
        }
        for (x, y) in self.pairs() {
            let xy = self.i.add(x, y);
            for z in self.sample {
                let left = self.i.add(&xy, z);
                let right = self.i.add(x, &self.i.add(y, z));
                if !self.i.equal(&left, &right) {
                    return Some(Counterexample::new(
                        vec![x.clone(), y.clone(), z.clone()],
                        vec![],
                        "associativity",
                    ));
                }
            }
        }
        None
    }

    fn a2(&self) -> Found<I::Element> {
        for (x, y) in self.pairs() {
            if !self.i.leq(x, y) {
                continue;
            }
            for z in self.sample {
                if translation_fails(self.i, x, y, z) {
                    return Some(Counterexample::new(
                        vec![x.clone(), y.clone(), z.clone()],
                        vec![],
                        "x <= y but x + z is not <= y + z",
                    ));
                }
            }
            for a in self.scalars {
                if dilation_fails(self.i, x, y, a) {
                    return Some(Counterexample::new(
                        vec![x.clone(), y.clone()],
                        vec![a.clone()],
                        "x <= y but a.x is not <= a.y",
                    ));
                }
            }
        }
        None
    }

    fn a3i(&self) -> Found<I::Element> {
        for (x, y) in self.pairs() {
            for a in self.scalars {
                if distributivity_fails(self.i, x, y, a) {
                    return Some(Counterexample::new(
                        vec![x.clone(), y.clone()],
                        vec![a.clone()],
                        "a.(x + y) != a.x + a.y",
                    ));
                }
            }
        }
        None
    }

    fn scalar_pairs(&self) -> impl Iterator<Item = (&Scalar, &Scalar)> {
        self.scalars
            .iter()
            .flat_map(move |a| self.scalars.iter().map(move |b| (a, b)))
    }

    fn a3ii(&self) -> Found<I::Element> {
        for x in self.sample {
            for (a, b) in self.scalar_pairs() {
                if compatibility_fails(self.i, x, a, b) {
                    return Some(Counterexample::new(
                        vec![x.clone()],
                        vec![a.clone(), b.clone()],
                        "a.(b.x) != (ab).x",
                    ));
                }
            }
        }
        None
    }

    fn a3iii(&self) -> (Found<I::Element>, Found<I::Element>) {
        let mut strict = None;
        for x in self.sample {
            for (a, b) in self.scalar_pairs() {
                if subadditivity_fails(self.i, x, a, b) {
                    return (
                        Some(Counterexample::new(
                            vec![x.clone()],
                            vec![a.clone(), b.clone()],
                            "(a + b).x is not <= a.x + b.x",
                        )),
                        strict,
                    );
                }
                if strict.is_none() && subadditivity_strict(self.i, x, a, b) {
                    strict = Some(Counterexample::new(
                        vec![x.clone()],
                        vec![a.clone(), b.clone()],
                        "(a + b).x strictly below a.x + b.x",
                    ));
                }
            }
        }
        (None, strict)
    }

    fn a3iv(&self) -> Found<I::Element> {
        self.sample
            .iter()
            .find(|x| unit_fails(self.i, x))
            .map(|x| Counterexample::new(vec![x.clone()], vec![], "1.x != x"))
    }

    fn a4(&self) -> Found<I::Element> {
        for x in self.sample {
            for a in self.scalars {
                if annihilation_fails(self.i, x, a) {
                    return Some(Counterexample::new(
                        vec![x.clone()],
                        vec![a.clone()],
                        "a.x = zero must hold exactly when a = 0 or x = zero",
                    ));
                }
            }
        }
        None
    }

    fn a5(&self) -> Found<I::Element> {
        for z in self.sample {
            let below = self.sample.iter().find(|y| strictly_below(self.i, y, z));
            let algebraic = cancels(self.i, z);
            match (algebraic, below) {
                (true, Some(y)) => {
                    return Some(Counterexample::new(
                        vec![z.clone(), y.clone()],
                        vec![],
                        "z + (-1)z = zero, yet a distinct sampled y lies below z",
                    ))
                }
                (false, None) => {
                    return Some(Counterexample::new(
                        vec![z.clone()],
                        vec![],
                        "z is minimal in the sample, yet z + (-1)z != zero",
                    ))
                }
                _ => {}
            }
        }
        None
    }

    fn a6(&self) -> Found<I::Element> {
        let primitives = sample_primitives(self.i, self.sample);
        self.sample
            .iter()
            .find(|x| !primitives.iter().any(|p| self.i.leq(p, x)))
            .map(|x| {
                Counterexample::new(vec![x.clone()], vec![], "no sample primitive lies below x")
                    .with_context(primitives.clone())
            })
    }

    fn order(&self) -> Found<I::Element> {
        for x in self.sample {
            if !self.i.equal(x, x) || !self.i.leq(x, x) {
                return Some(Counterexample::new(vec![x.clone()], vec![], "reflexivity"));
            }
        }
        for (x, y) in self.pairs() {
            if antisymmetry_fails(self.i, x, y) {
                return Some(Counterexample::new(vec![x.clone(), y.clone()], vec![], "antisymmetry"));
            }
        }
        for (x, y) in self.pairs() {
            if !self.i.leq(x, y) {
                continue;
            }
            for z in self.sample {
                if self.i.leq(y, z) && !self.i.leq(x, z) {
                    return Some(Counterexample::new(
                        vec![x.clone(), y.clone(), z.clone()],
                        vec![],
                        "transitivity",
                    ));
                }
            }
        }
        None
    }
}

fn antisymmetry_fails<I: Evs>(i: &I, x: &I::Element, y: &I::Element) -> bool {
    i.leq(x, y) && i.leq(y, x) && !i.equal(x, y)
}

fn check_from<E>(axiom: Axiom, found: Found<E>) -> AxiomCheck<E> {
    AxiomCheck {
        axiom,
        status: if found.is_some() { Verdict::Fail } else { Verdict::Pass },
        counterexample: found,
        reason: None,
        sample_relative: axiom.is_sample_relative(),
        strict_witness: None,
    }
}

/// Runs A1–A6 (and the partial-order laws) exhaustively over `sample`.
pub fn check_axioms<I: Evs>(
    instance: &I,
    sample: &[I::Element],
    scalars: &[Scalar],
    seed: u64,
) -> Result<AxiomReport<I::Element>> {
    validate_inputs(instance, sample, scalars)?;
    let c = Checker { i: instance, sample, scalars };
    let (a3iii, strict) = c.a3iii();
    let mut a3iii_check = check_from(Axiom::A3iii, a3iii);
    a3iii_check.strict_witness = strict;
    let checks = vec![
        check_from(Axiom::A1, c.a1()),
        check_from(Axiom::A2, c.a2()),
        check_from(Axiom::A3i, c.a3i()),
        check_from(Axiom::A3ii, c.a3ii()),
        a3iii_check,
        check_from(Axiom::A3iv, c.a3iv()),
        check_from(Axiom::A4, c.a4()),
        check_from(Axiom::A5, c.a5()),
        check_from(Axiom::A6, c.a6()),
        check_from(Axiom::PartialOrder, c.order()),
    ];
    Ok(AxiomReport {
        instance: instance.name(),
        sample_size: sample.len(),
        scalar_count: scalars.len(),
        seed,
        checks,
    })
}

/// Re-evaluates a counterexample through the instance. `true` means the
/// violation is confirmed.
pub fn replay_axiom<I: Evs>(instance: &I, axiom: Axiom, cx: &Counterexample<I::Element>) -> bool {
    let e = &cx.elements;
    let s = &cx.scalars;
    let i = instance;
    match (axiom, e.len(), s.len()) {
        (Axiom::A1, 1, _) => identity_fails(i, &e[0]),
        (Axiom::A1, 2, _) => commutativity_fails(i, &e[0], &e[1]),
        (Axiom::A1, 3, _) => associativity_fails(i, &e[0], &e[1], &e[2]),
        (Axiom::A2, 3, _) => translation_fails(i, &e[0], &e[1], &e[2]),
        (Axiom::A2, 2, 1) => dilation_fails(i, &e[0], &e[1], &s[0]),
        (Axiom::A3i, 2, 1) => distributivity_fails(i, &e[0], &e[1], &s[0]),
        (Axiom::A3ii, 1, 2) => compatibility_fails(i, &e[0], &s[0], &s[1]),
        (Axiom::A3iii, 1, 2) => subadditivity_fails(i, &e[0], &s[0], &s[1]),
        (Axiom::A3iv, 1, _) => unit_fails(i, &e[0]),
        (Axiom::A4, 1, 1) => annihilation_fails(i, &e[0], &s[0]),
        (Axiom::A5, 2, _) => cancels(i, &e[0]) && strictly_below(i, &e[1], &e[0]),
        (Axiom::A5, 1, _) => !cancels(i, &e[0]),
        (Axiom::A6, 1, _) => !cx.context.iter().any(|p| i.leq(p, &e[0])),
        (Axiom::PartialOrder, 1, _) => !i.equal(&e[0], &e[0]) || !i.leq(&e[0], &e[0]),
        (Axiom::PartialOrder, 2, _) => antisymmetry_fails(i, &e[0], &e[1]),
        (Axiom::PartialOrder, 3, _) => {
            i.leq(&e[0], &e[1]) && i.leq(&e[1], &e[2]) && !i.leq(&e[0], &e[2])
        }
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Balanced,
    Homogeneous,
    Convex,
    ZeroPrimitive,
    SinglePrimitive,
    AdditivePrimitive,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::Balanced,
        Property::Homogeneous,
        Property::Convex,
        Property::ZeroPrimitive,
        Property::SinglePrimitive,
        Property::AdditivePrimitive,
    ];
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
#[serde(bound(deserialize = "E: Deserialize<'de>"))]
pub struct PropertyCheck<E> {
    pub property: Property,
    pub status: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample<E>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub sample_relative: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
#[serde(bound(deserialize = "E: Deserialize<'de>"))]
pub struct PropertyReport<E> {
    pub instance: String,
    pub sample_size: usize,
    pub checks: Vec<PropertyCheck<E>>,
}

impl<E> PropertyReport<E> {
    pub fn get(&self, property: Property) -> &PropertyCheck<E> {
        self.checks
            .iter()
            .find(|c| c.property == property)
            .expect("every property is reported")
    }

    pub fn status(&self, property: Property) -> Verdict {
        self.get(property).status
    }
}

fn balance_fails<I: Evs>(i: &I, x: &I::Element, a: &Scalar) -> bool {
    a.abs() <= q(1, 1) && !i.leq(&i.scale(a, x), x)
}

fn homogeneity_fails<I: Evs>(i: &I, x: &I::Element, a: &Scalar) -> bool {
    !i.equal(&i.scale(a, x), &i.scale(&a.abs(), x))
}

fn convexity_fails<I: Evs>(i: &I, x: &I::Element, a: &Scalar, b: &Scalar) -> bool {
    !a.is_negative()
        && !b.is_negative()
        && !i.equal(&i.scale(&(a + b), x), &i.add(&i.scale(a, x), &i.scale(b, x)))
}

/// Distinct sample primitives below `x` other than zero, if any.
fn nonzero_primitive_below<I: Evs>(i: &I, x: &I::Element, primitives: &[I::Element]) -> Option<I::Element> {
    primitives_below(i, x, primitives)
        .into_iter()
        .find(|p| !i.is_zero(p))
}

fn property_check<E>(property: Property, status: Verdict, cx: Found<E>, reason: Option<String>) -> PropertyCheck<E> {
    PropertyCheck {
        property,
        status,
        counterexample: cx,
        reason,
        sample_relative: matches!(
            property,
            Property::ZeroPrimitive | Property::SinglePrimitive | Property::AdditivePrimitive
        ),
    }
}

fn from_found<E>(property: Property, cx: Found<E>) -> PropertyCheck<E> {
    let status = if cx.is_some() { Verdict::Fail } else { Verdict::Pass };
    property_check(property, status, cx, None)
}

/// Checks balanced, homogeneous, convex and the three primitivity properties.
pub fn check_properties<I: Evs>(
    instance: &I,
    sample: &[I::Element],
    scalars: &[Scalar],
) -> Result<PropertyReport<I::Element>> {
    validate_inputs(instance, sample, scalars)?;
    let i = instance;
    let primitives = sample_primitives(i, sample);

    let balanced = sample.iter().find_map(|x| {
        scalars
            .iter()
            .find(|a| balance_fails(i, x, a))
            .map(|a| Counterexample::new(vec![x.clone()], vec![a.clone()], "|a| <= 1 but a.x is not <= x"))
    });
    let homogeneous = sample.iter().find_map(|x| {
        scalars
            .iter()
            .find(|a| homogeneity_fails(i, x, a))
            .map(|a| Counterexample::new(vec![x.clone()], vec![a.clone()], "a.x != |a|.x"))
    });
    let convex = sample.iter().find_map(|x| {
        scalars.iter().find_map(|a| {
            scalars.iter().find(|b| convexity_fails(i, x, a, b)).map(|b| {
                Counterexample::new(vec![x.clone()], vec![a.clone(), b.clone()], "(a + b).x != a.x + b.x for a, b >= 0")
            })
        })
    });

    let mut checks = vec![
        from_found(Property::Balanced, balanced),
        from_found(Property::Homogeneous, homogeneous),
        from_found(Property::Convex, convex),
    ];

    // Primitivity, all relative to the sample primitives.
    let below_sets: Vec<Vec<I::Element>> = sample
        .iter()
        .map(|x| primitives_below(i, x, &primitives))
        .collect();
    let missing = below_sets.iter().position(|s| s.is_empty());

    let zero_prim = sample.iter().find_map(|x| {
        nonzero_primitive_below(i, x, &primitives).map(|p| {
            Counterexample::new(vec![x.clone(), p], vec![], "a non-zero primitive lies below x")
        })
    });
    checks.push(match (zero_prim, missing) {
        (Some(cx), _) => property_check(Property::ZeroPrimitive, Verdict::Fail, Some(cx), None),
        (None, Some(k)) => property_check(
            Property::ZeroPrimitive,
            Verdict::Inconclusive,
            None,
            Some(format!("sample element {k} has no sample primitive below it")),
        ),
        (None, None) => property_check(Property::ZeroPrimitive, Verdict::Pass, None, None),
    });

    let multi = sample.iter().zip(&below_sets).find_map(|(x, ps)| {
        (ps.len() > 1).then(|| {
            Counterexample::new(
                vec![x.clone(), ps[0].clone(), ps[1].clone()],
                vec![],
                "two distinct primitives lie below x",
            )
        })
    });
    checks.push(match (multi, missing) {
        (Some(cx), _) => property_check(Property::SinglePrimitive, Verdict::Fail, Some(cx), None),
        (None, Some(k)) => property_check(
            Property::SinglePrimitive,
            Verdict::Inconclusive,
            None,
            Some(format!("sample element {k} has no sample primitive below it")),
        ),
        (None, None) => property_check(Property::SinglePrimitive, Verdict::Pass, None, None),
    });

    checks.push(additive_primitive(i, sample, &below_sets, &primitives));

    Ok(PropertyReport {
        instance: instance.name(),
        sample_size: sample.len(),
        checks,
    })
}

fn additive_primitive<I: Evs>(
    i: &I,
    sample: &[I::Element],
    below_sets: &[Vec<I::Element>],
    primitives: &[I::Element],
) -> PropertyCheck<I::Element> {
    let mut conclusive = 0usize;
    for (a, x) in sample.iter().enumerate() {
        for (b, y) in sample.iter().enumerate() {
            let sum = i.add(x, y);
            let observed = primitives_below(i, &sum, primitives);
            let predicted: Vec<I::Element> = below_sets[a]
                .iter()
                .flat_map(|p| below_sets[b].iter().map(move |r| i.add(p, r)))
                .collect();
            if let Some(t) = observed.iter().find(|t| !predicted.iter().any(|s| i.equal(s, t))) {
                let cx = Counterexample::new(
                    vec![x.clone(), y.clone(), t.clone()],
                    vec![],
                    "a primitive below x + y is not a sum of primitives below x and y",
                )
                .with_context(primitives.to_vec());
                return property_check(Property::AdditivePrimitive, Verdict::Fail, Some(cx), None);
            }
            let all_seen = !predicted.is_empty()
                && predicted.iter().all(|s| observed.iter().any(|t| i.equal(s, t)));
            if all_seen {
                conclusive += 1;
            }
        }
    }
    if conclusive == 0 {
        property_check(
            Property::AdditivePrimitive,
            Verdict::Inconclusive,
            None,
            Some("no sampled pair had its primitive sums present in the sample".into()),
        )
    } else {
        property_check(Property::AdditivePrimitive, Verdict::Pass, None, None)
    }
}

/// Re-evaluates a property counterexample through the instance.
pub fn replay_property<I: Evs>(instance: &I, property: Property, cx: &Counterexample<I::Element>) -> bool {
    let i = instance;
    let e = &cx.elements;
    let s = &cx.scalars;
    match (property, e.len(), s.len()) {
        (Property::Balanced, 1, 1) => balance_fails(i, &e[0], &s[0]),
        (Property::Homogeneous, 1, 1) => homogeneity_fails(i, &e[0], &s[0]),
        (Property::Convex, 1, 2) => convexity_fails(i, &e[0], &s[0], &s[1]),
        (Property::ZeroPrimitive, 2, _) => {
            i.leq(&e[1], &e[0]) && cancels(i, &e[1]) && !i.is_zero(&e[1])
        }
        (Property::SinglePrimitive, 3, _) => {
            i.leq(&e[1], &e[0])
                && i.leq(&e[2], &e[0])
                && cancels(i, &e[1])
                && cancels(i, &e[2])
                && !i.equal(&e[1], &e[2])
        }
        (Property::AdditivePrimitive, 3, _) => {
            let (x, y, t) = (&e[0], &e[1], &e[2]);
            let px = primitives_below(i, x, &cx.context);
            let py = primitives_below(i, y, &cx.context);
            i.leq(t, &i.add(x, y))
                && cancels(i, t)
                && !px
                    .iter()
                    .any(|p| py.iter().any(|r| i.equal(&i.add(p, r), t)))
        }
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MorphismLaw {
    Additive,
    Homogeneous,
    Monotone,
    Injective,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
#[serde(bound(deserialize = "E: Deserialize<'de>"))]
pub struct MorphismCheck<E> {
    pub law: MorphismLaw,
    pub status: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample<E>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
#[serde(bound(deserialize = "E: Deserialize<'de>"))]
pub struct MorphismReport<E> {
    pub source: String,
    pub target: String,
    pub checks: Vec<MorphismCheck<E>>,
}

impl<E> MorphismReport<E> {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Verdict::Pass)
    }
}

/// Checks that `map` preserves addition, scalar action and order on the
/// sample, and that it is injective there.
pub fn check_order_morphism<A, B, F>(
    source: &A,
    target: &B,
    map: F,
    sample: &[A::Element],
    scalars: &[Scalar],
) -> MorphismReport<A::Element>
where
    A: Evs,
    B: Evs,
    F: Fn(&A::Element) -> B::Element,
{
    let images: Vec<B::Element> = sample.iter().map(&map).collect();
    let mut additive = None;
    let mut monotone = None;
    let mut injective = None;
    for (a, x) in sample.iter().enumerate() {
        for (b, y) in sample.iter().enumerate() {
            if additive.is_none()
                && !target.equal(&map(&source.add(x, y)), &target.add(&images[a], &images[b]))
            {
                additive = Some(Counterexample::new(vec![x.clone(), y.clone()], vec![], "f(x + y) != f(x) + f(y)"));
            }
            if monotone.is_none() && source.leq(x, y) && !target.leq(&images[a], &images[b]) {
                monotone = Some(Counterexample::new(vec![x.clone(), y.clone()], vec![], "x <= y but f(x) is not <= f(y)"));
            }
            if injective.is_none() && target.equal(&images[a], &images[b]) && !source.equal(x, y) {
                injective = Some(Counterexample::new(vec![x.clone(), y.clone()], vec![], "f(x) = f(y) with x != y"));
            }
        }
    }
    let homogeneous = sample.iter().zip(&images).find_map(|(x, fx)| {
        scalars
            .iter()
            .find(|a| !target.equal(&map(&source.scale(a, x)), &target.scale(a, fx)))
            .map(|a| Counterexample::new(vec![x.clone()], vec![a.clone()], "f(a.x) != a.f(x)"))
    });
    let check = |law, cx: Found<A::Element>| MorphismCheck {
        law,
        status: if cx.is_some() { Verdict::Fail } else { Verdict::Pass },
        counterexample: cx,
    };
    MorphismReport {
        source: source.name(),
        target: target.name(),
        checks: vec![
            check(MorphismLaw::Additive, additive),
            check(MorphismLaw::Homogeneous, homogeneous),
            check(MorphismLaw::Monotone, monotone),
            check(MorphismLaw::Injective, injective),
        ],
    }
}

/// Wraps an instance and reverses its order. Used to confirm the verifier
/// detects a broken A6.
#[derive(Clone, Debug)]
pub struct ReversedOrder<I>(pub I);

impl<I: Evs> Evs for ReversedOrder<I> {
    type Element = I::Element;

    fn name(&self) -> String {
        format!("{} (order reversed)", self.0.name())
    }
    fn zero(&self) -> I::Element {
        self.0.zero()
    }
    fn add(&self, a: &I::Element, b: &I::Element) -> I::Element {
        self.0.add(a, b)
    }
    fn scale(&self, alpha: &Scalar, a: &I::Element) -> I::Element {
        self.0.scale(alpha, a)
    }
    fn leq(&self, a: &I::Element, b: &I::Element) -> bool {
        self.0.leq(b, a)
    }
    fn equal(&self, a: &I::Element, b: &I::Element) -> bool {
        self.0.equal(a, b)
    }
    fn admits(&self, e: &I::Element) -> Result<()> {
        self.0.admits(e)
    }
}

impl<I: Sampler> Sampler for ReversedOrder<I> {
    fn sample(&self, rng: &mut ChaCha8Rng, n: usize) -> Vec<I::Element> {
        self.0.sample(rng, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    /// The half ray `[0, ∞)` with its usual order: the smallest evs.
    struct HalfRay;

    impl Evs for HalfRay {
        type Element = Rational;
        fn name(&self) -> String {
            "half-ray".into()
        }
        fn zero(&self) -> Rational {
            Rational::zero()
        }
        fn add(&self, a: &Rational, b: &Rational) -> Rational {
            a + b
        }
        fn scale(&self, alpha: &Scalar, a: &Rational) -> Rational {
            alpha.abs() * a
        }
        fn leq(&self, a: &Rational, b: &Rational) -> bool {
            a <= b
        }
        fn equal(&self, a: &Rational, b: &Rational) -> bool {
            a == b
        }
    }

    fn ray_sample() -> Vec<Rational> {
        (0..6).map(|k| q(k, 2)).collect()
    }

    #[test]
    fn half_ray_passes_every_axiom() {
        let report = check_axioms(&HalfRay, &ray_sample(), &default_scalars(), 0).unwrap();
        assert!(report.all_pass(), "{report:#?}");
        assert!(report.get(Axiom::A5).sample_relative);
        assert!(!report.get(Axiom::A1).sample_relative);
    }

    #[test]
    fn reversed_half_ray_fails_a6_with_replayable_counterexample() {
        let mutant = ReversedOrder(HalfRay);
        let report = check_axioms(&mutant, &ray_sample(), &default_scalars(), 0).unwrap();
        let a6 = report.get(Axiom::A6);
        assert_eq!(a6.status, Verdict::Fail);
        assert!(replay_axiom(&mutant, Axiom::A6, a6.counterexample.as_ref().unwrap()));
        for check in report.failures() {
            assert!(replay_axiom(&mutant, check.axiom, check.counterexample.as_ref().unwrap()));
        }
    }

    #[test]
    fn input_errors() {
        let s = default_scalars();
        assert!(check_axioms(&HalfRay, &[], &s, 0).is_err());
        assert!(check_axioms(&HalfRay, &[q(1, 1)], &s, 0).is_err());
        assert!(check_axioms(&HalfRay, &ray_sample(), &[q(0, 1), q(1, 1)], 0).is_err());
        assert!(check_properties(&HalfRay, &[], &s).is_err());
    }

    #[test]
    fn minimal_elements_of_a_chain_and_singleton() {
        assert_eq!(minimal_elements(&ray_sample(), &HalfRay).unwrap(), vec![q(0, 1)]);
        assert_eq!(minimal_elements(&[q(3, 1)], &HalfRay).unwrap(), vec![q(3, 1)]);
        assert!(minimal_elements::<HalfRay>(&[], &HalfRay).is_err());
    }

    #[test]
    fn half_ray_properties() {
        let report = check_properties(&HalfRay, &ray_sample(), &default_scalars()).unwrap();
        for p in Property::ALL {
            assert_eq!(report.status(p), Verdict::Pass, "{p:?}");
        }
    }

    #[test]
    fn report_json_shape() {
        let report = check_axioms(&HalfRay, &ray_sample(), &default_scalars(), 7).unwrap();
        let v = serde_json::to_value(&report).unwrap();
        let first = &v["checks"][0];
        assert_eq!(first["axiom"], "A1");
        assert_eq!(first["status"], "pass");
        assert_eq!(first["sampleRelative"], false);
        assert_eq!(v["seed"], 7);
    }
}

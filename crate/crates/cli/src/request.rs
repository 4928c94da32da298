//! Fully loaded requests and their execution. A request carries every input
//! inline, so serializing it into the report makes the report replayable.

use evspace::evs::{
    check_axioms, check_properties, default_scalars, seeded_sample, Evs, ReversedOrder, Sampler, Verdict,
};
use evspace::instances::{ConeSpace, HyperSpace};
use evspace::metric::{
    add_metrics, builtin_metric, cauchy_incompleteness_demo, classify_lazy, classify_pair, leq_metrics,
    partial_comparing_function, scale_metric, transform_bounded, transform_min, validate_metric, BuiltinParams,
    Carrier, LazyMetric, MetricMatrix, MetricSpace, Point2, SignedScaleMutant,
};
use evspace::norm::{
    build_partition, embed_norm_to_metric, eval_weighted_norm, independence_witness, weight_function, FSVector,
    Norm, NormElement, NormFamilyParams, NormSpace, WeightMap,
};
use evspace::order::{
    feasible_in_universe, generates, in_l, in_l_by_search, is_basis, orderly_independent_set, ComparingOracle,
    LCertificate, LazyMetricSpace, SetVerdict, Universe,
};
use evspace::{Error, Rational, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::load::{from_value, to_value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Pass,
    PassQualified,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        if self == Status::Fail {
            1
        } else {
            0
        }
    }
}

impl From<SetVerdict> for Status {
    fn from(v: SetVerdict) -> Self {
        match v {
            SetVerdict::Pass => Status::Pass,
            SetVerdict::PassQualified => Status::PassQualified,
            SetVerdict::Fail => Status::Fail,
            SetVerdict::Inconclusive => Status::Inconclusive,
        }
    }
}

pub struct Outcome {
    pub status: Status,
    pub result: Value,
}

fn outcome<T: Serialize>(status: Status, result: &T) -> Result<Outcome> {
    Ok(Outcome { status, result: to_value(result)? })
}

fn pass_fail(pass: bool) -> Status {
    if pass {
        Status::Pass
    } else {
        Status::Fail
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CombineOp {
    Add,
    Scale,
    Leq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TransformKind {
    /// `ρ/(1+ρ)`
    Bounded,
    /// `min{1, ρ}`
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomInstance {
    Metric,
    Norm,
    NormFamily,
    Cone,
    Hyperspace,
    /// D(X) with the order reversed; A6 must fail.
    ReversedMetric,
    /// D(X) scaled without the absolute value; homogeneity must fail.
    SignedScale,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderOp {
    InL,
    Indep,
    Generates,
    Basis,
    Feasible,
}

/// The instance a universe manifest lives in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "instance", rename_all = "kebab-case")]
pub enum InstanceTag {
    /// Finite metric matrices; the carrier is taken from the first element.
    Metric,
    Lazy {
        #[serde(default)]
        carrier: Carrier,
        depths: Vec<usize>,
    },
    NormFinite {
        depth: usize,
    },
    NormFamily {
        depth: usize,
    },
    Cone {
        dim: usize,
    },
    Hyperspace {
        dim: usize,
    },
}

/// Either a materialized matrix or a lazy metric.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricInput {
    Matrix(MetricMatrix),
    Lazy(LazyMetric),
}

/// A finite weight map or a family spec.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightInput {
    Family(NormFamilyParams),
    Finite(WeightMap),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Request {
    Validate {
        matrix: MetricMatrix,
    },
    Combine {
        op: CombineOp,
        a: MetricMatrix,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b: Option<MetricMatrix>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<Rational>,
    },
    Compare {
        d: MetricMatrix,
        rho: MetricMatrix,
    },
    Transform {
        kind: TransformKind,
        input: MetricInput,
    },
    Builtin {
        name: String,
        params: BuiltinParams,
        depth: usize,
    },
    PartialCompare {
        d: LazyMetric,
        rho: LazyMetric,
        depths: Vec<usize>,
    },
    CauchyDemo {
        depths: Vec<u64>,
        pairs: Vec<[Point2; 2]>,
    },
    NormsPartition {
        depth: usize,
    },
    NormsWeights {
        spec: NormFamilyParams,
    },
    NormsEval {
        weights: WeightInput,
        vector: FSVector,
    },
    NormsWitness {
        p: NormFamilyParams,
        q: NormFamilyParams,
        eps: Rational,
    },
    NormsEmbed {
        weights: WeightInput,
        points: Vec<FSVector>,
    },
    Axioms {
        instance: AxiomInstance,
        seed: u64,
        sample_size: usize,
        /// Carrier size, norm depth or vector dimension.
        size: usize,
        properties: bool,
    },
    Order {
        op: OrderOp,
        #[serde(flatten)]
        instance: InstanceTag,
        /// `x` for in-l and feasible; the tested set for indep, generates and basis.
        args: Vec<Value>,
        universe: Vec<Value>,
    },
}

impl Request {
    pub fn name(&self) -> String {
        match to_value(self).ok().as_ref().and_then(|v| v.get("command")).and_then(Value::as_str) {
            Some(c) => c.to_string(),
            None => "unknown".into(),
        }
    }

    pub fn execute(&self) -> Result<Outcome> {
        match self {
            Request::Validate { matrix } => {
                let v = validate_metric(matrix)?;
                outcome(pass_fail(v.pass), &v)
            }
            Request::Combine { op, a, b, alpha } => combine(*op, a, b.as_ref(), alpha.as_ref()),
            Request::Compare { d, rho } => outcome(Status::Ok, &classify_pair(d, rho)?),
            Request::Transform { kind, input } => {
                let f = match kind {
                    TransformKind::Bounded => transform_bounded::<MetricInput>,
                    TransformKind::Min => transform_min::<MetricInput>,
                };
                outcome(Status::Ok, &f(input)?)
            }
            Request::Builtin { name, params, depth } => {
                let m = builtin_metric(name, params, *depth)?;
                outcome(Status::Ok, &json!({ "matrix": m, "validation": validate_metric(&m)? }))
            }
            Request::PartialCompare { d, rho, depths } => {
                let bounds = partial_comparing_function(d, rho, depths)?;
                let lazy = classify_lazy(d, rho, depths)?;
                outcome(Status::Ok, &json!({ "bounds": bounds, "comparison": lazy }))
            }
            Request::CauchyDemo { depths, pairs } => {
                let r = cauchy_incompleteness_demo(depths, pairs)?;
                outcome(pass_fail(r.pass()), &r)
            }
            Request::NormsPartition { depth } => outcome(Status::Ok, &build_partition(*depth)?),
            Request::NormsWeights { spec } => outcome(Status::Ok, &weight_function(spec)?),
            Request::NormsEval { weights, vector } => {
                let value = match weights {
                    WeightInput::Finite(w) => eval_weighted_norm(w, vector)?,
                    WeightInput::Family(p) => p.norm(vector)?,
                };
                outcome(Status::Ok, &json!({ "norm": value }))
            }
            Request::NormsWitness { p, q, eps } => {
                let w = independence_witness(p, q, eps)?;
                outcome(pass_fail(w.independent_at_eps), &w)
            }
            Request::NormsEmbed { weights, points } => {
                let m = match weights {
                    WeightInput::Finite(w) => embed_norm_to_metric(w, points)?,
                    WeightInput::Family(p) => embed_norm_to_metric(p, points)?,
                };
                let v = validate_metric(&m)?;
                outcome(pass_fail(v.pass), &json!({ "matrix": m, "validation": v }))
            }
            Request::Axioms { instance, seed, sample_size, size, properties } => {
                axioms(*instance, *seed, *sample_size, *size, *properties)
            }
            Request::Order { op, instance, args, universe } => order(*op, instance, args, universe),
        }
    }
}

impl evspace::metric::Transformable for MetricInput {
    fn bounded(&self) -> Result<Self> {
        Ok(match self {
            MetricInput::Matrix(m) => MetricInput::Matrix(m.bounded()?),
            MetricInput::Lazy(l) => MetricInput::Lazy(l.bounded()?),
        })
    }

    fn capped(&self) -> Result<Self> {
        Ok(match self {
            MetricInput::Matrix(m) => MetricInput::Matrix(m.capped()?),
            MetricInput::Lazy(l) => MetricInput::Lazy(l.capped()?),
        })
    }
}

fn combine(op: CombineOp, a: &MetricMatrix, b: Option<&MetricMatrix>, alpha: Option<&Rational>) -> Result<Outcome> {
    let need_b = || b.ok_or_else(|| Error::Input(format!("{op:?} needs two matrices")));
    match op {
        CombineOp::Add => outcome(Status::Ok, &add_metrics(a, need_b()?)?),
        CombineOp::Scale => {
            let alpha = alpha.ok_or_else(|| Error::Input("scale needs --alpha".into()))?;
            outcome(Status::Ok, &scale_metric(alpha, a))
        }
        CombineOp::Leq => outcome(Status::Ok, &json!({ "leq": leq_metrics(a, need_b()?)? })),
    }
}

fn axiom_run<I: Sampler>(inst: &I, seed: u64, n: usize, properties: bool) -> Result<Outcome> {
    let sample = seeded_sample(inst, seed, n);
    let scalars = default_scalars();
    let report = check_axioms(inst, &sample, &scalars, seed)?;
    let status = if report.failures().next().is_some() {
        Status::Fail
    } else if report.checks.iter().all(|c| c.status == Verdict::Pass) {
        Status::Pass
    } else {
        Status::Inconclusive
    };
    let props = if properties { Some(check_properties(inst, &sample, &scalars)?) } else { None };
    outcome(status, &json!({ "axioms": report, "properties": props }))
}

fn axioms(instance: AxiomInstance, seed: u64, n: usize, size: usize, properties: bool) -> Result<Outcome> {
    match instance {
        AxiomInstance::Metric => axiom_run(&MetricSpace::indexed(size), seed, n, properties),
        AxiomInstance::Norm => axiom_run(&NormSpace::finite(size)?, seed, n, properties),
        AxiomInstance::NormFamily => axiom_run(&NormSpace::family(size)?, seed, n, properties),
        AxiomInstance::Cone => axiom_run(&ConeSpace::new(size), seed, n, properties),
        AxiomInstance::Hyperspace => axiom_run(&HyperSpace::new(size), seed, n, properties),
        AxiomInstance::ReversedMetric => axiom_run(&ReversedOrder(MetricSpace::indexed(size)), seed, n, properties),
        AxiomInstance::SignedScale => axiom_run(&SignedScaleMutant(MetricSpace::indexed(size)), seed, n, properties),
    }
}

fn decode_all<I: Evs>(
    inst: &I,
    values: &[Value],
    decode: &impl Fn(&Value) -> Result<I::Element>,
) -> Result<Vec<I::Element>> {
    values
        .iter()
        .map(|v| {
            let e = decode(v)?;
            inst.admits(&e)?;
            Ok(e)
        })
        .collect()
}

fn cert_status<E>(c: &LCertificate<E>) -> Status {
    match c {
        LCertificate::Member { .. } => Status::Pass,
        LCertificate::Inconclusive { .. } => Status::Inconclusive,
        _ => Status::Fail,
    }
}

fn order_in<I>(
    inst: &I,
    op: OrderOp,
    args: &[Value],
    universe: &[Value],
    decode: impl Fn(&Value) -> Result<I::Element>,
) -> Result<Outcome>
where
    I: ComparingOracle,
    I::Element: Serialize + DeserializeOwned,
{
    let args = decode_all(inst, args, &decode)?;
    let elements = decode_all(inst, universe, &decode)?;
    let wrap = |status: Status, report: Value| outcome(status, &json!({ "universeRelative": true, "report": report }));
    match op {
        OrderOp::InL => {
            let [x, y] = args.as_slice() else {
                return Err(Error::Input("in-l takes exactly two elements".into()));
            };
            let cert = if inst.zero_primitive() {
                in_l(inst, x, y)?
            } else {
                in_l_by_search(inst, x, y, &elements, &default_scalars())?
            };
            wrap(cert_status(&cert), to_value(&cert)?)
        }
        OrderOp::Indep => {
            let r = orderly_independent_set(inst, &args)?;
            wrap(r.status.into(), to_value(&r)?)
        }
        OrderOp::Generates => {
            let r = generates(inst, &args, &Universe::new(inst, elements)?)?;
            wrap(r.status.into(), to_value(&r)?)
        }
        OrderOp::Basis => {
            let r = is_basis(inst, &args, &Universe::new(inst, elements)?)?;
            wrap(r.status.into(), to_value(&r)?)
        }
        OrderOp::Feasible => {
            let [x] = args.as_slice() else {
                return Err(Error::Input("feasible takes exactly one element".into()));
            };
            let r = feasible_in_universe(inst, x, &Universe::new(inst, elements)?)?;
            wrap(r.status.into(), to_value(&r)?)
        }
    }
}

fn order(op: OrderOp, tag: &InstanceTag, args: &[Value], universe: &[Value]) -> Result<Outcome> {
    match tag {
        InstanceTag::Metric => {
            let first = args
                .first()
                .or(universe.first())
                .ok_or_else(|| Error::Input("no elements given".into()))?;
            let labels = from_value::<MetricMatrix>(first)?.shared_labels();
            order_in(&MetricSpace::new(labels), op, args, universe, from_value::<MetricMatrix>)
        }
        InstanceTag::Lazy { carrier, depths } => {
            order_in(&LazyMetricSpace::new(carrier.clone(), depths)?, op, args, universe, from_value::<LazyMetric>)
        }
        InstanceTag::NormFinite { depth } => {
            let space = NormSpace::finite(*depth)?;
            order_in(&space, op, args, universe, |v| {
                space.element(NormElement::finite(from_value::<WeightMap>(v)?))
            })
        }
        InstanceTag::NormFamily { depth } => {
            let space = NormSpace::family(*depth)?;
            order_in(&space, op, args, universe, |v| {
                space.element(NormElement::family(from_value::<NormFamilyParams>(v)?))
            })
        }
        InstanceTag::Cone { dim } => order_in(&ConeSpace::new(*dim), op, args, universe, from_value),
        InstanceTag::Hyperspace { dim } => order_in(&HyperSpace::new(*dim), op, args, universe, from_value),
    }
}

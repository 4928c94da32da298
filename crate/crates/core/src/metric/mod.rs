//! The metric evs `D(X)`: finite matrices, closed-form lazy metrics, and the
//! comparing-function machinery.

mod cauchy;
mod lazy;
mod matrix;
mod space;

pub use cauchy::{cauchy_incompleteness_demo, CauchyDemoReport, GapCheck};
pub use lazy::{
    builtin_lazy, builtin_metric, classify_lazy, lazy_certificate, partial_comparing_function,
    structural_ratio, symmetric_depth_for_step, BuiltinParams, Carrier, DirectionVerdict,
    LazyComparison, LazyMetric, PartialComparing, Point, Point2, BUILTIN_NAMES,
};
pub use matrix::{
    add_metrics, classify_pair, comparing_function_metric, indexed_labels, leq_metrics,
    random_metric, scale_metric, transform_bounded, transform_min, validate_metric,
    Classification, ComparingValue, ComparisonReport, MetricMatrix, MetricValidation,
    MetricViolation, Sandwich, Transformable,
};
pub use space::{MetricSpace, SignedScaleMutant};

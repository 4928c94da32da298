//! The norm evs `N(X)` over finitely supported rational vectors, the
//! partition-indexed family of weighted sup norms, and the embedding
//! `ψ: N(X) → D(X)`.

mod partition;
mod space;
mod vector;
mod weights;
mod witness;

pub use partition::{
    build_partition, cantor_pair, cantor_unpair, position_of, tag_of, NormFamilyParams, PartitionSpec, Tag,
    TaggedIndex,
};
pub use space::{NormElement, NormMode, NormSpace, NormTerm, Weighting};
pub use vector::{basis_label, parse_basis_label, FSVector};
pub use weights::{
    embed_norm_to_metric, eval_weighted_norm, finite_dim_basis_certificate, sample_comparing_bound,
    weight_function, BasisCertificate, ComparingBound, MutualBound, Norm, WeightMap,
};
pub use witness::{
    fiber_ratio, fiber_vector, independence_witness, Fiber, Side, WitnessDirection, WitnessReport,
    MAX_WITNESS_INDEX,
};

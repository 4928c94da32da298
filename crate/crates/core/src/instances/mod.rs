//! Two further instances: the cone `[0, ∞) × ℚ^k` and finite subsets of `ℚ^k`.

mod cone;
mod hyperspace;

pub use cone::{ConeElement, ConeSpace};
pub use hyperspace::{FinitePointSet, HyperSpace};

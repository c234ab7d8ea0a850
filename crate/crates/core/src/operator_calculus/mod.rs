//! Borel functional calculus for diagonal operators on `ℓ₂`.

mod domain;
mod function;
mod measure;
mod operator;
mod predicate;
mod state;

pub use domain::{
    apply_function, in_domain, partial_sum_trace, threshold_trace, DomainMethod, DomainVerdict, PartialSum,
    PartialSumTrace, DIVERGENCE_N, DIVERGENCE_THRESHOLD, NONVANISHING_FROM,
};
pub use function::{BorelFunction, Factor, LogPolar, LowerEnvelope};
pub use measure::{spectral_projection, tv_mass, tv_partial_sum_trace, TvMass, VariationMeasure};
pub use operator::DiagonalOperator;
pub use predicate::RegionPredicate;
pub use state::{DecayRule, StateVector, VectorKind};

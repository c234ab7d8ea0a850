//! Gevrey regularity of weak solutions of `y' = Ay` for diagonal operators
//! on `ℓ₂`, decided from the spectrum and checked by summation.
//!
//! Everything is generic over [`scalar::Real`]; the aliases below fix `f64`.

pub mod classifier;
pub mod counterexamples;
pub mod envelope;
pub mod error;
pub mod evolution;
pub mod operator_calculus;
pub mod scalar;
pub mod serde_float;
pub mod spectral_model;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ComplexPoint = spectral_model::ComplexPoint<f64>;
pub type PowerLaw = spectral_model::PowerLaw<f64>;
pub type SpectrumSpec = spectral_model::SpectrumSpec<f64>;
pub type GevreyRegion = spectral_model::GevreyRegion<f64>;
pub type DiagonalOperator = operator_calculus::DiagonalOperator<f64>;
pub type StateVector = operator_calculus::StateVector<f64>;
pub type DecayRule = operator_calculus::DecayRule<f64>;
pub type BorelFunction = operator_calculus::BorelFunction<f64>;
pub type RegionPredicate = operator_calculus::RegionPredicate<f64>;
pub type DomainVerdict = operator_calculus::DomainVerdict<f64>;
pub type VariationMeasure = operator_calculus::VariationMeasure<f64>;
pub type WeakSolution = evolution::WeakSolution<f64>;
pub type GrowthTable = evolution::GrowthTable<f64>;
pub type OrderEstimate = evolution::OrderEstimate<f64>;
pub type ClassificationVerdict = classifier::ClassificationVerdict<f64>;
pub type AdversarialCase = counterexamples::AdversarialCase<f64>;
pub type CaseVariant = counterexamples::CaseVariant<f64>;
pub type FailureReport = counterexamples::FailureReport<f64>;

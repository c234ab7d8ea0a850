use std::sync::Arc;

use num_complex::Complex;

use crate::error::Result;
use crate::scalar::Real;
use crate::spectral_model::SpectrumSpec;

/// Multiplication by `λ_k` on the orthonormal basis `{e_k}` of `ℓ₂`.
///
/// The spectral measure masks coordinates, so `‖E(δ)‖ ≤ 1` and the
/// dual basis is the basis itself.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalOperator<T> {
    spectrum: Arc<SpectrumSpec<T>>,
}

impl<T: Real> DiagonalOperator<T> {
    pub fn new(spectrum: SpectrumSpec<T>) -> Result<Self> {
        spectrum.validate()?;
        Ok(Self { spectrum: Arc::new(spectrum) })
    }

    pub fn spectrum(&self) -> &SpectrumSpec<T> {
        &self.spectrum
    }

    pub fn eigenvalue(&self, k: usize) -> Option<Complex<T>> {
        self.spectrum.eigenvalue(k)
    }

    pub fn dimension(&self) -> Option<usize> {
        self.spectrum.dimension()
    }
}

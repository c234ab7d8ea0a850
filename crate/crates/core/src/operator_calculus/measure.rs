use num_complex::Complex;
use serde::Serialize;

use super::domain::{apply_function, head_end, threshold_trace, PartialSumTrace};
use super::function::BorelFunction;
use super::operator::DiagonalOperator;
use super::predicate::RegionPredicate;
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `E(δ) f`: zero every coordinate whose eigenvalue lies outside `δ`.
pub fn spectral_projection<T: Real>(
    a: &DiagonalOperator<T>,
    delta: &RegionPredicate<T>,
    v: &StateVector<T>,
) -> Result<StateVector<T>> {
    if v.has_tail() && a.dimension().is_none() && a.spectrum().tail_law().is_none() {
        return Err(Error::Undecided {
            reason: "cannot mask an infinite vector beyond the sampled eigenvalues".into(),
            partial_sums: Vec::new(),
        });
    }
    let end = match a.dimension() {
        Some(m) => {
            if !v.has_tail() && v.support_len() > m {
                return Err(Error::InvalidSpec(format!("vector is longer than the dimension {m}")));
            }
            m
        }
        None => head_end(a, v),
    };
    let zero = Complex::new(T::zero(), T::zero());
    let mut head = Vec::with_capacity(end);
    for k in 1..=end {
        let c = v.coefficient(k);
        if c == zero {
            head.push(zero);
            continue;
        }
        let lambda = a.eigenvalue(k).ok_or_else(|| Error::Undecided {
            reason: format!("eigenvalue {k} is unknown"),
            partial_sums: Vec::new(),
        })?;
        head.push(if delta.contains(lambda) { c } else { zero });
    }
    if a.dimension().is_some() || !v.has_tail() {
        return StateVector::finite(head);
    }
    Ok(v.push_mask(delta, a, head))
}

/// The complex measure `δ ↦ ⟨E(δ) f, g⟩` on the diagonal model. Its total
/// variation puts mass `|f_k||g_k|` at `λ_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct VariationMeasure<T> {
    weights: Vec<T>,
    tail_bound: T,
}

impl<T: Real> VariationMeasure<T> {
    pub fn new(f: &StateVector<T>, g: &StateVector<T>) -> Self {
        let n = f.truncation().max(g.truncation());
        let weights = (1..=n).map(|k| f.coefficient(k).norm() * g.coefficient(k).norm()).collect();
        Self { weights, tail_bound: f.tail_bound_l2() * g.tail_bound_l2() }
    }

    /// Mass at `λ_k`, `k ≤ len()`.
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Mass of the explicit part.
    pub fn head_mass(&self) -> T {
        self.weights.iter().copied().sum()
    }

    /// Bound on the mass carried by indices beyond `len()`.
    pub fn tail_bound(&self) -> T {
        self.tail_bound
    }

    /// `|μ|(δ)` over the explicit part.
    pub fn mass_in(&self, a: &DiagonalOperator<T>, delta: &RegionPredicate<T>) -> T {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > T::zero())
            .filter(|(i, _)| a.eigenvalue(i + 1).is_some_and(|l| delta.contains(l)))
            .map(|(_, w)| *w)
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct TvMass<T> {
    /// Mass over the explicit heads.
    pub value: T,
    /// The true mass lies in `[value, value + tail_bound]`.
    pub tail_bound: T,
}

/// `∫_δ |F| d|⟨E(·) f, g⟩|`, computed as the total variation of
/// `⟨E(·) F(A) E(δ) f, g⟩`.
pub fn tv_mass<T: Real>(
    a: &DiagonalOperator<T>,
    f: &StateVector<T>,
    g: &StateVector<T>,
    delta: &RegionPredicate<T>,
    func: &BorelFunction<T>,
) -> Result<TvMass<T>> {
    let masked = spectral_projection(a, delta, f)?;
    let u = apply_function(func, a, &masked)?;
    let m = VariationMeasure::new(&u, g);
    Ok(TvMass { value: m.head_mass(), tail_bound: m.tail_bound() })
}

/// Partial sums of `Σ |F(λ_k)| |f_k| |g_k|` until they exceed `threshold`
/// or reach `max_n`.
pub fn tv_partial_sum_trace<T: Real>(
    a: &DiagonalOperator<T>,
    f: &StateVector<T>,
    g: &StateVector<T>,
    func: &BorelFunction<T>,
    max_n: usize,
    threshold: T,
) -> PartialSumTrace<T> {
    threshold_trace(
        |k| {
            let lf = f.log_polar(k).ln_abs + g.log_polar(k).ln_abs;
            if lf == T::neg_infinity() {
                return Some(lf);
            }
            a.eigenvalue(k).map(|l| func.ln_abs(l) + lf)
        },
        max_n,
        threshold.ln(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator_calculus::DecayRule;
    use crate::spectral_model::{PowerLaw, SignPattern, SpectrumSpec};

    fn a() -> DiagonalOperator<f64> {
        // λ_k = −k + i·k
        let law = PowerLaw::new(-1, 1.0, 1.0, 1.0, 1.0, SignPattern::Plus).unwrap();
        DiagonalOperator::new(SpectrumSpec::power_law(law).unwrap()).unwrap()
    }

    #[test]
    fn projection_masks_by_eigenvalue() {
        let f = StateVector::closed_form(DecayRule::power_law(1.0), 20).unwrap();
        let p = spectral_projection(&a(), &RegionPredicate::ImBelow(5.5), &f).unwrap();
        assert_eq!(p.coefficient(5).re, 0.2);
        assert_eq!(p.coefficient(6).re, 0.0);
        assert_eq!(p.coefficient(10_000).re, 0.0);
    }

    #[test]
    fn tv_mass_of_exponential_matches_direct_sum() {
        let f = StateVector::closed_form(DecayRule::power_law(1.0), 200).unwrap();
        let g = StateVector::closed_form(DecayRule::power_law(2.0), 200).unwrap();
        let e = BorelFunction::exp(1.0).unwrap();
        let m = tv_mass(&a(), &f, &g, &RegionPredicate::All, &e).unwrap();
        let direct: f64 = (1..=200).map(|k| (-(k as f64)).exp() / (k as f64).powi(3)).sum();
        assert!((m.value - direct).abs() < 1e-15);
        assert!(m.tail_bound < 1e-60);
    }

    #[test]
    fn variation_measure_masses() {
        let f = StateVector::finite(vec![Complex::new(3.0, 4.0), Complex::new(0.0, -1.0)]).unwrap();
        let g =
            StateVector::finite(vec![Complex::new(1.0, 0.0), Complex::new(2.0, 0.0), Complex::new(1.0, 1.0)]).unwrap();
        let mu = VariationMeasure::new(&f, &g);
        assert_eq!(mu.weights(), &[5.0, 2.0, 0.0]);
        assert_eq!(mu.mass_in(&a(), &RegionPredicate::ImBelow(1.5)), 5.0);
        assert_eq!(mu.head_mass(), 7.0);
    }
}

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::function::{BorelFunction, LogPolar, LowerEnvelope};
use super::operator::DiagonalOperator;
use super::predicate::RegionPredicate;
use crate::envelope::PowerLog;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `c_k = scale · k^{−power} · e^{−rate·k^{stretch}}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DecayRule<T> {
    pub scale: T,
    pub power: T,
    #[serde(default)]
    pub rate: T,
    #[serde(default = "one")]
    pub stretch: T,
}

fn one<T: Real>() -> T {
    T::one()
}

impl<T: Real> DecayRule<T> {
    /// `k^{−power}`.
    pub fn power_law(power: T) -> Self {
        Self { scale: T::one(), power, rate: T::zero(), stretch: T::one() }
    }

    /// `e^{−rate·k^{stretch}}`.
    pub fn stretched_exp(rate: T, stretch: T) -> Self {
        Self { scale: T::one(), power: T::zero(), rate, stretch }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.scale, self.power, self.rate, self.stretch].iter().all(|v| v.is_finite());
        if !finite || self.rate < T::zero() || self.stretch <= T::zero() {
            return Err(Error::InvalidSpec("decay rule needs finite parameters, rate >= 0, stretch > 0".into()));
        }
        if self.rate == T::zero() && T::lit(2.0) * self.power <= T::one() && self.scale != T::zero() {
            return Err(Error::InvalidSpec(format!("k^-{} is not square summable", self.power)));
        }
        Ok(())
    }

    pub fn log_polar(&self, k: usize) -> LogPolar<T> {
        let x = T::from_index(k);
        let mut ln = self.scale.abs().ln() - self.power * x.ln();
        if self.rate > T::zero() {
            ln = ln - self.rate * x.powf(self.stretch);
        }
        let arg = if self.scale < T::zero() { T::PI() } else { T::zero() };
        LogPolar { ln_abs: ln, arg }
    }

    /// Exact `ln |c_k|`.
    pub fn envelope(&self) -> PowerLog<T> {
        if self.scale == T::zero() {
            return PowerLog::minus_infinity();
        }
        PowerLog::constant(self.scale.abs().ln())
            .add(&PowerLog::log(-self.power))
            .add(&PowerLog::power(-self.rate, self.stretch))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Transform<T> {
    Apply(BorelFunction<T>, DiagonalOperator<T>),
    Mask(RegionPredicate<T>, DiagonalOperator<T>),
}

/// Closed-form coefficient generator: a decay rule followed by calculus operations.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator<T> {
    rule: DecayRule<T>,
    transforms: Vec<Transform<T>>,
}

impl<T: Real> Generator<T> {
    fn log_polar(&self, k: usize) -> LogPolar<T> {
        let mut lp = self.rule.log_polar(k);
        for t in &self.transforms {
            if lp.ln_abs == T::neg_infinity() {
                break;
            }
            let (op, masked_out) = match t {
                Transform::Apply(_, op) => (op, false),
                Transform::Mask(delta, op) => (op, !delta.contains(Self::eigenvalue(op, k))),
            };
            if masked_out {
                return LogPolar { ln_abs: T::neg_infinity(), arg: T::zero() };
            }
            if let Transform::Apply(f, _) = t {
                lp = lp.mul(f.log_polar(Self::eigenvalue(op, k)));
            }
        }
        lp
    }

    fn eigenvalue(op: &DiagonalOperator<T>, k: usize) -> Complex<T> {
        op.eigenvalue(k).expect("transforms are only recorded on operators with a declared tail")
    }

    fn upper(&self) -> PowerLog<T> {
        self.transforms.iter().fold(self.rule.envelope(), |acc, t| match t {
            Transform::Apply(f, op) => acc.add(&f.upper_envelope(op.spectrum().tail_law().expect("tail law"))),
            Transform::Mask(..) => acc,
        })
    }

    fn lower(&self) -> Option<LowerEnvelope<T>> {
        self.transforms.iter().try_fold(LowerEnvelope { log: self.rule.envelope(), from: 1 }, |acc, t| match t {
            Transform::Apply(f, op) => Some(acc.add(&f.lower_envelope(op.spectrum().tail_law()?)?)),
            Transform::Mask(..) => None,
        })
    }

    /// First index from which every recorded envelope is valid.
    fn valid_from(&self) -> usize {
        self.transforms
            .iter()
            .map(|t| match t {
                Transform::Apply(_, op) | Transform::Mask(_, op) => op.spectrum().tail_start(),
            })
            .max()
            .unwrap_or(1)
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Tail<T> {
    generator: Generator<T>,
    bound_l2: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorKind {
    Finite,
    ClosedForm,
}

/// An element of `ℓ₂`: an explicit head plus, for closed-form vectors, a
/// generated tail with a rigorous `ℓ₂` bound beyond the head.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    head: Vec<Complex<T>>,
    tail: Option<Tail<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn finite(coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidSpec("non-finite coefficient".into()));
        }
        Ok(Self { head: coeffs, tail: None })
    }

    /// The basis vector `e_k`, `k ≥ 1`.
    pub fn basis(k: usize) -> Self {
        assert!(k >= 1, "basis vectors are indexed from 1");
        let mut head = vec![Complex::new(T::zero(), T::zero()); k];
        head[k - 1] = Complex::new(T::one(), T::zero());
        Self { head, tail: None }
    }

    /// `Σ c_k e_k` with `c_k` from the rule, materialized up to `truncation`.
    pub fn closed_form(rule: DecayRule<T>, truncation: usize) -> Result<Self> {
        rule.validate()?;
        if truncation == 0 {
            return Err(Error::InvalidSpec("truncation must be at least 1".into()));
        }
        let generator = Generator { rule, transforms: Vec::new() };
        Self::from_generator(generator, truncation)
    }

    fn from_generator(generator: Generator<T>, truncation: usize) -> Result<Self> {
        let truncation = truncation.max(generator.valid_from() - 1);
        let head = (1..=truncation).map(|k| generator.log_polar(k).to_complex()).collect();
        let log_sq = generator
            .upper()
            .scale(T::lit(2.0))
            .log_tail_sum(truncation + 1)
            .ok_or_else(|| Error::UnboundedTail("tail envelope is not square summable".into()))?;
        let bound_l2 = (log_sq * T::lit(0.5)).exp();
        Ok(Self { head, tail: Some(Tail { generator, bound_l2 }) })
    }

    /// Re-materializes a closed-form vector with another head length.
    pub fn with_truncation(&self, truncation: usize) -> Result<Self> {
        match &self.tail {
            None => Err(Error::Unsupported("finite vectors have no generator to re-truncate".into())),
            Some(t) => Self::from_generator(t.generator.clone(), truncation.max(1)),
        }
    }

    pub fn kind(&self) -> VectorKind {
        if self.tail.is_some() {
            VectorKind::ClosedForm
        } else {
            VectorKind::Finite
        }
    }

    pub fn has_tail(&self) -> bool {
        self.tail.is_some()
    }

    /// The rule of a closed-form vector that no calculus operation has touched.
    pub fn decay_rule(&self) -> Option<DecayRule<T>> {
        self.tail.as_ref().filter(|t| t.generator.transforms.is_empty()).map(|t| t.generator.rule)
    }

    pub fn truncation(&self) -> usize {
        self.head.len()
    }

    pub fn head(&self) -> &[Complex<T>] {
        &self.head
    }

    /// Rigorous bound on `(Σ_{k > truncation} |c_k|²)^{1/2}`.
    pub fn tail_bound_l2(&self) -> T {
        self.tail.as_ref().map_or(T::zero(), |t| t.bound_l2)
    }

    /// Coefficient `c_k`, `k ≥ 1`.
    pub fn coefficient(&self, k: usize) -> Complex<T> {
        if let Some(c) = self.head.get(k - 1) {
            return *c;
        }
        self.log_polar(k).to_complex()
    }

    pub(crate) fn log_polar(&self, k: usize) -> LogPolar<T> {
        if let Some(c) = self.head.get(k - 1) {
            return LogPolar::of(*c);
        }
        match &self.tail {
            Some(t) => t.generator.log_polar(k),
            None => LogPolar { ln_abs: T::neg_infinity(), arg: T::zero() },
        }
    }

    /// Nonzero coefficients may exist beyond this index only when a tail exists.
    pub fn support_len(&self) -> usize {
        self.head.iter().rposition(|c| c.norm() > T::zero()).map_or(0, |i| i + 1)
    }

    pub fn head_norm(&self) -> T {
        self.head.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt()
    }

    /// Upper bound on `‖f‖`; exact for finite vectors.
    pub fn norm_upper(&self) -> T {
        let b = self.tail_bound_l2();
        (self.head.iter().map(|c| c.norm_sqr()).sum::<T>() + b * b).sqrt()
    }

    /// `⟨f, g⟩ = Σ f_k·conj(g_k)` over both heads.
    pub fn inner_head(&self, other: &Self) -> Complex<T> {
        let n = self.truncation().max(other.truncation());
        (1..=n)
            .fold(Complex::new(T::zero(), T::zero()), |acc, k| acc + self.coefficient(k) * other.coefficient(k).conj())
    }

    /// Upper envelope of `ln |c_k|` beyond the head.
    pub fn upper_envelope(&self) -> Option<PowerLog<T>> {
        self.tail.as_ref().map(|t| t.generator.upper())
    }

    /// Eventual lower envelope of `ln |c_k|` beyond the head.
    pub fn lower_envelope(&self) -> Option<LowerEnvelope<T>> {
        self.tail.as_ref().and_then(|t| t.generator.lower())
    }

    pub(crate) fn tail_valid_from(&self) -> usize {
        self.tail.as_ref().map_or(1, |t| t.generator.valid_from())
    }

    /// `F(A) f` given the certified head length and squared-tail log bound.
    pub(crate) fn push_apply(
        &self,
        f: &BorelFunction<T>,
        op: &DiagonalOperator<T>,
        head: Vec<Complex<T>>,
        log_tail_sq: Option<T>,
    ) -> Self {
        let tail = self.tail.as_ref().map(|t| {
            let mut generator = t.generator.clone();
            generator.transforms.push(Transform::Apply(f.clone(), op.clone()));
            let bound_l2 = (log_tail_sq.expect("certified tail bound") * T::lit(0.5)).exp();
            Tail { generator, bound_l2 }
        });
        Self { head, tail }
    }

    /// `E(δ) f`; masking cannot increase the tail bound.
    pub(crate) fn push_mask(
        &self,
        delta: &RegionPredicate<T>,
        op: &DiagonalOperator<T>,
        head: Vec<Complex<T>>,
    ) -> Self {
        let tail = self.tail.as_ref().map(|t| {
            let mut generator = t.generator.clone();
            generator.transforms.push(Transform::Mask(delta.clone(), op.clone()));
            Tail { generator, bound_l2: t.bound_l2 }
        });
        Self { head, tail }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_head_and_tail() {
        let f = StateVector::closed_form(DecayRule::power_law(2.0f64), 1000).unwrap();
        assert_eq!(f.truncation(), 1000);
        assert!((f.coefficient(10).re - 0.01).abs() < 1e-15);
        assert!((f.coefficient(5000).re - 1.0 / 25e6).abs() < 1e-20);
        // Σ_{k>1000} k^{-4}: direct sum to 10⁶ plus the integral of the rest.
        let t = f.tail_bound_l2();
        let direct: f64 = (1001..=1_000_000u64).rev().map(|k| (k as f64).powi(-4)).sum::<f64>() + 1.0 / (3.0 * 1e18);
        let exact = direct.sqrt();
        assert!(t >= exact && t < exact * 1.01);
        let norm = f.norm_upper();
        let zeta4 = (std::f64::consts::PI.powi(4) / 90.0).sqrt();
        assert!(norm >= zeta4 && norm < zeta4 + 1e-9);
    }

    #[test]
    fn stretched_rule() {
        let f = StateVector::closed_form(DecayRule::stretched_exp(1.0f64, 2.0), 10).unwrap();
        assert!((f.coefficient(3).re - (-9.0f64).exp()).abs() < 1e-18);
        assert!(f.tail_bound_l2() < (-121.0f64).exp() * 2.0);
        assert!(f.tail_bound_l2() > 0.0);
    }

    #[test]
    fn rejects_non_summable_rules() {
        assert!(StateVector::closed_form(DecayRule::power_law(0.5f64), 10).is_err());
        assert!(StateVector::closed_form(DecayRule::stretched_exp(1.0f64, 0.0), 10).is_err());
        assert!(StateVector::<f64>::finite(vec![Complex::new(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn retruncation_preserves_coefficients() {
        let f = StateVector::closed_form(DecayRule::power_law(1.5f64), 50).unwrap();
        let g = f.with_truncation(500).unwrap();
        assert_eq!(f.coefficient(300), g.coefficient(300));
        assert!(g.tail_bound_l2() < f.tail_bound_l2());
    }

    #[test]
    fn basis_vectors() {
        let e3 = StateVector::<f64>::basis(3);
        assert_eq!(e3.coefficient(3), Complex::new(1.0, 0.0));
        assert_eq!(e3.coefficient(7), Complex::new(0.0, 0.0));
        assert_eq!(e3.support_len(), 3);
        assert_eq!(e3.norm_upper(), 1.0);
    }
}

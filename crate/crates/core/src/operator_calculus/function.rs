use num_complex::Complex;

use crate::envelope::PowerLog;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral_model::{principal_arg, PowerLaw};

/// Building blocks of the enumerated Borel functions.
#[derive(Clone, Debug, PartialEq)]
pub enum Factor<T> {
    Constant(Complex<T>),
    /// `λ^n`.
    Power(u32),
    /// `Σ a_j λ^j`, coefficients in ascending order.
    Polynomial(Vec<Complex<T>>),
    /// `e^{zλ}`.
    Exp(Complex<T>),
    /// `e^{s|λ|^{1/β}}`, `β ≥ 1`.
    GevreyWeight {
        s: T,
        beta: T,
    },
}

/// A finite product of factors; the empty product is `F ≡ 1`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct BorelFunction<T> {
    factors: Vec<Factor<T>>,
}

/// `ln |F(λ)|` and `arg F(λ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogPolar<T> {
    pub ln_abs: T,
    pub arg: T,
}

impl<T: Real> LogPolar<T> {
    pub fn one() -> Self {
        Self { ln_abs: T::zero(), arg: T::zero() }
    }

    pub fn of(z: Complex<T>) -> Self {
        Self { ln_abs: z.norm().ln(), arg: principal_arg(z) }
    }

    pub fn mul(self, other: Self) -> Self {
        Self { ln_abs: self.ln_abs + other.ln_abs, arg: self.arg + other.arg }
    }

    pub fn to_complex(self) -> Complex<T> {
        if self.ln_abs == T::neg_infinity() {
            return Complex::new(T::zero(), T::zero());
        }
        Complex::from_polar(self.ln_abs.exp(), self.arg)
    }
}

/// Envelope of `ln |F(λ_k)|` from below, valid for `k ≥ from`.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerEnvelope<T> {
    pub log: PowerLog<T>,
    pub from: usize,
}

impl<T: Real> LowerEnvelope<T> {
    pub fn add(&self, other: &Self) -> Self {
        Self { log: self.log.add(&other.log), from: self.from.max(other.from) }
    }
}

impl<T: Real> Factor<T> {
    fn validate(&self) -> Result<()> {
        match self {
            Factor::GevreyWeight { s, beta } if !(s.is_finite() && beta.is_finite() && *beta >= T::one()) => Err(
                Error::InvalidSpec(format!("Gevrey weight needs finite s and beta >= 1, got s = {s}, beta = {beta}")),
            ),
            Factor::Exp(z) | Factor::Constant(z) if !(z.re.is_finite() && z.im.is_finite()) => {
                Err(Error::InvalidSpec("non-finite complex parameter".into()))
            }
            Factor::Polynomial(c) if c.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) => {
                Err(Error::InvalidSpec("non-finite polynomial coefficient".into()))
            }
            _ => Ok(()),
        }
    }

    fn log_polar(&self, lambda: Complex<T>) -> LogPolar<T> {
        match self {
            Factor::Constant(c) => LogPolar::of(*c),
            Factor::Power(0) => LogPolar::one(),
            Factor::Power(n) => {
                let n = T::from(*n).expect("small exponent");
                LogPolar { ln_abs: n * lambda.norm().ln(), arg: n * principal_arg(lambda) }
            }
            Factor::Polynomial(coeffs) => {
                let p = coeffs.iter().rev().fold(Complex::new(T::zero(), T::zero()), |acc, a| acc * lambda + a);
                LogPolar::of(p)
            }
            Factor::Exp(z) => {
                let w = z * lambda;
                LogPolar { ln_abs: w.re, arg: w.im }
            }
            Factor::GevreyWeight { s, beta } => {
                LogPolar { ln_abs: *s * lambda.norm().powf(beta.recip()), arg: T::zero() }
            }
        }
    }

    fn degree(coeffs: &[Complex<T>]) -> Option<usize> {
        coeffs.iter().rposition(|a| a.norm() > T::zero())
    }

    fn upper(&self, law: &PowerLaw<T>) -> PowerLog<T> {
        match self {
            Factor::Constant(c) => PowerLog::constant(c.norm().ln()),
            Factor::Power(n) => law.log_modulus_upper().scale(T::from(*n).expect("small exponent")),
            Factor::Polynomial(coeffs) => match Self::degree(coeffs) {
                None => PowerLog::minus_infinity(),
                Some(d) => {
                    let total: T = coeffs.iter().map(|a| a.norm()).sum();
                    let lm = law.log_modulus_upper();
                    // ln max(1, |λ|) ≤ max(0, c) + m ln k.
                    let lm = PowerLog::constant(lm.constant_part().max(T::zero())).add(&PowerLog::log(lm.log_coef()));
                    PowerLog::constant(total.ln()).add(&lm.scale(T::from(d).expect("degree")))
                }
            },
            Factor::Exp(z) => exp_envelope(law, *z, true),
            Factor::GevreyWeight { s, beta } => {
                if *s >= T::zero() {
                    law.root_modulus_upper(*beta).scale(*s)
                } else {
                    // Decay is only certified from the lower bound's start; `≤ 0` holds everywhere.
                    let r = root_modulus_lower(law, *beta);
                    if r.from == 1 {
                        r.log.scale(*s)
                    } else {
                        PowerLog::zero()
                    }
                }
            }
        }
    }

    fn lower(&self, law: &PowerLaw<T>) -> Option<LowerEnvelope<T>> {
        let at_one = |log| Some(LowerEnvelope { log, from: 1 });
        match self {
            Factor::Constant(c) => at_one(PowerLog::constant(c.norm().ln())),
            Factor::Power(0) => at_one(PowerLog::zero()),
            Factor::Power(n) => {
                let m = log_modulus_lower(law);
                Some(LowerEnvelope { log: m.log.scale(T::from(*n).expect("small exponent")), from: m.from })
            }
            Factor::Polynomial(coeffs) => {
                let d = Self::degree(coeffs)?;
                let lead = coeffs[d].norm();
                if d == 0 {
                    return at_one(PowerLog::constant(lead.ln()));
                }
                let rest: T = coeffs[..d].iter().map(|a| a.norm()).sum();
                let eps = T::lit(1e-3);
                let radius = T::one().max(rest / (eps * lead));
                let ml = law.modulus_lower();
                let from = ((radius / ml.coef).powf(ml.exp.recip())).ceil().to_usize()?.max(ml.from);
                let log = PowerLog::constant(((T::one() - eps) * lead).ln())
                    .add(&log_modulus_lower(law).log.scale(T::from(d).expect("degree")));
                Some(LowerEnvelope { log, from })
            }
            Factor::Exp(z) => at_one(exp_envelope(law, *z, false)),
            Factor::GevreyWeight { s, beta } => {
                if *s >= T::zero() {
                    let r = root_modulus_lower(law, *beta);
                    Some(LowerEnvelope { log: r.log.scale(*s), from: r.from })
                } else {
                    at_one(law.root_modulus_upper(*beta).scale(*s))
                }
            }
        }
    }
}

fn log_modulus_lower<T: Real>(law: &PowerLaw<T>) -> LowerEnvelope<T> {
    let m = law.modulus_lower();
    LowerEnvelope { log: PowerLog::constant(m.coef.ln()).add(&PowerLog::log(m.exp)), from: m.from }
}

fn root_modulus_lower<T: Real>(law: &PowerLaw<T>, beta: T) -> LowerEnvelope<T> {
    let m = law.modulus_lower();
    let inv = beta.recip();
    LowerEnvelope { log: PowerLog::power(m.coef.powf(inv), m.exp * inv), from: m.from }
}

/// `Re(zλ_k) = x·Re λ_k − y·Im λ_k`, bounded with the matching side of each part.
fn exp_envelope<T: Real>(law: &PowerLaw<T>, z: Complex<T>, upper: bool) -> PowerLog<T> {
    let (x, y) = (z.re, z.im);
    let re = law.re_envelope(upper == (x >= T::zero()));
    let im = law.im_envelope(upper != (y >= T::zero()));
    re.scale(x).add(&im.scale(-y))
}

impl<T: Real> BorelFunction<T> {
    pub fn one() -> Self {
        Self { factors: Vec::new() }
    }

    pub fn from_factors(factors: Vec<Factor<T>>) -> Result<Self> {
        for f in &factors {
            f.validate()?;
        }
        Ok(Self { factors })
    }

    pub fn identity() -> Self {
        Self::power(1)
    }

    pub fn power(n: u32) -> Self {
        Self { factors: vec![Factor::Power(n)] }
    }

    pub fn polynomial(coeffs: Vec<Complex<T>>) -> Result<Self> {
        Self::from_factors(vec![Factor::Polynomial(coeffs)])
    }

    /// `e^{tλ}`.
    pub fn exp(t: T) -> Result<Self> {
        Self::exp_complex(Complex::new(t, T::zero()))
    }

    /// `e^{zλ}`.
    pub fn exp_complex(z: Complex<T>) -> Result<Self> {
        Self::from_factors(vec![Factor::Exp(z)])
    }

    /// `e^{s|λ|^{1/β}}`.
    pub fn gevrey_weight(s: T, beta: T) -> Result<Self> {
        Self::from_factors(vec![Factor::GevreyWeight { s, beta }])
    }

    pub fn constant(c: Complex<T>) -> Result<Self> {
        Self::from_factors(vec![Factor::Constant(c)])
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Self { factors }
    }

    pub fn factors(&self) -> &[Factor<T>] {
        &self.factors
    }

    pub fn log_polar(&self, lambda: Complex<T>) -> LogPolar<T> {
        self.factors.iter().fold(LogPolar::one(), |acc, f| acc.mul(f.log_polar(lambda)))
    }

    pub fn eval(&self, lambda: Complex<T>) -> Complex<T> {
        self.log_polar(lambda).to_complex()
    }

    pub fn ln_abs(&self, lambda: Complex<T>) -> T {
        self.factors.iter().fold(T::zero(), |acc, f| acc + f.log_polar(lambda).ln_abs)
    }

    /// Upper envelope of `ln |F(λ_k)|` over every index of a power law.
    pub fn upper_envelope(&self, law: &PowerLaw<T>) -> PowerLog<T> {
        self.factors.iter().fold(PowerLog::zero(), |acc, f| acc.add(&f.upper(law)))
    }

    /// Eventual lower envelope of `ln |F(λ_k)|`; `None` when a factor can vanish.
    pub fn lower_envelope(&self, law: &PowerLaw<T>) -> Option<LowerEnvelope<T>> {
        self.factors
            .iter()
            .try_fold(LowerEnvelope { log: PowerLog::zero(), from: 1 }, |acc, f| Some(acc.add(&f.lower(law)?)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_model::{ComplexPoint, SignPattern};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn evaluation_matches_closed_forms() {
        let lambda = c(-2.0, 3.0);
        let sq = BorelFunction::<f64>::power(2);
        assert!((sq.eval(lambda) - lambda * lambda).norm() < 1e-12);
        let e = BorelFunction::exp_complex(c(0.5, -0.25)).unwrap();
        assert!((e.eval(lambda) - (c(0.5, -0.25) * lambda).exp()).norm() < 1e-12);
        let w = BorelFunction::gevrey_weight(0.7, 2.0).unwrap();
        assert!((w.eval(lambda).re - (0.7 * lambda.norm().sqrt()).exp()).abs() < 1e-12);
        let p = BorelFunction::polynomial(vec![c(1.0, 0.0), c(0.0, 2.0), c(3.0, 0.0)]).unwrap();
        let direct = c(1.0, 0.0) + c(0.0, 2.0) * lambda + c(3.0, 0.0) * lambda * lambda;
        assert!((p.eval(lambda) - direct).norm() < 1e-12);
        assert_eq!(BorelFunction::<f64>::power(0).eval(c(0.0, 0.0)), c(1.0, 0.0));
        assert_eq!(BorelFunction::<f64>::identity().eval(c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn rejects_invalid_weights() {
        assert!(BorelFunction::gevrey_weight(1.0, 0.5).is_err());
        assert!(BorelFunction::exp(f64::NAN).is_err());
    }

    #[test]
    fn envelopes_bracket_values() {
        let law = PowerLaw::new(-1, 1.0, 1.0, 1.0, 2.0, SignPattern::Alternating)
            .unwrap()
            .with_offset(ComplexPoint::new(0.5, 0.0).unwrap())
            .unwrap();
        let fns = [
            BorelFunction::power(3),
            BorelFunction::exp_complex(c(1.0, 0.5)).unwrap(),
            BorelFunction::exp_complex(c(0.3, -2.0)).unwrap(),
            BorelFunction::gevrey_weight(1.5, 2.0).unwrap().mul(&BorelFunction::exp(1.0).unwrap()),
            BorelFunction::gevrey_weight(-0.5, 1.5).unwrap(),
            BorelFunction::polynomial(vec![c(5.0, 0.0), c(0.0, 0.0), c(0.0, -2.0)]).unwrap(),
        ];
        for f in &fns {
            let up = f.upper_envelope(&law);
            let lo = f.lower_envelope(&law).expect("non-vanishing");
            for k in 1..3000usize {
                let v = f.ln_abs(law.eigenvalue(k));
                let x = k as f64;
                assert!(v <= up.eval(x) + 1e-9 * v.abs().max(1.0), "{f:?} upper at {k}");
                if k >= lo.from {
                    assert!(v >= lo.log.eval(x) - 1e-9 * v.abs().max(1.0), "{f:?} lower at {k}");
                }
            }
        }
    }
}

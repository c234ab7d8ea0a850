use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::point::ComplexPoint;
use crate::envelope::PowerLog;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Sign of `Im λ_n`; `Alternating` is `+` for odd `n` and `−` for even `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignPattern {
    Plus,
    Minus,
    Alternating,
}

impl SignPattern {
    fn sign<T: Real>(self, n: usize) -> T {
        match self {
            SignPattern::Plus => T::one(),
            SignPattern::Minus => -T::one(),
            SignPattern::Alternating if n % 2 == 1 => T::one(),
            SignPattern::Alternating => -T::one(),
        }
    }
}

/// `λ_n = σ·a_R·n^{p_R} + ω·sin n + i·(±a_I·n^{p_I}) + offset`, `n ≥ 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct PowerLaw<T> {
    pub re_sign: i8,
    pub re_coef: T,
    pub re_exp: T,
    pub im_coef: T,
    pub im_exp: T,
    pub im_sign_pattern: SignPattern,
    #[serde(default)]
    pub offset: ComplexPoint<T>,
    /// Amplitude ω of a bounded `ω·sin n` term added to the real part.
    #[serde(default)]
    pub re_oscillation: T,
}

/// Lower bound `|λ_k| ≥ coef·k^{exp}` valid for `k ≥ from`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModulusLower<T> {
    pub coef: T,
    pub exp: T,
    pub from: usize,
}

impl<T: Real> PowerLaw<T> {
    pub fn new(re_sign: i8, re_coef: T, re_exp: T, im_coef: T, im_exp: T, pattern: SignPattern) -> Result<Self> {
        let pl = Self {
            re_sign,
            re_coef,
            re_exp,
            im_coef,
            im_exp,
            im_sign_pattern: pattern,
            offset: ComplexPoint::default(),
            re_oscillation: T::zero(),
        };
        pl.validate()?;
        Ok(pl)
    }

    pub fn with_offset(mut self, offset: ComplexPoint<T>) -> Result<Self> {
        self.offset = offset;
        self.validate()?;
        Ok(self)
    }

    pub fn with_re_oscillation(mut self, amplitude: T) -> Result<Self> {
        self.re_oscillation = amplitude;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpec(format!("power law: {m}")));
        for (name, v) in [
            ("re_coef", self.re_coef),
            ("re_exp", self.re_exp),
            ("im_coef", self.im_coef),
            ("im_exp", self.im_exp),
            ("re_oscillation", self.re_oscillation),
        ] {
            if !v.is_finite() || v < T::zero() {
                return bad(&format!("{name} must be finite and non-negative, got {v}"));
            }
        }
        if !matches!(self.re_sign, -1..=1) {
            return bad("re_sign must be -1, 0 or 1");
        }
        if (self.re_coef == T::zero()) != (self.re_sign == 0) {
            return bad("re_sign is 0 exactly when re_coef is 0");
        }
        let growth = self.growth_exponent();
        if growth <= T::zero() {
            return bad("eigenvalue moduli must grow (a positive coefficient with a positive exponent)");
        }
        // Non-smooth perturbations of |λ_n|² must be dominated by its increments ~ n^{2P-1}.
        let two_p_minus_one = T::lit(2.0) * growth - T::one();
        if self.re_oscillation > T::zero() && self.re_growth().unwrap_or(T::zero()) >= two_p_minus_one {
            return bad("oscillation breaks eventual monotonicity of |λ_n|");
        }
        if self.im_sign_pattern == SignPattern::Alternating
            && self.offset.im() != T::zero()
            && self.im_exp >= two_p_minus_one
        {
            return bad("alternating sign with an imaginary offset breaks eventual monotonicity of |λ_n|");
        }
        Ok(())
    }

    /// Exponent of `Re λ_n` when it is unbounded.
    pub fn re_growth(&self) -> Option<T> {
        (self.re_coef > T::zero() && self.re_exp > T::zero()).then_some(self.re_exp)
    }

    /// Exponent of `Im λ_n` when it is unbounded.
    pub fn im_growth(&self) -> Option<T> {
        (self.im_coef > T::zero() && self.im_exp > T::zero()).then_some(self.im_exp)
    }

    /// Exponent `P` with `|λ_n| ≍ n^P`.
    pub fn growth_exponent(&self) -> T {
        self.re_growth().unwrap_or(T::zero()).max(self.im_growth().unwrap_or(T::zero()))
    }

    pub fn eigenvalue(&self, n: usize) -> Complex<T> {
        let x = T::from_index(n);
        let mut re = T::from(self.re_sign).unwrap() * self.re_coef * x.powf(self.re_exp) + self.offset.re();
        if self.re_oscillation > T::zero() {
            re = re + self.re_oscillation * x.sin();
        }
        let im = self.im_sign_pattern.sign::<T>(n) * self.im_coef * x.powf(self.im_exp) + self.offset.im();
        Complex::new(re, im)
    }

    fn sigma(&self) -> T {
        T::from(self.re_sign).unwrap()
    }

    /// Bound on `Re λ_k` for every `k ≥ 1`.
    pub fn re_envelope(&self, upper: bool) -> PowerLog<T> {
        let wobble = if upper { self.re_oscillation } else { -self.re_oscillation };
        PowerLog::power(self.sigma() * self.re_coef, self.re_exp).add(&PowerLog::constant(self.offset.re() + wobble))
    }

    /// Bound on `Im λ_k` for every `k ≥ 1`.
    pub fn im_envelope(&self, upper: bool) -> PowerLog<T> {
        let coef = match (self.im_sign_pattern, upper) {
            (SignPattern::Plus, _) => self.im_coef,
            (SignPattern::Minus, _) => -self.im_coef,
            (SignPattern::Alternating, true) => self.im_coef,
            (SignPattern::Alternating, false) => -self.im_coef,
        };
        PowerLog::power(coef, self.im_exp).add(&PowerLog::constant(self.offset.im()))
    }

    /// `|λ_k| ≤ Σ c_j k^{e_j} + r` for every `k ≥ 1`, as `(terms, r)`.
    fn modulus_upper_parts(&self) -> (Vec<(T, T)>, T) {
        let r = self.offset.re().abs() + self.re_oscillation + self.offset.im().abs();
        let a_r = self.re_coef;
        let a_i = self.im_coef;
        let terms = if a_r > T::zero() && a_i > T::zero() && self.re_exp == self.im_exp {
            vec![(self.re_exp, a_r.hypot(a_i))]
        } else {
            [(self.re_exp, a_r), (self.im_exp, a_i)].into_iter().filter(|(_, c)| *c > T::zero()).collect()
        };
        (terms, r)
    }

    /// Upper envelope of `ln |λ_k|`, `k ≥ 1`.
    pub fn log_modulus_upper(&self) -> PowerLog<T> {
        let (terms, r) = self.modulus_upper_parts();
        let total = terms.iter().fold(r, |acc, (_, c)| acc + *c);
        let m = terms.iter().fold(T::zero(), |acc, (e, _)| acc.max(*e));
        PowerLog::constant(total.ln()).add(&PowerLog::log(m))
    }

    /// Upper envelope of `|λ_k|^{1/β}` by subadditivity of `x ↦ x^{1/β}`, `β ≥ 1`.
    pub fn root_modulus_upper(&self, beta: T) -> PowerLog<T> {
        let inv = beta.recip();
        let (terms, r) = self.modulus_upper_parts();
        terms
            .into_iter()
            .fold(PowerLog::constant(r.powf(inv)), |acc, (e, c)| acc.add(&PowerLog::power(c.powf(inv), e * inv)))
    }

    /// Eventual lower bound on `|λ_k|` from its dominant part.
    pub fn modulus_lower(&self) -> ModulusLower<T> {
        let p = self.growth_exponent();
        let re_lead = self.re_growth() == Some(p);
        let im_lead = self.im_growth() == Some(p);
        let (dominant, rest) = match (re_lead, im_lead) {
            (true, true) => (
                self.re_coef.hypot(self.im_coef),
                self.offset.re().abs() + self.re_oscillation + self.offset.im().abs(),
            ),
            (true, false) => (self.re_coef, self.offset.re().abs() + self.re_oscillation),
            _ => (self.im_coef, self.offset.im().abs()),
        };
        if rest == T::zero() {
            return ModulusLower { coef: dominant, exp: p, from: 1 };
        }
        let eps = T::lit(1e-3);
        let from = (rest / (eps * dominant)).powf(p.recip()).ceil();
        let from = from.to_usize().unwrap_or(usize::MAX).max(1);
        ModulusLower { coef: (T::one() - eps) * dominant, exp: p, from }
    }
}

/// A countable eigenvalue set, indexed from `k = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "T: Real", try_from = "RawSpectrum<T>")]
pub enum SpectrumSpec<T> {
    Finite {
        points: Vec<ComplexPoint<T>>,
    },
    #[serde(rename = "powerlaw")]
    PowerLaw(PowerLaw<T>),
    Sampled {
        points: Vec<ComplexPoint<T>>,
        tail_declared: Option<PowerLaw<T>>,
        /// Tail scans only look at `|λ|` above this radius; defaults to half the largest modulus.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radius_checked: Option<T>,
    },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "T: Real", deny_unknown_fields)]
enum RawSpectrum<T> {
    Finite {
        points: Vec<ComplexPoint<T>>,
    },
    #[serde(rename = "powerlaw")]
    PowerLaw {
        re_sign: i8,
        re_coef: T,
        re_exp: T,
        im_coef: T,
        im_exp: T,
        im_sign_pattern: SignPattern,
        #[serde(default)]
        offset: ComplexPoint<T>,
        #[serde(default)]
        re_oscillation: T,
    },
    Sampled {
        points: Vec<ComplexPoint<T>>,
        #[serde(default)]
        tail_declared: Option<PowerLaw<T>>,
        #[serde(default)]
        radius_checked: Option<T>,
    },
}

impl<T: Real> TryFrom<RawSpectrum<T>> for SpectrumSpec<T> {
    type Error = Error;

    fn try_from(raw: RawSpectrum<T>) -> Result<Self> {
        let spec = match raw {
            RawSpectrum::Finite { points } => SpectrumSpec::Finite { points },
            RawSpectrum::PowerLaw {
                re_sign,
                re_coef,
                re_exp,
                im_coef,
                im_exp,
                im_sign_pattern,
                offset,
                re_oscillation,
            } => SpectrumSpec::PowerLaw(PowerLaw {
                re_sign,
                re_coef,
                re_exp,
                im_coef,
                im_exp,
                im_sign_pattern,
                offset,
                re_oscillation,
            }),
            RawSpectrum::Sampled { points, tail_declared, radius_checked } => {
                SpectrumSpec::Sampled { points, tail_declared, radius_checked }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl<T: Real> SpectrumSpec<T> {
    pub fn finite(points: Vec<ComplexPoint<T>>) -> Result<Self> {
        let s = SpectrumSpec::Finite { points };
        s.validate()?;
        Ok(s)
    }

    pub fn power_law(pl: PowerLaw<T>) -> Result<Self> {
        let s = SpectrumSpec::PowerLaw(pl);
        s.validate()?;
        Ok(s)
    }

    pub fn sampled(points: Vec<ComplexPoint<T>>, tail: Option<PowerLaw<T>>) -> Result<Self> {
        let s = SpectrumSpec::Sampled { points, tail_declared: tail, radius_checked: None };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SpectrumSpec::Finite { points } if points.is_empty() => {
                Err(Error::InvalidSpec("finite spectrum is empty".into()))
            }
            SpectrumSpec::Finite { .. } => Ok(()),
            SpectrumSpec::PowerLaw(pl) => pl.validate(),
            SpectrumSpec::Sampled { points, tail_declared, radius_checked } => {
                if points.is_empty() {
                    return Err(Error::InvalidSpec("sampled spectrum is empty".into()));
                }
                let mut sorted: Vec<_> = points.iter().map(|p| (p.re(), p.im())).collect();
                sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite points"));
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::InvalidSpec("sampled points must be pairwise distinct".into()));
                }
                if let Some(r) = radius_checked {
                    if !r.is_finite() || *r < T::zero() {
                        return Err(Error::InvalidSpec("radius_checked must be finite and non-negative".into()));
                    }
                }
                tail_declared.as_ref().map_or(Ok(()), PowerLaw::validate)
            }
        }
    }

    /// Eigenvalue `λ_k`, `k ≥ 1`; `None` beyond a finite or undeclared range.
    pub fn eigenvalue(&self, k: usize) -> Option<Complex<T>> {
        debug_assert!(k >= 1);
        match self {
            SpectrumSpec::Finite { points } => points.get(k - 1).map(|p| p.to_complex()),
            SpectrumSpec::PowerLaw(pl) => Some(pl.eigenvalue(k)),
            SpectrumSpec::Sampled { points, tail_declared, .. } => {
                points.get(k - 1).map(|p| p.to_complex()).or_else(|| tail_declared.as_ref().map(|t| t.eigenvalue(k)))
            }
        }
    }

    /// Number of eigenvalues when the underlying space is finite-dimensional.
    pub fn dimension(&self) -> Option<usize> {
        match self {
            SpectrumSpec::Finite { points } => Some(points.len()),
            _ => None,
        }
    }

    /// Eigenvalues are known only for `k ≤` this bound (sample without a declared tail).
    pub fn known_len(&self) -> Option<usize> {
        match self {
            SpectrumSpec::Finite { points } => Some(points.len()),
            SpectrumSpec::Sampled { points, tail_declared: None, .. } => Some(points.len()),
            _ => None,
        }
    }

    /// Power law that describes `λ_k` for every `k ≥ tail_start()`.
    pub fn tail_law(&self) -> Option<&PowerLaw<T>> {
        match self {
            SpectrumSpec::PowerLaw(pl) => Some(pl),
            SpectrumSpec::Sampled { tail_declared, .. } => tail_declared.as_ref(),
            SpectrumSpec::Finite { .. } => None,
        }
    }

    pub fn tail_start(&self) -> usize {
        match self {
            SpectrumSpec::Sampled { points, .. } => points.len() + 1,
            _ => 1,
        }
    }

    pub fn explicit_points(&self) -> &[ComplexPoint<T>] {
        match self {
            SpectrumSpec::Finite { points } | SpectrumSpec::Sampled { points, .. } => points,
            SpectrumSpec::PowerLaw(_) => &[],
        }
    }

    /// Default `radius_checked` is half the largest sampled modulus.
    pub fn scan_radius(&self) -> T {
        if let SpectrumSpec::Sampled { radius_checked: Some(r), .. } = self {
            return *r;
        }
        let max = self.explicit_points().iter().fold(T::zero(), |m, p| m.max(p.norm()));
        max * T::lit(0.5)
    }
}

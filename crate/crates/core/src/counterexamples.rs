//! Admissible initial data whose weak solutions fail to be Gevrey, built
//! from spectra that escape every Gevrey region.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{GrowthRow, GrowthTable, WeakSolution};
use crate::operator_calculus::{
    in_domain, tv_partial_sum_trace, BorelFunction, DecayRule, DiagonalOperator, StateVector, DIVERGENCE_N,
    DIVERGENCE_THRESHOLD,
};
use crate::scalar::Real;
use crate::spectral_model::{ComplexPoint, PowerLaw, SignPattern, SpectrumSpec};

/// Indices at which the selection inequalities are re-checked.
const CHECKED_POINTS: usize = 10_000;
/// Safety factor inside the strict inequalities.
const MARGIN: f64 = 1.1;
/// Truncation of the generated vectors.
const TRUNCATION: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseKind {
    /// `Re λ_n` bounded while `|Im λ_n|` grows.
    BoundedRe,
    /// `Re λ_n → +∞` too slowly against `|Im λ_n|^{1/β}`.
    ReToPlusInfinity,
    /// `Re λ_n → −∞` too slowly against `|Im λ_n|^{1/β}`.
    ReToMinusInfinity,
    /// Finite spectrum; nothing can fail.
    FiniteControl,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", bound = "T: Real")]
pub enum CaseVariant<T> {
    Roumieu,
    Beurling { b_minus: T },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdversarialCase<T> {
    pub kind: CaseKind,
    pub variant: CaseVariant<T>,
    pub beta: T,
    pub eigenvalues: SpectrumSpec<T>,
    pub vector: StateVector<T>,
    /// `h = Σ k^{−2} e_k`.
    pub witness_functional: StateVector<T>,
}

fn inv_sq<T: Real>() -> StateVector<T> {
    StateVector::closed_form(DecayRule::power_law(T::lit(2.0)), TRUNCATION).expect("square summable")
}

fn canonical_law<T: Real>(kind: CaseKind, beta: T, variant: CaseVariant<T>) -> Result<PowerLaw<T>> {
    let m = T::lit(MARGIN);
    let plus = SignPattern::Plus;
    match (kind, variant) {
        (CaseKind::BoundedRe, _) => PowerLaw::new(0, T::zero(), T::zero(), m, beta + T::one(), plus),
        (CaseKind::ReToPlusInfinity, _) => {
            let gamma = beta.max(T::lit(2.0));
            PowerLaw::new(1, T::one(), T::one(), T::lit(2.0).powf(gamma), T::lit(3.0) * gamma, plus)
        }
        (CaseKind::ReToMinusInfinity, CaseVariant::Roumieu) => {
            PowerLaw::new(-1, T::one(), T::one(), m.powf(beta), T::lit(2.0) * beta, plus)
        }
        (CaseKind::ReToMinusInfinity, CaseVariant::Beurling { b_minus }) => {
            PowerLaw::new(-1, T::one(), T::one(), (m / b_minus).powf(beta), beta, plus)
        }
        (CaseKind::FiniteControl, _) => Err(Error::InvalidSpec("finite control has no power law".into())),
    }
}

/// The canonical case for a proof branch.
pub fn build_adversarial<T: Real>(kind: CaseKind, beta: T, variant: CaseVariant<T>) -> Result<AdversarialCase<T>> {
    match variant {
        CaseVariant::Roumieu if !(beta.is_finite() && beta >= T::one()) => {
            return Err(Error::BetaOutOfRange(beta.as_f64()))
        }
        CaseVariant::Beurling { .. } if !(beta.is_finite() && beta > T::one()) => {
            return Err(Error::BetaOutOfRange(beta.as_f64()))
        }
        CaseVariant::Beurling { b_minus } if !(b_minus.is_finite() && b_minus > T::zero()) => {
            return Err(Error::InvalidSpec("b_minus must be finite and positive".into()))
        }
        _ => {}
    }
    if kind == CaseKind::FiniteControl {
        return finite_control(beta);
    }
    let law = canonical_law(kind, beta, variant)?;
    let vector = match kind {
        CaseKind::ReToPlusInfinity => {
            StateVector::closed_form(DecayRule::stretched_exp(T::one(), T::lit(2.0)), TRUNCATION)?
        }
        _ => inv_sq(),
    };
    let case = AdversarialCase {
        kind,
        variant,
        beta,
        eigenvalues: SpectrumSpec::power_law(law)?,
        vector,
        witness_functional: inv_sq(),
    };
    case.check_constraints()?;
    Ok(case)
}

/// `Re λ_n = sin n`, `Im λ_n = (1.1 n²)^β`: a bounded real part that keeps moving.
pub fn build_oscillating<T: Real>(beta: T) -> Result<AdversarialCase<T>> {
    if !(beta.is_finite() && beta >= T::one()) {
        return Err(Error::BetaOutOfRange(beta.as_f64()));
    }
    let m = T::lit(MARGIN);
    let law = PowerLaw::new(0, T::zero(), T::zero(), m.powf(beta), T::lit(2.0) * beta, SignPattern::Plus)?
        .with_re_oscillation(T::one())?;
    let case = AdversarialCase {
        kind: CaseKind::BoundedRe,
        variant: CaseVariant::Roumieu,
        beta,
        eigenvalues: SpectrumSpec::power_law(law)?,
        vector: inv_sq(),
        witness_functional: inv_sq(),
    };
    case.check_constraints()?;
    Ok(case)
}

fn finite_control<T: Real>(beta: T) -> Result<AdversarialCase<T>> {
    let n = 16;
    let points = (1..=n)
        .map(|k| {
            let x = T::from_index(k);
            ComplexPoint::new(-x, x * x)
        })
        .collect::<Result<Vec<_>>>()?;
    let coeffs: Vec<Complex<T>> = (1..=n).map(|k| Complex::new(T::from_index(k * k).recip(), T::zero())).collect();
    Ok(AdversarialCase {
        kind: CaseKind::FiniteControl,
        variant: CaseVariant::Roumieu,
        beta,
        eigenvalues: SpectrumSpec::finite(points)?,
        vector: StateVector::finite(coeffs.clone())?,
        witness_functional: StateVector::finite(coeffs)?,
    })
}

/// Result of running the divergence arguments on a case.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct FailureReport<T> {
    pub fails_roumieu: bool,
    pub fails_beurling: bool,
    /// Per `s`: whether `y(1) ∈ D(e^{s|A|^{1/β}})` and the certificate.
    pub per_s: Vec<ScaleVerdict<T>>,
    /// Every `s` diverges, by an envelope argument valid for all `s > 0`.
    pub symbolic_every_scale: bool,
    /// Rows `(n = N, t = s, norm = S_N, tail_bound)` of the paired partial
    /// sums `S_N = Σ_{k≤N} e^{s|λ_k|^{1/β}} |e^{λ_k} f_k| |h_k|`.
    pub partial_sum_trace: GrowthTable<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ScaleVerdict<T> {
    pub s: T,
    pub in_domain: bool,
    /// First `N` with `S_N > 10¹²`.
    pub threshold_hit_at: Option<usize>,
    pub certificate: String,
}

impl<T: Real> AdversarialCase<T> {
    pub fn operator(&self) -> Result<DiagonalOperator<T>> {
        DiagonalOperator::new(self.eigenvalues.clone())
    }

    /// Re-checks the selection inequalities at `n ≤ 10⁴`.
    pub fn check_constraints(&self) -> Result<()> {
        let n_max = match self.kind {
            CaseKind::FiniteControl => return Ok(()),
            _ => CHECKED_POINTS,
        };
        let beta_inv = self.beta.recip();
        let mut prev = T::zero();
        for n in 1..=n_max {
            let lambda = self.eigenvalues.eigenvalue(n).expect("power law");
            let x = T::from_index(n);
            let g = lambda.im.abs().powf(beta_inv);
            let lower = match self.variant {
                CaseVariant::Roumieu => -g / x,
                CaseVariant::Beurling { b_minus } => -b_minus * g,
            };
            let upper = g / (x * x);
            let modulus = lambda.norm();
            let violation = if !(lower < lambda.re && lambda.re < upper) {
                Some(format!("{lower} < Re λ_{n} = {} < {upper} fails", lambda.re))
            } else if !(modulus > x.max(prev)) {
                Some(format!("|λ_{n}| = {modulus} is not above max({n}, {prev})"))
            } else {
                match self.kind {
                    CaseKind::ReToPlusInfinity if lambda.re < x => Some(format!("Re λ_{n} = {} < {n}", lambda.re)),
                    CaseKind::ReToMinusInfinity if lambda.re > -x => Some(format!("Re λ_{n} = {} > -{n}", lambda.re)),
                    _ => None,
                }
            };
            if let Some(v) = violation {
                return Err(Error::ConstraintViolation(format!("{:?}: {v}", self.kind)));
            }
            prev = modulus;
        }
        Ok(())
    }

    pub fn weak_solution(&self, t_grid: &[T]) -> Result<WeakSolution<T>> {
        WeakSolution::with_grid(self.operator()?, self.vector.clone(), t_grid)
    }
}

/// `f ∈ ⋂_{t≥0} D(e^{tA})`, with numeric spot checks on `t_grid`.
pub fn verify_admissible<T: Real>(case: &AdversarialCase<T>, t_grid: &[T]) -> Result<bool> {
    case.weak_solution(t_grid).map(|_| true)
}

/// Runs `y(1) ∈ D(e^{s|A|^{1/β}})` for every `s` in the grid.
pub fn verify_failure<T: Real>(case: &AdversarialCase<T>, s_grid: &[T]) -> Result<FailureReport<T>> {
    if s_grid.is_empty() || s_grid.iter().any(|s| !(s.is_finite() && *s > T::zero())) {
        return Err(Error::InvalidSpec("s grid must hold finite s > 0".into()));
    }
    let a = case.operator()?;
    let beta = case.beta;
    let e1 = BorelFunction::exp(T::one())?;
    let threshold = T::lit(DIVERGENCE_THRESHOLD);
    let h = &case.witness_functional;
    let probe = |s: T| -> Result<(ScaleVerdict<T>, Vec<GrowthRow<T>>)> {
        let func = BorelFunction::gevrey_weight(s, beta)?.mul(&e1);
        let verdict = in_domain(&func, &a, &case.vector).map_err(|e| match e {
            Error::Undecided { reason, .. } => Error::InconclusiveDivergence { s: s.as_f64(), reason },
            other => other,
        })?;
        let max_n = a.dimension().unwrap_or(DIVERGENCE_N);
        let trace = tv_partial_sum_trace(&a, &case.vector, h, &func, max_n, threshold);
        let tail = match (a.spectrum().tail_law(), case.vector.upper_envelope(), h.upper_envelope()) {
            _ if a.dimension().is_some() => Some(T::neg_infinity()),
            (Some(law), Some(fu), Some(hu)) if trace.diverged_at.is_none() => {
                let last = trace.checkpoints.last().map_or(0, |c| c.n);
                func.upper_envelope(law).add(&fu).add(&hu).log_tail_sum(last + 1)
            }
            _ => None,
        };
        let count = trace.checkpoints.len();
        let rows = trace
            .checkpoints
            .iter()
            .enumerate()
            .map(|(i, c)| GrowthRow {
                n: c.n as u32,
                t: s,
                norm: c.value(),
                tail_bound: match tail {
                    Some(l) if i + 1 == count => l.exp(),
                    _ => T::infinity(),
                },
            })
            .collect();
        let certificate = format!("{}; paired partial sums: {}", verdict.certificate, trace.reason);
        Ok((ScaleVerdict { s, in_domain: verdict.in_domain, threshold_hit_at: trace.diverged_at, certificate }, rows))
    };
    let mut per_s = Vec::with_capacity(s_grid.len());
    let mut rows = Vec::new();
    for &s in s_grid {
        let (v, r) = probe(s)?;
        per_s.push(v);
        rows.extend(r);
    }
    let diverged = |v: &ScaleVerdict<T>| !v.in_domain && v.threshold_hit_at.is_some();
    let symbolic_every_scale = every_scale_diverges(&a, case, beta);
    let fails_roumieu = per_s.iter().all(diverged) && symbolic_every_scale;
    let fails_beurling = match case.variant {
        CaseVariant::Roumieu => fails_roumieu,
        CaseVariant::Beurling { b_minus } => {
            let (v, r) = probe(T::lit(2.0) * b_minus)?;
            let hit = diverged(&v);
            if !s_grid.contains(&v.s) {
                per_s.push(v);
                rows.extend(r);
            }
            hit
        }
    };
    Ok(FailureReport {
        fails_roumieu,
        fails_beurling,
        per_s,
        symbolic_every_scale,
        partial_sum_trace: GrowthTable { rows },
    })
}

/// `s·|λ_k|^{1/β} + ln |e^{λ_k} f_k h_k|` eventually grows for every `s > 0`.
fn every_scale_diverges<T: Real>(a: &DiagonalOperator<T>, case: &AdversarialCase<T>, beta: T) -> bool {
    let Some(law) = a.spectrum().tail_law() else {
        return false;
    };
    let weight = BorelFunction::gevrey_weight(T::one(), beta).ok().and_then(|w| w.lower_envelope(law));
    let rest = BorelFunction::exp(T::one()).ok().and_then(|e| e.lower_envelope(law));
    match (weight, rest, case.vector.lower_envelope(), case.witness_functional.lower_envelope()) {
        (Some(w), Some(e), Some(f), Some(h)) => w.log.dominates_for_every_scale(&e.add(&f).add(&h).log),
        _ => false,
    }
}

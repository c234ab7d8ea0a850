//! Decision procedures for Gevrey regularity of weak solutions on `(0, ∞)`.

mod params;

pub use params::{beurling_b_minus, beurling_exponent, roumieu_exponent, roumieu_s};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator_calculus::DiagonalOperator;
use crate::scalar::Real;
use crate::spectral_model::{
    beurling_exists, complement_bounded, eventual_membership, minimal_order, roumieu_exists, sector_angle,
    widest_region, GevreyRegion, PowerLaw, SpectrumSpec, Tendency,
};

/// Witness constants are sought among `2^j` for `j` in this range.
const WITNESS_EXPONENTS: std::ops::RangeInclusive<i32> = -20..=0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GevreyKind {
    Roumieu,
    Beurling,
    Analytic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictMethod {
    Exact,
    HeuristicRefuted,
    Undecided,
}

/// Region constants certifying a verdict. Beurling witnesses carry `b₊` only.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Witness<T> {
    pub b_minus: Option<T>,
    pub b_plus: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ClassificationVerdict<T> {
    pub holds: bool,
    pub beta: T,
    #[serde(rename = "type")]
    pub kind: GevreyKind,
    pub witness: Option<Witness<T>>,
    pub refutation: Option<String>,
    pub method: VerdictMethod,
}

impl<T: Real> ClassificationVerdict<T> {
    fn holds(beta: T, kind: GevreyKind, witness: Witness<T>) -> Self {
        Self { holds: true, beta, kind, witness: Some(witness), refutation: None, method: VerdictMethod::Exact }
    }

    fn fails(beta: T, kind: GevreyKind, method: VerdictMethod, refutation: Option<String>) -> Self {
        Self { holds: false, beta, kind, witness: None, refutation, method }
    }
}

fn pow2<T: Real>(j: i32) -> T {
    T::lit(2f64.powi(j))
}

/// Largest canonical `b` placing the tail eventually inside, falling back to
/// a computed constant below the coefficient threshold.
fn side_witness<T: Real>(law: &PowerLaw<T>, beta: T) -> T {
    let inside = |b: T| {
        let region = GevreyRegion::new(beta, b, b).expect("positive constants");
        eventual_membership(law, &region) == Tendency::Inside
    };
    if let Some(j) = WITNESS_EXPONENTS.rev().find(|&j| inside(pow2(j))) {
        return pow2(j);
    }
    let threshold = law.re_coef / law.im_coef.powf(beta.recip());
    let b = threshold * T::lit(0.5);
    debug_assert!(inside(b));
    b
}

fn escape_description<T: Real>(spec: &SpectrumSpec<T>, region: &GevreyRegion<T>, what: &str) -> String {
    match complement_bounded(spec, region) {
        Ok(v) => match v.escape_witness {
            Some(p) => format!(
                "{what}; eigenvalue {} + {}i lies outside the region with b- = {}, b+ = {}",
                p.re(),
                p.im(),
                region.b_minus(),
                region.b_plus()
            ),
            None => what.to_string(),
        },
        Err(_) => what.to_string(),
    }
}

fn tail_name<T: Real>(law: &PowerLaw<T>) -> &'static str {
    match law.re_sign {
        s if s > 0 && law.re_growth().is_some() => "right tail",
        s if s < 0 && law.re_growth().is_some() => "left tail",
        _ => "imaginary-axis tail",
    }
}

fn check_beta<T: Real>(beta: T, strict: bool) -> Result<()> {
    let ok = beta.is_finite() && if strict { beta > T::one() } else { beta >= T::one() };
    if ok {
        Ok(())
    } else {
        Err(Error::BetaOutOfRange(beta.as_f64()))
    }
}

/// Sampled spectra without a declared tail: refute by scanning or stay undecided.
fn sampled_verdict<T: Real>(spec: &SpectrumSpec<T>, beta: T, kind: GevreyKind) -> Result<ClassificationVerdict<T>> {
    let region = widest_region(beta);
    let v = complement_bounded(spec, &region)?;
    Ok(match v.escape_witness {
        Some(p) => ClassificationVerdict::fails(
            beta,
            kind,
            VerdictMethod::HeuristicRefuted,
            Some(format!(
                "sampled eigenvalue {} + {}i beyond radius {} escapes the widest canonical region",
                p.re(),
                p.im(),
                v.radius_checked
            )),
        ),
        None => ClassificationVerdict::fails(
            beta,
            kind,
            VerdictMethod::Undecided,
            Some("no escaping eigenvalue among the samples; no tail declared".into()),
        ),
    })
}

fn roumieu_with_kind<T: Real>(a: &DiagonalOperator<T>, beta: T, kind: GevreyKind) -> Result<ClassificationVerdict<T>> {
    check_beta(beta, false)?;
    let spec = a.spectrum();
    if let SpectrumSpec::Finite { .. } = spec {
        return Ok(ClassificationVerdict::holds(beta, kind, Witness { b_minus: Some(T::one()), b_plus: T::one() }));
    }
    let Some(law) = spec.tail_law() else {
        return sampled_verdict(spec, beta, kind);
    };
    if !roumieu_exists(law, beta) {
        let what = format!("no b-, b+ > 0 work: |Im λ| grows faster than |Re λ|^{beta} along the {}", tail_name(law));
        return Ok(ClassificationVerdict::fails(
            beta,
            kind,
            VerdictMethod::Exact,
            Some(escape_description(spec, &widest_region(beta), &what)),
        ));
    }
    let binding = if law.im_growth().is_some() { law.re_sign } else { 0 };
    let b = if binding != 0 { side_witness(law, beta) } else { T::one() };
    let (b_minus, b_plus) = match binding {
        s if s < 0 => (b, T::one()),
        s if s > 0 => (T::one(), b),
        _ => (T::one(), T::one()),
    };
    Ok(ClassificationVerdict::holds(beta, kind, Witness { b_minus: Some(b_minus), b_plus }))
}

/// Roumieu-type Gevrey regularity of order `β ≥ 1`: some `b₋, b₊ > 0` leave
/// a bounded part of the spectrum outside `ℐ^β_{b₋,b₊}`.
pub fn classify_roumieu<T: Real>(a: &DiagonalOperator<T>, beta: T) -> Result<ClassificationVerdict<T>> {
    roumieu_with_kind(a, beta, GevreyKind::Roumieu)
}

/// Analyticity on `(0, ∞)`: the Roumieu criterion at `β = 1`.
pub fn classify_analytic<T: Real>(a: &DiagonalOperator<T>) -> Result<ClassificationVerdict<T>> {
    roumieu_with_kind(a, T::one(), GevreyKind::Analytic)
}

/// Beurling-type Gevrey regularity of order `β > 1`: some `b₊` works for every `b₋`.
pub fn classify_beurling<T: Real>(a: &DiagonalOperator<T>, beta: T) -> Result<ClassificationVerdict<T>> {
    check_beta(beta, true)?;
    let kind = GevreyKind::Beurling;
    let spec = a.spectrum();
    if let SpectrumSpec::Finite { .. } = spec {
        return Ok(ClassificationVerdict::holds(beta, kind, Witness { b_minus: None, b_plus: T::one() }));
    }
    let Some(law) = spec.tail_law() else {
        return sampled_verdict(spec, beta, kind);
    };
    if beurling_exists(law, beta) {
        let right = law.re_sign > 0 && law.im_growth().is_some();
        let b_plus = if right { side_witness(law, beta) } else { T::one() };
        return Ok(ClassificationVerdict::holds(beta, kind, Witness { b_minus: None, b_plus }));
    }
    let refutation = if roumieu_exists(law, beta) {
        // Exponent tie on the left tail: only b₋ below the coefficient ratio works.
        let limit = law.re_coef / law.im_coef.powf(beta.recip());
        let probe = GevreyRegion::new(beta, T::lit(2.0) * limit, T::one())?;
        escape_description(
            spec,
            &probe,
            &format!("the quantifier over every b- fails on the left tail: only b- <= {limit} confines it"),
        )
    } else {
        escape_description(
            spec,
            &widest_region(beta),
            &format!("no b+ works: |Im λ| outgrows |Re λ|^{beta} along the {}", tail_name(law)),
        )
    };
    Ok(ClassificationVerdict::fails(beta, kind, VerdictMethod::Exact, Some(refutation)))
}

/// Least `β ≥ 1` for which the Roumieu criterion holds; `+∞` when none does.
pub fn minimal_roumieu_order<T: Real>(a: &DiagonalOperator<T>) -> Result<T> {
    match a.spectrum() {
        SpectrumSpec::Finite { .. } => Ok(T::one()),
        SpectrumSpec::PowerLaw(law) => Ok(minimal_order(law)),
        SpectrumSpec::Sampled { .. } => {
            Err(Error::Unsupported("minimal order needs a finite or power-law spectrum".into()))
        }
    }
}

/// Half-opening of the sector into which every weak solution continues analytically.
pub fn sector<T: Real>(a: &DiagonalOperator<T>) -> Result<T> {
    let analytic = classify_analytic(a)?;
    if !analytic.holds {
        return Err(Error::HypothesisFailed(format!(
            "weak solutions are not analytic: {}",
            analytic.refutation.unwrap_or_else(|| "undecided".into())
        )));
    }
    sector_angle(a.spectrum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_model::{ComplexPoint, SignPattern};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn op(sign: i8, ar: f64, pr: f64, ai: f64, pi: f64) -> DiagonalOperator<f64> {
        DiagonalOperator::new(
            SpectrumSpec::power_law(PowerLaw::new(sign, ar, pr, ai, pi, SignPattern::Plus).unwrap()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn roumieu_examples() {
        let v = classify_roumieu(&op(-1, 1.0, 1.0, 0.0, 0.0), 1.0).unwrap();
        assert!(v.holds && v.method == VerdictMethod::Exact);
        assert_eq!(v.witness, Some(Witness { b_minus: Some(1.0), b_plus: 1.0 }));
        let v = classify_roumieu(&op(-1, 1.0, 1.0, 1.0, 2.0), 2.0).unwrap();
        assert!(v.holds);
        assert_eq!(v.witness.unwrap().b_minus, Some(1.0));
        for beta in [1.0, 2.0, 7.5] {
            let v = classify_roumieu(&op(0, 0.0, 0.0, 1.0, 2.0), beta).unwrap();
            assert!(!v.holds && v.method == VerdictMethod::Exact);
            assert!(v.refutation.unwrap().contains("outside"));
        }
    }

    #[test]
    fn beurling_examples() {
        let a = op(-1, 1.0, 1.0, 1.0, 2.0);
        let v = classify_beurling(&a, 2.0).unwrap();
        assert!(!v.holds);
        assert!(v.refutation.unwrap().contains("every b-"));
        let v = classify_beurling(&a, 2.5).unwrap();
        assert!(v.holds);
        assert_eq!(v.witness.unwrap().b_minus, None);
        let pts = vec![ComplexPoint::new(0.0, 1e9).unwrap()];
        let fin = DiagonalOperator::new(SpectrumSpec::finite(pts).unwrap()).unwrap();
        for beta in [1.01, 2.0, 50.0] {
            assert!(classify_beurling(&fin, beta).unwrap().holds);
        }
        assert!(matches!(classify_beurling(&a, 1.0), Err(Error::BetaOutOfRange(_))));
    }

    #[test]
    fn analytic_examples() {
        assert!(classify_analytic(&op(-1, 1.0, 1.0, 0.0, 0.0)).unwrap().holds);
        assert!(!classify_analytic(&op(-1, 1.0, 1.0, 1.0, 2.0)).unwrap().holds);
        let v = classify_analytic(&op(-1, 1.0, 1.0, 1.0, 1.0)).unwrap();
        assert!(v.holds);
        assert_eq!(v.witness.unwrap().b_minus, Some(1.0));
        let a = op(-1, 1.0, 1.0, 1.0, 2.0);
        let r = classify_roumieu(&a, 1.0).unwrap();
        let an = classify_analytic(&a).unwrap();
        assert_eq!((r.holds, r.witness, r.method), (an.holds, an.witness, an.method));
    }

    #[test]
    fn small_coefficients_use_computed_witness() {
        let v = classify_roumieu(&op(-1, 1e-8, 1.0, 1.0, 1.0), 1.0).unwrap();
        let b = v.witness.unwrap().b_minus.unwrap();
        assert!(b > 0.0 && b < 1e-8);
    }

    #[test]
    fn minimal_orders() {
        assert_eq!(minimal_roumieu_order(&op(-1, 1.0, 1.0, 1.0, 2.0)).unwrap(), 2.0);
        assert_eq!(minimal_roumieu_order(&op(-1, 1.0, 1.0, 1.0, 3.0)).unwrap(), 3.0);
        assert_eq!(minimal_roumieu_order(&op(0, 0.0, 0.0, 1.0, 2.0)).unwrap(), f64::INFINITY);
    }

    #[test]
    fn sectors() {
        assert!((sector(&op(-1, 1.0, 1.0, 0.0, 0.0)).unwrap() - FRAC_PI_2).abs() < 1e-12);
        let h = FRAC_PI_4.cos();
        assert!((sector(&op(-1, h, 1.0, h, 1.0)).unwrap() - FRAC_PI_4).abs() < 1e-12);
        assert!((sector(&op(1, 1.0, 1.0, 0.0, 0.0)).unwrap() - FRAC_PI_2).abs() < 1e-12);
        assert!(matches!(sector(&op(-1, 1.0, 1.0, 1.0, 2.0)), Err(Error::HypothesisFailed(_))));
    }

    #[test]
    fn sampled_spectra_refute_or_abstain() {
        let escaping = (1..=200).map(|k| ComplexPoint::new(0.0, (k * k) as f64).unwrap()).collect();
        let a = DiagonalOperator::new(SpectrumSpec::sampled(escaping, None).unwrap()).unwrap();
        let v = classify_roumieu(&a, 2.0).unwrap();
        assert_eq!(v.method, VerdictMethod::HeuristicRefuted);
        let calm = (1..=200).map(|k| ComplexPoint::new(-(k as f64), 0.0).unwrap()).collect();
        let a = DiagonalOperator::new(SpectrumSpec::sampled(calm, None).unwrap()).unwrap();
        let v = classify_roumieu(&a, 2.0).unwrap();
        assert!(!v.holds);
        assert_eq!(v.method, VerdictMethod::Undecided);
        assert!(matches!(minimal_roumieu_order(&a), Err(Error::Unsupported(_))));
    }
}

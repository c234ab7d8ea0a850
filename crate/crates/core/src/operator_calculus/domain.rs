use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::function::BorelFunction;
use super::operator::DiagonalOperator;
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::scalar::{LogSum, Real};

/// Partial sums above this value count as divergence.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;
/// Largest index inspected by the partial-sum detector.
pub const DIVERGENCE_N: usize = 1_000_000;
/// Beyond this index a term larger than 1 flags divergence.
pub const NONVANISHING_FROM: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainMethod {
    SymbolicTail,
    PartialSumDivergence,
    Finite,
}

/// `ln S_n` at a checkpoint `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct PartialSum<T> {
    pub n: usize,
    #[serde(with = "crate::serde_float")]
    pub log_value: T,
}

impl<T: Real> PartialSum<T> {
    pub fn value(&self) -> T {
        self.log_value.exp()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DomainVerdict<T> {
    pub in_domain: bool,
    pub method: DomainMethod,
    pub partial_sums: Vec<PartialSum<T>>,
    pub certificate: String,
    /// Coefficients `k ≤ head_len` were summed exactly.
    pub head_len: usize,
    /// `ln Σ_{k ≤ head_len} |F(λ_k) f_k|²`.
    #[serde(with = "crate::serde_float")]
    pub log_head_sq: T,
    /// `ln` of a rigorous bound on `Σ_{k > head_len} |F(λ_k) f_k|²`.
    #[serde(with = "crate::serde_float::option")]
    pub log_tail_sq: Option<T>,
}

/// Checkpointed partial sums of a positive series given in log form.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialSumTrace<T> {
    pub checkpoints: Vec<PartialSum<T>>,
    /// Index at which divergence was flagged.
    pub diverged_at: Option<usize>,
    pub reason: String,
}

fn is_checkpoint(k: usize) -> bool {
    let mut m = k;
    while m >= 10 && m % 10 == 0 {
        m /= 10;
    }
    matches!(m, 1 | 2 | 5)
}

/// Sums `e^{log_term(k)}` for `k = 1..=max_n` until the sum exceeds
/// `e^{log_threshold}` or a term beyond `NONVANISHING_FROM` exceeds 1.
pub fn partial_sum_trace<T: Real>(
    log_term: impl FnMut(usize) -> Option<T>,
    max_n: usize,
    log_threshold: T,
) -> PartialSumTrace<T> {
    trace(log_term, max_n, log_threshold, true)
}

/// Like [`partial_sum_trace`] but stops only at the threshold.
pub fn threshold_trace<T: Real>(
    log_term: impl FnMut(usize) -> Option<T>,
    max_n: usize,
    log_threshold: T,
) -> PartialSumTrace<T> {
    trace(log_term, max_n, log_threshold, false)
}

fn trace<T: Real>(
    mut log_term: impl FnMut(usize) -> Option<T>,
    max_n: usize,
    log_threshold: T,
    stop_on_large_terms: bool,
) -> PartialSumTrace<T> {
    let mut sum = LogSum::new();
    let mut checkpoints = Vec::new();
    for k in 1..=max_n {
        let Some(t) = log_term(k) else {
            checkpoints.push(PartialSum { n: k - 1, log_value: sum.ln() });
            return PartialSumTrace {
                checkpoints,
                diverged_at: None,
                reason: format!("terms unavailable beyond k = {}", k - 1),
            };
        };
        sum.add(t);
        let hit_threshold = sum.ln() > log_threshold;
        let nonvanishing = stop_on_large_terms && k > NONVANISHING_FROM && t > T::zero();
        if is_checkpoint(k) || hit_threshold || nonvanishing {
            checkpoints.push(PartialSum { n: k, log_value: sum.ln() });
        }
        if hit_threshold {
            return PartialSumTrace {
                checkpoints,
                diverged_at: Some(k),
                reason: format!("partial sum exceeds e^{log_threshold} at k = {k}"),
            };
        }
        if nonvanishing {
            return PartialSumTrace {
                checkpoints,
                diverged_at: Some(k),
                reason: format!("term {k} exceeds 1 beyond k = {NONVANISHING_FROM}"),
            };
        }
    }
    if checkpoints.last().map(|c| c.n) != Some(max_n) {
        checkpoints.push(PartialSum { n: max_n, log_value: sum.ln() });
    }
    PartialSumTrace { checkpoints, diverged_at: None, reason: format!("no divergence within {max_n} terms") }
}

fn undecided(reason: impl Into<String>, sums: &[PartialSum<f64>]) -> Error {
    Error::Undecided { reason: reason.into(), partial_sums: sums.iter().map(|s| (s.n, s.log_value.exp())).collect() }
}

/// `2 ln |F(λ_k) f_k|`; `None` when `λ_k` is unknown.
fn log_term_sq<T: Real>(f: &BorelFunction<T>, a: &DiagonalOperator<T>, v: &StateVector<T>, k: usize) -> Option<T> {
    let c = v.log_polar(k);
    if c.ln_abs == T::neg_infinity() {
        return Some(T::neg_infinity());
    }
    let lambda = a.eigenvalue(k)?;
    Some(T::lit(2.0) * (f.ln_abs(lambda) + c.ln_abs))
}

/// Last index summed exactly before the symbolic tail takes over.
pub(crate) fn head_end<T: Real>(a: &DiagonalOperator<T>, v: &StateVector<T>) -> usize {
    if v.has_tail() {
        v.truncation().max(a.spectrum().tail_start() - 1).max(v.tail_valid_from() - 1)
    } else {
        v.support_len()
    }
}

fn check_dimension<T: Real>(a: &DiagonalOperator<T>, v: &StateVector<T>) -> Result<()> {
    match a.dimension() {
        Some(m) if !v.has_tail() && v.support_len() > m => Err(Error::InvalidSpec(format!(
            "vector has {} coefficients but the space has dimension {m}",
            v.support_len()
        ))),
        _ => Ok(()),
    }
}

/// `f ∈ D(F(A))`, i.e. `Σ |F(λ_k)|² |f_k|² < ∞`.
pub fn in_domain<T: Real>(
    f: &BorelFunction<T>,
    a: &DiagonalOperator<T>,
    v: &StateVector<T>,
) -> Result<DomainVerdict<T>> {
    check_dimension(a, v)?;
    let end = a.dimension().unwrap_or_else(|| head_end(a, v));
    let mut head = LogSum::new();
    for k in 1..=end {
        match log_term_sq(f, a, v, k) {
            Some(t) if t.is_nan() => return Err(undecided(format!("term {k} is not a number"), &[])),
            Some(t) => head.add(t),
            None => {
                let trace = partial_sum_trace(|j| log_term_sq(f, a, v, j), end, T::lit(DIVERGENCE_THRESHOLD.ln()));
                return detector_verdict(trace, "eigenvalues are unknown beyond the sample");
            }
        }
    }
    let finite = |certificate: String| DomainVerdict {
        in_domain: head.ln() < T::infinity(),
        method: DomainMethod::Finite,
        partial_sums: vec![PartialSum { n: end, log_value: head.ln() }],
        certificate,
        head_len: end,
        log_head_sq: head.ln(),
        log_tail_sq: Some(T::neg_infinity()),
    };
    if let Some(m) = a.dimension() {
        return Ok(finite(format!("finite spectrum: {m} terms summed")));
    }
    if !v.has_tail() {
        return Ok(finite(format!("finite support: {end} terms summed")));
    }
    let Some(law) = a.spectrum().tail_law() else {
        let trace = partial_sum_trace(|j| log_term_sq(f, a, v, j), DIVERGENCE_N, T::lit(DIVERGENCE_THRESHOLD.ln()));
        return detector_verdict(trace, "no declared tail law beyond the sample");
    };
    let upper = f.upper_envelope(law).add(&v.upper_envelope().expect("tail")).scale(T::lit(2.0));
    if let Some(log_tail) = upper.log_tail_sum(end + 1) {
        return Ok(DomainVerdict {
            in_domain: true,
            method: DomainMethod::SymbolicTail,
            partial_sums: vec![PartialSum { n: end, log_value: head.ln() }],
            certificate: format!("tail beyond k = {end} bounded by e^{log_tail} from the envelope {upper:?}"),
            head_len: end,
            log_head_sq: head.ln(),
            log_tail_sq: Some(log_tail),
        });
    }
    if let (Some(fl), Some(vl)) = (f.lower_envelope(law), v.lower_envelope()) {
        let lower = fl.add(&vl);
        let sq = lower.log.scale(T::lit(2.0));
        if sq.diverges() {
            let trace = partial_sum_trace(
                |j| log_term_sq(f, a, v, j),
                end.max(lower.from + 1000).min(DIVERGENCE_N),
                T::infinity(),
            );
            return Ok(DomainVerdict {
                in_domain: false,
                method: DomainMethod::SymbolicTail,
                partial_sums: trace.checkpoints,
                certificate: format!(
                    "terms are eventually at least e^{{{sq:?}}} for k >= {}, a divergent series",
                    lower.from
                ),
                head_len: end,
                log_head_sq: head.ln(),
                log_tail_sq: None,
            });
        }
    }
    let trace = partial_sum_trace(|j| log_term_sq(f, a, v, j), DIVERGENCE_N, T::lit(DIVERGENCE_THRESHOLD.ln()));
    detector_verdict(trace, "symbolic tail analysis inconclusive")
}

fn detector_verdict<T: Real>(trace: PartialSumTrace<T>, context: &str) -> Result<DomainVerdict<T>> {
    match trace.diverged_at {
        Some(k) => {
            let last = trace.checkpoints.last().map_or(T::neg_infinity(), |c| c.log_value);
            Ok(DomainVerdict {
                in_domain: false,
                method: DomainMethod::PartialSumDivergence,
                certificate: format!("{context}; {}", trace.reason),
                partial_sums: trace.checkpoints,
                head_len: k,
                log_head_sq: last,
                log_tail_sq: None,
            })
        }
        None => {
            let sums: Vec<_> =
                trace.checkpoints.iter().map(|c| PartialSum { n: c.n, log_value: c.log_value.as_f64() }).collect();
            Err(undecided(format!("{context}; {}", trace.reason), &sums))
        }
    }
}

/// `F(A) f`, coefficient-wise `F(λ_k) f_k`.
pub fn apply_function<T: Real>(
    f: &BorelFunction<T>,
    a: &DiagonalOperator<T>,
    v: &StateVector<T>,
) -> Result<StateVector<T>> {
    let verdict = in_domain(f, a, v)?;
    if !verdict.in_domain {
        return Err(Error::NotInDomain(verdict.certificate));
    }
    if verdict.method != DomainMethod::Finite && verdict.log_tail_sq.is_none() {
        return Err(Error::UnboundedTail(verdict.certificate));
    }
    let head: Vec<Complex<T>> = (1..=verdict.head_len)
        .map(|k| {
            let c = v.log_polar(k);
            if c.ln_abs == T::neg_infinity() {
                return Complex::new(T::zero(), T::zero());
            }
            let lambda = a.eigenvalue(k).expect("certified eigenvalue");
            f.log_polar(lambda).mul(c).to_complex()
        })
        .collect();
    if a.dimension().is_some() || !v.has_tail() {
        return StateVector::finite(head);
    }
    Ok(v.push_apply(f, a, head, verdict.log_tail_sq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator_calculus::DecayRule;
    use crate::spectral_model::{ComplexPoint, PowerLaw, SignPattern, SpectrumSpec};

    fn op(sign: i8, ar: f64, pr: f64, ai: f64, pi: f64) -> DiagonalOperator<f64> {
        DiagonalOperator::new(
            SpectrumSpec::power_law(PowerLaw::new(sign, ar, pr, ai, pi, SignPattern::Plus).unwrap()).unwrap(),
        )
        .unwrap()
    }

    fn inv_sq(n: usize) -> StateVector<f64> {
        StateVector::closed_form(DecayRule::power_law(2.0), n).unwrap()
    }

    #[test]
    fn checkpoints_follow_one_two_five() {
        let picked: Vec<_> = (1..=120).filter(|&k| is_checkpoint(k)).collect();
        assert_eq!(picked, vec![1, 2, 5, 10, 20, 50, 100]);
    }

    #[test]
    fn decaying_exponential_is_in_domain() {
        let a = op(-1, 1.0, 1.0, 0.0, 0.0);
        let v = in_domain(&BorelFunction::exp(1.0).unwrap(), &a, &inv_sq(100)).unwrap();
        assert!(v.in_domain);
        assert_eq!(v.method, DomainMethod::SymbolicTail);
        assert!(v.log_tail_sq.unwrap() < -150.0);
    }

    #[test]
    fn gevrey_weight_on_imaginary_axis_diverges() {
        let a = op(0, 0.0, 0.0, 1.0, 2.0);
        let f = BorelFunction::gevrey_weight(1.0, 2.0).unwrap().mul(&BorelFunction::exp(1.0).unwrap());
        let v = in_domain(&f, &a, &inv_sq(100)).unwrap();
        assert!(!v.in_domain);
        // Oracle: the squared term at k = 30 is e^{60}·30^{-8} > 10¹².
        let term = 60.0f64.exp() * 30f64.powi(-8);
        assert!(term > 1e12);
        for t in [0.1, 1.0, 10.0] {
            assert!(in_domain(&BorelFunction::exp(t).unwrap(), &a, &inv_sq(100)).unwrap().in_domain);
        }
    }

    #[test]
    fn apply_identity_and_refusal() {
        let a = op(-1, 1.0, 1.0, 0.0, 0.0);
        let out = apply_function(&BorelFunction::identity(), &a, &inv_sq(50)).unwrap();
        for k in [1usize, 7, 50, 500] {
            assert!((out.coefficient(k).re + 1.0 / k as f64).abs() < 1e-15);
        }
        let e1 = apply_function(&BorelFunction::exp(1.0).unwrap(), &a, &StateVector::basis(1)).unwrap();
        assert!((e1.coefficient(1).re - (-1.0f64).exp()).abs() < 1e-16);

        let b = op(0, 0.0, 0.0, 1.0, 2.0);
        let f4 = StateVector::closed_form(DecayRule::power_law(4.0), 50).unwrap();
        let err = apply_function(&BorelFunction::power(2), &b, &f4).unwrap_err();
        assert!(matches!(err, Error::NotInDomain(_)));
    }

    #[test]
    fn finite_spectrum_sums_exactly() {
        let pts = vec![ComplexPoint::new(-1.0, 2.0).unwrap(), ComplexPoint::new(3.0, 0.0).unwrap()];
        let a = DiagonalOperator::new(SpectrumSpec::finite(pts).unwrap()).unwrap();
        let v = StateVector::finite(vec![Complex::new(1.0f64, 0.0), Complex::new(0.0, 2.0)]).unwrap();
        let d = in_domain(&BorelFunction::power(3), &a, &v).unwrap();
        assert!(d.in_domain);
        assert_eq!(d.method, DomainMethod::Finite);
        let direct = Complex::new(-1.0f64, 2.0).powu(3).norm_sqr() + 27.0f64.powi(2) * 4.0;
        assert!((d.log_head_sq.exp() - direct).abs() < 1e-9 * direct);
        let too_long = StateVector::finite(vec![Complex::new(1.0, 0.0); 3]).unwrap();
        assert!(in_domain(&BorelFunction::power(1), &a, &too_long).is_err());
    }

    #[test]
    fn undeclared_sample_tail_is_undecided() {
        let pts = (1..=20).map(|k| ComplexPoint::new(-(k as f64), 0.0).unwrap()).collect();
        let a = DiagonalOperator::new(SpectrumSpec::sampled(pts, None).unwrap()).unwrap();
        let err = in_domain(&BorelFunction::exp(1.0).unwrap(), &a, &inv_sq(10)).unwrap_err();
        assert!(matches!(err, Error::Undecided { .. }));
        let short = StateVector::finite(vec![Complex::new(1.0, 0.0); 5]).unwrap();
        assert!(in_domain(&BorelFunction::exp(1.0).unwrap(), &a, &short).unwrap().in_domain);
    }

    #[test]
    fn partial_sum_detector_fires() {
        let trace = partial_sum_trace(|k| Some(0.5 * k as f64), 1000, DIVERGENCE_THRESHOLD.ln());
        // Σ_{k≤K} e^{k/2} first exceeds 10¹² at K = 54.
        let oracle = (1..).find(|&k| (1..=k).map(|j| (0.5 * j as f64).exp()).sum::<f64>() > 1e12).unwrap();
        assert_eq!(oracle, 54);
        assert_eq!(trace.diverged_at, Some(oracle));
        let calm = partial_sum_trace(|k| Some(-2.0 * (k as f64).ln()), 1000, DIVERGENCE_THRESHOLD.ln());
        assert_eq!(calm.diverged_at, None);
        assert_eq!(calm.checkpoints.last().unwrap().n, 1000);
    }
}

//! Weak solutions `y(t) = e^{tA} f` of `y' = Ay` and their derivatives.

mod estimate;

pub use estimate::{estimate_gevrey_order, least_squares, OrderEstimate, DEFAULT_WINDOW};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator_calculus::{
    apply_function, in_domain, BorelFunction, DiagonalOperator, DomainVerdict, StateVector,
};
use crate::scalar::Real;
use crate::spectral_model::ComplexPoint;

/// Times checked numerically on top of the symbolic certificate.
pub const DEFAULT_T_GRID: [f64; 4] = [0.0, 0.1, 1.0, 10.0];

/// Times probed when hunting for a failing `t` after the symbolic check fails.
const PROBE_TIMES: [f64; 8] = [1e-3, 1e-2, 0.1, 1.0, 10.0, 1e2, 1e3, 1e4];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct AdmissibilityCertificate<T> {
    /// Why `f ∈ D(e^{tA})` for every `t ≥ 0`.
    pub symbolic: String,
    pub grid: Vec<(T, DomainVerdict<T>)>,
}

/// `y(t) = e^{tA} f` for an `f` certified to lie in `⋂_{t≥0} D(e^{tA})`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeakSolution<T> {
    operator: DiagonalOperator<T>,
    initial: StateVector<T>,
    certificate: AdmissibilityCertificate<T>,
}

fn not_admissible<T: Real>(t: Option<T>, reason: impl Into<String>) -> Error {
    Error::NotAdmissible { t: t.map(|t| t.as_f64()), reason: reason.into() }
}

/// Symbolic reason why `Σ e^{2t Re λ_k} |f_k|² < ∞` for every `t ≥ 0`.
fn symbolic_admissibility<T: Real>(a: &DiagonalOperator<T>, f: &StateVector<T>) -> Option<String> {
    if let Some(m) = a.dimension() {
        return Some(format!("finite spectrum of size {m}"));
    }
    if !f.has_tail() {
        return Some(format!("finite support of length {}", f.support_len()));
    }
    let law = a.spectrum().tail_law()?;
    let re = law.re_envelope(true);
    let growing = re.terms().first().copied().filter(|&(e, c)| e > T::zero() && c > T::zero());
    let Some((e_re, _)) = growing else {
        return Some(format!("Re λ_k <= {} on the tail", re.eval(T::one())));
    };
    let decay = f.upper_envelope()?;
    match decay.leading() {
        Some((e_f, c_f)) if c_f < T::zero() && e_f > e_re => {
            Some(format!("ln |f_k| ~ {c_f}·k^{e_f} outpaces Re λ_k ~ k^{e_re}"))
        }
        _ => None,
    }
}

impl<T: Real> WeakSolution<T> {
    pub fn new(a: DiagonalOperator<T>, f: StateVector<T>) -> Result<Self> {
        let grid: Vec<T> = DEFAULT_T_GRID.iter().map(|&t| T::lit(t)).collect();
        Self::with_grid(a, f, &grid)
    }

    pub fn with_grid(a: DiagonalOperator<T>, f: StateVector<T>, t_grid: &[T]) -> Result<Self> {
        if t_grid.iter().any(|t| !(t.is_finite() && *t >= T::zero())) {
            return Err(Error::InvalidSpec("t grid must hold finite t >= 0".into()));
        }
        let check = |t: T| -> Result<DomainVerdict<T>> {
            let v = in_domain(&BorelFunction::exp(t)?, &a, &f).map_err(|e| match e {
                Error::Undecided { reason, .. } => not_admissible(Some(t), format!("undecided: {reason}")),
                other => other,
            })?;
            if v.in_domain {
                Ok(v)
            } else {
                Err(not_admissible(Some(t), v.certificate.clone()))
            }
        };
        let mut grid = Vec::with_capacity(t_grid.len());
        for &t in t_grid {
            grid.push((t, check(t)?));
        }
        let Some(symbolic) = symbolic_admissibility(&a, &f) else {
            for t in PROBE_TIMES {
                check(T::lit(t))?;
            }
            return Err(not_admissible::<T>(None, "undecided: no symbolic certificate for every t >= 0"));
        };
        Ok(Self { operator: a, initial: f, certificate: AdmissibilityCertificate { symbolic, grid } })
    }

    pub fn operator(&self) -> &DiagonalOperator<T> {
        &self.operator
    }

    pub fn initial(&self) -> &StateVector<T> {
        &self.initial
    }

    pub fn certificate(&self) -> &AdmissibilityCertificate<T> {
        &self.certificate
    }

    /// `y(t)`; `y(0) = f` exactly.
    pub fn evaluate(&self, t: T) -> Result<StateVector<T>> {
        if !(t.is_finite() && t >= T::zero()) {
            return Err(Error::InvalidSpec(format!("t = {t} must be finite and >= 0")));
        }
        if t == T::zero() {
            return Ok(self.initial.clone());
        }
        apply_function(&BorelFunction::exp(t)?, &self.operator, &self.initial)
    }

    /// `‖A^n y(t)‖`: the head value and a bound on the neglected tail.
    pub fn derivative_norm(&self, t: T, n: u32) -> Result<NormBound<T>> {
        if !(t.is_finite() && t > T::zero()) {
            return Err(Error::InvalidSpec(format!("t = {t} must be finite and > 0")));
        }
        let f = BorelFunction::power(n).mul(&BorelFunction::exp(t)?);
        let v = in_domain(&f, &self.operator, &self.initial)?;
        if !v.in_domain {
            return Err(Error::NotInDomain(v.certificate));
        }
        let tail = v.log_tail_sq.map_or(T::infinity(), |l| (l * T::lit(0.5)).exp());
        Ok(NormBound { value: (v.log_head_sq * T::lit(0.5)).exp(), tail_bound: tail })
    }

    /// `⟨y(t), g⟩`.
    pub fn pairing(&self, t: T, g: &StateVector<T>) -> Result<Complex<T>> {
        Ok(self.evaluate(t)?.inner_head(g))
    }
}

/// `value ≤ ‖x‖ ≤ value + tail_bound`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct NormBound<T> {
    #[serde(with = "crate::serde_float")]
    pub value: T,
    #[serde(with = "crate::serde_float")]
    pub tail_bound: T,
}

/// `A* g` for a finite vector: coefficients `conj(λ_k) g_k`.
pub fn adjoint_apply<T: Real>(a: &DiagonalOperator<T>, g: &StateVector<T>) -> Result<StateVector<T>> {
    if g.has_tail() {
        return Err(Error::Unsupported("adjoint is applied to finite vectors only".into()));
    }
    let coeffs = g
        .head()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let lambda =
                a.eigenvalue(i + 1).ok_or_else(|| Error::InvalidSpec(format!("no eigenvalue at index {}", i + 1)))?;
            Ok(lambda.conj() * c)
        })
        .collect::<Result<Vec<_>>>()?;
    StateVector::finite(coeffs)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct GrowthRow<T> {
    pub n: u32,
    pub t: T,
    /// `+∞` when `y(t) ∉ D(A^n)`.
    #[serde(with = "crate::serde_float")]
    pub norm: T,
    #[serde(with = "crate::serde_float")]
    pub tail_bound: T,
}

/// `‖A^n y(t)‖` over an `(n, t)` grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(bound = "T: Real")]
pub struct GrowthTable<T> {
    pub rows: Vec<GrowthRow<T>>,
}

impl<T: Real> GrowthTable<T> {
    pub fn sweep(sol: &WeakSolution<T>, ns: &[u32], ts: &[T]) -> Result<Self> {
        let mut rows = Vec::with_capacity(ns.len() * ts.len());
        for &t in ts {
            for &n in ns {
                let (norm, tail_bound) = match sol.derivative_norm(t, n) {
                    Ok(b) => (b.value, b.tail_bound),
                    Err(Error::NotInDomain(_)) => (T::infinity(), T::infinity()),
                    Err(e) => return Err(e),
                };
                rows.push(GrowthRow { n, t, norm, tail_bound });
            }
        }
        Ok(Self { rows })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,t,norm,tail_bound\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.n, r.t, r.norm, r.tail_bound));
        }
        out
    }
}

/// Result of probing `f ∈ D(e^{zA})`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionCheck<T> {
    pub in_domain: bool,
    pub value: StateVector<T>,
    pub verdict: DomainVerdict<T>,
}

/// Certifies `f ∈ D(e^{zA})` and returns `e^{zA} f`.
///
/// Any `z ≠ 0` is accepted so that probes outside a sector of opening
/// `π/2` can be made as well.
pub fn analytic_extension_check<T: Real>(sol: &WeakSolution<T>, z: ComplexPoint<T>) -> Result<ExtensionCheck<T>> {
    if z.norm() == T::zero() {
        return Err(Error::InvalidSpec("z must be nonzero".into()));
    }
    let f = BorelFunction::exp_complex(z.to_complex())?;
    let verdict = in_domain(&f, &sol.operator, &sol.initial)?;
    if !verdict.in_domain {
        return Err(Error::NotInDomain(verdict.certificate));
    }
    let value = apply_function(&f, &sol.operator, &sol.initial)?;
    Ok(ExtensionCheck { in_domain: true, value, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator_calculus::DecayRule;
    use crate::spectral_model::{PowerLaw, SignPattern, SpectrumSpec};

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
    fn admissible_examples() {
        assert!(WeakSolution::new(op(-1, 1.0, 1.0, 0.0, 0.0), inv_sq(100)).is_ok());
        assert!(WeakSolution::new(op(0, 0.0, 0.0, 1.0, 2.0), inv_sq(100)).is_ok());
        let gauss = StateVector::closed_form(DecayRule::stretched_exp(1.0, 2.0), 50).unwrap();
        assert!(WeakSolution::new(op(1, 1.0, 1.0, 0.0, 0.0), gauss).is_ok());
    }

    #[test]
    fn growing_real_parts_are_rejected() {
        let err = WeakSolution::new(op(1, 1.0, 0.5, 1.0, 1.0), inv_sq(100)).unwrap_err();
        assert!(matches!(err, Error::NotAdmissible { t: Some(_), .. }), "{err:?}");
        let err = WeakSolution::new(op(1, 1.0, 1.0, 0.0, 0.0), inv_sq(100)).unwrap_err();
        assert!(matches!(err, Error::NotAdmissible { t: Some(t), .. } if t == 0.1));
    }

    #[test]
    fn evaluation_examples() {
        let sol = WeakSolution::new(op(-1, 1.0, 1.0, 0.0, 0.0), inv_sq(100)).unwrap();
        assert_eq!(sol.evaluate(0.0).unwrap(), *sol.initial());
        let y = sol.evaluate(1.0).unwrap();
        for k in [1usize, 10, 100, 1000] {
            let x = k as f64;
            assert!((y.coefficient(k).re - (-x).exp() / (x * x)).abs() < 1e-15);
        }
        let rot = WeakSolution::new(op(0, 0.0, 0.0, 1.0, 2.0), StateVector::basis(1)).unwrap();
        let y = rot.evaluate(std::f64::consts::PI).unwrap();
        assert!((y.coefficient(1) - Complex::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn derivative_norms() {
        let single = WeakSolution::new(op(-1, 1.0, 1.0, 0.0, 0.0), StateVector::basis(1)).unwrap();
        for n in [0, 1, 7] {
            let b = single.derivative_norm(0.5, n).unwrap();
            assert!((b.value - (-0.5f64).exp()).abs() < 1e-15);
            assert_eq!(b.tail_bound, 0.0);
        }
        let sol = WeakSolution::new(op(-1, 1.0, 1.0, 0.0, 0.0), inv_sq(1000)).unwrap();
        let b = sol.derivative_norm(1.0, 5).unwrap();
        let direct: f64 = (1..=1000).map(|k| (k as f64).powi(6) * (-2.0 * k as f64).exp()).sum::<f64>().sqrt();
        assert!((b.value - direct).abs() < 1e-12 * direct);
        assert!(b.tail_bound < 1e-300);
        let zero = sol.derivative_norm(1.0, 0).unwrap();
        let y = sol.evaluate(1.0).unwrap();
        assert!((zero.value - y.head_norm()).abs() < 1e-15);
    }

    #[test]
    fn imaginary_spectrum_has_no_derivatives() {
        let sol = WeakSolution::new(op(0, 0.0, 0.0, 1.0, 2.0), inv_sq(100)).unwrap();
        assert!(matches!(sol.derivative_norm(1.0, 2), Err(Error::NotInDomain(_))));
    }

    #[test]
    fn extension_into_the_sector() {
        let sol = WeakSolution::new(op(-1, 1.0, 1.0, 0.0, 0.0), inv_sq(100)).unwrap();
        let z = ComplexPoint::new(0.5, 0.5).unwrap();
        let ext = analytic_extension_check(&sol, z).unwrap();
        assert!(ext.in_domain);
        let real = analytic_extension_check(&sol, ComplexPoint::new(0.7, 0.0).unwrap()).unwrap();
        assert_eq!(real.value.head(), sol.evaluate(0.7).unwrap().head());
        let out = analytic_extension_check(&sol, ComplexPoint::new(-0.1, 1.0).unwrap());
        assert!(matches!(out, Err(Error::NotInDomain(_))));
    }

    #[test]
    fn growth_table_csv() {
        let sol = WeakSolution::new(op(-1, 1.0, 1.0, 0.0, 0.0), StateVector::basis(2)).unwrap();
        let table = GrowthTable::sweep(&sol, &[0, 1], &[1.0]).unwrap();
        let csv = table.to_csv();
        assert!(csv.starts_with("n,t,norm,tail_bound\n0,1,"));
        assert_eq!(csv.lines().count(), 3);
    }
}

use gevrey_core::evolution::{
    adjoint_apply, analytic_extension_check, estimate_gevrey_order, GrowthTable, WeakSolution, DEFAULT_WINDOW,
};
use gevrey_core::operator_calculus::{apply_function, BorelFunction, DecayRule, DiagonalOperator, StateVector};
use gevrey_core::spectral_model::{ComplexPoint, PowerLaw, SignPattern, SpectrumSpec};
use gevrey_core::Error;
use num_complex::Complex;
use proptest::prelude::*;

fn law_op(sign: i8, ar: f64, pr: f64, ai: f64, pi: f64) -> DiagonalOperator<f64> {
    DiagonalOperator::new(
        SpectrumSpec::power_law(PowerLaw::new(sign, ar, pr, ai, pi, SignPattern::Plus).unwrap()).unwrap(),
    )
    .unwrap()
}

fn finite_op(points: &[(f64, f64)]) -> DiagonalOperator<f64> {
    let pts = points.iter().map(|&(re, im)| ComplexPoint::new(re, im).unwrap()).collect();
    DiagonalOperator::new(SpectrumSpec::finite(pts).unwrap()).unwrap()
}

fn vector(coeffs: &[(f64, f64)]) -> StateVector<f64> {
    StateVector::finite(coeffs.iter().map(|&(re, im)| Complex::new(re, im)).collect()).unwrap()
}

fn inv_sq(n: usize) -> StateVector<f64> {
    StateVector::closed_form(DecayRule::power_law(2.0), n).unwrap()
}

#[test]
fn semigroup_property() {
    let a = law_op(-1, 1.0, 1.0, 1.0, 2.0);
    let sol = WeakSolution::new(a.clone(), inv_sq(200)).unwrap();
    let (t, s) = (0.3, 0.45);
    let direct = sol.evaluate(t + s).unwrap();
    let stepped = apply_function(&BorelFunction::exp(s).unwrap(), &a, &sol.evaluate(t).unwrap()).unwrap();
    let diff: f64 = (1..=200).map(|k| (direct.coefficient(k) - stepped.coefficient(k)).norm_sqr()).sum::<f64>().sqrt();
    assert!(diff <= 1e-15 + direct.tail_bound_l2() + stepped.tail_bound_l2());
    for k in [500usize, 5000] {
        let (x, y) = (direct.coefficient(k), stepped.coefficient(k));
        assert!((x - y).norm() <= 1e-14 * x.norm().max(1e-300));
    }
}

#[test]
fn monotone_smoothing() {
    let sol = WeakSolution::new(law_op(-1, 1.0, 1.0, 1.0, 2.0), inv_sq(5000)).unwrap();
    let ts = [0.25, 0.5, 1.0, 2.0, 4.0];
    let table = GrowthTable::sweep(&sol, &[0, 1, 2, 3], &ts).unwrap();
    for n in 0..4 {
        let norms: Vec<f64> = table.rows.iter().filter(|r| r.n == n).map(|r| r.norm).collect();
        assert!(norms.windows(2).all(|w| w[1] <= w[0]), "n = {n}: {norms:?}");
    }
}

#[test]
fn derivative_norms_match_finite_differences() {
    let pts = [(-1.0, 0.5), (-0.3, -2.0), (0.2, 1.0), (-2.0, 0.0)];
    let a = finite_op(&pts);
    let f = vector(&[(1.0, 0.0), (0.5, -0.5), (0.0, 0.25), (0.3, 0.1)]);
    let sol = WeakSolution::new(a, f).unwrap();
    let t = 0.7;
    let h = 1e-3;
    let y = |s: f64| sol.evaluate(s).unwrap().head().to_vec();
    // Central stencils for the first three derivatives.
    let stencils: [&[(f64, f64)]; 3] = [
        &[(-1.0, -0.5), (1.0, 0.5)],
        &[(-1.0, 1.0), (0.0, -2.0), (1.0, 1.0)],
        &[(-2.0, -0.5), (-1.0, 1.0), (1.0, -1.0), (2.0, 0.5)],
    ];
    for (i, stencil) in stencils.iter().enumerate() {
        let n = (i + 1) as u32;
        let mut d = vec![Complex::new(0.0, 0.0); pts.len()];
        for &(offset, w) in stencil.iter() {
            for (acc, c) in d.iter_mut().zip(y(t + offset * h)) {
                *acc += c * w;
            }
        }
        let fd = d.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() / h.powi(n as i32);
        let exact = sol.derivative_norm(t, n).unwrap();
        assert_eq!(exact.tail_bound, 0.0);
        assert!((fd - exact.value).abs() <= 1e-5 * exact.value, "n = {n}: {fd} vs {}", exact.value);
    }
}

#[test]
fn derivative_norm_oracle() {
    let sol = WeakSolution::new(law_op(-1, 1.0, 1.0, 0.0, 0.0), inv_sq(100_000)).unwrap();
    let b = sol.derivative_norm(1.0, 5).unwrap();
    let direct: f64 = (1..=2000).map(|k| (k as f64).powi(6) * (-2.0 * k as f64).exp()).sum::<f64>().sqrt();
    assert!((b.value - direct).abs() <= 1e-14 * direct);
}

#[test]
fn estimator_is_stable_under_refinement() {
    let (lo, hi) = DEFAULT_WINDOW;
    for (ai, pi) in [(0.0, 0.0), (1.0, 2.0), (1.0, 3.0)] {
        let a = law_op(-1, 1.0, 1.0, ai, pi);
        let coarse = WeakSolution::new(a.clone(), inv_sq(50_000)).unwrap();
        let fine = WeakSolution::new(a, inv_sq(100_000)).unwrap();
        let b1 = estimate_gevrey_order(&coarse, 1.0, lo, hi).unwrap().beta_hat.unwrap();
        let b2 = estimate_gevrey_order(&fine, 1.0, lo, hi).unwrap().beta_hat.unwrap();
        assert!((b1 - b2).abs() < 1e-3, "{b1} vs {b2}");
    }
}

#[test]
fn imaginary_data_is_not_smooth() {
    let sol = WeakSolution::new(law_op(0, 0.0, 0.0, 1.0, 2.0), inv_sq(1000)).unwrap();
    let e = estimate_gevrey_order(&sol, 1.0, 8, 40).unwrap();
    assert!(e.divergent);
    assert!(e.beta_hat.is_none());
}

#[test]
fn analytic_extension_in_rotated_sector() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let sol = WeakSolution::new(law_op(-1, h, 1.0, h, 1.0), inv_sq(100)).unwrap();
    let theta = std::f64::consts::FRAC_PI_4;
    for phi in [-0.9 * theta, 0.0, 0.9 * theta] {
        let z = ComplexPoint::new(phi.cos(), phi.sin()).unwrap();
        assert!(analytic_extension_check(&sol, z).unwrap().in_domain);
    }
    // Beyond the sector the factors e^{zλ_k} grow.
    let phi = -(theta + (std::f64::consts::PI - theta) / 2.0);
    let z = ComplexPoint::new(phi.cos(), phi.sin()).unwrap();
    assert!(matches!(analytic_extension_check(&sol, z), Err(Error::NotInDomain(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pairing_solves_the_weak_equation(
        pts in prop::collection::vec((-3.0..0.5f64, -3.0..3.0f64), 1..=16),
        fc in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 16),
        gc in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 16),
        t in 0.1..2.0f64,
    ) {
        let n = pts.len();
        let a = finite_op(&pts);
        let sol = WeakSolution::new(a.clone(), vector(&fc[..n])).unwrap();
        let g = vector(&gc[..n]);
        let h = 1e-5;
        let fd = (sol.pairing(t + h, &g).unwrap() - sol.pairing(t - h, &g).unwrap()) / (2.0 * h);
        let exact = sol.evaluate(t).unwrap().inner_head(&adjoint_apply(&a, &g).unwrap());
        let scale: f64 = (1..=n).map(|k| (a.eigenvalue(k).unwrap() * sol.evaluate(t).unwrap().coefficient(k) * g.coefficient(k).conj()).norm()).sum();
        prop_assert!((fd - exact).norm() <= 1e-6 * scale.max(1e-12));
    }
}

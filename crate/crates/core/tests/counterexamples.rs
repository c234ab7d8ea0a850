use gevrey_core::classifier::{classify_beurling, classify_roumieu};
use gevrey_core::counterexamples::{
    build_adversarial, build_oscillating, verify_admissible, verify_failure, AdversarialCase, CaseKind, CaseVariant,
};
use gevrey_core::evolution::estimate_gevrey_order;

const T_GRID: [f64; 3] = [0.1, 1.0, 10.0];
const S_GRID: [f64; 3] = [0.1, 1.0, 10.0];

fn roumieu_cases() -> Vec<AdversarialCase<f64>> {
    let mut cases = Vec::new();
    for beta in [1.0, 2.0] {
        for kind in [CaseKind::BoundedRe, CaseKind::ReToPlusInfinity, CaseKind::ReToMinusInfinity] {
            cases.push(build_adversarial(kind, beta, CaseVariant::Roumieu).unwrap());
        }
    }
    cases.push(build_oscillating(2.0).unwrap());
    cases
}

#[test]
fn roumieu_cases_are_admissible_and_not_gevrey() {
    for case in roumieu_cases() {
        assert!(verify_admissible(&case, &T_GRID).unwrap(), "{:?}", case.kind);
        let report = verify_failure(&case, &S_GRID).unwrap();
        assert!(report.fails_roumieu, "{:?} β = {}", case.kind, case.beta);
        assert!(report.fails_beurling);
        assert!(report.per_s.iter().all(|v| !v.in_domain && v.threshold_hit_at.is_some()));
        let a = case.operator().unwrap();
        assert!(!classify_roumieu(&a, case.beta).unwrap().holds);
        if case.beta > 1.0 {
            assert!(!classify_beurling(&a, case.beta).unwrap().holds);
        }
    }
}

#[test]
fn roumieu_cases_defeat_the_estimator() {
    for case in roumieu_cases() {
        let sol = case.weak_solution(&T_GRID).unwrap();
        let e = estimate_gevrey_order(&sol, 1.0, 8, 40).unwrap();
        let ok = e.divergent || e.beta_hat.is_some_and(|b| b > case.beta + 0.5);
        assert!(ok, "{:?} β = {}: {e:?}", case.kind, case.beta);
    }
}

#[test]
fn beurling_case_fails_beurling_only() {
    let case = build_adversarial(CaseKind::ReToMinusInfinity, 2.0, CaseVariant::Beurling { b_minus: 1.0 }).unwrap();
    assert!(verify_admissible(&case, &T_GRID).unwrap());
    let report = verify_failure(&case, &S_GRID).unwrap();
    assert!(report.fails_beurling);
    assert!(!report.fails_roumieu);
    let a = case.operator().unwrap();
    assert!(!classify_beurling(&a, 2.0).unwrap().holds);
    assert!(classify_roumieu(&a, 2.0).unwrap().holds);
}

#[test]
fn trace_is_exportable() {
    let case = build_adversarial(CaseKind::BoundedRe, 2.0, CaseVariant::Roumieu).unwrap();
    let report = verify_failure(&case, &[0.1]).unwrap();
    let csv = report.partial_sum_trace.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,t,norm,tail_bound"));
    let last: Vec<&str> = csv.lines().last().unwrap().split(',').collect();
    assert_eq!(last[1], "0.1");
    assert!(last[2].parse::<f64>().unwrap() > 1e12);
    assert_eq!(last[3], "inf");
}

#[test]
fn invalid_requests() {
    assert!(build_adversarial(CaseKind::BoundedRe, 0.5, CaseVariant::Roumieu).is_err());
    assert!(build_adversarial(CaseKind::ReToMinusInfinity, 1.0, CaseVariant::Beurling { b_minus: 1.0 }).is_err());
    assert!(build_adversarial(CaseKind::ReToMinusInfinity, 2.0, CaseVariant::Beurling { b_minus: -1.0 }).is_err());
    let case = build_adversarial(CaseKind::BoundedRe, 2.0, CaseVariant::Roumieu).unwrap();
    assert!(verify_failure(&case, &[]).is_err());
    assert!(verify_failure(&case, &[0.0]).is_err());
}

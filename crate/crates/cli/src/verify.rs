//! Randomized invariant suites behind the `verify` command. Every check
//! compares the library against a direct computation on the same draw.

use gevrey_core::classifier::{beurling_b_minus, beurling_exponent, roumieu_exponent, roumieu_s};
use gevrey_core::evolution::adjoint_apply;
use gevrey_core::operator_calculus::{in_domain, spectral_projection, tv_mass, Factor, VariationMeasure};
use gevrey_core::spectral_model::GevreyRegion;
use gevrey_core::{
    BorelFunction, ComplexPoint, DiagonalOperator, RegionPredicate, SpectrumSpec, StateVector, WeakSolution,
};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::output::{CheckResult, VerifyOutput};

/// Draw counts per check.
#[derive(Clone, Debug)]
pub struct Sizes {
    pub parameter_identities: usize,
    pub variation_pairs: usize,
    pub projection_predicates: usize,
    pub partitions: usize,
    pub domain_spectra: usize,
    pub pairings: usize,
}

impl Default for Sizes {
    fn default() -> Self {
        Self {
            parameter_identities: 1000,
            variation_pairs: 10_000,
            projection_predicates: 1000,
            partitions: 1000,
            domain_spectra: 320,
            pairings: 100,
        }
    }
}

/// Tally for one check.
struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
    max_error: f64,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self { name, cases: 0, failures: 0, max_error: 0.0 }
    }

    fn record(&mut self, ok: bool, error: f64) {
        self.cases += 1;
        self.failures += usize::from(!ok);
        if error > self.max_error || error.is_nan() {
            self.max_error = error;
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name.into(),
            cases: self.cases,
            failures: self.failures,
            max_error: self.max_error,
            passed: self.failures == 0 && self.cases > 0,
        }
    }
}

pub fn ulp(x: f64) -> f64 {
    let x = x.abs();
    f64::from_bits(x.to_bits() + 1) - x
}

fn point(rng: &mut ChaCha8Rng, r: f64) -> Complex<f64> {
    Complex::new(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

fn finite_operator(points: &[Complex<f64>]) -> DiagonalOperator {
    let pts = points.iter().map(|z| ComplexPoint::new(z.re, z.im).expect("finite")).collect();
    DiagonalOperator::new(SpectrumSpec::finite(pts).expect("finite spectrum")).expect("operator")
}

fn finite_vector(coeffs: Vec<Complex<f64>>) -> StateVector {
    StateVector::finite(coeffs).expect("finite coefficients")
}

fn random_case(rng: &mut ChaCha8Rng, max_len: usize) -> (Vec<Complex<f64>>, DiagonalOperator) {
    let n = rng.gen_range(1..=max_len);
    sized_case(rng, n)
}

fn sized_case(rng: &mut ChaCha8Rng, n: usize) -> (Vec<Complex<f64>>, DiagonalOperator) {
    let pts: Vec<_> = (0..n).map(|_| point(rng, 10.0)).collect();
    let a = finite_operator(&pts);
    (pts, a)
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> StateVector {
    finite_vector((0..n).map(|_| point(rng, 1.0)).collect())
}

fn random_predicate(rng: &mut ChaCha8Rng, depth: u32) -> RegionPredicate {
    if depth > 0 && rng.gen_bool(0.5) {
        let a = random_predicate(rng, depth - 1);
        return match rng.gen_range(0..3) {
            0 => a.complement(),
            1 => a.and(random_predicate(rng, depth - 1)),
            _ => a.or(random_predicate(rng, depth - 1)),
        };
    }
    match rng.gen_range(0..6) {
        0 => RegionPredicate::All,
        1 => RegionPredicate::Empty,
        2 => RegionPredicate::ReBelow(rng.gen_range(-10.0..10.0)),
        3 => RegionPredicate::ImBelow(rng.gen_range(-10.0..10.0)),
        4 => {
            let c = point(rng, 10.0);
            RegionPredicate::Disk {
                center: ComplexPoint::new(c.re, c.im).expect("finite"),
                radius: rng.gen_range(0.1..8.0),
            }
        }
        _ => {
            let region = GevreyRegion::new(rng.gen_range(1.0..4.0), rng.gen_range(0.1..3.0), rng.gen_range(0.1..3.0));
            RegionPredicate::Gevrey(region.expect("valid region"))
        }
    }
}

/// `t − s(1 + b₋^{−β})^{1/β}` and `t − s·2^{1/β}/b₋` at the closed-form parameters.
fn parameter_identities(rng: &mut ChaCha8Rng, n: usize) -> CheckResult {
    let mut tally = Tally::new("parameter_identities");
    for _ in 0..n {
        let t: f64 = rng.gen_range(1e-3..1e3);
        let b: f64 = rng.gen_range(1e-2..1e2);
        let beta: f64 = rng.gen_range(1.0..10.0);
        let s = roumieu_s(t, b, beta);
        let e1 = roumieu_exponent(t, s, b, beta).abs() / ulp(t);
        let s2: f64 = rng.gen_range(1e-3..1e3);
        let e2 = beurling_exponent(t, s2, beurling_b_minus(s2, t, beta), beta).abs() / ulp(t);
        tally.record(e1 <= 1.0 && e2 <= 1.0, e1.max(e2));
    }
    tally.finish()
}

/// `v(f, g*, σ(A)) ≤ 4M‖f‖‖g‖` with `M = 1`.
fn variation_bound(rng: &mut ChaCha8Rng, n: usize) -> CheckResult {
    let mut tally = Tally::new("variation_bound");
    for _ in 0..n {
        let (pts, a) = random_case(rng, 16);
        let f = random_vector(rng, pts.len());
        let g = random_vector(rng, pts.len());
        let m = tv_mass(&a, &f, &g, &RegionPredicate::All, &BorelFunction::one()).expect("finite data");
        let bound = f.head_norm() * g.head_norm();
        let ratio = if bound > 0.0 { m.value / bound } else { 0.0 };
        tally.record(m.value <= 4.0 * bound && m.tail_bound == 0.0, ratio);
    }
    tally.finish()
}

/// `E(δ)E(σ) = E(δ ∩ σ)` and `E(δ)² = E(δ)`, bit for bit.
fn projection_algebra(rng: &mut ChaCha8Rng, n: usize) -> CheckResult {
    let mut tally = Tally::new("projection_algebra");
    for _ in 0..n {
        let (pts, a) = random_case(rng, 24);
        let f = random_vector(rng, pts.len());
        let (d1, d2) = (random_predicate(rng, 3), random_predicate(rng, 3));
        let inner = spectral_projection(&a, &d2, &f).expect("finite");
        let composed = spectral_projection(&a, &d1, &inner).expect("finite");
        let meet = spectral_projection(&a, &d1.clone().and(d2.clone()), &f).expect("finite");
        let once = spectral_projection(&a, &d1, &f).expect("finite");
        let twice = spectral_projection(&a, &d1, &once).expect("finite");
        let zero = Complex::new(0.0, 0.0);
        let mask = |keep: &dyn Fn(Complex<f64>) -> bool| -> Vec<Complex<f64>> {
            pts.iter().zip(f.head()).map(|(&z, &c)| if keep(z) { c } else { zero }).collect()
        };
        let direct_once = mask(&|z| d1.contains(z));
        let direct_meet = mask(&|z| d1.contains(z) && d2.contains(z));
        let exact = composed.head() == meet.head()
            && meet.head() == &direct_meet[..]
            && twice.head() == once.head()
            && once.head() == &direct_once[..];
        tally.record(exact, if exact { 0.0 } else { 1.0 });
    }
    tally.finish()
}

/// Re-strips `c_{i−1} ≤ Re λ < c_i` partition the plane; masses add up.
fn additivity(rng: &mut ChaCha8Rng, n: usize) -> CheckResult {
    let mut tally = Tally::new("countable_additivity");
    for _ in 0..n {
        let (pts, a) = random_case(rng, 32);
        let f = random_vector(rng, pts.len());
        let g = random_vector(rng, pts.len());
        let func = BorelFunction::exp(rng.gen_range(0.0..2.0)).expect("finite t");
        let mut cuts: Vec<f64> = (0..rng.gen_range(0..16)).map(|_| rng.gen_range(-10.0..10.0)).collect();
        cuts.sort_by(f64::total_cmp);
        let mut parts = Vec::new();
        let mut lower: Option<f64> = None;
        for &c in cuts.iter().chain(std::iter::once(&f64::INFINITY)) {
            let below = RegionPredicate::ReBelow(c);
            parts.push(match lower {
                None => below,
                Some(l) => below.and(RegionPredicate::ReBelow(l).complement()),
            });
            lower = Some(c);
        }
        let fy = gevrey_core::operator_calculus::apply_function(&func, &a, &f).expect("finite");
        let mu = VariationMeasure::new(&fy, &g);
        // Each atom lies in exactly one part.
        let covered = pts.iter().all(|&z| parts.iter().filter(|p| p.contains(z)).count() == 1);
        let whole = tv_mass(&a, &f, &g, &RegionPredicate::All, &func).expect("finite").value;
        let sum: f64 = parts.iter().map(|p| mu.mass_in(&a, p)).sum();
        let err = (whole - sum).abs() / whole.max(f64::MIN_POSITIVE);
        tally.record(covered && parts.len() <= 16 && err <= 1e-12, err);
    }
    tally.finish()
}

fn function_family(rng: &mut ChaCha8Rng) -> Vec<BorelFunction> {
    let n = rng.gen_range(0..=8);
    let t = rng.gen_range(-1.0..1.0);
    let s = rng.gen_range(0.0..2.0);
    let beta = rng.gen_range(1.0..3.0);
    let power = BorelFunction::power(n);
    let exp = BorelFunction::exp(t).expect("finite t");
    let weight = BorelFunction::gevrey_weight(s, beta).expect("valid weight");
    vec![
        BorelFunction::identity(),
        power.clone(),
        exp.clone(),
        weight.clone(),
        power.mul(&exp),
        weight.mul(&exp),
        BorelFunction::from_factors(vec![Factor::Power(n), Factor::GevreyWeight { s, beta }]).expect("valid factors"),
    ]
}

/// `in_domain` on finite spectra against the plain sum `Σ |F(λ_k) f_k|²`.
/// Sizes cycle through `1..=32`.
fn domain_oracle(rng: &mut ChaCha8Rng, n: usize) -> CheckResult {
    let mut tally = Tally::new("domain_oracle");
    for i in 0..n {
        let (pts, a) = sized_case(rng, i % 32 + 1);
        let coeffs: Vec<Complex<f64>> = (0..pts.len()).map(|_| point(rng, 10.0)).collect();
        let f = finite_vector(coeffs.clone());
        for func in function_family(rng) {
            let direct: f64 = pts.iter().zip(&coeffs).map(|(&z, &c)| (func.eval(z) * c).norm_sqr()).sum::<f64>().ln();
            match in_domain(&func, &a, &f) {
                Ok(v) => {
                    let err = (v.log_head_sq - direct).abs() / direct.abs().max(1.0);
                    let same = v.in_domain == (direct < f64::INFINITY);
                    tally.record(same && err <= 1e-10, err);
                }
                Err(_) => tally.record(false, f64::INFINITY),
            }
        }
    }
    tally.finish()
}

/// Centered difference of `⟨y(t), g⟩` against `⟨y(t), A*g⟩`; sizes cycle through `1..=16`.
fn weak_pairing(rng: &mut ChaCha8Rng, n: usize) -> CheckResult {
    let mut tally = Tally::new("weak_pairing");
    let h = 1e-5;
    for i in 0..n {
        let len = i % 16 + 1;
        let pts: Vec<_> = (0..len).map(|_| Complex::new(rng.gen_range(-3.0..0.5), rng.gen_range(-3.0..3.0))).collect();
        let a = finite_operator(&pts);
        let sol = WeakSolution::new(a.clone(), random_vector(rng, len)).expect("finite spectra are admissible");
        let g = random_vector(rng, len);
        let t = rng.gen_range(0.1..2.0);
        let fd = (sol.pairing(t + h, &g).expect("finite") - sol.pairing(t - h, &g).expect("finite")) / (2.0 * h);
        let y = sol.evaluate(t).expect("finite");
        let exact = y.inner_head(&adjoint_apply(&a, &g).expect("finite"));
        let scale: f64 = pts
            .iter()
            .enumerate()
            .map(|(i, l)| (l * y.coefficient(i + 1) * g.coefficient(i + 1).conj()).norm())
            .sum::<f64>()
            .max(1e-12);
        let err = (fd - exact).norm() / scale;
        tally.record(err < 1e-6, err);
    }
    tally.finish()
}

/// Runs every check from one seed; the checks draw from independent streams.
pub fn run_suite(seed: u64, sizes: &Sizes) -> VerifyOutput {
    let stream = |i: u64| ChaCha8Rng::seed_from_u64(seed ^ (i << 56));
    let checks = vec![
        parameter_identities(&mut stream(1), sizes.parameter_identities),
        variation_bound(&mut stream(2), sizes.variation_pairs),
        projection_algebra(&mut stream(3), sizes.projection_predicates),
        additivity(&mut stream(4), sizes.partitions),
        domain_oracle(&mut stream(5), sizes.domain_spectra),
        weak_pairing(&mut stream(6), sizes.pairings),
    ];
    let all_passed = checks.iter().all(|c| c.passed);
    VerifyOutput { seed, checks, all_passed }
}

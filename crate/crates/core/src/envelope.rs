//! Log-domain growth expressions `c + d·ln k + Σ a_j k^{e_j}` and rigorous
//! bounds for series whose terms are `e^{L(k)}`.
//!
//! An expression is used either as an upper envelope of `ln |term_k|`
//! (to certify convergence with an explicit tail bound) or as a lower
//! envelope valid from some index on (to certify divergence).

use crate::scalar::{log_add_exp, LogSum, Real};

/// Indices summed explicitly when the asymptotic bound needs a later start.
const MAX_EXPLICIT_TERMS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct PowerLog<T> {
    constant: T,
    log_coef: T,
    /// `(exponent, coefficient)`, exponents distinct and nonzero, sorted descending.
    terms: Vec<(T, T)>,
}

impl<T: Real> PowerLog<T> {
    pub fn zero() -> Self {
        Self::constant(T::zero())
    }

    pub fn constant(c: T) -> Self {
        Self { constant: c, log_coef: T::zero(), terms: Vec::new() }
    }

    /// `ln 0`: every term vanishes.
    pub fn minus_infinity() -> Self {
        Self::constant(T::neg_infinity())
    }

    pub fn log(d: T) -> Self {
        Self { constant: T::zero(), log_coef: d, terms: Vec::new() }
    }

    pub fn power(coef: T, exponent: T) -> Self {
        let mut out = Self::zero();
        out.push_term(exponent, coef);
        out
    }

    fn push_term(&mut self, exponent: T, coef: T) {
        if coef == T::zero() {
            return;
        }
        if exponent == T::zero() {
            self.constant = self.constant + coef;
            return;
        }
        match self.terms.iter_mut().find(|(e, _)| *e == exponent) {
            Some((_, c)) => *c = *c + coef,
            None => self.terms.push((exponent, coef)),
        }
        self.terms.retain(|(_, c)| *c != T::zero());
        self.terms.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite exponents"));
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.constant = self.constant + other.constant;
        out.log_coef = self.log_coef + other.log_coef;
        for &(e, c) in &other.terms {
            out.push_term(e, c);
        }
        out
    }

    pub fn scale(&self, factor: T) -> Self {
        if factor == T::zero() {
            return Self::zero();
        }
        Self {
            constant: self.constant * factor,
            log_coef: self.log_coef * factor,
            terms: self.terms.iter().map(|&(e, c)| (e, c * factor)).collect(),
        }
    }

    pub fn constant_part(&self) -> T {
        self.constant
    }

    pub fn log_coef(&self) -> T {
        self.log_coef
    }

    pub fn terms(&self) -> &[(T, T)] {
        &self.terms
    }

    pub fn is_minus_infinity(&self) -> bool {
        self.constant == T::neg_infinity()
    }

    pub fn eval(&self, k: T) -> T {
        if self.is_minus_infinity() {
            return T::neg_infinity();
        }
        let mut v = self.constant;
        if self.log_coef != T::zero() {
            v = v + self.log_coef * k.ln();
        }
        for &(e, c) in &self.terms {
            v = v + c * k.powf(e);
        }
        v
    }

    /// Highest positive exponent with its coefficient.
    pub fn leading(&self) -> Option<(T, T)> {
        self.terms.first().copied().filter(|(e, _)| *e > T::zero())
    }

    /// `ln` of an upper bound on `Σ_{k ≥ from} e^{L(k)}`, assuming `L` bounds
    /// `ln |term_k|` from above for every `k ≥ from`. `None` when no bound
    /// can be certified (the series may diverge).
    pub fn log_tail_sum(&self, from: usize) -> Option<T> {
        if self.is_minus_infinity() {
            return Some(T::neg_infinity());
        }
        let from = from.max(1);
        match self.leading() {
            Some((_, c)) if c > T::zero() => None,
            Some((e_lead, _)) => {
                let mut explicit = LogSum::new();
                let mut start = from;
                loop {
                    if let Some(b) = self.stretched_tail(start, e_lead) {
                        return Some(log_add_exp(explicit.ln(), b));
                    }
                    let next = (start.saturating_mul(2)).max(start + 16);
                    if next - from > MAX_EXPLICIT_TERMS {
                        return None;
                    }
                    for k in start..next {
                        explicit.add(self.eval(T::from_index(k)));
                    }
                    start = next;
                }
            }
            None => self.polynomial_tail(from),
        }
    }

    /// Tail of `e^{c} k^{d}` after folding decaying powers into the constant.
    fn polynomial_tail(&self, from: usize) -> Option<T> {
        let d = self.log_coef;
        if d >= -T::one() {
            return None;
        }
        let x = T::from_index(from);
        let c = self.folded_constant(x);
        let lx = x.ln();
        let integral = (d + T::one()) * lx - (-d - T::one()).ln();
        Some(c + log_add_exp(d * lx, integral))
    }

    fn folded_constant(&self, x: T) -> T {
        self.terms
            .iter()
            .filter(|(e, c)| *e < T::zero() && *c > T::zero())
            .fold(self.constant, |acc, &(e, c)| acc + c * x.powf(e))
    }

    /// Bound on `Σ_{k ≥ x1}` once every lower-order term is folded into the
    /// leading stretched exponential `e^{c - μ k^{e_lead}}`.
    fn stretched_tail(&self, x1: usize, e_lead: T) -> Option<T> {
        let x = T::from_index(x1);
        let lx = x.ln();
        let mut c = self.folded_constant(x);
        let mut a = T::zero();
        for &(e, coef) in self.terms.iter().filter(|(e, _)| *e > T::zero()) {
            if e == e_lead {
                a = a + coef;
            } else if coef > T::zero() {
                a = a + coef * x.powf(e - e_lead);
            }
        }
        let d = self.log_coef;
        if d < T::zero() {
            c = c + d * lx;
        } else if d > T::zero() {
            // ln k / k^e is non-increasing once ln k ≥ 1/e.
            if lx * e_lead < T::one() {
                return None;
            }
            a = a + d * lx / x.powf(e_lead);
        }
        if a >= T::zero() {
            return None;
        }
        let mu = -a;
        let z = mu * x.powf(e_lead);
        if e_lead >= T::one() {
            // Convexity: k^e ≥ x^e + e·x^{e-1}(k - x).
            let r = mu * e_lead * x.powf(e_lead - T::one());
            let denom = -(-r).exp_m1();
            if denom <= T::zero() {
                return None;
            }
            return Some(c - z - denom.ln());
        }
        // Decreasing terms: Σ_{k≥x} g(k) ≤ g(x) + ∫_x^∞ g, and the integral is an
        // upper incomplete gamma Γ(s, z) ≤ z^{s-1} e^{-z} / (1 - (s-1)/z).
        let s = e_lead.recip();
        let two = T::lit(2.0);
        if z <= two * (s - T::one()) {
            return None;
        }
        let ln_integral =
            -e_lead.ln() - s * mu.ln() + (s - T::one()) * z.ln() - z - (T::one() - (s - T::one()) / z).ln();
        Some(log_add_exp(c - z, c + ln_integral))
    }

    /// For a lower envelope valid eventually: the series `Σ e^{L(k)}` diverges.
    pub fn diverges(&self) -> bool {
        if self.is_minus_infinity() || !self.constant.is_finite() {
            return false;
        }
        match self.leading() {
            Some((_, c)) => c > T::zero(),
            None => self.log_coef >= -T::one(),
        }
    }

    /// `s·self + rest` has a positive leading coefficient for every `s > 0`:
    /// `self` leads with a positive term whose exponent beats every negative
    /// power term of `rest`.
    pub fn dominates_for_every_scale(&self, rest: &Self) -> bool {
        if rest.is_minus_infinity() || !rest.constant.is_finite() {
            return false;
        }
        match self.leading() {
            Some((e_w, c_w)) if c_w > T::zero() => rest.terms.iter().all(|&(e, c)| c > T::zero() || e < e_w),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn direct_tail(l: &PowerLog<f64>, from: usize, to: usize) -> f64 {
        let mut s = LogSum::new();
        for k in from..=to {
            s.add(l.eval(k as f64));
        }
        s.ln()
    }

    #[test]
    fn merges_equal_exponents() {
        let l = PowerLog::power(2.0, 1.5).add(&PowerLog::power(-2.0, 1.5));
        assert!(l.terms().is_empty());
        let m = PowerLog::power(1.0, 0.0).add(&PowerLog::constant(2.0));
        assert_eq!(m.constant_part(), 3.0);
    }

    #[test]
    fn polynomial_tail_bounds_zeta() {
        // Σ_{k≥1} k^{-4} = π⁴/90.
        let l = PowerLog::log(-4.0f64);
        let b = l.log_tail_sum(1).unwrap().exp();
        let exact = std::f64::consts::PI.powi(4) / 90.0;
        assert!(b >= exact && b < exact + 0.5);
        let tail = l.log_tail_sum(1000).unwrap().exp();
        assert!(tail >= 1.0 / (3.0 * 1000f64.powi(3)));
        assert!(tail < 1.01e-9 / 3.0 + 1e-12);
    }

    #[test]
    fn exponential_tails_are_upper_bounds() {
        // ln term = -k + 10 ln k
        let l = PowerLog::power(-1.0f64, 1.0).add(&PowerLog::log(10.0));
        for from in [1usize, 5, 50, 200] {
            let b = l.log_tail_sum(from).unwrap();
            assert!(b >= direct_tail(&l, from, from + 5000) - 1e-12);
        }
    }

    #[test]
    fn stretched_tails_are_upper_bounds() {
        let l = PowerLog::power(-0.7f64, 0.5).add(&PowerLog::power(0.3, 0.25)).add(&PowerLog::log(-2.0));
        for from in [1usize, 10, 100, 1000] {
            let b = l.log_tail_sum(from).unwrap();
            let direct = direct_tail(&l, from, from + 400_000);
            assert!(b >= direct, "from {from}: {b} < {direct}");
            assert!(b < direct + 3.0);
        }
    }

    #[test]
    fn positive_leading_term_is_not_summable() {
        let l = PowerLog::power(1e-6f64, 0.1).add(&PowerLog::log(-10.0));
        assert!(l.log_tail_sum(1).is_none());
        assert!(l.diverges());
        assert!(PowerLog::log(-1.0f64).diverges());
        assert!(!PowerLog::log(-1.5f64).diverges());
        assert!(PowerLog::log(-1.0f64).log_tail_sum(3).is_none());
    }

    #[test]
    fn scale_domination() {
        let w = PowerLog::power(1.0f64, 1.5);
        let rest = PowerLog::power(-3.0, 1.0).add(&PowerLog::log(-4.0));
        assert!(w.dominates_for_every_scale(&rest));
        let rest2 = PowerLog::power(-1.0, 2.0);
        assert!(!w.dominates_for_every_scale(&rest2));
    }

    #[test]
    fn single_precision_tail() {
        let l = PowerLog::power(-2.0f32, 1.0).add(&PowerLog::log(3.0));
        let b = l.log_tail_sum(10).unwrap();
        let mut s = LogSum::new();
        for k in 10..2000 {
            s.add(l.eval(k as f32));
        }
        assert!(b >= s.ln() - 1e-4);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn tail_bound_dominates_partial_sums(
            mu in 0.05f64..3.0,
            e in 0.3f64..2.5,
            d in -3.0f64..6.0,
            c in -5.0f64..5.0,
            from in 1usize..300,
        ) {
            let l = PowerLog::constant(c).add(&PowerLog::power(-mu, e)).add(&PowerLog::log(d));
            if let Some(b) = l.log_tail_sum(from) {
                let direct = direct_tail(&l, from, from + 20_000);
                prop_assert!(b >= direct - 1e-9 * direct.abs().max(1.0));
            }
        }
    }
}

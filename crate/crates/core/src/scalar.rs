use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point scalar the whole library is generic over.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal; exact for every constant used in this crate.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    fn from_index(k: usize) -> Self {
        Self::from_usize(k).expect("index representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `ln(e^a + e^b)` without overflow; `-inf` is the additive identity.
pub fn log_add_exp<T: Real>(a: T, b: T) -> T {
    if a == T::neg_infinity() {
        return b;
    }
    if b == T::neg_infinity() {
        return a;
    }
    if a == T::infinity() || b == T::infinity() {
        return T::infinity();
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Running `ln Σ e^{x_i}`.
#[derive(Clone, Copy, Debug)]
pub struct LogSum<T> {
    value: T,
}

impl<T: Real> Default for LogSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> LogSum<T> {
    pub fn new() -> Self {
        Self { value: T::neg_infinity() }
    }

    pub fn add(&mut self, x: T) {
        self.value = log_add_exp(self.value, x);
    }

    pub fn ln(&self) -> T {
        self.value
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_add_exp_matches_direct() {
        let v: f64 = log_add_exp(1.0f64.ln(), 2.0f64.ln());
        assert!((v.exp() - 3.0).abs() < 1e-14);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 0.5), 0.5);
    }

    #[test]
    fn log_sum_survives_huge_terms() {
        let mut s = LogSum::<f64>::new();
        s.add(1000.0);
        s.add(1000.0);
        assert!((s.ln() - (1000.0 + 2f64.ln())).abs() < 1e-12);
        let mut t = LogSum::<f32>::new();
        t.add(80.0);
        t.add(-80.0);
        assert!((t.ln() - 80.0).abs() < 1e-5);
    }
}

//! Parameter choices that make the exponential estimates in the regularity
//! arguments close up exactly.

use crate::scalar::Real;

fn roumieu_gauge<T: Real>(b_minus: T, beta: T) -> T {
    (T::one() + b_minus.powf(-beta)).powf(beta.recip())
}

/// `s = t (1 + b₋^{−β})^{−1/β}`.
pub fn roumieu_s<T: Real>(t: T, b_minus: T, beta: T) -> T {
    t / roumieu_gauge(b_minus, beta)
}

/// `t − s (1 + b₋^{−β})^{1/β}`, with a single rounding.
pub fn roumieu_exponent<T: Real>(t: T, s: T, b_minus: T, beta: T) -> T {
    (-s).mul_add(roumieu_gauge(b_minus, beta), t)
}

/// `b₋ = 2^{1/β} s / t`.
pub fn beurling_b_minus<T: Real>(s: T, t: T, beta: T) -> T {
    T::lit(2.0).powf(beta.recip()) * s / t
}

/// `t − s 2^{1/β} / b₋`, evaluated as `(t b₋ − s 2^{1/β}) / b₋`.
pub fn beurling_exponent<T: Real>(t: T, s: T, b_minus: T, beta: T) -> T {
    let q = T::lit(2.0).powf(beta.recip()) * s;
    t.mul_add(b_minus, -q) / b_minus
}

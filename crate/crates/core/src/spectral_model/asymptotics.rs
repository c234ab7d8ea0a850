//! Exact large-`n` decisions for power-law spectra against Gevrey regions.

use super::region::GevreyRegion;
use super::spectrum::{PowerLaw, SignPattern};
use crate::scalar::Real;

/// Where `λ_n` lies for all sufficiently large `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tendency {
    /// Eventually inside the region.
    Inside,
    /// Outside the region for infinitely many `n`.
    Outside,
    /// Sub-leading behaviour too delicate to decide.
    Unknown,
}

pub(crate) fn nearly_equal<T: Real>(a: T, b: T) -> bool {
    let scale = T::one().max(a.abs()).max(b.abs());
    (a - b).abs() <= T::lit(64.0) * T::epsilon() * scale
}

/// Comparison of `p_R` against `p_I / β` when both parts grow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Race {
    ReFaster,
    Tie,
    ImFaster,
}

fn race<T: Real>(pl: &PowerLaw<T>, beta: T) -> Option<Race> {
    let (pr, pi) = (pl.re_growth()?, pl.im_growth()?);
    let q = pi / beta;
    Some(if nearly_equal(pr, q) {
        Race::Tie
    } else if pr > q {
        Race::ReFaster
    } else {
        Race::ImFaster
    })
}

/// Eventual membership of `λ_n` in a fixed region.
pub fn eventual_membership<T: Real>(pl: &PowerLaw<T>, region: &GevreyRegion<T>) -> Tendency {
    match (pl.re_growth(), pl.im_growth()) {
        (_, None) => Tendency::Inside,
        (None, Some(_)) => Tendency::Outside,
        (Some(_), Some(_)) => {
            let b = if pl.re_sign > 0 { region.b_plus() } else { region.b_minus() };
            match race(pl, region.beta()).expect("both parts grow") {
                Race::ReFaster => Tendency::Inside,
                Race::ImFaster => Tendency::Outside,
                Race::Tie => {
                    let rhs = b * pl.im_coef.powf(region.beta().recip());
                    if nearly_equal(pl.re_coef, rhs) {
                        coefficient_tie(pl, region.beta(), b)
                    } else if pl.re_coef > rhs {
                        Tendency::Inside
                    } else {
                        Tendency::Outside
                    }
                }
            }
        }
    }
}

/// Leading terms of `σ Re λ_n` and `b|Im λ_n|^{1/β}` cancel; decide from offsets.
fn coefficient_tie<T: Real>(pl: &PowerLaw<T>, beta: T, b: T) -> Tendency {
    let sigma = T::from(pl.re_sign).expect("sign");
    let c0 = sigma * pl.offset.re();
    let w = pl.re_oscillation;
    let oi = pl.offset.im();
    let verdict = |inside: bool| if inside { Tendency::Inside } else { Tendency::Outside };
    if oi == T::zero() {
        return verdict(c0 >= w);
    }
    if beta == T::one() {
        // |Im λ_n| = a_I n^{p_I} + s_n·o_i exactly once the leading term dominates.
        let shift = match pl.im_sign_pattern {
            SignPattern::Plus => b * oi,
            SignPattern::Minus => -b * oi,
            SignPattern::Alternating => b * oi.abs(),
        };
        return verdict(c0 - shift >= w);
    }
    // The imaginary offset contributes a vanishing correction of sign −s_n·o_i.
    if c0 != w {
        return verdict(c0 > w);
    }
    if w > T::zero() {
        return Tendency::Unknown;
    }
    match pl.im_sign_pattern {
        SignPattern::Plus => verdict(oi < T::zero()),
        SignPattern::Minus => verdict(oi > T::zero()),
        SignPattern::Alternating => Tendency::Outside,
    }
}

/// Some `b₋, b₊ > 0` make the complement of the region bounded.
pub fn roumieu_exists<T: Real>(pl: &PowerLaw<T>, beta: T) -> bool {
    match (pl.re_growth(), pl.im_growth()) {
        (_, None) => true,
        (None, Some(_)) => false,
        _ => race(pl, beta) != Some(Race::ImFaster),
    }
}

/// Some `b₊` works for every `b₋`.
pub fn beurling_exists<T: Real>(pl: &PowerLaw<T>, beta: T) -> bool {
    match (pl.re_growth(), pl.im_growth()) {
        (_, None) => true,
        (None, Some(_)) => false,
        _ if pl.re_sign > 0 => race(pl, beta) != Some(Race::ImFaster),
        _ => race(pl, beta) == Some(Race::ReFaster),
    }
}

/// Infimum of the orders `β ≥ 1` satisfying the Roumieu criterion; `+∞` when none does.
pub fn minimal_order<T: Real>(pl: &PowerLaw<T>) -> T {
    match (pl.re_growth(), pl.im_growth()) {
        (_, None) => T::one(),
        (None, Some(_)) => T::infinity(),
        (Some(pr), Some(pi)) => (pi / pr).max(T::one()),
    }
}

use serde::{Deserialize, Serialize};

use super::point::ComplexPoint;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `{Re λ ≤ −b₋|Im λ|^{1/β}} ∪ {Re λ ≥ b₊|Im λ|^{1/β}}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct GevreyRegion<T> {
    beta: T,
    b_minus: T,
    b_plus: T,
}

impl<T: Real> GevreyRegion<T> {
    pub fn new(beta: T, b_minus: T, b_plus: T) -> Result<Self> {
        if !(beta >= T::one()) || !beta.is_finite() {
            return Err(Error::InvalidSpec(format!("region order beta = {beta} must be finite and >= 1")));
        }
        if !(b_minus > T::zero() && b_plus > T::zero()) || !b_minus.is_finite() || !b_plus.is_finite() {
            return Err(Error::InvalidSpec("region constants must be finite and positive".into()));
        }
        Ok(Self { beta, b_minus, b_plus })
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn b_minus(&self) -> T {
        self.b_minus
    }

    pub fn b_plus(&self) -> T {
        self.b_plus
    }

    /// `|Im λ|^{1/β}`.
    pub(crate) fn gauge(&self, im: T) -> T {
        if self.beta == T::one() {
            im.abs()
        } else {
            im.abs().powf(self.beta.recip())
        }
    }

    pub fn contains(&self, lambda: &ComplexPoint<T>) -> bool {
        self.contains_raw(lambda.re(), lambda.im())
    }

    pub(crate) fn contains_raw(&self, re: T, im: T) -> bool {
        let g = self.gauge(im);
        re <= -self.b_minus * g || re >= self.b_plus * g
    }
}

pub fn region_contains<T: Real>(lambda: &ComplexPoint<T>, region: &GevreyRegion<T>) -> bool {
    region.contains(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(re: f64, im: f64) -> ComplexPoint<f64> {
        ComplexPoint::new(re, im).unwrap()
    }

    #[test]
    fn worked_examples() {
        let unit = GevreyRegion::new(2.0, 1.0, 1.0).unwrap();
        assert!(region_contains(&pt(4.0, 0.0), &unit));
        assert!(!region_contains(&pt(1.0, 16.0), &unit));
        // −9 ≤ −4·2 = −8 holds, so b₋ = 4 already contains the point; b₋ = 5 does not.
        let loose = GevreyRegion::new(2.0, 4.0, 1.0).unwrap();
        assert!(region_contains(&pt(-9.0, 4.0), &loose));
        let narrow = GevreyRegion::new(2.0, 5.0, 1.0).unwrap();
        assert!(!region_contains(&pt(-9.0, 4.0), &narrow));
        let boundary = GevreyRegion::new(2.0, 4.5, 1.0).unwrap();
        assert!(region_contains(&pt(-9.0, 4.0), &boundary));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(GevreyRegion::new(0.5, 1.0, 1.0).is_err());
        assert!(GevreyRegion::new(2.0, 0.0, 1.0).is_err());
        assert!(GevreyRegion::new(f64::NAN, 1.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn shrinking_constants_is_monotone(
            re in -1e3f64..1e3, im in -1e3f64..1e3,
            beta in 1.0f64..5.0, bm in 0.01f64..10.0, bp in 0.01f64..10.0,
            shrink_m in 0.0f64..1.0, shrink_p in 0.0f64..1.0,
        ) {
            let big = GevreyRegion::new(beta, bm, bp).unwrap();
            let small = GevreyRegion::new(beta, bm * shrink_m.max(1e-3), bp * shrink_p.max(1e-3)).unwrap();
            let p = pt(re, im);
            prop_assert!(!big.contains(&p) || small.contains(&p));
        }

        #[test]
        fn nonnegative_reals_always_inside(re in 0.0f64..1e6, beta in 1.0f64..5.0, bm in 0.01f64..10.0, bp in 0.01f64..10.0) {
            let r = GevreyRegion::new(beta, bm, bp).unwrap();
            prop_assert!(r.contains(&pt(re, 0.0)));
        }
    }
}

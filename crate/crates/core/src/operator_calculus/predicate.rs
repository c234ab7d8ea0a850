use num_complex::Complex;

use crate::scalar::Real;
use crate::spectral_model::{ComplexPoint, GevreyRegion};

/// A Borel set of the plane, decidable pointwise.
#[derive(Clone, Debug, PartialEq)]
pub enum RegionPredicate<T> {
    All,
    Empty,
    /// `Re λ < c`.
    ReBelow(T),
    /// `Im λ < c`.
    ImBelow(T),
    /// `|λ − center| < radius`.
    Disk {
        center: ComplexPoint<T>,
        radius: T,
    },
    Gevrey(GevreyRegion<T>),
    Not(Box<RegionPredicate<T>>),
    And(Box<RegionPredicate<T>>, Box<RegionPredicate<T>>),
    Or(Box<RegionPredicate<T>>, Box<RegionPredicate<T>>),
}

impl<T: Real> RegionPredicate<T> {
    pub fn contains(&self, lambda: Complex<T>) -> bool {
        match self {
            RegionPredicate::All => true,
            RegionPredicate::Empty => false,
            RegionPredicate::ReBelow(c) => lambda.re < *c,
            RegionPredicate::ImBelow(c) => lambda.im < *c,
            RegionPredicate::Disk { center, radius } => (lambda - center.to_complex()).norm() < *radius,
            RegionPredicate::Gevrey(region) => region.contains_raw(lambda.re, lambda.im),
            RegionPredicate::Not(p) => !p.contains(lambda),
            RegionPredicate::And(a, b) => a.contains(lambda) && b.contains(lambda),
            RegionPredicate::Or(a, b) => a.contains(lambda) || b.contains(lambda),
        }
    }

    pub fn and(self, other: Self) -> Self {
        RegionPredicate::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Self) -> Self {
        RegionPredicate::Or(Box::new(self), Box::new(other))
    }

    pub fn complement(self) -> Self {
        RegionPredicate::Not(Box::new(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_structure() {
        let left = RegionPredicate::ReBelow(0.0f64);
        let z = Complex::new(-1.0, 2.0);
        assert!(left.contains(z));
        assert!(!left.clone().complement().contains(z));
        let disk = RegionPredicate::Disk { center: ComplexPoint::new(0.0, 2.0).unwrap(), radius: 0.5 };
        assert!(left.clone().and(disk.clone()).contains(Complex::new(-0.1, 2.0)));
        assert!(!left.clone().and(disk.clone()).contains(z));
        assert!(left.or(disk).contains(z));
        assert!(!RegionPredicate::<f64>::Empty.contains(z));
    }
}

//! Spectra, Gevrey regions and sector geometry.

mod asymptotics;
mod point;
mod region;
mod spectrum;

use serde::{Deserialize, Serialize};

pub(crate) use asymptotics::nearly_equal;
pub use asymptotics::{beurling_exists, eventual_membership, minimal_order, roumieu_exists, Tendency};
pub use point::{principal_arg, ComplexPoint};
pub use region::{region_contains, GevreyRegion};
pub use spectrum::{ModulusLower, PowerLaw, SignPattern, SpectrumSpec};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Sector angles at or below this are reported as degenerate.
pub const DEGENERATE_SECTOR: f64 = 1e-9;

/// Indices scanned when looking for an escaping eigenvalue far out in a power law.
const ESCAPE_SCAN_START: usize = 1_000_000;
const ESCAPE_SCAN_DOUBLINGS: u32 = 40;
const ESCAPE_SCAN_WIDTH: usize = 64;

/// Points of an undecided power-law tie that are scanned heuristically.
const TIE_SCAN_LEN: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundednessMethod {
    ExactFinite,
    ExactAsymptotic,
    SampledHeuristic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct BoundednessVerdict<T> {
    pub bounded: bool,
    pub method: BoundednessMethod,
    pub escape_witness: Option<ComplexPoint<T>>,
    /// Modulus above which points were scanned; zero for exact decisions.
    pub radius_checked: T,
}

impl<T: Real> BoundednessVerdict<T> {
    /// A heuristic scan that found nothing: neither bounded nor refuted.
    pub fn is_undecided(&self) -> bool {
        self.method == BoundednessMethod::SampledHeuristic && self.escape_witness.is_none()
    }

    fn exact(bounded: bool, method: BoundednessMethod, escape_witness: Option<ComplexPoint<T>>) -> Self {
        Self { bounded, method, escape_witness, radius_checked: T::zero() }
    }
}

/// Whether `σ(A) \ ℐ^β_{b₋,b₊}` is bounded.
pub fn complement_bounded<T: Real>(spec: &SpectrumSpec<T>, region: &GevreyRegion<T>) -> Result<BoundednessVerdict<T>> {
    spec.validate()?;
    if let SpectrumSpec::Finite { .. } = spec {
        return Ok(BoundednessVerdict::exact(true, BoundednessMethod::ExactFinite, None));
    }
    let Some(law) = spec.tail_law() else {
        return Ok(scan_points(spec.explicit_points().iter().copied(), spec.scan_radius(), region));
    };
    match eventual_membership(law, region) {
        Tendency::Inside => Ok(BoundednessVerdict::exact(true, BoundednessMethod::ExactAsymptotic, None)),
        Tendency::Outside => {
            Ok(BoundednessVerdict::exact(false, BoundednessMethod::ExactAsymptotic, escape_witness(law, region)))
        }
        Tendency::Unknown => {
            let start = spec.tail_start();
            let points = (start..start + TIE_SCAN_LEN).map(|n| ComplexPoint::from_complex_unchecked(law.eigenvalue(n)));
            let radius = law.eigenvalue(start + TIE_SCAN_LEN / 2).norm();
            Ok(scan_points(points, radius, region))
        }
    }
}

fn scan_points<T: Real>(
    points: impl Iterator<Item = ComplexPoint<T>>,
    radius: T,
    region: &GevreyRegion<T>,
) -> BoundednessVerdict<T> {
    let escape = points.filter(|p| p.norm() > radius).find(|p| !region.contains(p));
    BoundednessVerdict {
        bounded: false,
        method: BoundednessMethod::SampledHeuristic,
        escape_witness: escape,
        radius_checked: radius,
    }
}

/// A far-out eigenvalue outside the region, when one is found by scanning.
fn escape_witness<T: Real>(law: &PowerLaw<T>, region: &GevreyRegion<T>) -> Option<ComplexPoint<T>> {
    (0..=ESCAPE_SCAN_DOUBLINGS)
        .flat_map(|j| {
            let base = ESCAPE_SCAN_START << j;
            base..base + ESCAPE_SCAN_WIDTH
        })
        .map(|n| law.eigenvalue(n))
        .take_while(|z| z.re.is_finite() && z.im.is_finite())
        .map(ComplexPoint::from_complex_unchecked)
        .find(|p| !region.contains(p))
}

/// The widest canonical region used for heuristic refutation.
pub fn widest_region<T: Real>(beta: T) -> GevreyRegion<T> {
    let b = T::lit(2f64.powi(-20));
    GevreyRegion::new(beta, b, b).expect("valid region")
}

/// Half-opening `θ ∈ (0, π/2]` of the sector of analytic continuation.
pub fn sector_angle<T: Real>(spec: &SpectrumSpec<T>) -> Result<T> {
    spec.validate()?;
    let half_pi = T::FRAC_PI_2();
    if let SpectrumSpec::Finite { .. } = spec {
        return Ok(half_pi);
    }
    let Some(law) = spec.tail_law() else {
        return sampled_sector(spec);
    };
    if !roumieu_exists(law, T::one()) {
        return Err(Error::UndefinedSector(
            "eigenvalues escape every region |Re λ| >= b|Im λ|; solutions are not analytic".into(),
        ));
    }
    let left_tail = law.re_sign < 0 && law.re_growth().is_some();
    match (left_tail, law.im_growth()) {
        (true, Some(pi)) if nearly_equal(pi, law.re_exp) => Ok((law.re_coef / law.im_coef).atan()),
        _ => Ok(half_pi),
    }
}

fn sampled_sector<T: Real>(spec: &SpectrumSpec<T>) -> Result<T> {
    let radius = spec.scan_radius();
    let far: Vec<_> = spec.explicit_points().iter().filter(|p| p.norm() > radius).collect();
    if far.iter().any(|p| !widest_region(T::one()).contains(p)) {
        return Err(Error::UndefinedSector(
            "a sampled eigenvalue beyond the scan radius escapes every analytic region".into(),
        ));
    }
    let half_pi = T::FRAC_PI_2();
    Ok(far.iter().filter(|p| p.re() < T::zero()).map(|p| p.arg().abs() - half_pi).fold(half_pi, T::min))
}

pub fn sector_is_degenerate<T: Real>(theta: T) -> bool {
    theta.as_f64() <= DEGENERATE_SECTOR
}

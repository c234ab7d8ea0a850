use num_complex::Complex;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A finite complex number; serialized as `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ComplexPoint<T> {
    re: T,
    im: T,
}

impl<T: Real> ComplexPoint<T> {
    pub fn new(re: T, im: T) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::InvalidSpec(format!("non-finite complex point ({re}, {im})")));
        }
        Ok(Self { re, im })
    }

    pub(crate) fn from_complex_unchecked(z: Complex<T>) -> Self {
        Self { re: z.re, im: z.im }
    }

    pub fn re(&self) -> T {
        self.re
    }

    pub fn im(&self) -> T {
        self.im
    }

    pub fn to_complex(self) -> Complex<T> {
        Complex::new(self.re, self.im)
    }

    pub fn norm(&self) -> T {
        self.re.hypot(self.im)
    }

    /// Principal argument in `(-π, π]`, with `arg 0 = 0`.
    pub fn arg(&self) -> T {
        principal_arg(self.to_complex())
    }
}

pub fn principal_arg<T: Real>(z: Complex<T>) -> T {
    // atan2(-0.0, x<0) would give -π.
    let im = if z.im == T::zero() { T::zero() } else { z.im };
    im.atan2(z.re)
}

impl<T: Real> TryFrom<Complex<T>> for ComplexPoint<T> {
    type Error = Error;

    fn try_from(z: Complex<T>) -> Result<Self> {
        Self::new(z.re, z.im)
    }
}

impl<T: Real> Serialize for ComplexPoint<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.re, self.im].serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for ComplexPoint<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [re, im] = <[T; 2]>::deserialize(d)?;
        Self::new(re, im).map_err(D::Error::custom)
    }
}

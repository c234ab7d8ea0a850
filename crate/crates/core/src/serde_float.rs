//! Serde adapters that keep `±inf` and `NaN` as the strings `"inf"`,
//! `"-inf"` and `"nan"`, since JSON numbers cannot carry them.
//!
//! Use with `#[serde(with = "gevrey_core::serde_float")]`, or the
//! [`option`] submodule for `Option<T>` fields.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::Real;

#[derive(Serialize, Deserialize)]
#[serde(untagged, bound = "T: Real")]
enum Repr<T> {
    Number(T),
    Text(String),
}

fn encode<T: Real>(v: T) -> Repr<T> {
    if v.is_finite() {
        Repr::Number(v)
    } else if v.is_nan() {
        Repr::Text("nan".into())
    } else if v > T::zero() {
        Repr::Text("inf".into())
    } else {
        Repr::Text("-inf".into())
    }
}

fn decode<T: Real, E: serde::de::Error>(r: Repr<T>) -> Result<T, E> {
    match r {
        Repr::Number(v) => Ok(v),
        Repr::Text(s) => match s.as_str() {
            "inf" => Ok(T::infinity()),
            "-inf" => Ok(T::neg_infinity()),
            "nan" => Ok(T::nan()),
            other => Err(E::custom(format!("expected a number, \"inf\", \"-inf\" or \"nan\", found {other:?}"))),
        },
    }
}

pub fn serialize<T: Real, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    encode(*v).serialize(s)
}

pub fn deserialize<'de, T: Real, D: Deserializer<'de>>(d: D) -> Result<T, D::Error> {
    decode(Repr::deserialize(d)?)
}

pub mod option {
    use super::*;

    pub fn serialize<T: Real, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
        v.map(encode).serialize(s)
    }

    pub fn deserialize<'de, T: Real, D: Deserializer<'de>>(d: D) -> Result<Option<T>, D::Error> {
        Option::<Repr<T>>::deserialize(d)?.map(decode).transpose()
    }
}

#[cfg(test)]
mod tests {
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize, Debug, PartialEq)]
    struct Row {
        #[serde(with = "super")]
        x: f64,
        #[serde(with = "super::option")]
        y: Option<f64>,
    }

    #[test]
    fn round_trips_non_finite_values() {
        for (x, y) in [(1.5, None), (f64::INFINITY, Some(f64::NEG_INFINITY)), (-0.0, Some(2.0))] {
            let row = Row { x, y };
            let s = serde_json::to_string(&row).unwrap();
            assert_eq!(serde_json::from_str::<Row>(&s).unwrap(), row);
        }
        let s = serde_json::to_string(&Row { x: f64::INFINITY, y: None }).unwrap();
        assert_eq!(s, r#"{"x":"inf","y":null}"#);
        let nan: Row = serde_json::from_str(r#"{"x":"nan","y":3}"#).unwrap();
        assert!(nan.x.is_nan());
        assert!(serde_json::from_str::<Row>(r#"{"x":"big","y":null}"#).is_err());
    }
}

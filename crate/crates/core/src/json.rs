//! Serde adapters: complex numbers as `[re, im]` (a bare real is accepted on input), the point at infinity as `"inf"`.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        Ok(Repr::deserialize(d)?.into())
    }
}

pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let v = Vec::<Repr>::deserialize(d)?;
        Ok(v.into_iter().map(Complex64::from).collect())
    }
}

pub mod complex_vec_opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Vec<Complex64>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref()
            .map(|v| v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Option<Vec<Complex64>>, D::Error> {
        let v = Option::<Vec<Repr>>::deserialize(d)?;
        Ok(v.map(|v| v.into_iter().map(Complex64::from).collect()))
    }
}

pub mod complex_opt {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        z.map(|z| [z.re, z.im]).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Complex64>, D::Error> {
        Ok(Option::<Repr>::deserialize(d)?.map(Complex64::from))
    }
}

/// A complex number written as `[re, im]` or as a bare real.
#[derive(Deserialize)]
#[serde(untagged)]
enum Repr {
    Real(f64),
    Pair([f64; 2]),
}

impl From<Repr> for Complex64 {
    fn from(r: Repr) -> Self {
        match r {
            Repr::Real(x) => Complex64::new(x, 0.0),
            Repr::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

/// Accepts either `[re, im]` or a bare real number.
pub(crate) fn complex_or_real<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
    Repr::deserialize(d)
        .map(Complex64::from)
        .map_err(|e| D::Error::custom(format!("expected number or [re, im]: {e}")))
}

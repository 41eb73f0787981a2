//! Classes of ℚ(i) modulo ℤ.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::{floor, GaussianRational};

/// Identifies the coset `a + ℤ`: the imaginary part and the fractional part
/// of the real part, in `[0, 1)`. Serialized as its representative.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetKey {
    pub imag: BigRational,
    pub real_frac: BigRational,
}

impl CosetKey {
    /// The canonical representative `realFrac + imag·i`.
    pub fn representative(&self) -> GaussianRational {
        GaussianRational::new(self.real_frac.clone(), self.imag.clone())
    }

    /// `a - representative`, which is an integer for members of the coset.
    pub fn offset(&self, a: &GaussianRational) -> Option<i64> {
        let d = a - &self.representative();
        d.as_integer().and_then(|n| n.to_i64())
    }
}

impl fmt::Debug for CosetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}]", self.representative())
    }
}

impl fmt::Display for CosetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.representative())
    }
}

impl Serialize for CosetKey {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.representative().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CosetKey {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        GaussianRational::deserialize(deserializer).map(|a| coset_key(&a))
    }
}

pub fn coset_key(a: &GaussianRational) -> CosetKey {
    let fl: BigInt = floor(a.re());
    CosetKey {
        imag: a.im().clone(),
        real_frac: a.re() - BigRational::from_integer(fl),
    }
}

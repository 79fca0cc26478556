use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FloatConst, NumAssignOps, NumCast};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Scalar type the geometry, interpolation and camera code is generic over.
///
/// Implemented for `f32` and `f64`. Text I/O relies on `FromStr` and on the
/// `Debug` formatting of the primitive floats, which prints the shortest
/// representation that parses back to the same bits.
pub trait Real:
    Float
    + FloatConst
    + NumAssignOps
    + FromStr
    + Debug
    + Display
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as NumCast>::from(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn as_f32(self) -> f32 {
        self.to_f32().unwrap_or(f32::NAN)
    }

    /// Tolerance under which a quaternion is already considered unit length.
    ///
    /// `1e-9` for `f64`; widened to a few ulps for narrower types.
    #[inline]
    fn unit_tolerance() -> Self {
        Self::lit(1e-9).max(Self::epsilon() * Self::lit(8.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use serde::Serialize;

/// Real scalar backing every operator and spectrum in the crate.
///
/// Implemented for `f32` and `f64`. Default tolerances scale with
/// [`Float::epsilon`], so `f32` instances run with correspondingly looser
/// thresholds.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + FromStr
    + Serialize
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Never fails for finite input.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("real scalar converts to f64")
    }

    #[inline]
    fn from_usize_lossy(x: usize) -> Self {
        Self::from_usize(x).expect("usize representable")
    }

    /// `max(floor, scale * epsilon)`: a tolerance that stays meaningful in
    /// low precision.
    #[inline]
    fn tol_floor(floor: f64, scale: f64) -> Self {
        Self::lit(floor).max(Self::epsilon() * Self::lit(scale))
    }
}

impl Real for f32 {}
impl Real for f64 {}

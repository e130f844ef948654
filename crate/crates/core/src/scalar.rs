//! Scalar abstraction for the numeric core.

use num_traits::{FromPrimitive, ToPrimitive};

/// Floating-point scalar the quantum-dynamics code is generic over.
///
/// `nalgebra::RealField` supplies the arithmetic and the dense eigensolver
/// bounds, `FromPrimitive`/`ToPrimitive` the conversions to and from counts
/// and literals.
pub trait Real: nalgebra::RealField + FromPrimitive + ToPrimitive + Copy + Send + Sync {}

impl Real for f32 {}
impl Real for f64 {}

/// Converts a small exact integer, panicking only on scalar types too narrow
/// to hold it (not reachable for `f32`/`f64` within the crate's caps).
pub(crate) fn from_usize<T: Real>(value: usize) -> T {
    T::from_usize(value).expect("count representable in scalar type")
}

pub(crate) fn from_u32<T: Real>(value: u32) -> T {
    T::from_u32(value).expect("count representable in scalar type")
}

pub(crate) fn from_f64<T: Real>(value: f64) -> T {
    T::from_f64(value).expect("constant representable in scalar type")
}

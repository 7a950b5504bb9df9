//! Floating-point abstraction for the allocation math.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Scalar type the allocation and reservation math is generic over: `f32` or `f64`.
pub trait Scalar: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl<T> Scalar for T where T: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

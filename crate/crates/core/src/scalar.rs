//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point type the physics is written against: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Tolerance no tighter than a few hundred ulps of `Self`.
    ///
    /// Thresholds are written for `f64`; on `f32` they widen to what the
    /// type can resolve.
    fn tol(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(256.0))
    }

    /// `self <= tol`, false for NaN.
    fn within(self, tol: Self) -> bool {
        self <= tol
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

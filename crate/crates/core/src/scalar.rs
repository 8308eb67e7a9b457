use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar the simulator is generic over.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal is representable")
    }

    /// Converts a count into `Self`.
    #[inline]
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count is representable")
    }

    /// Relative tolerance for domain-boundary checks.
    #[inline]
    fn boundary_slack() -> Self {
        Self::epsilon() * Self::lit(64.0)
    }
}

impl Real for f32 {}
impl Real for f64 {}

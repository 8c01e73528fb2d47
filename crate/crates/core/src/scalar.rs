//! Floating-point abstraction shared by the geometry and solver code.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumCast};

/// Coordinate and length type: `f32` or `f64`.
///
/// Everything that touches distances is generic over this trait. The
/// experiment harness and file formats work in `f64`.
pub trait Scalar: Float + FromPrimitive + NumCast + Debug + Display + Default + Send + Sync + 'static {
    /// Widen to `f64` for statistics and reporting.
    fn to_f64_lossy(self) -> f64 {
        NumCast::from(self).unwrap_or(f64::NAN)
    }

    /// Narrow an `f64` (noise factors, parsed coordinates) into this type.
    fn from_f64_lossy(v: f64) -> Self {
        <Self as NumCast>::from(v).unwrap_or_else(Self::nan)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

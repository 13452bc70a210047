//! Coefficient types.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Real coefficient field used by the Pauli algebra and the decompositions.
///
/// `f32` and `f64` prune below a fixed tolerance; the exact rational type
/// prunes only true zeros.
pub trait Scalar:
    Num + Signed + Clone + Debug + PartialOrd + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Magnitude below which a coefficient is treated as cancelled.
    fn is_negligible(&self) -> bool;

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }

    /// Lossy conversion for dense numerics and serialization.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn is_negligible(&self) -> bool {
        self.abs() < 1e-12
    }
}

impl Scalar for f32 {
    fn is_negligible(&self) -> bool {
        self.abs() < 1e-6
    }
}

impl Scalar for Ratio<i64> {
    fn is_negligible(&self) -> bool {
        *self.numer() == 0
    }
}

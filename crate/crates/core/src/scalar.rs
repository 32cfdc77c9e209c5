use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{CheckedMul, CheckedSub, Float, FloatConst, FromPrimitive, One, Zero};

/// Integer ring element usable by fraction-free elimination.
///
/// Division is only ever applied when it is exact. The checked operations
/// return `None` on overflow so fixed-width types can fall back to
/// [`BigInt`]; for `BigInt` they never fail.
pub trait ExactScalar:
    Clone + Debug + PartialEq + Zero + One + Neg<Output = Self> + CheckedMul + CheckedSub
{
    fn from_i64(v: i64) -> Self;
    /// Exact quotient `self / rhs`; `rhs` divides `self` and is nonzero.
    fn exact_div(&self, rhs: &Self) -> Self;
    fn to_bigint(&self) -> BigInt;
}

macro_rules! impl_exact_prim {
    ($($t:ty),*) => {$(
        impl ExactScalar for $t {
            fn from_i64(v: i64) -> Self {
                v as $t
            }
            fn exact_div(&self, rhs: &Self) -> Self {
                debug_assert!(*rhs != 0 && self % rhs == 0);
                self / rhs
            }
            fn to_bigint(&self) -> BigInt {
                BigInt::from(*self)
            }
        }
    )*};
}

impl_exact_prim!(i64, i128);

impl ExactScalar for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn exact_div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// Floating-point scalar for log-space bound arithmetic (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }
    fn of(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }
    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

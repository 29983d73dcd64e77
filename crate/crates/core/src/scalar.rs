//! Scalar abstraction: every numerical kernel in this crate is generic over a
//! floating-point type implementing [`Real`]. Concrete `f64` aliases for the
//! main types live at the crate root.

/// Floating-point scalar usable by the solvers and tensor algebra.
///
/// This is [`num_traits::Float`] plus conversions and the auxiliary bounds the
/// parallel kernels need. It is implemented for `f32` and `f64`.
pub trait Real:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::NumAssignOps
    + std::iter::Sum
    + std::fmt::Debug
    + std::fmt::Display
    + std::fmt::LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` constant (tolerances, grid spacings).
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant must be representable")
    }

    /// Lossy conversion to `f64` for reporting.
    #[inline]
    fn lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).expect("float converts to f64")
    }

    /// Conversion from a grid index.
    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize count must be representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

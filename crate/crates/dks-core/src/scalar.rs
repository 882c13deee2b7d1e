//! Scalar abstraction for the numeric core.
//!
//! Everything downstream of the graph layer (objective caches, subproblem
//! solvers, descent loops) is generic over [`Scalar`] so the same code runs
//! in `f32` or `f64`. `f64` is the default used by the CLI and the aliases
//! at the crate root.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumCast, ToPrimitive};

/// Floating-point scalar used throughout the solver stack.
///
/// The associated tolerances scale with the precision of the type: the
/// contracts in this crate (feasibility to 1e-9, subproblem sums to 1e-10,
/// ...) are stated for `f64`; the `f32` impl relaxes them to values that are
/// actually resolvable in single precision.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumCast + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute tolerance for capped-simplex feasibility checks
    /// (box bounds and the Σx = k constraint).
    const FEAS_TOL: Self;
    /// Target for |Σu − r| when bisecting the subproblem dual.
    const SUM_TOL: Self;
    /// Relative bracket-width cutoff for the dual bisection.
    const WIDTH_TOL: Self;

    /// Lossy cast from `f64`; panics on values not representable at all
    /// (never happens for the finite constants this crate feeds it).
    fn from_f64_lossy(v: f64) -> Self {
        <Self as NumCast>::from(v).expect("finite f64 must convert to Scalar")
    }

    /// Lossy cast to `f64` for reporting.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("Scalar must convert to f64")
    }
}

impl Scalar for f64 {
    const FEAS_TOL: f64 = 1e-9;
    const SUM_TOL: f64 = 1e-10;
    const WIDTH_TOL: f64 = 1e-14;
}

impl Scalar for f32 {
    const FEAS_TOL: f32 = 1e-4;
    const SUM_TOL: f32 = 1e-5;
    const WIDTH_TOL: f32 = 1e-6;
}

/// Shorthand cast used all over the numeric modules.
#[inline]
pub(crate) fn cast<T: Scalar>(v: f64) -> T {
    T::from_f64_lossy(v)
}

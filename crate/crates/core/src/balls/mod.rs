//! Midpoint-radius ball arithmetic over the reals and complex numbers.
//!
//! Midpoints are MPFR floats at a caller-chosen precision; radii are
//! [`Mag`] values with a 30-bit mantissa, always rounded upward. Complex
//! balls are rectangles of two real balls.

mod complex;
mod decimal;
mod mag;
mod real;
mod scaled;

pub use complex::ComplexBall;
pub use decimal::{parse_decimal, DecimalBall, Significand};
pub use mag::{Mag, MAG_PREC};
pub use real::{const_euler, const_log2, const_pi, RealBall};
pub use scaled::ScaledComplex;

//! Low-precision upper bounds for nonnegative magnitudes.
//!
//! A [`Mag`] is the radius type of every ball. It carries a fixed 30-bit
//! mantissa and every operation rounds toward +∞, so the stored value is
//! always an upper bound for the exact quantity it tracks. `+∞` is a valid
//! magnitude and marks an indeterminate ball.

use std::cmp::Ordering;
use std::fmt;

use rug::float::{Round, Special};
use rug::ops::Pow;
use rug::{Float, Integer};

/// Mantissa width of radii, in bits.
pub const MAG_PREC: u32 = 30;

#[derive(Clone, PartialEq, PartialOrd)]
pub struct Mag(Float);

impl Mag {
    pub fn zero() -> Self {
        Mag(Float::with_val(MAG_PREC, 0))
    }

    pub fn inf() -> Self {
        Mag(Float::with_val(MAG_PREC, Special::Infinity))
    }

    /// Smallest positive magnitude; stands in for anything that underflowed.
    pub fn tiny() -> Self {
        let mut x = Float::with_val(MAG_PREC, 1);
        x <<= rug::float::exp_min() - 1;
        Mag(x)
    }

    pub fn one() -> Self {
        Mag(Float::with_val(MAG_PREC, 1))
    }

    /// `2^e`, saturating to [`Mag::tiny`] or `+∞` outside the exponent range.
    pub fn pow2(e: i64) -> Self {
        if e < rug::float::exp_min() as i64 {
            return Mag::tiny();
        }
        if e >= rug::float::exp_max() as i64 {
            return Mag::inf();
        }
        let mut x = Float::with_val(MAG_PREC, 1);
        x <<= e as i32;
        Mag(x)
    }

    /// Upper bound for `|x|`.
    pub fn from_float(x: &Float) -> Self {
        if x.is_nan() {
            return Mag::inf();
        }
        let (v, _) = Float::with_val_round(MAG_PREC, &*x.as_abs(), Round::Up);
        Mag(v)
    }

    /// Lower bound for `|x|` (rounded toward zero).
    pub fn lower_from_float(x: &Float) -> Self {
        if x.is_nan() {
            return Mag::zero();
        }
        let (v, _) = Float::with_val_round(MAG_PREC, &*x.as_abs(), Round::Down);
        Mag(v)
    }

    pub fn from_f64(x: f64) -> Self {
        Self::from_float(&Float::with_val(64, x))
    }

    pub fn from_integer(n: &Integer) -> Self {
        let (v, _) = Float::with_val_round(MAG_PREC, &*n.as_abs(), Round::Up);
        Mag(v)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    /// Upper bound as `f64` (may be `inf` or round up to the smallest subnormal).
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64_round(Round::Up)
    }

    /// Approximate `log2` of the magnitude; `-inf` for zero.
    pub fn log2_approx(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        if !self.is_finite() {
            return f64::INFINITY;
        }
        let (m, e) = self.0.to_f64_exp();
        e as f64 + m.abs().log2()
    }

    pub fn add(&self, o: &Mag) -> Mag {
        Mag(Float::with_val_round(MAG_PREC, &self.0 + &o.0, Round::Up).0)
    }

    pub fn mul(&self, o: &Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::zero();
        }
        Mag(Float::with_val_round(MAG_PREC, &self.0 * &o.0, Round::Up).0)
    }

    /// Upper bound for `self / o`, where `o` must be a lower bound of the divisor.
    pub fn div(&self, o: &Mag) -> Mag {
        if self.is_zero() {
            return Mag::zero();
        }
        if o.is_zero() {
            return Mag::inf();
        }
        Mag(Float::with_val_round(MAG_PREC, &self.0 / &o.0, Round::Up).0)
    }

    pub fn mul_2exp(&self, e: i64) -> Mag {
        if self.is_zero() || !self.is_finite() {
            return self.clone();
        }
        let cur = self.0.get_exp().unwrap_or(0) as i64;
        let target = cur + e;
        if target > rug::float::exp_max() as i64 {
            return Mag::inf();
        }
        if target < rug::float::exp_min() as i64 {
            return Mag::tiny();
        }
        let mut x = self.0.clone();
        x <<= e as i32;
        Mag(x)
    }

    pub fn max(&self, o: &Mag) -> Mag {
        if self >= o {
            self.clone()
        } else {
            o.clone()
        }
    }

    pub fn min(&self, o: &Mag) -> Mag {
        if self <= o {
            self.clone()
        } else {
            o.clone()
        }
    }

    pub fn sqrt(&self) -> Mag {
        Mag(Float::with_val_round(MAG_PREC, self.0.sqrt_ref(), Round::Up).0)
    }

    /// Upper bound for `e^self`.
    pub fn exp(&self) -> Mag {
        Mag(Float::with_val_round(MAG_PREC, self.0.exp_ref(), Round::Up).0)
    }

    /// Upper bound for `e^self − 1`.
    pub fn expm1(&self) -> Mag {
        Mag(Float::with_val_round(MAG_PREC, self.0.exp_m1_ref(), Round::Up).0)
    }

    /// Upper bound for `self^k`.
    pub fn pow_u(&self, k: u32) -> Mag {
        Mag(Float::with_val_round(MAG_PREC, (&self.0).pow(k), Round::Up).0)
    }

    /// Upper bound for `e^x` where `x` is an arbitrary float (not a magnitude).
    pub fn exp_of(x: &Float) -> Mag {
        let (x_up, _) = Float::with_val_round(MAG_PREC, x, Round::Up);
        Mag(Float::with_val_round(MAG_PREC, x_up.exp_ref(), Round::Up).0)
    }
}

impl Default for Mag {
    fn default() -> Self {
        Mag::zero()
    }
}

impl fmt::Debug for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.3e}", self.0.to_f64_round(Round::Up))
    }
}

impl fmt::Display for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl PartialEq<f64> for Mag {
    fn eq(&self, o: &f64) -> bool {
        self.0 == *o
    }
}

impl PartialOrd<f64> for Mag {
    fn partial_cmp(&self, o: &f64) -> Option<Ordering> {
        self.0.partial_cmp(o)
    }
}

use std::fmt;

use rug::Integer;

use super::complex::ComplexBall;
use super::decimal::{DecimalBall, Significand};
use super::mag::Mag;
use super::real::RealBall;

/// Largest binary shift applied to a midpoint before it is folded into the radius.
const MAX_SHIFT: i64 = 1 << 28;

/// A complex ball multiplied by `2^exp2`, where `exp2` is an arbitrary-size
/// integer.
///
/// Values like `γₙ` for `n = 10¹⁰⁰` have decimal exponents with about a
/// hundred digits, far outside any hardware or MPFR exponent range, so the
/// scale is carried separately from the ball.
#[derive(Clone)]
pub struct ScaledComplex {
    pub ball: ComplexBall,
    pub exp2: Integer,
}

fn ball_exponent(b: &RealBall) -> Option<i64> {
    if !b.is_finite() {
        return None;
    }
    if !b.mid().is_zero() {
        return b.mid().get_exp().map(|e| e as i64);
    }
    if !b.rad().is_zero() {
        return b.rad().as_float().get_exp().map(|e| e as i64);
    }
    None
}

impl ScaledComplex {
    pub fn new(ball: ComplexBall, exp2: Integer) -> Self {
        ScaledComplex { ball, exp2 }.normalize()
    }

    pub fn from_ball(ball: ComplexBall) -> Self {
        ScaledComplex::new(ball, Integer::new())
    }

    pub fn zero() -> Self {
        ScaledComplex {
            ball: ComplexBall::zero(),
            exp2: Integer::new(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.ball.is_finite()
    }

    /// Moves the binary exponent of the ball into `exp2` so the ball stays near 1.
    pub fn normalize(self) -> Self {
        let e = match (ball_exponent(&self.ball.re), ball_exponent(&self.ball.im)) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => return self,
        };
        if e == 0 {
            return self;
        }
        ScaledComplex {
            ball: self.ball.mul_2exp(-e),
            exp2: self.exp2 + e,
        }
    }

    pub fn neg(&self) -> Self {
        ScaledComplex {
            ball: self.ball.neg(),
            exp2: self.exp2.clone(),
        }
    }

    pub fn conj(&self) -> Self {
        ScaledComplex {
            ball: self.ball.conj(),
            exp2: self.exp2.clone(),
        }
    }

    pub fn real_part(&self) -> Self {
        ScaledComplex {
            ball: ComplexBall::from_real(self.ball.re.clone()),
            exp2: self.exp2.clone(),
        }
        .normalize()
    }

    pub fn mul_ball(&self, b: &ComplexBall, prec: u32) -> Self {
        ScaledComplex {
            ball: self.ball.mul(b, prec),
            exp2: self.exp2.clone(),
        }
        .normalize()
    }

    pub fn mul_real(&self, b: &RealBall, prec: u32) -> Self {
        ScaledComplex {
            ball: self.ball.mul_real(b, prec),
            exp2: self.exp2.clone(),
        }
        .normalize()
    }

    pub fn div_real(&self, b: &RealBall, prec: u32) -> Self {
        ScaledComplex {
            ball: self.ball.div_real(b, prec),
            exp2: self.exp2.clone(),
        }
        .normalize()
    }

    /// Multiplies by `2^e` by adjusting the scale only.
    pub fn mul_2exp(&self, e: i64) -> Self {
        ScaledComplex {
            ball: self.ball.clone(),
            exp2: Integer::from(&self.exp2 + e),
        }
    }

    /// Rescales `self` to the exponent `target ≥ self.exp2`.
    fn shift_to(&self, target: &Integer) -> ComplexBall {
        let d = Integer::from(target - &self.exp2);
        match d.to_i64() {
            Some(d) if d <= MAX_SHIFT => self.ball.mul_2exp(-d),
            _ => {
                // negligible at this scale; keep only an upper bound
                let m = self.ball.mag_upper().mul_2exp(-MAX_SHIFT);
                ComplexBall::zero().add_error(&m)
            }
        }
    }

    pub fn add(&self, o: &ScaledComplex, prec: u32) -> Self {
        if self.ball.is_zero_exact() {
            return o.clone();
        }
        if o.ball.is_zero_exact() {
            return self.clone();
        }
        let (hi, lo) = if self.exp2 >= o.exp2 { (self, o) } else { (o, self) };
        let shifted = lo.shift_to(&hi.exp2);
        ScaledComplex {
            ball: hi.ball.add(&shifted, prec),
            exp2: hi.exp2.clone(),
        }
        .normalize()
    }

    pub fn sub(&self, o: &ScaledComplex, prec: u32) -> Self {
        self.add(&o.neg(), prec)
    }

    /// Widens by `m · 2^exp2` in both components.
    pub fn add_error_scaled(&self, m: &Mag, exp2: &Integer) -> Self {
        let err = ScaledComplex {
            ball: ComplexBall::zero().add_error(m),
            exp2: exp2.clone(),
        };
        self.add(&err, self.ball.re.prec().max(64))
    }

    /// The plain ball, if the scale fits the floating-point exponent range.
    pub fn to_ball(&self) -> Option<ComplexBall> {
        let e = self.exp2.to_i64()?;
        if e.abs() > MAX_SHIFT {
            return None;
        }
        Some(self.ball.mul_2exp(e))
    }

    pub fn contains(&self, z: &ComplexBall) -> bool {
        match self.to_ball() {
            Some(b) => b.contains(z),
            None => false,
        }
    }

    pub fn overlaps(&self, o: &ScaledComplex, prec: u32) -> bool {
        let d = self.sub(o, prec);
        d.ball.re.contains_zero() && d.ball.im.contains_zero()
    }

    pub fn rel_accuracy_bits(&self) -> i64 {
        self.ball.rel_accuracy_bits()
    }

    pub fn re_decimal(&self, digits: usize) -> DecimalBall {
        DecimalBall::from_real(&self.ball.re, &self.exp2, digits)
    }

    pub fn im_decimal(&self, digits: usize) -> DecimalBall {
        DecimalBall::from_real(&self.ball.im, &self.exp2, digits)
    }

    pub fn re_significand(&self, digits: usize) -> Option<Significand> {
        Significand::of(&self.ball.re, &self.exp2, digits)
    }

    pub fn im_significand(&self, digits: usize) -> Option<Significand> {
        Significand::of(&self.ball.im, &self.exp2, digits)
    }
}

impl ComplexBall {
    pub fn is_zero_exact(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl fmt::Debug for ScaledComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} * 2^{}", self.ball, self.exp2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn addition_across_scales() {
        let a = ScaledComplex::new(ComplexBall::from_f64(1.0, 0.0), Integer::from(1000));
        let b = ScaledComplex::new(ComplexBall::from_f64(3.0, 0.0), Integer::from(998));
        let s = a.add(&b, 64);
        // 2^1000 + 3·2^998 = 7·2^998
        let expect = ScaledComplex::new(ComplexBall::from_f64(7.0, 0.0), Integer::from(998));
        assert!(s.overlaps(&expect, 64));
        assert_eq!(s.exp2, Integer::from(1001));
    }

    #[test]
    fn negligible_term_becomes_radius() {
        let big = Integer::from(10).pow(50);
        let a = ScaledComplex::new(ComplexBall::from_f64(1.0, 0.0), big);
        let b = ScaledComplex::from_ball(ComplexBall::from_f64(1.0, 0.0));
        let s = a.add(&b, 64);
        assert!(s.ball.re.rad() > &0.0);
        assert!(s.ball.re.rad() < &1e-9);
        assert!(s.to_ball().is_none());
    }
}

use std::cmp::Ordering;
use std::fmt;

use rug::float::{Constant, Round};
use rug::{Float, Integer, Rational};

use super::mag::Mag;

/// A real interval `[mid − rad, mid + rad]` with an arbitrary-precision
/// midpoint and a [`Mag`] radius.
///
/// Operations take the working precision `prec` of the result midpoint
/// explicitly. Every result contains the exact image of the input sets.
/// A ball with infinite radius (or a NaN midpoint) is indeterminate.
#[derive(Clone)]
pub struct RealBall {
    mid: Float,
    rad: Mag,
}

/// Error bound for a freshly rounded midpoint.
pub(crate) fn rounding_err(x: &Float, ord: Ordering) -> Mag {
    if ord == Ordering::Equal {
        return Mag::zero();
    }
    if x.is_zero() {
        return Mag::tiny();
    }
    if !x.is_finite() {
        return Mag::inf();
    }
    let e = x.get_exp().unwrap_or(0) as i64;
    Mag::pow2(e - x.prec() as i64)
}

impl RealBall {
    pub fn new(mid: Float, rad: Mag) -> Self {
        RealBall { mid, rad }
    }

    pub fn zero() -> Self {
        RealBall::exact(Float::new(64))
    }

    pub fn one() -> Self {
        RealBall::exact(Float::with_val(64, 1))
    }

    pub fn exact(mid: Float) -> Self {
        RealBall {
            mid,
            rad: Mag::zero(),
        }
    }

    /// The whole real line.
    pub fn indeterminate() -> Self {
        RealBall {
            mid: Float::new(64),
            rad: Mag::inf(),
        }
    }

    pub fn from_i64(x: i64) -> Self {
        RealBall::exact(Float::with_val(64, x))
    }

    /// Exact when `prec` covers every bit of the value, otherwise rounded with a radius.
    pub fn from_f64(x: f64) -> Self {
        RealBall::exact(Float::with_val(53, x))
    }

    pub fn from_integer(n: &Integer, prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, n, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        RealBall { mid, rad }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, q, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        RealBall { mid, rad }
    }

    /// Ball `m ± r` from doubles; used mostly by tests.
    pub fn with_rad(mid: f64, rad: f64) -> Self {
        RealBall {
            mid: Float::with_val(53, mid),
            rad: Mag::from_f64(rad),
        }
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> &Mag {
        &self.rad
    }

    pub fn into_parts(self) -> (Float, Mag) {
        (self.mid, self.rad)
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    pub fn is_finite(&self) -> bool {
        self.mid.is_finite() && self.rad.is_finite()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero() && self.mid.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.is_exact() && self.mid.is_zero()
    }

    /// Widens the ball by `r`.
    pub fn add_error(&self, r: &Mag) -> Self {
        RealBall {
            mid: self.mid.clone(),
            rad: self.rad.add(r),
        }
    }

    /// Upper bound for `|x|` over the ball.
    pub fn mag_upper(&self) -> Mag {
        if !self.is_finite() {
            return Mag::inf();
        }
        Mag::from_float(&self.mid).add(&self.rad)
    }

    /// Lower bound for `|x|` over the ball (zero if the ball straddles 0).
    pub fn mag_lower(&self) -> Mag {
        if !self.is_finite() {
            return Mag::zero();
        }
        let lo = Float::with_val_round(64, &*self.mid.as_abs() - self.rad.as_float(), Round::Down).0;
        if lo <= 0 {
            Mag::zero()
        } else {
            Mag::lower_from_float(&lo)
        }
    }

    /// Lower endpoint, rounded down.
    pub fn lower(&self, prec: u32) -> Float {
        Float::with_val_round(prec, &self.mid - self.rad.as_float(), Round::Down).0
    }

    /// Upper endpoint, rounded up.
    pub fn upper(&self, prec: u32) -> Float {
        Float::with_val_round(prec, &self.mid + self.rad.as_float(), Round::Up).0
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_finite() || self.mid.as_abs().partial_cmp(self.rad.as_float()) != Some(Ordering::Greater)
    }

    /// True if every point of the ball is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.is_finite() && self.mid > 0 && !self.contains_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.is_finite() && self.mid < 0 && !self.contains_zero()
    }

    /// Exact set membership test.
    pub fn contains_rational(&self, q: &Rational) -> bool {
        if !self.is_finite() {
            return true;
        }
        let m = self.mid.to_rational().expect("finite midpoint");
        let r = self.rad.as_float().to_rational().expect("finite radius");
        let d = Rational::from(q - &m).abs();
        d <= r
    }

    pub fn contains_float(&self, x: &Float) -> bool {
        match x.to_rational() {
            Some(q) => self.contains_rational(&q),
            None => !self.is_finite(),
        }
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.contains_float(&Float::with_val(53, x))
    }

    /// True if `other ⊆ self`.
    pub fn contains_ball(&self, other: &RealBall) -> bool {
        if !self.is_finite() {
            return true;
        }
        if !other.is_finite() {
            return false;
        }
        let m = self.mid.to_rational().unwrap();
        let r = self.rad.as_float().to_rational().unwrap();
        let om = other.mid.to_rational().unwrap();
        let or = other.rad.as_float().to_rational().unwrap();
        Rational::from(&om - &m).abs() + or <= r
    }

    pub fn overlaps(&self, other: &RealBall) -> bool {
        if !self.is_finite() || !other.is_finite() {
            return true;
        }
        let m = self.mid.to_rational().unwrap();
        let r = self.rad.as_float().to_rational().unwrap();
        let om = other.mid.to_rational().unwrap();
        let or = other.rad.as_float().to_rational().unwrap();
        Rational::from(&om - &m).abs() <= r + or
    }

    /// Approximate relative accuracy `log2(|mid| / rad)`.
    ///
    /// Exact nonzero balls report `i64::MAX`; balls that contain zero report
    /// a value `≤ 0`; indeterminate balls report `i64::MIN`.
    pub fn rel_accuracy_bits(&self) -> i64 {
        if !self.is_finite() {
            return i64::MIN;
        }
        if self.rad.is_zero() {
            return if self.mid.is_zero() { i64::MIN } else { i64::MAX };
        }
        if self.mid.is_zero() {
            return i64::MIN;
        }
        let (m, e) = self.mid.to_f64_exp();
        let lm = e as f64 + m.abs().log2();
        (lm - self.rad.log2_approx()).floor() as i64
    }

    // --- field operations ---

    pub fn neg(&self) -> Self {
        RealBall {
            mid: Float::with_val(self.mid.prec(), -&self.mid),
            rad: self.rad.clone(),
        }
    }

    pub fn abs(&self) -> Self {
        RealBall {
            mid: Float::with_val(self.mid.prec(), &*self.mid.as_abs()),
            rad: self.rad.clone(),
        }
    }

    pub fn add(&self, o: &RealBall, prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, &self.mid + &o.mid, Round::Nearest);
        let rad = self.rad.add(&o.rad).add(&rounding_err(&mid, ord));
        RealBall { mid, rad }
    }

    pub fn sub(&self, o: &RealBall, prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, &self.mid - &o.mid, Round::Nearest);
        let rad = self.rad.add(&o.rad).add(&rounding_err(&mid, ord));
        RealBall { mid, rad }
    }

    pub fn mul(&self, o: &RealBall, prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, &self.mid * &o.mid, Round::Nearest);
        let ma = Mag::from_float(&self.mid);
        let mb = Mag::from_float(&o.mid);
        let rad = ma
            .mul(&o.rad)
            .add(&mb.mul(&self.rad))
            .add(&self.rad.mul(&o.rad))
            .add(&rounding_err(&mid, ord));
        RealBall { mid, rad }
    }

    pub fn sqr(&self, prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, self.mid.square_ref(), Round::Nearest);
        let ma = Mag::from_float(&self.mid);
        let rad = ma
            .mul(&self.rad)
            .mul_2exp(1)
            .add(&self.rad.mul(&self.rad))
            .add(&rounding_err(&mid, ord));
        RealBall { mid, rad }
    }

    pub fn mul_integer(&self, n: &Integer, prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, &self.mid * n, Round::Nearest);
        let rad = self
            .rad
            .mul(&Mag::from_integer(n))
            .add(&rounding_err(&mid, ord));
        RealBall { mid, rad }
    }

    pub fn mul_f64(&self, x: f64, prec: u32) -> Self {
        self.mul(&RealBall::from_f64(x), prec)
    }

    /// Multiplies by `2^e` (exact unless the exponent range is exceeded).
    pub fn mul_2exp(&self, e: i64) -> Self {
        if !self.is_finite() {
            return self.clone();
        }
        let mut mid = self.mid.clone();
        let mut rad = self.rad.mul_2exp(e);
        if !mid.is_zero() {
            let cur = mid.get_exp().unwrap_or(0) as i64;
            let target = cur + e;
            if target > rug::float::exp_max() as i64 {
                return RealBall::indeterminate();
            }
            if target < rug::float::exp_min() as i64 {
                rad = rad.add(&Mag::from_float(&mid).mul_2exp(e));
                mid = Float::new(mid.prec());
            } else {
                mid <<= e as i32;
            }
        }
        RealBall { mid, rad }
    }

    /// Division; the result is indeterminate if the divisor contains zero.
    pub fn div(&self, o: &RealBall, prec: u32) -> Self {
        if o.contains_zero() || !self.is_finite() {
            return RealBall::indeterminate();
        }
        let (mid, ord) = Float::with_val_round(prec, &self.mid / &o.mid, Round::Nearest);
        // |x/y − mx/my| ≤ (|mx| ry + |my| rx) / (|my| (|my| − ry))
        let mx = Mag::from_float(&self.mid);
        let my_lo = Mag::lower_from_float(&o.mid);
        let num = mx.mul(&o.rad).add(&Mag::from_float(&o.mid).mul(&self.rad));
        let den = my_lo.mul_lower(&o.mag_lower());
        let rad = num.div(&den).add(&rounding_err(&mid, ord));
        RealBall { mid, rad }
    }

    pub fn recip(&self, prec: u32) -> Self {
        RealBall::one().div(self, prec)
    }

    pub fn div_integer(&self, n: &Integer, prec: u32) -> Self {
        self.div(&RealBall::from_integer(n, prec.max(n.significant_bits())), prec)
    }

    // --- elementary functions ---

    pub fn sqrt(&self, prec: u32) -> Self {
        if !self.is_finite() || self.lower(64) < 0 {
            return RealBall::indeterminate();
        }
        let (mid, ord) = Float::with_val_round(prec, self.mid.sqrt_ref(), Round::Nearest);
        // |√x − √m| = |x − m| / (√x + √m) ≤ r / √m
        let rad = if self.rad.is_zero() {
            Mag::zero()
        } else if self.mid.is_zero() {
            self.rad.sqrt()
        } else {
            let s = Mag::lower_from_float(&Float::with_val_round(64, self.mid.sqrt_ref(), Round::Down).0);
            self.rad.div(&s).min(&self.rad.sqrt())
        };
        let rad = rad.add(&rounding_err(&mid, ord));
        RealBall { mid, rad }
    }

    pub fn exp(&self, prec: u32) -> Self {
        if !self.is_finite() {
            return RealBall::indeterminate();
        }
        let (mid, ord) = Float::with_val_round(prec, self.mid.exp_ref(), Round::Nearest);
        if mid.is_infinite() {
            return RealBall::indeterminate();
        }
        if self.rad > 0.0625 || mid.is_zero() {
            // wide or underflowing: enclose [e^lo, e^hi] directly
            let lo = Float::with_val_round(prec, self.lower(prec).exp_ref(), Round::Down).0;
            let hi = Float::with_val_round(prec, self.upper(prec).exp_ref(), Round::Up).0;
            return RealBall::from_endpoints(&lo, &hi, prec);
        }
        let e_up = Mag::exp_of(&self.mid);
        let rad = e_up.mul(&self.rad.expm1()).add(&rounding_err(&mid, ord));
        RealBall { mid, rad }
    }

    /// Natural logarithm; indeterminate unless the ball is strictly positive.
    pub fn log(&self, prec: u32) -> Self {
        if !self.is_positive() {
            return RealBall::indeterminate();
        }
        let (mid, ord) = Float::with_val_round(prec, self.mid.ln_ref(), Round::Nearest);
        // |log x − log m| ≤ r / (m − r)
        let rad = self.rad.div(&self.mag_lower()).add(&rounding_err(&mid, ord));
        RealBall { mid, rad }
    }

    pub fn cosh(&self, prec: u32) -> Self {
        if !self.is_finite() {
            return RealBall::indeterminate();
        }
        let (mid, ord) = Float::with_val_round(prec, self.mid.cosh_ref(), Round::Nearest);
        let deriv = sinh_upper(&self.mag_upper());
        let rad = deriv.mul(&self.rad).add(&rounding_err(&mid, ord));
        RealBall { mid, rad }
    }

    pub fn sinh(&self, prec: u32) -> Self {
        if !self.is_finite() {
            return RealBall::indeterminate();
        }
        let (mid, ord) = Float::with_val_round(prec, self.mid.sinh_ref(), Round::Nearest);
        let deriv = cosh_upper(&self.mag_upper());
        let rad = deriv.mul(&self.rad).add(&rounding_err(&mid, ord));
        RealBall { mid, rad }
    }

    pub fn tanh(&self, prec: u32) -> Self {
        if !self.is_finite() {
            return RealBall::indeterminate();
        }
        let (mid, ord) = Float::with_val_round(prec, self.mid.tanh_ref(), Round::Nearest);
        let rad = self.rad.add(&rounding_err(&mid, ord));
        RealBall { mid, rad }
    }

    pub fn atan(&self, prec: u32) -> Self {
        if !self.is_finite() {
            return RealBall::indeterminate();
        }
        let (mid, ord) = Float::with_val_round(prec, self.mid.atan_ref(), Round::Nearest);
        // |atan'(x)| = 1/(1+x²) ≤ 1/(1+lo²)
        let lo = self.mag_lower();
        let den = Mag::one().mul_lower(&Mag::one()).add_lower(&lo.mul_lower(&lo));
        let rad = self.rad.div(&den).add(&rounding_err(&mid, ord));
        RealBall { mid, rad }
    }

    pub fn sin(&self, prec: u32) -> Self {
        if !self.is_finite() {
            return RealBall::indeterminate();
        }
        let (mid, ord) = Float::with_val_round(prec, self.mid.sin_ref(), Round::Nearest);
        let rad = self.rad.min(&Mag::from_f64(2.0)).add(&rounding_err(&mid, ord));
        RealBall { mid, rad }
    }

    pub fn cos(&self, prec: u32) -> Self {
        if !self.is_finite() {
            return RealBall::indeterminate();
        }
        let (mid, ord) = Float::with_val_round(prec, self.mid.cos_ref(), Round::Nearest);
        let rad = self.rad.min(&Mag::from_f64(2.0)).add(&rounding_err(&mid, ord));
        RealBall { mid, rad }
    }

    /// `(sin x, cos x)`.
    pub fn sin_cos(&self, prec: u32) -> (Self, Self) {
        if !self.is_finite() {
            return (RealBall::indeterminate(), RealBall::indeterminate());
        }
        let (s, os) = Float::with_val_round(prec, self.mid.sin_ref(), Round::Nearest);
        let (c, oc) = Float::with_val_round(prec, self.mid.cos_ref(), Round::Nearest);
        let r = self.rad.min(&Mag::from_f64(2.0));
        let rs = r.add(&rounding_err(&s, os));
        let rc = r.add(&rounding_err(&c, oc));
        (RealBall { mid: s, rad: rs }, RealBall { mid: c, rad: rc })
    }

    /// `atan2(y, x)` with `self = y`; indeterminate if the rectangle meets the
    /// cut `x ≤ 0, y = 0` (including the origin).
    pub fn atan2(&self, x: &RealBall, prec: u32) -> Self {
        let y = self;
        if !x.is_finite() || !y.is_finite() {
            return RealBall::indeterminate();
        }
        if y.contains_zero() && !x.is_positive() {
            return RealBall::indeterminate();
        }
        let (mid, ord) = Float::with_val_round(prec, y.mid.atan2_ref(&x.mid), Round::Nearest);
        // |∇ arg| = 1/|z|; straight segments inside the rectangle avoid the cut.
        let dist = rect_min_abs(x, y);
        let rad = x.rad.add(&y.rad).div(&dist).add(&rounding_err(&mid, ord));
        RealBall { mid, rad }
    }

    /// `x^y = exp(y log x)` for `x > 0`.
    pub fn pow(&self, y: &RealBall, prec: u32) -> Self {
        self.log(prec).mul(y, prec).exp(prec)
    }

    pub fn pow_u(&self, k: u32, prec: u32) -> Self {
        let mut result = RealBall::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base, prec);
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr(prec);
            }
        }
        result
    }

    pub fn max(&self, o: &RealBall, prec: u32) -> Self {
        // hull of the two upper endpoints combined with the lower envelope
        let lo = {
            let a = self.lower(prec);
            let b = o.lower(prec);
            if a > b { a } else { b }
        };
        let hi = {
            let a = self.upper(prec);
            let b = o.upper(prec);
            if a > b { a } else { b }
        };
        RealBall::from_endpoints(&lo, &hi, prec)
    }

    /// Smallest ball (at `prec`) containing `[lo, hi]`.
    pub fn from_endpoints(lo: &Float, hi: &Float, prec: u32) -> Self {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return RealBall::indeterminate();
        }
        let (mid, _) = Float::with_val_round(prec, lo + hi, Round::Nearest);
        let mid = mid / 2u32;
        let r1 = Float::with_val_round(64, hi - &mid, Round::Up).0;
        let r2 = Float::with_val_round(64, &mid - lo, Round::Up).0;
        let rad = Mag::from_float(&r1).max(&Mag::from_float(&r2));
        RealBall { mid, rad }
    }

    /// Union hull of two balls.
    pub fn union(&self, o: &RealBall, prec: u32) -> Self {
        if !self.is_finite() || !o.is_finite() {
            return RealBall::indeterminate();
        }
        let lo = {
            let a = self.lower(prec);
            let b = o.lower(prec);
            if a < b { a } else { b }
        };
        let hi = {
            let a = self.upper(prec);
            let b = o.upper(prec);
            if a > b { a } else { b }
        };
        RealBall::from_endpoints(&lo, &hi, prec)
    }

    /// Rounds the midpoint to `prec` bits, widening as needed.
    pub fn set_prec(&self, prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, &self.mid, Round::Nearest);
        let rad = self.rad.add(&rounding_err(&mid, ord));
        RealBall { mid, rad }
    }
}

/// Upper bound for `sinh(m)` with `m ≥ 0`.
fn sinh_upper(m: &Mag) -> Mag {
    Mag::from_float(&Float::with_val_round(32, m.as_float().sinh_ref(), Round::Up).0)
}

fn cosh_upper(m: &Mag) -> Mag {
    Mag::from_float(&Float::with_val_round(32, m.as_float().cosh_ref(), Round::Up).0)
}

/// Lower bound for `|z|` over the rectangle `x + iy`.
pub(crate) fn rect_min_abs(x: &RealBall, y: &RealBall) -> Mag {
    let dx = x.mag_lower();
    let dy = y.mag_lower();
    // |z| ≥ sqrt(dx² + dy²) ≥ max(dx, dy)
    let s = dx.mul_lower(&dx).add_lower(&dy.mul_lower(&dy));
    s.sqrt_lower().max(&dx.max(&dy))
}

/// π enclosed at `prec` bits.
pub fn const_pi(prec: u32) -> RealBall {
    let (mid, ord) = Float::with_val_round(prec, Constant::Pi, Round::Nearest);
    let rad = rounding_err(&mid, ord);
    RealBall { mid, rad }
}

/// log 2 enclosed at `prec` bits.
pub fn const_log2(prec: u32) -> RealBall {
    let (mid, ord) = Float::with_val_round(prec, Constant::Log2, Round::Nearest);
    let rad = rounding_err(&mid, ord);
    RealBall { mid, rad }
}

/// Euler's constant enclosed at `prec` bits.
pub fn const_euler(prec: u32) -> RealBall {
    let (mid, ord) = Float::with_val_round(prec, Constant::Euler, Round::Nearest);
    let rad = rounding_err(&mid, ord);
    RealBall { mid, rad }
}

impl fmt::Debug for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = format!("{:.20e}", self.mid);
        write!(f, "[{} +/- {:?}]", m, self.rad)
    }
}

impl fmt::Display for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.mid.prec() as f64) * std::f64::consts::LOG10_2).ceil() as usize;
        let d = super::decimal::DecimalBall::from_real(self, &Integer::new(), digits.max(1));
        write!(f, "{}", d)
    }
}

impl Mag {
    /// Lower-bound product (rounded toward zero); both inputs must be lower bounds.
    pub fn mul_lower(&self, o: &Mag) -> Mag {
        Mag::lower_from_float(&Float::with_val_round(super::mag::MAG_PREC, self.as_float() * o.as_float(), Round::Down).0)
    }

    pub fn add_lower(&self, o: &Mag) -> Mag {
        Mag::lower_from_float(&Float::with_val_round(super::mag::MAG_PREC, self.as_float() + o.as_float(), Round::Down).0)
    }

    pub fn sqrt_lower(&self) -> Mag {
        Mag::lower_from_float(&Float::with_val_round(super::mag::MAG_PREC, self.as_float().sqrt_ref(), Round::Down).0)
    }
}

use std::fmt;

use rug::float::Round;
use rug::{Float, Integer};

use super::mag::Mag;
use super::real::{const_pi, rect_min_abs, rounding_err, RealBall};

/// Rectangle `re × im` of two real balls.
#[derive(Clone)]
pub struct ComplexBall {
    pub re: RealBall,
    pub im: RealBall,
}

impl ComplexBall {
    pub fn new(re: RealBall, im: RealBall) -> Self {
        ComplexBall { re, im }
    }

    pub fn from_real(re: RealBall) -> Self {
        ComplexBall {
            re,
            im: RealBall::zero(),
        }
    }

    pub fn zero() -> Self {
        ComplexBall::from_real(RealBall::zero())
    }

    pub fn one() -> Self {
        ComplexBall::from_real(RealBall::one())
    }

    pub fn i() -> Self {
        ComplexBall::new(RealBall::zero(), RealBall::one())
    }

    pub fn indeterminate() -> Self {
        ComplexBall::new(RealBall::indeterminate(), RealBall::indeterminate())
    }

    pub fn exact(re: Float, im: Float) -> Self {
        ComplexBall::new(RealBall::exact(re), RealBall::exact(im))
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        ComplexBall::new(RealBall::from_f64(re), RealBall::from_f64(im))
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_exact(&self) -> bool {
        self.re.is_exact() && self.im.is_exact()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    /// True if the rectangle meets the principal branch cut `(−∞, 0]`.
    pub fn touches_branch_cut(&self) -> bool {
        if !self.is_finite() {
            return true;
        }
        self.im.contains_zero() && !self.re.is_positive()
    }

    pub fn contains(&self, other: &ComplexBall) -> bool {
        self.re.contains_ball(&other.re) && self.im.contains_ball(&other.im)
    }

    pub fn overlaps(&self, other: &ComplexBall) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    pub fn contains_f64(&self, re: f64, im: f64) -> bool {
        self.re.contains_f64(re) && self.im.contains_f64(im)
    }

    /// Upper bound for `|z|` over the rectangle.
    pub fn mag_upper(&self) -> Mag {
        let a = self.re.mag_upper();
        let b = self.im.mag_upper();
        a.mul(&a).add(&b.mul(&b)).sqrt()
    }

    /// Lower bound for `|z|` over the rectangle.
    pub fn mag_lower(&self) -> Mag {
        rect_min_abs(&self.re, &self.im)
    }

    /// Upper bound for the half-diagonal of the rectangle.
    pub fn rad_upper(&self) -> Mag {
        let a = self.re.rad();
        let b = self.im.rad();
        a.mul(a).add(&b.mul(b)).sqrt()
    }

    /// Exact midpoint as a zero-radius ball.
    pub fn mid_exact(&self) -> ComplexBall {
        ComplexBall::exact(self.re.mid().clone(), self.im.mid().clone())
    }

    pub fn add_error(&self, r: &Mag) -> Self {
        ComplexBall::new(self.re.add_error(r), self.im.add_error(r))
    }

    pub fn rel_accuracy_bits(&self) -> i64 {
        // accuracy of the larger component dominates the magnitude
        let m = self.re.mid().clone().abs().max(&self.im.mid().clone().abs());
        if m.is_zero() {
            return i64::MIN;
        }
        let r = self.re.rad().max(self.im.rad());
        if r.is_zero() {
            return i64::MAX;
        }
        if !r.is_finite() {
            return i64::MIN;
        }
        let (mm, e) = m.to_f64_exp();
        (e as f64 + mm.abs().log2() - r.log2_approx()).floor() as i64
    }

    // --- field operations ---

    pub fn neg(&self) -> Self {
        ComplexBall::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Self {
        ComplexBall::new(self.re.clone(), self.im.neg())
    }

    pub fn add(&self, o: &ComplexBall, prec: u32) -> Self {
        ComplexBall::new(self.re.add(&o.re, prec), self.im.add(&o.im, prec))
    }

    pub fn sub(&self, o: &ComplexBall, prec: u32) -> Self {
        ComplexBall::new(self.re.sub(&o.re, prec), self.im.sub(&o.im, prec))
    }

    pub fn mul(&self, o: &ComplexBall, prec: u32) -> Self {
        if self.im.is_zero() {
            return o.mul_real(&self.re, prec);
        }
        if o.im.is_zero() {
            return self.mul_real(&o.re, prec);
        }
        let ac = self.re.mul(&o.re, prec);
        let bd = self.im.mul(&o.im, prec);
        let ad = self.re.mul(&o.im, prec);
        let bc = self.im.mul(&o.re, prec);
        ComplexBall::new(ac.sub(&bd, prec), ad.add(&bc, prec))
    }

    pub fn sqr(&self, prec: u32) -> Self {
        let a2 = self.re.sqr(prec);
        let b2 = self.im.sqr(prec);
        let ab = self.re.mul(&self.im, prec).mul_2exp(1);
        ComplexBall::new(a2.sub(&b2, prec), ab)
    }

    pub fn mul_real(&self, x: &RealBall, prec: u32) -> Self {
        ComplexBall::new(self.re.mul(x, prec), self.im.mul(x, prec))
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        ComplexBall::new(self.im.neg(), self.re.clone())
    }

    pub fn mul_2exp(&self, e: i64) -> Self {
        ComplexBall::new(self.re.mul_2exp(e), self.im.mul_2exp(e))
    }

    pub fn div_real(&self, x: &RealBall, prec: u32) -> Self {
        ComplexBall::new(self.re.div(x, prec), self.im.div(x, prec))
    }

    /// Division; indeterminate if the divisor rectangle contains zero.
    pub fn div(&self, o: &ComplexBall, prec: u32) -> Self {
        if o.im.is_zero() {
            return self.div_real(&o.re, prec);
        }
        if o.contains_zero() {
            return ComplexBall::indeterminate();
        }
        let den = o.re.sqr(prec).add(&o.im.sqr(prec), prec);
        if den.contains_zero() {
            return ComplexBall::indeterminate();
        }
        self.mul(&o.conj(), prec).div_real(&den, prec)
    }

    pub fn recip(&self, prec: u32) -> Self {
        ComplexBall::one().div(self, prec)
    }

    // --- elementary functions ---

    /// `|z|` as a real ball.
    pub fn abs(&self, prec: u32) -> RealBall {
        if !self.is_finite() {
            return RealBall::indeterminate();
        }
        if self.im.is_zero() {
            return self.re.abs();
        }
        if self.re.is_zero() {
            return self.im.abs();
        }
        let (mid, ord) = Float::with_val_round(prec, self.re.mid().hypot_ref(self.im.mid()), Round::Nearest);
        // |z| is 1-Lipschitz
        let rad = self.rad_upper().add(&rounding_err(&mid, ord));
        RealBall::new(mid, rad)
    }

    /// Principal argument; indeterminate on the branch cut.
    pub fn arg(&self, prec: u32) -> RealBall {
        if self.im.is_zero() && self.re.is_positive() {
            return RealBall::zero();
        }
        self.im.atan2(&self.re, prec)
    }

    /// Principal logarithm; indeterminate if the rectangle meets `(−∞, 0]`.
    pub fn log(&self, prec: u32) -> Self {
        if self.im.is_zero() {
            if self.re.is_positive() {
                return ComplexBall::from_real(self.re.log(prec));
            }
            if self.re.is_negative() {
                // exactly on the negative axis: the principal value is log|x| + iπ
                return ComplexBall::new(self.re.neg().log(prec), const_pi(prec));
            }
            return ComplexBall::indeterminate();
        }
        if self.touches_branch_cut() {
            return ComplexBall::indeterminate();
        }
        self.log_unchecked(prec, false)
    }

    /// Logarithm using the branch with cut on the positive real axis,
    /// `arg ∈ (0, 2π)`. Used where the principal cut must be avoided.
    pub fn log_shifted_branch(&self, prec: u32) -> Self {
        let w = self.neg();
        if w.touches_branch_cut() {
            return ComplexBall::indeterminate();
        }
        let l = w.log_unchecked(prec, false);
        ComplexBall::new(l.re, l.im.add(&const_pi(prec), prec))
    }

    fn log_unchecked(&self, prec: u32, _real_only: bool) -> Self {
        let min_abs = self.mag_lower();
        if min_abs.is_zero() {
            return ComplexBall::indeterminate();
        }
        // log|z| from the midpoint; |d log| ≤ |dz| / min|z| on the rectangle
        let hyp = Float::with_val(prec + 8, self.re.mid().hypot_ref(self.im.mid()));
        let (lre, ord_re) = Float::with_val_round(prec, hyp.ln_ref(), Round::Nearest);
        let (lim, ord_im) = Float::with_val_round(prec, self.im.mid().atan2_ref(self.re.mid()), Round::Nearest);
        let spread = self.re.rad().add(self.im.rad()).div(&min_abs);
        let hyp_err = Mag::pow2(-(prec as i64) - 6);
        let re = RealBall::new(lre.clone(), spread.add(&hyp_err).add(&rounding_err(&lre, ord_re)));
        let im = RealBall::new(lim.clone(), spread.add(&rounding_err(&lim, ord_im)));
        ComplexBall::new(re, im)
    }

    pub fn exp(&self, prec: u32) -> Self {
        if self.im.is_zero() {
            return ComplexBall::from_real(self.re.exp(prec));
        }
        let e = self.re.exp(prec);
        let (s, c) = self.im.sin_cos(prec);
        ComplexBall::new(e.mul(&c, prec), e.mul(&s, prec))
    }

    /// `x^y = exp(y log x)` on the principal branch.
    pub fn pow(&self, y: &ComplexBall, prec: u32) -> Self {
        self.log(prec).mul(y, prec).exp(prec)
    }

    /// `x^n` by binary powering (no branch issues).
    pub fn pow_integer(&self, n: &Integer, prec: u32) -> Self {
        if *n < 0 {
            return self.pow_integer(&Integer::from(-n), prec).recip(prec);
        }
        let mut result = ComplexBall::one();
        let mut base = self.clone();
        let bits = n.significant_bits();
        for i in 0..bits {
            if n.get_bit(i) {
                result = result.mul(&base, prec);
            }
            if i + 1 < bits {
                base = base.sqr(prec);
            }
        }
        result
    }

    pub fn cosh(&self, prec: u32) -> Self {
        let e = self.exp(prec);
        let ei = self.neg().exp(prec);
        e.add(&ei, prec).mul_2exp(-1)
    }

    pub fn sinh(&self, prec: u32) -> Self {
        let e = self.exp(prec);
        let ei = self.neg().exp(prec);
        e.sub(&ei, prec).mul_2exp(-1)
    }

    /// `tanh z = (1 − e^{−2z}) / (1 + e^{−2z})`, mirrored for `Re z < 0` to
    /// keep the exponential bounded.
    pub fn tanh(&self, prec: u32) -> Self {
        if self.re.mid().is_sign_negative() {
            return self.neg().tanh(prec).neg();
        }
        let t = self.mul_2exp(1).neg().exp(prec);
        let one = ComplexBall::one();
        one.sub(&t, prec).div(&one.add(&t, prec), prec)
    }

    pub fn sqrt(&self, prec: u32) -> Self {
        if self.is_exact() && self.im.is_zero() && self.re.mid().is_zero() {
            return ComplexBall::zero();
        }
        self.log(prec).mul_2exp(-1).exp(prec)
    }

    pub fn set_prec(&self, prec: u32) -> Self {
        ComplexBall::new(self.re.set_prec(prec), self.im.set_prec(prec))
    }
}

impl fmt::Debug for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl fmt::Display for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "({}) + ({})*I", self.re, self.im)
        }
    }
}

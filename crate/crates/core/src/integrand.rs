//! The Stieltjes integrand `f(z) = log^(n+1)(a + iz) / cosh²(πz)`.
//!
//! For large `n` the values of `f` overflow every floating-point format, so
//! the integrand carries a binary scale `E` and all values and bounds it
//! reports are multiplied by `2^(-E)`. Powers `L^(n+1)` are then formed as
//! `exp((n+1) log L)`, with `n + 1` kept exact at the working precision.

use rug::float::Round;
use rug::{Float, Integer, Rational};

use crate::balls::{const_log2, const_pi, ComplexBall, Mag, RealBall};
use crate::error::Error;
use crate::quadrature::Integrand;

/// Largest exponent handled by plain binary powering.
const POWERING_LIMIT: u32 = 4096;

/// `|h(z)| = |1 + tanh πz|² < 4.015` for `Re z ≥ 1`.
const H_BOUND: f64 = 4.015;

#[derive(Clone, Debug)]
pub struct StieltjesIntegrand {
    n: Integer,
    k: Integer,
    a: ComplexBall,
    wp: u32,
    scale: Integer,
}

/// `ln|L|` and a branch of `arg L` that is continuous on the box `L`.
pub(crate) fn log_polar(l: &ComplexBall, prec: u32) -> Option<(RealBall, RealBall)> {
    if l.contains_zero() || !l.is_finite() {
        return None;
    }
    let abs = l.abs(prec);
    let lnabs = if abs.is_positive() {
        abs.log(prec)
    } else {
        // |L| ≥ mag_lower > 0 even if the hypot ball is sloppy
        let lo = l.mag_lower();
        let hi = l.mag_upper();
        let lo = Float::with_val_round(prec, lo.as_float().ln_ref(), Round::Down).0;
        let hi = Float::with_val_round(prec, hi.as_float().ln_ref(), Round::Up).0;
        RealBall::from_endpoints(&lo, &hi, prec)
    };
    let theta = if l.im.contains_zero() && !l.re.is_positive() {
        // straddles the negative axis: use π + arg(−L)
        l.neg().arg(prec).add(&const_pi(prec), prec)
    } else {
        l.arg(prec)
    };
    if !theta.is_finite() || !lnabs.is_finite() {
        return None;
    }
    Some((lnabs, theta))
}

/// `sech²(πz) = 4q / (1 + q)²` with `q = e^(∓2πz)` chosen to stay bounded.
pub(crate) fn sech2(z: &ComplexBall, prec: u32) -> ComplexBall {
    let two_pi = const_pi(prec).mul_2exp(1);
    let w = z.mul_real(&two_pi, prec);
    let q = if z.re.mid().is_sign_negative() { w.exp(prec) } else { w.neg().exp(prec) };
    let den = ComplexBall::one().add(&q, prec).sqr(prec);
    q.mul_2exp(2).div(&den, prec)
}

/// Half-integers `k + 1/2` inside `[lo, hi]`?
pub(crate) fn has_half_integer(y: &RealBall) -> bool {
    if !y.is_finite() {
        return true;
    }
    let lo = Float::with_val(y.prec().max(64), y.lower(y.prec().max(64)) - 0.5f64);
    let hi = Float::with_val(y.prec().max(64), y.upper(y.prec().max(64)) - 0.5f64);
    lo.ceil() <= hi.floor()
}

impl StieltjesIntegrand {
    /// Integrand for exponent index `n` and parameter `a = v − 1/2`.
    ///
    /// `a` should be exact; `wp` must cover the bit length of `n + 1`.
    pub fn new(n: &Integer, a: &ComplexBall, wp: u32) -> Self {
        StieltjesIntegrand {
            n: n.clone(),
            k: Integer::from(n + 1),
            a: a.clone(),
            wp,
            scale: Integer::new(),
        }
    }

    /// Reports all values multiplied by `2^(-e)`.
    pub fn with_scale(mut self, e: Integer) -> Self {
        self.scale = e;
        self
    }

    pub fn n(&self) -> &Integer {
        &self.n
    }

    pub fn a(&self) -> &ComplexBall {
        &self.a
    }

    pub fn wp(&self) -> u32 {
        self.wp
    }

    pub fn scale(&self) -> &Integer {
        &self.scale
    }

    fn k_ball(&self, prec: u32) -> RealBall {
        RealBall::from_integer(&self.k, prec.max(self.k.significant_bits()))
    }

    /// `E · ln 2` as a ball.
    fn scale_log(&self, prec: u32) -> RealBall {
        const_log2(prec).mul_integer(&self.scale, prec)
    }

    fn t_of(&self, z: &ComplexBall, prec: u32) -> ComplexBall {
        self.a.add(&z.mul_i(), prec)
    }

    /// Enclosure of `f(z) · 2^(-E)`; indeterminate on the branch cut or at poles.
    pub fn eval_f(&self, z: &ComplexBall, prec: u32) -> ComplexBall {
        if !z.is_finite() {
            return ComplexBall::indeterminate();
        }
        let t = self.t_of(z, prec);
        let l = t.log(prec);
        if !l.is_finite() {
            return ComplexBall::indeterminate();
        }
        let small = self.k <= POWERING_LIMIT;
        if small && self.scale == 0 {
            let lk = l.pow_integer(&self.k, prec);
            return lk.mul(&sech2(z, prec), prec);
        }

        let neg = z.re.mid().is_sign_negative();
        let two_pi = const_pi(prec).mul_2exp(1);
        let w = z.mul_real(&two_pi, prec);
        let w = if neg { w } else { w.neg() };
        let q = w.exp(prec);
        let den = ComplexBall::one().add(&q, prec).sqr(prec);
        let ln4 = const_log2(prec).mul_2exp(1);
        let shift = ln4.sub(&self.scale_log(prec), prec);
        let kb = self.k_ball(prec);

        match log_polar(&l, prec) {
            Some((lnabs, theta)) => {
                let re = kb.mul(&lnabs, prec).add(&w.re, prec).add(&shift, prec);
                let im = kb.mul(&theta, prec).add(&w.im, prec);
                ComplexBall::new(re, im).exp(prec).div(&den, prec)
            }
            None => {
                // L may vanish: only |L|^K ≤ max|L|^K is available
                let lmax = l.mag_upper();
                if lmax.is_zero() {
                    return ComplexBall::zero();
                }
                if !lmax.is_finite() {
                    return ComplexBall::indeterminate();
                }
                let ln_lmax = Float::with_val_round(64, lmax.as_float().ln_ref(), Round::Up).0;
                let ln_lmax = RealBall::exact(ln_lmax);
                let e = kb.mul(&ln_lmax, prec).add(&w.re, prec).add(&shift, prec);
                let m = Mag::exp_of(&e.upper(64)).div(&den.mag_lower());
                ComplexBall::zero().add_error(&m)
            }
        }
    }

    /// `g(m) = (n+1) log(log(a + im)) − 2πm` and
    /// `g′(m) = i(n+1) / ((a + im) log(a + im)) − 2π`, unscaled.
    pub fn eval_g_and_gprime(&self, m: &ComplexBall, prec: u32) -> Result<(ComplexBall, ComplexBall), Error> {
        let t = self.t_of(m, prec);
        let l = t.log(prec);
        if !l.is_finite() {
            return Err(Error::Domain("a + iz meets the branch cut of log".into()));
        }
        let Some((lnabs, theta)) = log_polar(&l, prec) else {
            return Err(Error::Domain("log(a + iz) vanishes".into()));
        };
        let kb = self.k_ball(prec);
        let two_pi = const_pi(prec).mul_2exp(1);
        let g = ComplexBall::new(kb.mul(&lnabs, prec), kb.mul(&theta, prec))
            .sub(&m.mul_real(&two_pi, prec), prec);
        let tl = t.mul(&l, prec);
        let gp = ComplexBall::new(RealBall::zero(), kb.clone())
            .div(&tl, prec)
            .sub(&ComplexBall::from_real(two_pi), prec);
        if !gp.is_finite() {
            return Err(Error::Domain("log(a + iz) vanishes".into()));
        }
        Ok((g, gp))
    }

    /// Upper bound for `sup |g″(z)|` over the rectangle `z`, from lower bounds
    /// for `|t|` and `|log t|`; `None` if the rectangle touches a singularity.
    pub fn gpp_bound(&self, z: &ComplexBall, prec: u32) -> Option<Mag> {
        let t = self.t_of(z, prec.clamp(64, 128));
        if t.touches_branch_cut() {
            return None;
        }
        let l = t.log(prec.clamp(64, 128));
        if !l.is_finite() {
            return None;
        }
        let tmin = t.mag_lower();
        let lmin = l.mag_lower();
        if tmin.is_zero() || lmin.is_zero() {
            return None;
        }
        let num = Mag::one().add(&Mag::one().div(&lmin));
        let den = tmin.mul_lower(&tmin).mul_lower(&lmin);
        Some(Mag::from_integer(&self.k).mul(&num).div(&den))
    }

    /// True if the rectangle meets a pole `i(k + 1/2)` of `sech²(πz)` or the
    /// branch cut `Re z = −Im a, Im z ≥ Re a` of `log(a + iz)`.
    pub fn touches_singularity(&self, z: &ComplexBall) -> bool {
        if !z.is_finite() {
            return true;
        }
        if z.re.contains_zero() && has_half_integer(&z.im) {
            return true;
        }
        let cut_x = RealBall::exact(self.a.im.mid().clone()).neg();
        let cut_x = cut_x.add_error(self.a.im.rad());
        if z.re.overlaps(&cut_x) {
            let top = z.im.upper(64);
            let start = self.a.re.lower(64);
            if top >= start {
                return true;
            }
        }
        false
    }

    /// Upper bound for `|f(z)| · 2^(-E)` over the rectangle `z`, or `None`
    /// if `f` may fail to be analytic there.
    pub fn bound_on_set(&self, z: &ComplexBall, prec: u32) -> Option<Mag> {
        if self.touches_singularity(z) {
            return None;
        }
        let direct = {
            let v = self.eval_f(z, prec);
            if v.is_finite() { v.mag_upper() } else { Mag::inf() }
        };
        if z.re.lower(64) < 1 {
            return direct.is_finite().then_some(direct);
        }
        let taylor = self.taylor_bound(z, prec).unwrap_or_else(Mag::inf);
        let b = direct.min(&taylor);
        b.is_finite().then_some(b)
    }

    /// `4.015 |exp(g(m))| exp(|g′(m)| r + G r²/2)` scaled by `2^(-E)`.
    fn taylor_bound(&self, z: &ComplexBall, prec: u32) -> Option<Mag> {
        let m = z.mid_exact();
        let (g, gp) = self.eval_g_and_gprime(&m, prec).ok()?;
        let r = z.rad_upper();
        let gg = self.gpp_bound(z, prec)?;
        let re_g = g.re.sub(&self.scale_log(prec), prec);
        let spread = gp.mag_upper().mul(&r).add(&gg.mul(&r).mul(&r).mul_2exp(-1));
        if !spread.is_finite() {
            return None;
        }
        let e = Float::with_val_round(64, re_g.upper(64) + spread.as_float(), Round::Up).0;
        Some(Mag::from_f64(H_BOUND).mul(&Mag::exp_of(&e)))
    }

    /// `Re g(m) − E ln 2`, the log-magnitude of the scaled `exp(g(m))`.
    pub fn log_peak(&self, m: &ComplexBall, prec: u32) -> Result<RealBall, Error> {
        let (g, _) = self.eval_g_and_gprime(m, prec)?;
        Ok(g.re.sub(&self.scale_log(prec), prec))
    }

    /// Upper bound for `ln` of the tail bound
    /// `0.934 e^(−2πN) |log(a + Ni)|^(n+1)`, unscaled.
    ///
    /// Requires `N ≥ n + 2 + |Im a|`.
    pub fn log_tail_bound(&self, big_n: &Float) -> Result<Float, Error> {
        let prec = self.wp.max(64);
        let nb = RealBall::exact(Float::with_val(prec.max(big_n.prec()), big_n));
        let min_n = RealBall::from_integer(&Integer::from(&self.n + 2), prec).add(&self.a.im.abs(), prec);
        if nb.upper(prec) < min_n.upper(prec) {
            return Err(Error::Domain("tail cutoff below n + 2 + |Im a|".into()));
        }
        let t = self.a.add(&ComplexBall::new(RealBall::zero(), nb.clone()), prec);
        let l = t.log(prec);
        let lnabs = l.abs(prec).log(prec);
        if !lnabs.is_finite() {
            return Err(Error::Domain("tail bound undefined".into()));
        }
        let c = RealBall::from_rational(&Rational::from((934, 1000)), 64)
            .add_error(&Mag::pow2(-60))
            .log(64);
        let two_pi = const_pi(prec).mul_2exp(1);
        let v = self
            .k_ball(prec)
            .mul(&lnabs, prec)
            .sub(&two_pi.mul(&nb, prec), prec)
            .add(&c, prec);
        Ok(v.upper(64))
    }

    /// Tail bound at `N`, scaled by `2^(-E)`.
    pub fn tail_bound(&self, big_n: &Float) -> Result<Mag, Error> {
        let prec = self.wp.max(64);
        let lt = self.log_tail_bound(big_n)?;
        let e = RealBall::exact(lt).sub(&self.scale_log(prec), prec);
        Ok(Mag::exp_of(&e.upper(64)))
    }
}

impl Integrand for StieltjesIntegrand {
    fn eval(&self, z: &ComplexBall, prec: u32) -> ComplexBall {
        self.eval_f(z, prec)
    }

    fn bound(&self, z: &ComplexBall, prec: u32) -> Option<Mag> {
        self.bound_on_set(z, prec)
    }
}

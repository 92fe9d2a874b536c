//! Knessl-Coffey estimate `γₙ ≈ (B/√n) e^(nA) cos(an + b)`.
//!
//! Plain floating point, no error bounds. The estimate is only used to
//! cross-check rigorous results and is never mixed into them.

use rug::float::Constant;
use rug::{Float, Integer};
use serde::Serialize;

use crate::balls::{ScaledComplex, Significand};
use crate::error::Error;

#[derive(Clone, Debug)]
pub struct KnesslCoffey {
    pub n: Integer,
    pub beta: Float,
    pub alpha: Float,
    pub big_a: Float,
    pub big_b: Float,
    pub a: Float,
    pub b: Float,
    /// `cos(an + b)`.
    pub cos_factor: f64,
    /// `log₁₀ |estimate|`.
    pub log10_abs: Float,
    pub negative: bool,
}

fn prec_for(n: &Integer) -> u32 {
    64 + n.significant_bits()
}

/// `ln 2π + β tan β − ln n − ln cos β + ln β`, increasing on `(0, π/2)`.
fn residual(beta: &Float, ln_n: &Float, prec: u32) -> Float {
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let t = Float::with_val(prec, beta.tan_ref());
    let c = Float::with_val(prec, beta.cos_ref());
    Float::with_val(prec, two_pi.ln_ref()) + Float::with_val(prec, beta * &t) - ln_n - c.ln()
        + Float::with_val(prec, beta.ln_ref())
}

fn residual_deriv(beta: &Float, prec: u32) -> Float {
    let t = Float::with_val(prec, beta.tan_ref());
    let sec2 = Float::with_val(prec, t.square_ref()) + 1u32;
    Float::with_val(prec, &t * 2u32) + Float::with_val(prec, beta * &sec2) + Float::with_val(prec, beta.recip_ref())
}

/// Root of `2π exp(β tan β) = n cos β / β` in `(0, π/2)`: bisection to
/// 60 bits, then Newton at `prec` bits.
fn solve_beta_prec(n: &Integer, prec: u32) -> Result<Float, Error> {
    if *n < 1 {
        return Err(Error::Domain("Knessl-Coffey needs n ≥ 1".into()));
    }
    let ln_n = Float::with_val(prec, n).ln();
    let half_pi = Float::with_val(prec, Constant::Pi) / 2u32;
    let mut lo = Float::with_val(prec, 0);
    let mut hi = half_pi;
    for _ in 0..64 {
        let mid = Float::with_val(prec, &lo + &hi) / 2u32;
        if residual(&mid, &ln_n, prec) < 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut beta = Float::with_val(prec, &lo + &hi) / 2u32;
    let mut last = Float::with_val(prec, 1);
    for _ in 0..200 {
        let step = residual(&beta, &ln_n, prec) / residual_deriv(&beta, prec);
        beta -= &step;
        let s = step.abs();
        let rel = Float::with_val(prec, &s / &beta);
        if rel.is_zero() || rel.get_exp().map(|e| e < -(prec as i32) + 4).unwrap_or(true) || s >= last {
            break;
        }
        last = s;
    }
    Ok(beta)
}

/// `β` to about 53 bits.
pub fn solve_beta(n: &Integer) -> Result<f64, Error> {
    solve_beta_prec(n, 64).map(|b| b.to_f64())
}

/// Evaluates all Knessl-Coffey quantities at `n ≥ 1`.
pub fn knessl_coffey(n: &Integer) -> Result<KnesslCoffey, Error> {
    let prec = prec_for(n);
    let beta = solve_beta_prec(n, prec)?;
    let alpha = Float::with_val(prec, &beta * Float::with_val(prec, beta.tan_ref()));
    let r2 = Float::with_val(prec, alpha.square_ref()) + Float::with_val(prec, beta.square_ref());
    let big_a = Float::with_val(prec, r2.ln_ref()) / 2u32 - Float::with_val(prec, &alpha / &r2);
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let ap1 = Float::with_val(prec, &alpha + 1u32);
    let q = Float::with_val(prec, ap1.square_ref()) + Float::with_val(prec, beta.square_ref());
    let big_b = Float::with_val(prec, &two_pi * &r2).sqrt() * 2u32 / q.root(4);
    let at = Float::with_val(prec, &beta / &alpha).atan();
    let a = Float::with_val(prec, &at + Float::with_val(prec, &beta / &r2));
    let b = Float::with_val(prec, &at - Float::with_val(prec, &beta / &ap1).atan() / 2u32);

    let nf = Float::with_val(prec, n);
    let phase = Float::with_val(prec, &a * &nf) + &b;
    let cos = phase.cos();
    let ln10 = Float::with_val(prec, 10).ln();
    let ln_mag = Float::with_val(prec, big_b.ln_ref()) - Float::with_val(prec, nf.ln_ref()) / 2u32
        + Float::with_val(prec, &nf * &big_a)
        + Float::with_val(prec, cos.abs_ref()).ln();
    let log10_abs = ln_mag / ln10;
    Ok(KnesslCoffey {
        n: n.clone(),
        beta,
        alpha,
        big_a,
        big_b,
        a,
        b,
        cos_factor: cos.to_f64(),
        negative: cos.is_sign_negative(),
        log10_abs,
    })
}

impl KnesslCoffey {
    /// Decimal exponent of the estimate.
    pub fn exponent10(&self) -> Integer {
        self.log10_abs.clone().floor().to_integer().unwrap_or_default()
    }

    /// Significand in `[1, 10)`, sign included.
    pub fn significand(&self) -> f64 {
        let frac = Float::with_val(self.log10_abs.prec(), &self.log10_abs - self.exponent10());
        let s = 10f64.powf(frac.to_f64());
        if self.negative { -s } else { s }
    }

    /// `2π exp(β tan β) − n cos β / β`, relative to `n`.
    pub fn relative_residual(&self) -> f64 {
        let prec = self.beta.prec();
        let lhs = Float::with_val(prec, &self.alpha).exp() * (Float::with_val(prec, Constant::Pi) * 2u32);
        let rhs = Float::with_val(prec, &self.n) * Float::with_val(prec, self.beta.cos_ref()) / &self.beta;
        (Float::with_val(prec, lhs - &rhs) / Float::with_val(prec, &self.n)).to_f64()
    }
}

/// How a computed value compares with the estimate.
#[derive(Clone, Debug, Serialize)]
pub struct Agreement {
    pub same_sign: bool,
    pub same_exponent: bool,
    /// `⌊−log₁₀ |x − e| / |x|⌋`, clamped to `[0, 30]`.
    pub digits: u32,
    pub computed: String,
    pub estimate: String,
}

/// Compares the real part of `value` with the estimate.
pub fn agreement(kc: &KnesslCoffey, value: &ScaledComplex) -> Option<Agreement> {
    let sig = Significand::of(&value.ball.re, &value.exp2, 30)?;
    let x = sig.center.to_f64();
    if x == 0.0 {
        return None;
    }
    let e = kc.significand();
    let ke = kc.exponent10();
    let diff = Integer::from(&ke - &sig.e10);
    let shift = diff.to_i32().filter(|d| d.abs() <= 300)?;
    let e_aligned = e * 10f64.powi(shift);
    let rel = ((x - e_aligned) / x).abs();
    let digits = if rel == 0.0 { 30 } else { (-rel.log10()).floor().clamp(0.0, 30.0) as u32 };
    Some(Agreement {
        same_sign: (x < 0.0) == kc.negative,
        same_exponent: sig.e10 == ke,
        digits,
        computed: format!("{x:.15}e{}", sig.e10),
        estimate: format!("{e:.15}e{ke}"),
    })
}

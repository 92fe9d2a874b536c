//! Outward-rounded decimal printing and parsing of balls.
//!
//! Values may carry an arbitrary-size binary scale `2^exp2`, so decimal
//! exponents are big integers. The printed interval `mid ± rad` always
//! contains the binary ball.

use std::fmt;

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use super::mag::Mag;
use super::real::{const_log2, RealBall};

/// Binary exponents up to this size are converted through exact rationals.
const EXACT_EXP_LIMIT: i64 = 1 << 17;

/// Decimal rendering of a real ball: the set `[mid − rad, mid + rad]`
/// contains the ball it was produced from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecimalBall {
    pub mid: String,
    pub rad: String,
}

/// `value = (center ± rad) · 10^e10` with `1 ≤ |center| < 10` unless zero.
#[derive(Clone, Debug)]
pub struct Significand {
    pub center: Rational,
    pub rad: Rational,
    pub e10: Integer,
}

impl Significand {
    /// Splits `x · 2^exp2` into a decimal significand and exponent.
    ///
    /// `digits` sets how much precision the significand needs. Returns
    /// `None` for indeterminate balls.
    pub fn of(x: &RealBall, exp2: &Integer, digits: usize) -> Option<Significand> {
        if !x.is_finite() {
            return None;
        }
        if x.mid().is_zero() {
            return Some(Significand {
                center: Rational::new(),
                rad: Rational::new(),
                e10: Integer::new(),
            });
        }
        let mexp = x.mid().get_exp().unwrap_or(0) as i64;
        let small = exp2
            .to_i64()
            .map(|e| (e + mexp).abs() < EXACT_EXP_LIMIT)
            .unwrap_or(false);
        if small {
            Some(exact_significand(x, exp2.to_i64().unwrap()))
        } else {
            Some(scaled_significand(x, exp2, digits))
        }
    }

    /// Rounds the center to `digits` significant digits and returns the
    /// digit string (no decimal point, no sign), the sign, the adjusted
    /// exponent, and the rounding error.
    fn round_center(&self, digits: usize) -> (bool, String, Integer, Rational) {
        let neg = self.center < 0;
        let abs = Rational::from(self.center.abs_ref());
        if abs == 0 {
            return (false, "0".repeat(digits), Integer::new(), Rational::new());
        }
        let scale = Integer::from(10).pow((digits - 1) as u32);
        let scaled = Rational::from(&abs * &scale);
        let n = round_half_even(&scaled);
        let mut e10 = self.e10.clone();
        let exact_dec = Rational::from((n.clone(), scale.clone()));
        let err = Rational::from(&abs - &exact_dec).abs();
        let mut s = n.to_string();
        if s.len() > digits {
            // rounded up to 10.00…; drop the trailing zero and bump the exponent
            s.truncate(digits);
            e10 += 1;
        }
        (neg, s, e10, err)
    }

    /// Correctly rounded `digits`-digit significand if the enclosure decides it.
    pub fn certified(&self, digits: usize) -> Option<(bool, String, Integer)> {
        let lo = Significand {
            center: Rational::from(&self.center - &self.rad),
            rad: Rational::new(),
            e10: self.e10.clone(),
        };
        let hi = Significand {
            center: Rational::from(&self.center + &self.rad),
            rad: Rational::new(),
            e10: self.e10.clone(),
        };
        if (lo.center.clone() * &hi.center) <= 0 {
            return None;
        }
        let (nl, sl, el, _) = lo.round_center(digits);
        let (nh, sh, eh, _) = hi.round_center(digits);
        if nl == nh && sl == sh && el == eh {
            Some((nl, sl, el))
        } else {
            None
        }
    }
}

fn round_half_even(q: &Rational) -> Integer {
    let (rem, fl) = q.clone().fract_floor(Integer::new());
    let half = Rational::from((1, 2));
    match rem.cmp(&half) {
        std::cmp::Ordering::Less => fl,
        std::cmp::Ordering::Greater => fl + 1,
        std::cmp::Ordering::Equal => {
            if fl.is_even() {
                fl
            } else {
                fl + 1
            }
        }
    }
}

fn pow10_rational(e: &Integer) -> Rational {
    let p = Integer::from(10).pow(e.clone().abs().to_u32().expect("exponent within exact range"));
    if *e >= 0 {
        Rational::from(p)
    } else {
        Rational::from((Integer::from(1), p))
    }
}

fn exact_significand(x: &RealBall, exp2: i64) -> Significand {
    let mut m = x.mid().to_rational().unwrap();
    let mut r = x.rad().as_float().to_rational().unwrap();
    let shift = Rational::from(Integer::from(1) << exp2.unsigned_abs() as u32);
    if exp2 >= 0 {
        m *= &shift;
        r *= &shift;
    } else {
        m /= &shift;
        r /= &shift;
    }
    let abs = Float::with_val(64, &Rational::from(m.abs_ref()));
    let mut e10 = abs.log10().floor().to_integer().unwrap();
    loop {
        let p = pow10_rational(&e10);
        let s = Rational::from(m.abs_ref()) / &p;
        if s >= 10 {
            e10 += 1;
            continue;
        }
        if s < 1 {
            e10 -= 1;
            continue;
        }
        let center = Rational::from(&m / &p);
        let rad = Rational::from(&r / &p);
        return Significand { center, rad, e10 };
    }
}

fn scaled_significand(x: &RealBall, exp2: &Integer, digits: usize) -> Significand {
    let prec = (digits as u32) * 4 + 96 + exp2.significant_bits() + 64;
    let ln2 = const_log2(prec);
    let ln10 = RealBall::from_integer(&Integer::from(10), 64).log(prec);
    // log10|x| estimate fixes the exponent; any integer close to it works
    let (mm, me) = x.mid().to_f64_exp();
    let log2_abs = Float::with_val(prec, exp2) + me + mm.abs().log2();
    let l10 = Float::with_val(prec, &log2_abs * Float::with_val(prec, 2).log10());
    let mut e10 = l10.floor().to_integer().unwrap();
    loop {
        let shift = RealBall::from_integer(exp2, prec)
            .mul(&ln2, prec)
            .sub(&RealBall::from_integer(&e10, prec).mul(&ln10, prec), prec);
        let factor = shift.exp(prec);
        let s = x.mul(&factor, prec);
        let sa = Float::with_val(64, &*s.mid().as_abs());
        if sa >= 10 {
            e10 += 1;
            continue;
        }
        if sa < 1 {
            e10 -= 1;
            continue;
        }
        let center = s.mid().to_rational().unwrap();
        let rad = s.rad().as_float().to_rational().unwrap_or_default();
        return Significand { center, rad, e10 };
    }
}

/// Formats an integer digit string `d₀d₁…` as `d₀.d₁…e<exp>`.
fn sci(neg: bool, digits: &str, e10: &Integer) -> String {
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&digits[..1]);
    if digits.len() > 1 {
        out.push('.');
        out.push_str(&digits[1..]);
    }
    if *e10 != 0 {
        out.push('e');
        out.push_str(&e10.to_string());
    }
    out
}

/// Upper bound of a nonnegative rational as a 3-significant-digit decimal,
/// relative to the decimal exponent `base_e10`.
fn rad_upper_string(r: &Rational, base_e10: &Integer) -> String {
    if *r == 0 {
        return "0".to_string();
    }
    let f = Float::with_val_round(64, r, Round::Up).0;
    let mut e = f.log10().floor().to_integer().unwrap();
    loop {
        // R = ceil(r · 10^(2−e)); need 100 ≤ R ≤ 999 (1000 when r hits exactly)
        let k = Integer::from(2) - &e;
        let scaled = r * pow10_rational(&k);
        let big = scaled.ceil().into_numer_denom().0;
        if big >= 1000 {
            e += 1;
            continue;
        }
        if big < 100 {
            e -= 1;
            continue;
        }
        let total_e = Integer::from(&e + base_e10);
        return sci(false, &big.to_string(), &total_e);
    }
}

impl DecimalBall {
    /// Renders `x · 2^exp2` with `digits` significant digits in the midpoint.
    pub fn from_real(x: &RealBall, exp2: &Integer, digits: usize) -> DecimalBall {
        let digits = digits.max(1);
        let Some(sig) = Significand::of(x, exp2, digits) else {
            return DecimalBall {
                mid: "0".into(),
                rad: "inf".into(),
            };
        };
        if sig.center == 0 {
            let rad = mag_times_pow2_string(x.rad(), exp2);
            return DecimalBall {
                mid: "0".into(),
                rad,
            };
        }
        let (neg, ds, e10, err) = sig.round_center(digits);
        let total = Rational::from(&sig.rad + &err);
        let rad = rad_upper_string(&total, &sig.e10);
        DecimalBall {
            mid: sci(neg, &ds, &e10),
            rad,
        }
    }

    /// Parses a plain decimal ball back to a binary ball containing it.
    ///
    /// Only exponents in the normal floating-point range are supported.
    pub fn to_real(&self, prec: u32) -> Option<RealBall> {
        let m = parse_decimal(&self.mid)?;
        let r = if self.rad == "inf" {
            return Some(RealBall::indeterminate());
        } else {
            parse_decimal(&self.rad)?
        };
        let mid = RealBall::from_rational(&m, prec);
        let rad = Float::with_val_round(64, &r, Round::Up).0;
        Some(mid.add_error(&Mag::from_float(&rad)))
    }
}

/// Upper bound of `r · 2^exp2` as a decimal string.
fn mag_times_pow2_string(r: &Mag, exp2: &Integer) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let ball = RealBall::exact(r.as_float().clone());
    match Significand::of(&ball, exp2, 4) {
        Some(sig) => {
            let total = Rational::from(&sig.center + &sig.rad);
            rad_upper_string(&total, &sig.e10)
        }
        None => "inf".into(),
    }
}

/// Parses `[-]d[.ddd][e[-]X]` exactly.
pub fn parse_decimal(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{}{}", int_part, frac_part);
    let n = Integer::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10).ok()?;
    let e = exp - frac_part.len() as i64;
    if e.abs() > 10_000_000 {
        return None;
    }
    let mut q = Rational::from(n) * pow10_rational(&Integer::from(e));
    if neg {
        q = -q;
    }
    Some(q)
}

impl fmt::Display for DecimalBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {}", self.mid, self.rad)
    }
}

//! `ζ(s, v) = π / (2(s−1)) ∫_{−∞}^{∞} (a + ix)^(1−s) / cosh²(πx) dx`,
//! `a = v − 1/2`, `Re v ≥ 1` after normalization.
//!
//! Tail bound. For `x ≥ N` write `t = a + ix`, `σ = Re(1 − s)`. Since
//! `|arg t| < π/2`, `|t^(1−s)| ≤ |t|^σ e^(π|Im s|/2)`. If `σ ≤ 0` and
//! `N ≥ |Im a| + 1` then `|t| ≥ 1` and `|t|^σ ≤ 1`. If `σ > 0`, `|t| ≤ |a| + x`
//! and `(|a|+x)^σ ≤ (|a|+N)^σ e^(x−N)` once `N ≥ σ`. With
//! `sech²(πx) < 4e^(−2πx)` this gives
//!
//! ```text
//! ∫_N^∞ |…| dx ≤ 4/(2π−1) · e^(−2πN) (|a|+N)^max(0,σ) e^(π|Im s|/2)
//! ```
//!
//! and the same for `(−∞, −N]`.

use std::time::Instant;

use rug::float::Round;
use rug::Float;
use serde::Serialize;

use super::{shift_count, Options};
use crate::balls::{const_pi, ComplexBall, Mag, RealBall};
use crate::error::Error;
use crate::integrand::{has_half_integer, sech2};
use crate::quadrature::{petras_integrate, Integrand, Segment};

/// Largest `|s|` accepted.
const MAX_ABS_S: f64 = 1000.0;

struct ZetaIntegrand {
    a: ComplexBall,
    w: ComplexBall,
}

impl Integrand for ZetaIntegrand {
    fn eval(&self, z: &ComplexBall, prec: u32) -> ComplexBall {
        if !z.is_finite() {
            return ComplexBall::indeterminate();
        }
        let t = self.a.add(&z.mul_i(), prec);
        let l = t.log(prec);
        if !l.is_finite() {
            return ComplexBall::indeterminate();
        }
        l.mul(&self.w, prec).exp(prec).mul(&sech2(z, prec), prec)
    }

    fn bound(&self, z: &ComplexBall, prec: u32) -> Option<Mag> {
        if !z.is_finite() || (z.re.contains_zero() && has_half_integer(&z.im)) {
            return None;
        }
        let v = self.eval(z, prec);
        v.is_finite().then(|| v.mag_upper())
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ZetaDiagnostics {
    pub wp: u32,
    #[serde(rename = "N")]
    pub n_cut: f64,
    pub segments: u64,
    #[serde(rename = "evals")]
    pub evaluations: u64,
    pub shift_count: u64,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct ZetaResult {
    pub value: ComplexBall,
    pub diagnostics: ZetaDiagnostics,
    pub warnings: Vec<String>,
    pub nonconvergent: bool,
}

/// Rigorous upper bound for the one-sided tail beyond `N`.
fn tail_bound(a: &ComplexBall, s: &ComplexBall, big_n: f64) -> Mag {
    let prec = 64;
    let nb = RealBall::from_f64(big_n);
    let sigma = Float::with_val_round(prec, 1 - s.re.lower(prec), Round::Up).0;
    let two_pi = const_pi(prec).mul_2exp(1);
    let mut ln = RealBall::from_f64(4.0)
        .div(&two_pi.sub(&RealBall::one(), prec), prec)
        .log(prec)
        .sub(&two_pi.mul(&nb, prec), prec)
        .add(&const_pi(prec).mul(&RealBall::exact(s.im.mag_upper().as_float().clone()), prec).mul_2exp(-1), prec);
    if sigma > 0 {
        let base = RealBall::exact(a.mag_upper().as_float().clone()).add(&nb, prec);
        ln = ln.add(&base.log(prec).mul(&RealBall::exact(sigma), prec), prec);
    }
    Mag::exp_of(&ln.upper(prec))
}

/// Smallest admissible `N` (doubling) with tail below `tol`.
fn choose_cutoff(a: &ComplexBall, s: &ComplexBall, tol: &Mag) -> f64 {
    let sigma = (1.0 - s.re.mid().to_f64()).max(0.0) + s.re.rad().to_f64();
    let mut n = (a.im.mag_upper().to_f64() + 1.0).max(sigma).max(1.0).ceil();
    while tail_bound(a, s, n) > *tol {
        n *= 2.0;
    }
    n
}

/// `ln|(a+ix)^(1−s) sech²(πx)|` peak over `[−N, N]` in double precision.
fn log_peak(a: &ComplexBall, s: &ComplexBall, big_n: f64) -> f64 {
    const STEPS: usize = 4096;
    let (ar, ai) = (a.re.mid().to_f64(), a.im.mid().to_f64());
    let (wr, wi) = (1.0 - s.re.mid().to_f64(), -s.im.mid().to_f64());
    let tau = std::f64::consts::TAU;
    (0..=STEPS)
        .map(|i| {
            let x = -big_n + 2.0 * big_n * i as f64 / STEPS as f64;
            let (tr, ti) = (ar, ai + x);
            let (lr, li) = (0.5 * (tr * tr + ti * ti).ln(), ti.atan2(tr));
            let ax = x.abs();
            wr * lr - wi * li + 4f64.ln() - tau * ax - 2.0 * (-tau * ax).exp().ln_1p()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Encloses the Hurwitz zeta function `ζ(s, v)` for `|s| ≤ 1000`, `s ≠ 1`.
pub fn hurwitz_zeta(s: &ComplexBall, v: &ComplexBall, p: u32, opts: &Options) -> Result<ZetaResult, Error> {
    let start = Instant::now();
    if !s.is_finite() || !v.is_finite() {
        return Err(Error::Domain("indeterminate argument".into()));
    }
    if p < 8 {
        return Err(Error::Domain("precision must be at least 8 bits".into()));
    }
    if !(s.mag_upper() <= MAX_ABS_S) {
        return Err(Error::Domain("|s| above 1000 is not supported".into()));
    }
    let wp = p + 30;
    let sm1 = s.sub(&ComplexBall::one(), wp);
    if sm1.contains_zero() {
        return Err(Error::Domain("pole at s = 1".into()));
    }

    let k = shift_count(v)?;
    let mut correction = ComplexBall::zero();
    let neg_s = s.neg();
    for j in 0..k {
        let w = v.add(&ComplexBall::from_f64(j as f64, 0.0), wp);
        if w.contains_zero() {
            return Err(Error::Domain("v is a nonpositive integer".into()));
        }
        let l = w.log(wp);
        if !l.is_finite() {
            return Err(Error::Domain("v + j meets the branch cut of log".into()));
        }
        correction = correction.add(&l.mul(&neg_s, wp).exp(wp), wp);
    }
    let a = v
        .add(&ComplexBall::from_f64(k as f64, 0.0), wp)
        .sub(&ComplexBall::from_f64(0.5, 0.0), wp);

    let f = ZetaIntegrand {
        a: a.clone(),
        w: ComplexBall::one().sub(s, wp),
    };
    let rough = choose_cutoff(&a, s, &Mag::pow2(-(p as i64) - 20));
    let peak = log_peak(&a, s, rough).max(0.0);
    let tol = Mag::pow2(-(p as i64) - 10).mul(&Mag::exp_of(&Float::with_val(64, peak)));
    let big_n = choose_cutoff(&a, s, &tol.mul_2exp(-10));
    let tail = tail_bound(&a, s, big_n);

    let zero = ComplexBall::zero();
    let end = ComplexBall::from_f64(big_n, 0.0);
    let symmetric = s.is_real() && a.is_real();
    let segments = if symmetric {
        vec![Segment::new(zero.clone(), end)]
    } else {
        vec![Segment::new(end.neg(), zero.clone()), Segment::new(zero, end)]
    };
    let mut diag = ZetaDiagnostics {
        wp,
        n_cut: big_n,
        shift_count: k,
        ..Default::default()
    };
    let mut nonconvergent = false;
    let mut integral = ComplexBall::zero();
    for seg in &segments {
        let r = petras_integrate(&f, seg, wp, &tol, &opts.limits)?;
        integral = integral.add(&r.value.add_error(&tail), wp);
        diag.segments += r.segments;
        diag.evaluations += r.evaluations;
        nonconvergent |= r.nonconvergent;
    }
    if symmetric {
        integral = ComplexBall::from_real(integral.re.mul_2exp(1));
    }

    let factor = ComplexBall::from_real(const_pi(wp)).div(&sm1.mul_2exp(1), wp);
    let mut value = integral.mul(&factor, wp).add(&correction, wp);
    if s.is_real() && v.is_real() && v.re.is_positive() {
        value = ComplexBall::from_real(value.re);
    }

    let mut warnings = Vec::new();
    if nonconvergent {
        warnings.push("quadrature limits reached; the enclosure may be wide".to_string());
    }
    if value.rel_accuracy_bits() < (p / 2) as i64 {
        warnings.push("cancellation: result has low relative accuracy".to_string());
    }
    diag.seconds = start.elapsed().as_secs_f64();
    Ok(ZetaResult {
        value,
        diagnostics: diag,
        warnings,
        nonconvergent,
    })
}

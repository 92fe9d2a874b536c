//! Top-level evaluation of `γₙ(v)` and `ζ(s, v)`.
//!
//! `γₙ(v)` is assembled from the half-line integrals
//! `Iₙ(a) = ∫₀^∞ log^(n+1)(a + ix) / cosh²(πx) dx`, `a = v − 1/2`, as
//!
//! ```text
//! γₙ(v) = −π / (2(n+1)) · (Iₙ(a) + conj(Iₙ(conj a)))
//! ```
//!
//! which for real `a` reduces to `−π/(n+1) · Re Iₙ(a)`.

mod zeta;

pub use zeta::{hurwitz_zeta, ZetaDiagnostics, ZetaResult};

use std::time::Instant;

use rug::float::Round;
use rug::{Complex, Float, Integer};
use serde::Serialize;

use crate::balls::{const_log2, const_pi, ComplexBall, Mag, RealBall, ScaledComplex};
use crate::contour::{build_contour, ContourPlan, SHIFT_THRESHOLD};
use crate::error::Error;
use crate::integrand::{log_polar, StieltjesIntegrand};
use crate::quadrature::{petras_integrate, Limits};

/// Environment variable capping the number of worker threads per request.
pub const THREADS_ENV: &str = "STIELTJES_THREADS";

/// Largest number of recurrence steps used to move `Re v` up to 1.
const MAX_SHIFT_STEPS: u64 = 1 << 20;

#[derive(Clone, Debug)]
pub struct StieltjesRequest {
    pub n: Integer,
    pub v: ComplexBall,
    /// Target accuracy in bits.
    pub p: u32,
}

#[derive(Clone, Debug)]
pub struct Options {
    /// Paths for `n` above this pass through the saddle point.
    pub shift_threshold: Integer,
    pub limits: Limits,
    pub threads: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            shift_threshold: Integer::from(SHIFT_THRESHOLD),
            limits: Limits::default(),
            threads: default_threads(),
        }
    }
}

/// Available parallelism, capped by `STIELTJES_THREADS` if set.
pub fn default_threads() -> usize {
    let avail = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    match std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        Some(cap) => avail.min(cap.max(1)),
        None => avail,
    }
}

/// Where the time and evaluations went.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Diagnostics {
    pub wp: u32,
    pub guard_bits: u32,
    pub shifted: bool,
    /// Tail cutoff `N`, in decimal.
    #[serde(rename = "N")]
    pub n_cut: String,
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub omega: [f64; 2],
    pub saddle_residual: f64,
    pub segments: u64,
    #[serde(rename = "evals")]
    pub evaluations: u64,
    pub max_depth: u32,
    pub integrals: u32,
    pub shift_count: u64,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct StieltjesResult {
    pub value: ScaledComplex,
    pub diagnostics: Diagnostics,
    pub warnings: Vec<String>,
    /// A quadrature limit was hit; `value` is still an enclosure.
    pub nonconvergent: bool,
}

impl StieltjesResult {
    /// Shifted count as in `γₙ(v) = γₙ(v + k) + Σ logⁿ(v+j)/(v+j)`.
    pub fn shifted_terms(&self) -> u64 {
        self.diagnostics.shift_count
    }
}

/// Output of [`normalize_v`].
#[derive(Clone, Debug)]
pub struct Normalized {
    pub a: ComplexBall,
    pub correction: ScaledComplex,
    pub k: u64,
}

fn int_ball(k: u64) -> ComplexBall {
    ComplexBall::from_real(RealBall::exact(Float::with_val(64, k)))
}

/// Number of unit steps needed to bring `Re v` to at least 1.
pub(crate) fn shift_count(v: &ComplexBall) -> Result<u64, Error> {
    if !v.is_finite() {
        return Err(Error::Domain("v is indeterminate".into()));
    }
    let one_minus = Float::with_val(v.re.prec().max(64), 1 - v.re.mid());
    if one_minus <= 0 {
        return Ok(0);
    }
    let k = one_minus.ceil().to_integer().unwrap();
    k.to_u64()
        .filter(|&k| k <= MAX_SHIFT_STEPS)
        .ok_or_else(|| Error::Domain("Re v is too far below 1".into()))
}

/// `logⁿ(w) / w` as a scaled ball; `logⁿ` is formed as `exp(n log log w)`.
fn recurrence_term(n: &Integer, w: &ComplexBall, prec: u32) -> Result<ScaledComplex, Error> {
    if w.contains_zero() {
        return Err(Error::Domain("v is a nonpositive integer".into()));
    }
    let l = w.log(prec);
    if !l.is_finite() {
        return Err(Error::Domain("v + j meets the branch cut of log".into()));
    }
    if *n == 0 {
        return Ok(ScaledComplex::from_ball(w.recip(prec)));
    }
    let nb = RealBall::from_integer(n, prec.max(n.significant_bits()));
    match log_polar(&l, prec) {
        Some((lnabs, theta)) => {
            let x = nb.mul(&lnabs, prec);
            let ln2 = const_log2(prec);
            let e = Float::with_val(prec, x.mid() / ln2.mid()).floor().to_integer().unwrap();
            let re = x.sub(&ln2.mul_integer(&e, prec), prec);
            let im = nb.mul(&theta, prec);
            let ball = ComplexBall::new(re, im).exp(prec).div(w, prec);
            Ok(ScaledComplex::new(ball, e))
        }
        None => {
            // log w may vanish: bound |log w|^n / |w| only
            let lmax = l.mag_upper();
            if lmax.is_zero() {
                return Ok(ScaledComplex::zero());
            }
            let ln = Float::with_val_round(64, lmax.as_float().ln_ref(), Round::Up).0;
            let x = RealBall::exact(ln).mul(&nb, prec).upper(64);
            let ln2 = Float::with_val(64, rug::float::Constant::Log2);
            let e = Float::with_val(64, &x / &ln2).floor().to_integer().unwrap();
            let rest = Float::with_val_round(64, &x - Float::with_val(64, &e) * &ln2, Round::Up).0 + 1e-10;
            let m = Mag::exp_of(&rest).div(&w.mag_lower());
            Ok(ScaledComplex::new(ComplexBall::zero().add_error(&m), e))
        }
    }
}

/// Applies `γₙ(v) = γₙ(v+1) + logⁿ(v)/v` until `Re(v + k) ≥ 1`.
pub fn normalize_v(n: &Integer, v: &ComplexBall, prec: u32) -> Result<Normalized, Error> {
    let k = shift_count(v)?;
    let mut correction = ScaledComplex::zero();
    for j in 0..k {
        let w = v.add(&int_ball(j), prec);
        let t = recurrence_term(n, &w, prec)?;
        correction = correction.add(&t, prec);
    }
    let half = ComplexBall::from_f64(0.5, 0.0);
    let a = v.add(&int_ball(k), prec).sub(&half, prec);
    Ok(Normalized { a, correction, k })
}

/// One half-line integral with its bookkeeping.
#[derive(Clone, Debug)]
pub struct HalfLine {
    pub value: ScaledComplex,
    pub plan: ContourPlan,
    pub wp: u32,
    pub guard_bits: u32,
    pub evaluations: u64,
    pub segments: u64,
    pub max_depth: u32,
    pub nonconvergent: bool,
}

/// `ln|f(x)|` in double precision, for choosing guard bits.
fn ln_abs_f(k: f64, a: (f64, f64), x: f64) -> f64 {
    let (tr, ti) = (a.0, a.1 + x);
    let lr = 0.5 * (tr * tr + ti * ti).ln();
    let li = ti.atan2(tr);
    let l = lr.hypot(li);
    let tau = std::f64::consts::TAU;
    k * l.ln() + 4f64.ln() - tau * x - 2.0 * (-tau * x).exp().ln_1p()
}

/// Largest `ln|f|` over a grid of `[0, N]`.
fn real_line_log_peak(k: f64, a: (f64, f64), n_cut: f64) -> f64 {
    const STEPS: usize = 8192;
    let h = n_cut / STEPS as f64;
    (0..=STEPS).map(|i| ln_abs_f(k, a, i as f64 * h)).fold(f64::NEG_INFINITY, f64::max)
}

/// `Re g(ω)` in double precision.
fn log_saddle_value(k: f64, a: (f64, f64), omega: &Complex) -> f64 {
    let (wr, wi) = (omega.real().to_f64(), omega.imag().to_f64());
    // a + iω
    let (tr, ti) = (a.0 - wi, a.1 + wr);
    let l = (0.5 * (tr * tr + ti * ti).ln()).hypot(ti.atan2(tr));
    k * l.ln() - std::f64::consts::TAU * wr
}

/// Enclosure of `Iₙ(a) = ∫₀^∞ f` with accuracy targeted at `p` bits
/// relative to the nonoscillatory magnitude.
pub fn half_line_integral(n: &Integer, a: &ComplexBall, p: u32, opts: &Options) -> Result<HalfLine, Error> {
    let base_wp = p + Integer::from(n + 1).significant_bits() + 20;
    let plan = build_contour(n, a, p, &opts.shift_threshold)?;
    let a64 = (a.re.mid().to_f64(), a.im.mid().to_f64());
    let ln2 = std::f64::consts::LN_2;

    let (wp, guard, scale, ln_proxy) = if plan.shifted {
        let probe = StieltjesIntegrand::new(n, a, base_wp);
        let omega = ComplexBall::exact(plan.omega.real().clone(), plan.omega.imag().clone());
        let peak = probe.log_peak(&omega, base_wp)?;
        let l2 = const_log2(base_wp);
        let e = Float::with_val(base_wp, peak.mid() / l2.mid()).floor().to_integer().unwrap();
        let rest = peak.sub(&l2.mul_integer(&e, base_wp), base_wp).mid().to_f64();
        let half_ln_n = 0.5 * Float::with_val(64, n).max(&Float::with_val(64, 1)).ln().to_f64();
        (base_wp, 0, e, rest + half_ln_n)
    } else {
        let k = n.to_f64() + 1.0;
        let n_cut = plan.n_cut.to_f64();
        let f0 = ln_abs_f(k, a64, 0.0);
        let mut ln_proxy = f0.max(0.0);
        let saddle = log_saddle_value(k, a64, &plan.omega);
        if *n > 0 && saddle.is_finite() {
            ln_proxy = ln_proxy.max(saddle + 0.5 * n.to_f64().ln());
        }
        let peak = real_line_log_peak(k, a64, n_cut).max(f0);
        let guard = if peak.is_finite() && peak > ln_proxy {
            ((peak - ln_proxy) / ln2).ceil() as u32 + 4
        } else {
            0
        };
        (base_wp + guard, guard, Integer::new(), ln_proxy)
    };

    let f = StieltjesIntegrand::new(n, a, wp).with_scale(scale.clone());
    let tol = Mag::pow2(-(p as i64) - 10).mul(&Mag::exp_of(&Float::with_val(64, ln_proxy)));

    let mut sum = ComplexBall::zero();
    let mut out = HalfLine {
        value: ScaledComplex::zero(),
        plan: plan.clone(),
        wp,
        guard_bits: guard,
        evaluations: 0,
        segments: 0,
        max_depth: 0,
        nonconvergent: false,
    };
    for seg in &plan.segments {
        let r = petras_integrate(&f, seg, wp, &tol, &opts.limits)?;
        sum = sum.add(&r.value, wp);
        out.evaluations += r.evaluations;
        out.segments += r.segments;
        out.max_depth = out.max_depth.max(r.max_depth);
        out.nonconvergent |= r.nonconvergent;
    }
    let tail = f.tail_bound(&plan.n_cut)?;
    out.value = ScaledComplex::new(sum.add_error(&tail), scale);
    Ok(out)
}

fn check_request(req: &StieltjesRequest) -> Result<(), Error> {
    if req.n < 0 {
        return Err(Error::Domain("n must be nonnegative".into()));
    }
    if req.p < 8 {
        return Err(Error::Domain("precision must be at least 8 bits".into()));
    }
    Ok(())
}

/// Encloses `γₙ(v)`.
pub fn stieltjes(req: &StieltjesRequest, opts: &Options) -> Result<StieltjesResult, Error> {
    check_request(req)?;
    let start = Instant::now();
    let n = &req.n;
    let p = req.p;
    let prec = p + Integer::from(n + 1).significant_bits() + 20;
    let norm = normalize_v(n, &req.v, prec)?;

    let real_v = req.v.is_real();
    let (sum, parts) = if real_v {
        let i = half_line_integral(n, &norm.a, p, opts)?;
        (i.value.real_part().mul_2exp(1), vec![i])
    } else {
        let ac = norm.a.conj();
        let (i1, i2) = if opts.threads > 1 {
            std::thread::scope(|s| {
                let h = s.spawn(|| half_line_integral(n, &ac, p, opts));
                let i1 = half_line_integral(n, &norm.a, p, opts);
                (i1, h.join().expect("integration thread panicked"))
            })
        } else {
            (half_line_integral(n, &norm.a, p, opts), half_line_integral(n, &ac, p, opts))
        };
        let (i1, i2) = (i1?, i2?);
        let wp = i1.wp.max(i2.wp);
        (i1.value.add(&i2.value.conj(), wp), vec![i1, i2])
    };
    let wp = parts.iter().map(|h| h.wp).max().unwrap();

    // −π / (2(n+1))
    let k = Integer::from(n + 1);
    let factor = const_pi(wp).div_integer(&k, wp).mul_2exp(-1).neg();
    let mut value = sum.mul_real(&factor, wp).add(&norm.correction, wp);
    let positive_real = real_v && req.v.re.is_positive();
    if positive_real {
        value = value.real_part();
    }

    let first = &parts[0];
    let mut diagnostics = Diagnostics {
        wp,
        guard_bits: parts.iter().map(|h| h.guard_bits).max().unwrap(),
        shifted: first.plan.shifted,
        n_cut: first.plan.n_cut.to_integer().map(|i| i.to_string()).unwrap_or_default(),
        m: first.plan.m.to_f64(),
        c: first.plan.c.to_f64(),
        omega: [first.plan.omega.real().to_f64(), first.plan.omega.imag().to_f64()],
        saddle_residual: first.plan.residual,
        integrals: parts.len() as u32,
        shift_count: norm.k,
        ..Default::default()
    };
    for h in &parts {
        diagnostics.segments += h.segments;
        diagnostics.evaluations += h.evaluations;
        diagnostics.max_depth = diagnostics.max_depth.max(h.max_depth);
    }
    let nonconvergent = parts.iter().any(|h| h.nonconvergent);
    let mut warnings = Vec::new();
    if nonconvergent {
        warnings.push("quadrature limits reached; the enclosure may be wide".to_string());
    }
    let acc = value.rel_accuracy_bits();
    if acc < (p / 2) as i64 {
        warnings.push(format!(
            "cancellation: only {} relative bits (target {p})",
            acc.max(0)
        ));
    }
    diagnostics.seconds = start.elapsed().as_secs_f64();
    Ok(StieltjesResult {
        value,
        diagnostics,
        warnings,
        nonconvergent,
    })
}

//! Self-validating adaptive Gauss-Legendre integration along straight segments.

use std::collections::VecDeque;

use rug::Float;

use super::gauss::gl_rule;
use crate::balls::{ComplexBall, Mag};
use crate::error::Error;

/// A function that can be integrated by [`petras_integrate`].
pub trait Integrand: Sync {
    /// Enclosure of `f` over the ball `z`.
    ///
    /// Used both for point evaluations at quadrature nodes and for direct
    /// enclosures over whole segments; a non-finite ball means no usable
    /// enclosure was found.
    fn eval(&self, z: &ComplexBall, prec: u32) -> ComplexBall;

    /// Upper bound for `|f|` on the rectangle `z`, or `None` if `f` may fail
    /// to be analytic there.
    fn bound(&self, z: &ComplexBall, prec: u32) -> Option<Mag>;
}

/// Straight segment `[a, b]` in the complex plane with exact endpoints.
#[derive(Clone, Debug)]
pub struct Segment {
    pub a: ComplexBall,
    pub b: ComplexBall,
    pub depth: u32,
}

impl Segment {
    pub fn new(a: ComplexBall, b: ComplexBall) -> Self {
        debug_assert!(a.is_exact() && b.is_exact());
        Segment { a, b, depth: 0 }
    }

    fn split(&self, prec: u32) -> (Segment, Segment) {
        let m = midpoint(&self.a, &self.b, prec);
        (
            Segment {
                a: self.a.clone(),
                b: m.clone(),
                depth: self.depth + 1,
            },
            Segment {
                a: m,
                b: self.b.clone(),
                depth: self.depth + 1,
            },
        )
    }
}

fn midpoint(a: &ComplexBall, b: &ComplexBall, prec: u32) -> ComplexBall {
    let half = |x: &Float, y: &Float| {
        let mut s = Float::with_val(prec, x + y);
        s /= 2u32;
        s
    };
    ComplexBall::exact(half(a.re.mid(), b.re.mid()), half(a.im.mid(), b.im.mid()))
}

#[derive(Clone, Debug)]
pub struct Limits {
    pub max_depth: u32,
    pub max_evals: u64,
    /// Largest Gauss-Legendre degree; `None` means `⌈p/2⌉ + 10`.
    pub degree_cap: Option<usize>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_depth: 4000,
            max_evals: 20_000_000,
            degree_cap: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuadResult {
    pub value: ComplexBall,
    pub evaluations: u64,
    pub max_depth: u32,
    pub segments: u64,
    /// Set when a limit was hit; `value` is still an enclosure but may be wide.
    pub nonconvergent: bool,
}

/// Ellipse parameters tried for each segment.
const RHO_LADDER: [u32; 4] = [2, 4, 8, 16];

/// Bound for the error of `d`-point Gauss-Legendre quadrature on `[-1, 1]`
/// when `|f| ≤ v` inside the Bernstein ellipse with parameter `rho`:
/// `(64/15) v / ((ρ² − 1) ρ^(2d−2))`.
pub fn ellipse_error_bound(v: &Mag, rho: f64, d: usize) -> Result<Mag, Error> {
    if !(rho > 1.0) {
        return Err(Error::Domain("ellipse parameter must exceed 1".into()));
    }
    if v.is_zero() {
        return Ok(Mag::zero());
    }
    let r = Mag::from_f64(rho);
    let r2m1 = Mag::lower_from_float(&(Float::with_val(64, rho * rho) - 1u32));
    let pow = r.mul_lower_pow(2 * d as u64 - 2);
    Ok(v.mul(&Mag::from_f64(64.0)).div(&Mag::lower_from_float(&Float::with_val(64, 15))).div(&r2m1.mul_lower(&pow)))
}

impl Mag {
    /// Lower bound for `self^k`, saturating at the exponent range.
    fn mul_lower_pow(&self, k: u64) -> Mag {
        let lg = self.log2_approx() * k as f64;
        if lg > 1e9 {
            return Mag::pow2(1_000_000_000);
        }
        match u32::try_from(k) {
            Ok(k) => {
                let x = Float::with_val_round(30, rug::ops::Pow::pow(self.as_float(), k), rug::float::Round::Down).0;
                Mag::lower_from_float(&x)
            }
            Err(_) => Mag::pow2(1_000_000_000),
        }
    }
}

/// Rectangle enclosing the Bernstein ellipse with parameter `rho` around
/// the segment `mid ± h`.
fn ellipse_box(mid: &ComplexBall, h: &ComplexBall, rho: f64) -> ComplexBall {
    let ca = Mag::from_f64((rho + 1.0 / rho) / 2.0 * (1.0 + 1e-12));
    let cb = Mag::from_f64((rho - 1.0 / rho) / 2.0 * (1.0 + 1e-12));
    let hr = h.re.mag_upper();
    let hi = h.im.mag_upper();
    let wx = hr.mul(&ca).add(&hi.mul(&cb));
    let wy = hi.mul(&ca).add(&hr.mul(&cb));
    ComplexBall::new(mid.re.add_error(&wx), mid.im.add_error(&wy))
}

struct Stats {
    evals: u64,
    depth: u32,
    segments: u64,
}

/// Tries to integrate over one segment without bisecting.
fn try_segment<F: Integrand + ?Sized>(
    f: &F,
    seg: &Segment,
    prec: u32,
    tol: &Mag,
    degree_cap: usize,
    stats: &mut Stats,
) -> Result<Option<ComplexBall>, Error> {
    let mid = midpoint(&seg.a, &seg.b, prec + 8);
    let h = seg.b.sub(&seg.a, prec + 8).mul_2exp(-1);
    let diam = h.mul_2exp(1);

    // direct enclosure (b - a) f([a, b])
    let whole = ComplexBall::new(
        mid.re.add_error(&h.re.mag_upper()),
        mid.im.add_error(&h.im.mag_upper()),
    );
    stats.evals += 1;
    let fz = f.eval(&whole, prec);
    if fz.is_finite() {
        let v = diam.mul(&fz, prec);
        if v.rad_upper() <= *tol {
            return Ok(Some(v));
        }
    }
    if let Some(v) = f.bound(&whole, prec) {
        let m = diam.mag_upper().mul(&v);
        if m <= *tol {
            return Ok(Some(ComplexBall::zero().add_error(&m)));
        }
    }

    // degree selection on the ellipse ladder
    let mut best: Option<(usize, Mag)> = None;
    let hmag = h.mag_upper();
    for &rho in RHO_LADDER.iter() {
        let rho = rho as f64;
        let zbox = ellipse_box(&mid, &h, rho);
        stats.evals += 1;
        let Some(v) = f.bound(&zbox, prec) else { break };
        if !v.is_finite() {
            break;
        }
        let mut d = 1usize;
        while d <= degree_cap {
            let e = hmag.mul(&ellipse_error_bound(&v, rho, d)?);
            if e <= *tol {
                if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                    best = Some((d, e));
                }
                break;
            }
            d *= 2;
        }
        if matches!(best, Some((1, _))) {
            break;
        }
    }
    let Some((d, err)) = best else { return Ok(None) };

    let rule = gl_rule(d, prec)?;
    let mut sum = ComplexBall::zero();
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let z = mid.add(&h.mul_real(x, prec), prec);
        let fz = f.eval(&z, prec);
        stats.evals += 1;
        if !fz.is_finite() {
            return Ok(None);
        }
        sum = sum.add(&fz.mul_real(w, prec), prec);
    }
    Ok(Some(sum.mul(&h, prec).add_error(&err)))
}

/// Integrates `f` over `seg`, aiming at an absolute error of `abs_tol`.
///
/// The result is always an enclosure of the integral under the
/// [`Integrand`] contract. If a limit is hit, the remaining segments are
/// enclosed directly (possibly as indeterminate balls) and the result is
/// flagged as nonconvergent.
pub fn petras_integrate<F: Integrand + ?Sized>(
    f: &F,
    seg: &Segment,
    p: u32,
    abs_tol: &Mag,
    limits: &Limits,
) -> Result<QuadResult, Error> {
    // each accepted piece gets a fraction of the budget; retry tighter if
    // many pieces still add up to too much
    let mut seg_tol = abs_tol.mul_2exp(-4);
    let mut res = integrate_once(f, seg, p, &seg_tol, limits)?;
    for _ in 0..2 {
        if res.nonconvergent || !res.value.is_finite() {
            break;
        }
        let goal = abs_tol.max(&res.value.mag_upper().mul_2exp(-(p as i64)));
        let rad = res.value.rad_upper();
        if rad <= goal.mul(&Mag::from_f64(3.0)) {
            break;
        }
        let ratio = rad.div(&goal).log2_approx().ceil().max(1.0) as i64;
        seg_tol = seg_tol.mul_2exp(-ratio - 2);
        let again = integrate_once(f, seg, p, &seg_tol, limits)?;
        let evals = res.evaluations + again.evaluations;
        res = again;
        res.evaluations = evals;
    }
    Ok(res)
}

fn integrate_once<F: Integrand + ?Sized>(
    f: &F,
    seg: &Segment,
    p: u32,
    tol: &Mag,
    limits: &Limits,
) -> Result<QuadResult, Error> {
    let prec = seg.a.re.prec().max(p + 16);
    let degree_cap = limits.degree_cap.unwrap_or((p as usize).div_ceil(2) + 10).max(1);
    let mut stats = Stats {
        evals: 0,
        depth: 0,
        segments: 0,
    };
    let mut total = ComplexBall::zero();
    let mut queue = VecDeque::new();
    queue.push_back(seg.clone());
    let mut nonconvergent = false;
    while let Some(s) = queue.pop_front() {
        stats.depth = stats.depth.max(s.depth);
        stats.segments += 1;
        let exhausted = s.depth >= limits.max_depth || stats.evals >= limits.max_evals;
        if !exhausted {
            if let Some(v) = try_segment(f, &s, prec, tol, degree_cap, &mut stats)? {
                total = total.add(&v, prec);
                continue;
            }
            let (l, r) = s.split(prec);
            queue.push_back(l);
            queue.push_back(r);
            continue;
        }
        nonconvergent = true;
        let mid = midpoint(&s.a, &s.b, prec + 8);
        let h = s.b.sub(&s.a, prec + 8).mul_2exp(-1);
        let whole = ComplexBall::new(
            mid.re.add_error(&h.re.mag_upper()),
            mid.im.add_error(&h.im.mag_upper()),
        );
        let fz = f.eval(&whole, prec);
        let v = if fz.is_finite() {
            h.mul_2exp(1).mul(&fz, prec)
        } else {
            match f.bound(&whole, prec) {
                Some(m) => ComplexBall::zero().add_error(&h.mag_upper().mul_2exp(1).mul(&m)),
                None => ComplexBall::indeterminate(),
            }
        };
        total = total.add(&v, prec);
    }
    Ok(QuadResult {
        value: total,
        evaluations: stats.evals,
        max_depth: stats.depth,
        segments: stats.segments,
        nonconvergent,
    })
}

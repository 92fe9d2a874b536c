//! Certified Gauss-Legendre nodes and weights.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use rug::Float;

use crate::balls::{Mag, RealBall};
use crate::error::Error;

/// A `d`-point Gauss-Legendre rule on `[-1, 1]`.
///
/// Nodes are stored in increasing order. Each node ball contains the exact
/// Legendre root, and each weight ball the exact weight.
#[derive(Clone, Debug)]
pub struct QuadRule {
    pub degree: usize,
    pub prec: u32,
    pub nodes: Vec<RealBall>,
    pub weights: Vec<RealBall>,
}

type Cache = RwLock<HashMap<(usize, u32), Arc<QuadRule>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Returns the cached rule of degree `d` at (at least) `prec` bits.
///
/// Precisions are rounded up to a multiple of 64 so nearby requests share
/// one entry.
pub fn gl_rule(d: usize, prec: u32) -> Result<Arc<QuadRule>, Error> {
    let prec = prec.max(64).div_ceil(64) * 64;
    if let Some(r) = cache().read().unwrap().get(&(d, prec)) {
        return Ok(r.clone());
    }
    let rule = Arc::new(compute_rule(d, prec)?);
    cache()
        .write()
        .unwrap()
        .entry((d, prec))
        .or_insert_with(|| rule.clone());
    Ok(rule)
}

/// `(P_d(x), P_{d-1}(x))` by the three-term recurrence, in floating point.
fn legendre_float(d: usize, x: &Float, prec: u32) -> (Float, Float) {
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = Float::with_val(prec, x);
    if d == 0 {
        return (p0, Float::new(prec));
    }
    for j in 1..d as u32 {
        // P_{j+1} = ((2j+1) x P_j - j P_{j-1}) / (j+1)
        let mut t = Float::with_val(prec, x * &p1);
        t *= 2 * j + 1;
        t -= Float::with_val(prec, &p0 * j);
        t /= j + 1;
        p0 = p1;
        p1 = t;
    }
    (p1, p0)
}

/// Same recurrence over balls.
fn legendre_ball(d: usize, x: &RealBall, prec: u32) -> (RealBall, RealBall) {
    let mut p0 = RealBall::one();
    let mut p1 = x.clone();
    if d == 0 {
        return (p0, RealBall::zero());
    }
    for j in 1..d as i64 {
        let t = x
            .mul(&p1, prec)
            .mul_f64((2 * j + 1) as f64, prec)
            .sub(&p0.mul_f64(j as f64, prec), prec)
            .div(&RealBall::from_i64(j + 1), prec);
        p0 = p1;
        p1 = t;
    }
    (p1, p0)
}

/// `P'_d(x) = d (x P_d - P_{d-1}) / (x² - 1)` over balls.
fn legendre_deriv_ball(d: usize, x: &RealBall, prec: u32) -> RealBall {
    let (pd, pd1) = legendre_ball(d, x, prec);
    let num = x.mul(&pd, prec).sub(&pd1, prec).mul_f64(d as f64, prec);
    let den = x.sqr(prec).sub(&RealBall::one(), prec);
    num.div(&den, prec)
}

/// Newton refinement of a root guess in plain floating point, doubling the
/// precision once the iteration has settled.
fn newton_root(d: usize, guess: f64, prec: u32) -> Float {
    let target = prec + 16;
    let mut cur = 64u32.min(target);
    let mut x = Float::with_val(cur, guess);
    loop {
        x.set_prec(cur);
        let budget = if cur == 64 { 100 } else { 6 };
        for _ in 0..budget {
            let wp = cur + 16;
            let (pd, pd1) = legendre_float(d, &x, wp);
            let x2m1 = Float::with_val(wp, x.square_ref()) - 1u32;
            let mut dp = Float::with_val(wp, &x * &pd) - &pd1;
            dp *= d as u32;
            dp /= &x2m1;
            let step = Float::with_val(wp, &pd / &dp);
            x -= &step;
            if step.is_zero() || step.get_exp().unwrap_or(0) < x.get_exp().unwrap_or(0) - cur as i32 + 2 {
                break;
            }
        }
        if cur >= target {
            break;
        }
        cur = (cur * 2).min(target);
    }
    x
}

/// Extra bits for ball evaluation of the recurrence, whose radii grow
/// roughly like `(1 + √2)^d`.
fn growth_bits(d: usize) -> u32 {
    32 + (8 * d as u32).div_ceil(3)
}

fn ball_prec(d: usize, prec: u32) -> u32 {
    prec + growth_bits(d)
}

/// Interval Newton step: returns a ball around `x` proven to contain a root.
fn certify_root(d: usize, x: &Float, prec: u32) -> Option<RealBall> {
    let wp = ball_prec(d, prec);
    let eps = Mag::from_float(x).mul_2exp(-(prec as i64) + 4).max(&Mag::pow2(-(prec as i64)));
    let xb = RealBall::exact(Float::with_val(wp, x));
    let big = xb.add_error(&eps);
    let (px, _) = legendre_ball(d, &xb, wp);
    let dp = legendre_deriv_ball(d, &big, wp);
    if dp.contains_zero() {
        return None;
    }
    let n = xb.sub(&px.div(&dp, wp), wp);
    if big.contains_ball(&n) {
        Some(n)
    } else {
        None
    }
}

fn compute_rule(d: usize, prec: u32) -> Result<QuadRule, Error> {
    if d == 0 {
        return Err(Error::Domain("quadrature degree must be positive".into()));
    }
    // the weights see the growth twice: once through the node radius and
    // once in the recurrence, so nodes are certified beyond `prec`
    let node_prec = ball_prec(d, prec);
    let wp = ball_prec(d, node_prec);
    let half = d / 2;
    // positive roots, largest first
    let mut pos = Vec::with_capacity(half + 1);
    for k in 0..half {
        let guess = (std::f64::consts::PI * (k as f64 + 0.75) / (d as f64 + 0.5)).cos();
        let x = newton_root(d, guess, node_prec);
        let ball = certify_root(d, &x, node_prec)
            .ok_or_else(|| Error::Convergence(format!("could not certify Legendre root {k} of degree {d}")))?;
        pos.push(ball);
    }
    let mut nodes = Vec::with_capacity(d);
    for b in pos.iter() {
        nodes.push(b.neg());
    }
    if d % 2 == 1 {
        nodes.push(RealBall::zero());
    }
    for b in pos.iter().rev() {
        nodes.push(b.clone());
    }
    let two = RealBall::from_i64(2);
    let mut weights: Vec<RealBall> = Vec::with_capacity(d);
    for (i, x) in nodes.iter().enumerate() {
        if i > 0 && i * 2 >= d {
            // weights are symmetric
            let w = weights[d - 1 - i].clone();
            weights.push(w);
            continue;
        }
        let dp = legendre_deriv_ball(d, x, wp);
        let one_m_x2 = RealBall::one().sub(&x.sqr(wp), wp);
        let w = two.div(&one_m_x2.mul(&dp.sqr(wp), wp), wp).set_prec(prec);
        weights.push(w);
    }
    if d == 1 {
        weights[0] = two;
    }
    let nodes = nodes.into_iter().map(|x| x.set_prec(prec)).collect();
    Ok(QuadRule {
        degree: d,
        prec,
        nodes,
        weights,
    })
}

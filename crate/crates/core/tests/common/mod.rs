//! Property suites shared by the integration tests and the acceptance target.
//!
//! Each suite returns a [`Report`] instead of panicking so that the
//! acceptance target can print a line per criterion.
#![allow(dead_code)]

use std::time::Instant;

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};
use serde::Deserialize;

use stieltjes_core::asymptotics::{agreement, knessl_coffey};
use stieltjes_core::balls::{const_pi, parse_decimal};
use stieltjes_core::integrand::StieltjesIntegrand;
use stieltjes_core::quadrature::{ellipse_error_bound, gl_rule, petras_integrate, Integrand, Limits, Segment};
use stieltjes_core::{stieltjes, ComplexBall, Mag, Options, RealBall, ScaledComplex, StieltjesRequest};

#[derive(Debug, Default)]
pub struct Report {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl Report {
    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(&mut self, o: Report) {
        self.checks += o.checks;
        self.failures.extend(o.failures);
    }

    pub fn summary(&self) -> String {
        if self.ok() {
            format!("{} checks", self.checks)
        } else {
            let shown: Vec<_> = self.failures.iter().take(3).cloned().collect();
            format!("{} of {} failed: {}", self.failures.len(), self.checks, shown.join("; "))
        }
    }

    pub fn assert_ok(&self) {
        assert!(self.ok(), "{}", self.summary());
    }
}

pub fn int(s: &str) -> Integer {
    s.parse().unwrap()
}

pub fn pow10(e: u32) -> Integer {
    Integer::from(Integer::u_pow_u(10, e))
}

pub fn cball(re: &str, im: &str, prec: u32) -> ComplexBall {
    let r = parse_decimal(re).unwrap();
    let i = parse_decimal(im).unwrap();
    ComplexBall::new(RealBall::from_rational(&r, prec), RealBall::from_rational(&i, prec))
}

pub fn gamma(n: &Integer, v: &ComplexBall, p: u32, opts: &Options) -> ScaledComplex {
    let req = StieltjesRequest { n: n.clone(), v: v.clone(), p };
    let r = stieltjes(&req, opts).unwrap();
    assert!(!r.nonconvergent, "nonconvergent at n = {n}");
    r.value
}

// ---------------------------------------------------------------- balls

const P: u32 = 64;
const HI: u32 = 4 * P;

#[derive(Clone, Copy, Debug)]
enum Domain {
    Any,
    /// first argument shifted to the right half-plane
    Positive,
    /// second argument shifted to the right half-plane
    PositiveSecond,
}

/// Sample: midpoint, radius and relative position for two real inputs.
type RealSample = ((f64, u32, f64), (f64, u32, f64));

fn real_sample() -> impl Strategy<Value = RealSample> {
    let one = (-8.0f64..8.0, 3u32..=52, -1.0f64..=1.0);
    (one.clone(), one)
}

fn radius(e: u32) -> f64 {
    if e == 52 {
        0.0
    } else {
        (2f64).powi(-(e as i32))
    }
}

fn shift(mid: f64, rad: f64, positive: bool) -> f64 {
    if positive {
        mid.abs() + 4.0 * rad + 1e-3
    } else {
        mid
    }
}

fn real_input(mid: f64, e: u32, t: f64, positive: bool) -> (RealBall, Float) {
    let r = radius(e);
    let m = shift(mid, r, positive);
    let ball = RealBall::new(Float::with_val(P, m), Mag::from_f64(r));
    let x = Float::with_val(HI, m) + Float::with_val(HI, r) * t;
    (ball, x)
}

type RealBallOp = fn(&RealBall, &RealBall, u32) -> RealBall;
type RealPointOp = fn(&Float, &Float) -> Float;

fn real_ops() -> Vec<(&'static str, Domain, RealBallOp, RealPointOp)> {
    vec![
        ("add", Domain::Any, |a, b, p| a.add(b, p), |x, y| Float::with_val(HI, x + y)),
        ("sub", Domain::Any, |a, b, p| a.sub(b, p), |x, y| Float::with_val(HI, x - y)),
        ("mul", Domain::Any, |a, b, p| a.mul(b, p), |x, y| Float::with_val(HI, x * y)),
        ("div", Domain::PositiveSecond, |a, b, p| a.div(b, p), |x, y| Float::with_val(HI, x / y)),
        ("sqr", Domain::Any, |a, _, p| a.sqr(p), |x, _| Float::with_val(HI, x.square_ref())),
        ("sqrt", Domain::Positive, |a, _, p| a.sqrt(p), |x, _| Float::with_val(HI, x.sqrt_ref())),
        ("exp", Domain::Any, |a, _, p| a.exp(p), |x, _| Float::with_val(HI, x.exp_ref())),
        ("log", Domain::Positive, |a, _, p| a.log(p), |x, _| Float::with_val(HI, x.ln_ref())),
        ("sin", Domain::Any, |a, _, p| a.sin(p), |x, _| Float::with_val(HI, x.sin_ref())),
        ("cos", Domain::Any, |a, _, p| a.cos(p), |x, _| Float::with_val(HI, x.cos_ref())),
        ("atan", Domain::Any, |a, _, p| a.atan(p), |x, _| Float::with_val(HI, x.atan_ref())),
        ("cosh", Domain::Any, |a, _, p| a.cosh(p), |x, _| Float::with_val(HI, x.cosh_ref())),
        ("sinh", Domain::Any, |a, _, p| a.sinh(p), |x, _| Float::with_val(HI, x.sinh_ref())),
        ("tanh", Domain::Any, |a, _, p| a.tanh(p), |x, _| Float::with_val(HI, x.tanh_ref())),
        ("pow_u", Domain::Any, |a, _, p| a.pow_u(7, p), |x, _| Float::with_val(HI, x.pow(7u32))),
        ("atan2", Domain::PositiveSecond, |a, b, p| a.atan2(b, p), |x, y| Float::with_val(HI, x.atan2_ref(y))),
        ("pow", Domain::Positive, |a, b, p| a.pow(b, p), |x, y| Float::with_val(HI, x.pow(y))),
    ]
}

fn real_inputs(s: &RealSample, dom: Domain) -> ((RealBall, Float), (RealBall, Float)) {
    let ((m1, e1, t1), (m2, e2, t2)) = *s;
    (
        real_input(m1, e1, t1, matches!(dom, Domain::Positive)),
        real_input(m2, e2, t2, matches!(dom, Domain::PositiveSecond)),
    )
}

type ComplexSample = (RealSample, RealSample);

fn complex_sample() -> impl Strategy<Value = ComplexSample> {
    (real_sample(), real_sample())
}

fn complex_input(s: &RealSample, positive: bool) -> (ComplexBall, Complex) {
    let ((mr, er, tr), (mi, ei, ti)) = *s;
    let (re, x) = real_input(mr, er, tr, positive);
    let (im, y) = real_input(mi / 2.0, ei, ti, false);
    (ComplexBall::new(re, im), Complex::with_val(HI, (x, y)))
}

type ComplexBallOp = fn(&ComplexBall, &ComplexBall, u32) -> ComplexBall;
type ComplexPointOp = fn(&Complex, &Complex) -> Complex;

fn complex_ops() -> Vec<(&'static str, Domain, ComplexBallOp, ComplexPointOp)> {
    vec![
        ("add", Domain::Any, |a, b, p| a.add(b, p), |x, y| Complex::with_val(HI, x + y)),
        ("mul", Domain::Any, |a, b, p| a.mul(b, p), |x, y| Complex::with_val(HI, x * y)),
        ("div", Domain::PositiveSecond, |a, b, p| a.div(b, p), |x, y| Complex::with_val(HI, x / y)),
        ("exp", Domain::Any, |a, _, p| a.exp(p), |x, _| Complex::with_val(HI, x.exp_ref())),
        ("log", Domain::Positive, |a, _, p| a.log(p), |x, _| Complex::with_val(HI, x.ln_ref())),
        ("sqrt", Domain::Positive, |a, _, p| a.sqrt(p), |x, _| Complex::with_val(HI, x.sqrt_ref())),
        ("cosh", Domain::Any, |a, _, p| a.cosh(p), |x, _| Complex::with_val(HI, x.cosh_ref())),
        ("sinh", Domain::Any, |a, _, p| a.sinh(p), |x, _| Complex::with_val(HI, x.sinh_ref())),
        ("tanh", Domain::Any, |a, _, p| a.tanh(p), |x, _| Complex::with_val(HI, x.tanh_ref())),
        ("pow", Domain::Positive, |a, b, p| a.pow(b, p), |x, y| Complex::with_val(HI, x.pow(y))),
        (
            "pow_integer",
            Domain::Any,
            |a, _, p| a.pow_integer(&Integer::from(11), p),
            |x, _| Complex::with_val(HI, x.pow(11u32)),
        ),
    ]
}

fn complex_inputs(s: &ComplexSample, dom: Domain) -> ((ComplexBall, Complex), (ComplexBall, Complex)) {
    (
        complex_input(&s.0, matches!(dom, Domain::Positive)),
        complex_input(&s.1, matches!(dom, Domain::PositiveSecond)),
    )
}

fn point_ball(z: &Complex) -> ComplexBall {
    ComplexBall::exact(z.real().clone(), z.imag().clone())
}

fn samples<S: Strategy>(strategy: &S, runner: &mut TestRunner, count: usize) -> Vec<S::Value> {
    (0..count).map(|_| strategy.new_tree(runner).unwrap().current()).collect()
}

/// Random points inside random input balls land inside the output ball.
pub fn ball_inclusion(count: usize) -> Report {
    let mut rep = Report::default();
    let mut runner = TestRunner::deterministic();
    let rs = samples(&real_sample(), &mut runner, count);
    for (name, dom, op, exact) in real_ops() {
        for s in &rs {
            let ((a, x), (b, y)) = real_inputs(s, dom);
            let out = op(&a, &b, P);
            let v = exact(&x, &y);
            rep.check(!v.is_finite() || out.contains_float(&v), || format!("real {name} at {s:?}"));
        }
    }
    let cs = samples(&complex_sample(), &mut runner, count);
    for (name, dom, op, exact) in complex_ops() {
        for s in &cs {
            let ((a, x), (b, y)) = complex_inputs(s, dom);
            let out = op(&a, &b, P);
            let v = exact(&x, &y);
            let finite = v.real().is_finite() && v.imag().is_finite();
            rep.check(!finite || out.contains(&point_ball(&v)), || format!("complex {name} at {s:?}"));
        }
    }
    for s in &cs {
        let ((a, x), _) = complex_inputs(s, Domain::Positive);
        let (abs, arg) = (a.abs(P), a.arg(P));
        rep.check(abs.contains_float(&Float::with_val(HI, x.abs_ref())), || format!("abs at {s:?}"));
        rep.check(arg.contains_float(&Float::with_val(HI, x.arg_ref())), || format!("arg at {s:?}"));
    }
    rep
}

/// `conj f(x) ∈ f(conj X)` for exp, log, cosh and tanh.
pub fn ball_conjugation(count: usize) -> Report {
    type Unary = (&'static str, fn(&ComplexBall, u32) -> ComplexBall, fn(&Complex) -> Complex);
    let ops: [Unary; 4] = [
        ("exp", |a, p| a.exp(p), |x| Complex::with_val(HI, x.exp_ref())),
        ("log", |a, p| a.log(p), |x| Complex::with_val(HI, x.ln_ref())),
        ("cosh", |a, p| a.cosh(p), |x| Complex::with_val(HI, x.cosh_ref())),
        ("tanh", |a, p| a.tanh(p), |x| Complex::with_val(HI, x.tanh_ref())),
    ];
    let mut rep = Report::default();
    let mut runner = TestRunner::deterministic();
    for s in samples(&complex_sample(), &mut runner, count) {
        for (name, op, exact) in &ops {
            let (a, x) = complex_input(&s.0, *name == "log");
            let out = op(&a.conj(), P);
            let v = exact(&x).conj();
            rep.check(out.contains(&point_ball(&v)), || format!("conj {name} at {s:?}"));
            rep.check(out.overlaps(&op(&a, P).conj()), || format!("conj overlap {name} at {s:?}"));
        }
    }
    rep
}

/// Output radius does not shrink when the input ball grows around the same midpoint.
pub fn ball_monotone_radius(count: usize) -> Report {
    let mut rep = Report::default();
    let mut runner = TestRunner::deterministic();
    let nested = (real_sample(), 1u32..12);
    for (s, grow) in samples(&nested, &mut runner, count) {
        let ((m1, e1, _), (m2, e2, _)) = s;
        let big = |e: u32| e.saturating_sub(grow).max(3);
        for (name, dom, op, _) in real_ops() {
            let (a, _) = real_input(m1, e1, 0.0, matches!(dom, Domain::Positive));
            let (b, _) = real_input(m2, e2, 0.0, matches!(dom, Domain::PositiveSecond));
            // same midpoints, larger radii
            let (a2, _) = real_input(m1, big(e1), 0.0, matches!(dom, Domain::Positive));
            let (b2, _) = real_input(m2, big(e2), 0.0, matches!(dom, Domain::PositiveSecond));
            if a2.mid() != a.mid() || b2.mid() != b.mid() {
                continue;
            }
            let small = op(&a, &b, P);
            let large = op(&a2, &b2, P);
            rep.check(large.contains_ball(&small) || large.rad() >= small.rad(), || {
                format!("radius of {name} shrank at {s:?} grow {grow}")
            });
        }
    }
    rep
}

/// Exact inputs evaluated at `2p`: overlapping result, radius no larger.
pub fn ball_refinement(count: usize) -> Report {
    let mut rep = Report::default();
    let mut runner = TestRunner::deterministic();
    for s in samples(&real_sample(), &mut runner, count) {
        let ((m1, _, _), (m2, _, _)) = s;
        for (name, dom, op, _) in real_ops() {
            let (a, _) = real_input(m1, 52, 0.0, matches!(dom, Domain::Positive));
            let (b, _) = real_input(m2, 52, 0.0, matches!(dom, Domain::PositiveSecond));
            let lo = op(&a, &b, P);
            let hi = op(&a, &b, 2 * P);
            rep.check(lo.overlaps(&hi), || format!("{name} at 2p does not overlap at {s:?}"));
            rep.check(hi.rad() <= lo.rad(), || format!("{name} radius grew at 2p at {s:?}"));
            rep.check(lo.rad().is_zero() || hi.rad() < lo.rad(), || format!("{name} radius not smaller at {s:?}"));
        }
    }
    rep
}

// ---------------------------------------------------------------- quadrature

pub struct Func(pub fn(&ComplexBall, u32) -> ComplexBall);

impl Integrand for Func {
    fn eval(&self, z: &ComplexBall, prec: u32) -> ComplexBall {
        (self.0)(z, prec)
    }

    fn bound(&self, z: &ComplexBall, prec: u32) -> Option<Mag> {
        let v = (self.0)(z, prec);
        v.is_finite().then(|| v.mag_upper())
    }
}

fn c(re: f64, im: f64) -> ComplexBall {
    ComplexBall::from_f64(re, im)
}

pub fn segment(a: (f64, f64), b: (f64, f64)) -> Segment {
    Segment::new(c(a.0, a.1), c(b.0, b.1))
}

fn sech2_pi(z: &ComplexBall, p: u32) -> ComplexBall {
    z.mul_real(&const_pi(p), p).cosh(p).sqr(p).recip(p)
}

pub struct CorpusCase {
    pub name: &'static str,
    pub f: Func,
    pub seg: Segment,
    pub exact: fn(u32) -> ComplexBall,
}

/// Integrands with closed-form integrals.
pub fn corpus() -> Vec<CorpusCase> {
    vec![
        CorpusCase {
            name: "polynomial 3z²+2z+1 on [0,1]",
            f: Func(|z, p| z.sqr(p).mul_real(&RealBall::from_i64(3), p).add(&z.mul_2exp(1), p).add(&ComplexBall::one(), p)),
            seg: segment((0.0, 0.0), (1.0, 0.0)),
            exact: |_| c(3.0, 0.0),
        },
        CorpusCase {
            name: "1/(z²+1/100) on [-1,1]",
            f: Func(|z, p| z.sqr(p).add(&ComplexBall::from_real(RealBall::from_i64(100).recip(p)), p).recip(p)),
            seg: segment((-1.0, 0.0), (1.0, 0.0)),
            // 20 atan(10)
            exact: |p| ComplexBall::from_real(RealBall::from_i64(10).atan(p).mul_f64(20.0, p)),
        },
        CorpusCase {
            name: "sech²(πz) on [0,5]",
            f: Func(sech2_pi),
            seg: segment((0.0, 0.0), (5.0, 0.0)),
            exact: |p| ComplexBall::from_real(const_pi(p).mul_f64(5.0, p).tanh(p).div(&const_pi(p), p)),
        },
        CorpusCase {
            name: "exp(z) on [0,2]",
            f: Func(|z, p| z.exp(p)),
            seg: segment((0.0, 0.0), (2.0, 0.0)),
            exact: |p| ComplexBall::from_real(RealBall::from_i64(2).exp(p).sub(&RealBall::one(), p)),
        },
        CorpusCase {
            name: "exp(20iz) on [0,1]",
            f: Func(|z, p| z.mul_real(&RealBall::from_i64(20), p).mul_i().exp(p)),
            seg: segment((0.0, 0.0), (1.0, 0.0)),
            // (e^{20i} − 1)/(20i)
            exact: |p| c(0.0, 20.0).exp(p).sub(&ComplexBall::one(), p).div(&c(0.0, 20.0), p),
        },
        CorpusCase {
            name: "exp(z) from 0 to 1+i",
            f: Func(|z, p| z.exp(p)),
            seg: segment((0.0, 0.0), (1.0, 1.0)),
            exact: |p| c(1.0, 1.0).exp(p).sub(&ComplexBall::one(), p),
        },
    ]
}

/// Enclosure, tolerance, determinism and additivity on the corpus.
pub fn quadrature_corpus(precisions: &[u32]) -> Report {
    let mut rep = Report::default();
    let limits = Limits::default();
    for case in corpus() {
        for &p in precisions {
            let tol = Mag::pow2(-(p as i64));
            let r = petras_integrate(&case.f, &case.seg, p, &tol, &limits).unwrap();
            let exact = (case.exact)(p + 64);
            rep.check(r.value.contains(&exact), || format!("{} at p = {p} misses the exact value", case.name));
            if !r.nonconvergent {
                let goal = tol.max(&r.value.mag_upper().mul_2exp(-(p as i64)));
                rep.check(r.value.rad_upper() <= goal.mul(&Mag::from_f64(3.0)), || {
                    format!("{} at p = {p}: radius {} above tolerance", case.name, r.value.rad_upper().to_f64())
                });
            } else {
                rep.check(false, || format!("{} at p = {p} did not converge", case.name));
            }
            let again = petras_integrate(&case.f, &case.seg, p, &tol, &limits).unwrap();
            rep.check(format!("{:?}", again.value) == format!("{:?}", r.value), || {
                format!("{} at p = {p} not deterministic", case.name)
            });
            for t in [0.25, 0.5, 0.8125] {
                let m = lerp(&case.seg, t);
                let left = petras_integrate(&case.f, &Segment::new(case.seg.a.clone(), m.clone()), p, &tol, &limits).unwrap();
                let right = petras_integrate(&case.f, &Segment::new(m, case.seg.b.clone()), p, &tol, &limits).unwrap();
                let sum = left.value.add(&right.value, p + 10);
                rep.check(sum.overlaps(&r.value), || format!("{} at p = {p} not additive at t = {t}", case.name));
            }
        }
    }
    rep
}

fn lerp(seg: &Segment, t: f64) -> ComplexBall {
    let at = |a: &RealBall, b: &RealBall| {
        let a = a.mid().to_f64();
        let b = b.mid().to_f64();
        a + (b - a) * t
    };
    c(at(&seg.a.re, &seg.b.re), at(&seg.a.im, &seg.b.im))
}

/// Upper bound for `|f|` on the closed Bernstein ellipse `E_ρ`, from small
/// boxes covering its boundary (maximum modulus principle).
fn ellipse_sup(f: &Func, rho: f64, prec: u32) -> Mag {
    let ax = (rho + 1.0 / rho) / 2.0;
    let bx = (rho - 1.0 / rho) / 2.0;
    let steps = 4000;
    let mut sup = Mag::zero();
    for k in 0..steps {
        let t0 = std::f64::consts::TAU * k as f64 / steps as f64;
        let t1 = std::f64::consts::TAU * (k + 1) as f64 / steps as f64;
        let (x0, y0) = (ax * t0.cos(), bx * t0.sin());
        let (x1, y1) = (ax * t1.cos(), bx * t1.sin());
        // the arc between the two points stays within this box
        let pad = 2.0 * ax * (t1 - t0) * (t1 - t0);
        let (xm, ym) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        let (xr, yr) = ((x1 - x0).abs() / 2.0 + pad, (y1 - y0).abs() / 2.0 + pad);
        let z = ComplexBall::new(
            RealBall::new(Float::with_val(53, xm), Mag::from_f64(xr)),
            RealBall::new(Float::with_val(53, ym), Mag::from_f64(yr)),
        );
        let v = f.eval(&z, prec);
        sup = sup.max(&v.mag_upper());
    }
    sup
}

/// Actual Gauss-Legendre errors stay below the ellipse bound for rational integrands.
pub fn ellipse_stress() -> Report {
    let mut rep = Report::default();
    let prec = 256;
    type Case = (&'static str, Func, f64, fn(u32) -> RealBall);
    let cases: [Case; 2] = [
        (
            "1/(1+x²)",
            Func(|z, p| z.sqr(p).add(&ComplexBall::one(), p).recip(p)),
            2.0,
            |p| const_pi(p).mul_2exp(-1),
        ),
        (
            "1/(1+25x²)",
            Func(|z, p| z.sqr(p).mul_real(&RealBall::from_i64(25), p).add(&ComplexBall::one(), p).recip(p)),
            1.15,
            |p| RealBall::from_i64(5).atan(p).mul_f64(0.4, p),
        ),
    ];
    for (name, f, rho, exact) in &cases {
        let v = ellipse_sup(f, *rho, 64);
        let exact = exact(prec);
        for d in [4usize, 8, 16] {
            let rule = gl_rule(d, prec).unwrap();
            let mut sum = ComplexBall::zero();
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let fx = f.eval(&ComplexBall::from_real(x.clone()), prec);
                sum = sum.add(&fx.mul_real(w, prec), prec);
            }
            let err = sum.re.sub(&exact, prec).abs().mag_lower();
            let bound = ellipse_error_bound(&v, *rho, d).unwrap();
            rep.check(err <= bound, || {
                format!("{name}, d = {d}: error {} above bound {}", err.to_f64(), bound.to_f64())
            });
        }
    }
    rep
}

// ---------------------------------------------------------------- integrand

/// Rigorous enclosures of `∫_N^{N'} f` never exceed the tail bound at `N`.
pub fn tail_soundness() -> Report {
    let mut rep = Report::default();
    let a_list = [("0.5", "0"), ("1.5", "0"), ("0.5", "1"), ("3", "-2")];
    for n in [0u32, 1, 3, 10, 40] {
        for (ar, ai) in a_list {
            let a = cball(ar, ai, 128);
            let f = StieltjesIntegrand::new(&Integer::from(n), &a, 128);
            let im = ai.parse::<f64>().unwrap().abs();
            let start = (n as f64 + 2.0 + im).ceil();
            for dn in [0.0, 1.0, 4.0] {
                let big_n = start + dn;
                let bound = f.tail_bound(&Float::with_val(64, big_n)).unwrap();
                for len in [0.5, 2.0, 8.0] {
                    let seg = segment((big_n, 0.0), (big_n + len, 0.0));
                    let tol = bound.mul_2exp(-20);
                    let r = petras_integrate(&f, &seg, 128, &tol, &Limits::default()).unwrap();
                    let m = r.value.mag_upper();
                    rep.check(m <= bound, || {
                        format!("n = {n}, a = {ar}+{ai}i, N = {big_n}, N' = {}: {} > {}", big_n + len, m.to_f64(), bound.to_f64())
                    });
                }
            }
        }
    }
    rep
}

// ---------------------------------------------------------------- driver

/// `γₙ(v) − γₙ(v+1) = logⁿ(v)/v`.
pub fn recurrence_identity() -> Report {
    let mut rep = Report::default();
    let p = 128;
    let opts = Options::default();
    for (n, vr, vi) in [(0u32, "1.5", "0"), (5, "2", "0"), (10, "1", "1")] {
        let n_int = Integer::from(n);
        let v = cball(vr, vi, p + 64);
        let v1 = v.add(&ComplexBall::one(), p + 64);
        let lhs = gamma(&n_int, &v, p, &opts).sub(&gamma(&n_int, &v1, p, &opts), p + 20);
        let term = v.log(p + 64).pow_integer(&n_int, p + 64).div(&v, p + 64);
        let rhs = ScaledComplex::from_ball(term);
        rep.check(lhs.overlaps(&rhs, p + 20), || format!("recurrence fails at n = {n}, v = {vr}+{vi}i"));
        rep.check(lhs.rel_accuracy_bits() >= 100, || format!("recurrence too wide at n = {n}"));
    }
    rep
}

/// Midpoint relative distance in bits, from a ball centered at `b` with radius `|a − b|`.
fn agreement_bits(a: &ScaledComplex, b: &ScaledComplex, prec: u32) -> i64 {
    let am = ScaledComplex::new(a.ball.mid_exact(), a.exp2.clone());
    let bm = ScaledComplex::new(b.ball.mid_exact(), b.exp2.clone());
    let d = am.sub(&bm, prec);
    if d.ball.mag_upper().is_zero() {
        return i64::MAX;
    }
    bm.add_error_scaled(&d.ball.mag_upper(), &d.exp2).rel_accuracy_bits()
}

/// p = 64 and p = 256 enclosures overlap and agree to at least 60 bits.
pub fn precision_refinement() -> Report {
    let mut rep = Report::default();
    let opts = Options::default();
    let v = ComplexBall::one();
    for n in ["0", "1", "10", "100", "1000", "1000000"] {
        let n = int(n);
        let lo = gamma(&n, &v, 64, &opts);
        let hi = gamma(&n, &v, 256, &opts);
        rep.check(lo.overlaps(&hi, 300), || format!("p = 64 and p = 256 disjoint at n = {n}"));
        let bits = agreement_bits(&lo, &hi, 300);
        rep.check(bits >= 60, || format!("midpoints agree to only {bits} bits at n = {n}"));
        rep.check(hi.rel_accuracy_bits() > lo.rel_accuracy_bits(), || format!("no refinement at n = {n}"));
    }
    rep
}

/// `γₙ(conj v) = conj γₙ(v)`, and exactly real output for real `v`.
pub fn conjugation_and_reality() -> Report {
    let mut rep = Report::default();
    let p = 96;
    let opts = Options::default();
    for n in [0u32, 2, 7, 30] {
        let n = Integer::from(n);
        for (vr, vi) in [("1.25", "0.5"), ("0.75", "-2"), ("3", "0.125"), ("-1.5", "1")] {
            let v = cball(vr, vi, p + 64);
            let g = gamma(&n, &v, p, &opts);
            let gc = gamma(&n, &v.conj(), p, &opts);
            rep.check(gc.overlaps(&g.conj(), p + 20), || format!("conjugation fails at n = {n}, v = {vr}+{vi}i"));
        }
        for vr in ["1", "0.3", "2.5", "17"] {
            let v = cball(vr, "0", p + 64);
            let g = gamma(&n, &v, p, &opts);
            rep.check(g.ball.im.is_zero() && g.ball.im.rad().is_zero(), || {
                format!("imaginary part not exactly zero at n = {n}, v = {vr}")
            });
        }
    }
    rep
}

/// Real-line and saddle-point contours give overlapping results near the seam.
pub fn seam_overlap() -> Report {
    let mut rep = Report::default();
    let p = 64;
    let shifted = Options { shift_threshold: Integer::from(999), ..Options::default() };
    let direct = Options { shift_threshold: Integer::from(u64::MAX), ..Options::default() };
    for (n, vr, vi) in [(1000u32, "1", "0"), (1000, "1", "1"), (1500, "2.5", "0"), (2000, "0.75", "-0.5")] {
        let n = Integer::from(n);
        let v = cball(vr, vi, p + 64);
        let a = gamma(&n, &v, p, &shifted);
        let b = gamma(&n, &v, p, &direct);
        rep.check(a.overlaps(&b, p + 40), || format!("contours disagree at n = {n}, v = {vr}+{vi}i"));
        let bits = agreement_bits(&a, &b, p + 40);
        rep.check(bits >= 50, || format!("contours agree to only {bits} bits at n = {n}"));
    }
    rep
}

// ---------------------------------------------------------------- fixture

#[derive(Debug, Deserialize)]
pub struct ReferenceRecord {
    pub n: u32,
    pub v: [String; 2],
    pub digits: u32,
    pub value: [String; 2],
    pub methods: Vec<String>,
}

pub fn reference_records() -> Vec<ReferenceRecord> {
    include_str!("../data/reference.jsonl")
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

/// A printed decimal as a ball of half a unit in its last place.
pub fn decimal_ball(s: &str, prec: u32) -> RealBall {
    let q = parse_decimal(s).unwrap();
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().unwrap()),
        None => (s, 0),
    };
    let frac = mant.find('.').map(|i| mant.len() - i - 1).unwrap_or(0) as i64;
    if q == 0 && !mant.contains('.') {
        return RealBall::zero();
    }
    let e = exp - frac;
    let ulp = if e >= 0 {
        Rational::from(Integer::from(Integer::u_pow_u(10, e as u32)))
    } else {
        Rational::from((1, Integer::from(Integer::u_pow_u(10, (-e) as u32))))
    };
    let half: Rational = ulp / 2u32;
    let r = RealBall::from_rational(&half, 64);
    RealBall::from_rational(&q, prec).add_error(&r.mag_upper())
}

/// Every fixture value lies in the enclosure computed at `digits·3.33 + 20` bits.
pub fn oracle_suite(max_n: u32) -> Report {
    let mut rep = Report::default();
    let opts = Options::default();
    for rec in reference_records().iter().filter(|r| r.n <= max_n) {
        rep.check(rec.methods.len() >= 2, || format!("record n = {} has one method", rec.n));
        let p = (rec.digits as f64 * 3.33).ceil() as u32 + 20;
        let v = cball(&rec.v[0], &rec.v[1], p + 64);
        let g = gamma(&Integer::from(rec.n), &v, p, &opts);
        let got = g.to_ball().unwrap();
        let want = ComplexBall::new(decimal_ball(&rec.value[0], p + 64), decimal_ball(&rec.value[1], p + 64));
        let inside = got.re.overlaps(&want.re) && got.im.overlaps(&want.im);
        rep.check(inside, || format!("n = {}, v = {}+{}i: {:?} vs {:?}", rec.n, rec.v[0], rec.v[1], got, rec.value));
        // the enclosure must actually be tighter than the fixture
        let tight = got.re.rad() <= want.re.rad() || want.re.rad().is_zero();
        rep.check(tight, || format!("n = {}: enclosure wider than the fixture", rec.n));
    }
    rep
}

// ---------------------------------------------------------------- asymptotics

/// Sign, decimal exponent and `⌊log₁₀ n⌋ − 1` digits against Knessl-Coffey.
pub fn asymptotic_agreement() -> Report {
    let mut rep = Report::default();
    let opts = Options::default();
    for e in 3..=6u32 {
        let n = pow10(e);
        let kc = knessl_coffey(&n).unwrap();
        if kc.cos_factor.abs() < 0.1 {
            continue;
        }
        let g = gamma(&n, &ComplexBall::one(), 64, &opts);
        let Some(a) = agreement(&kc, &g) else {
            rep.check(false, || format!("no comparison at n = 1e{e}"));
            continue;
        };
        rep.check(a.same_sign, || format!("sign differs at n = 1e{e}"));
        rep.check(a.same_exponent, || format!("exponent differs at n = 1e{e}: {} vs {}", a.computed, a.estimate));
        rep.check(a.digits + 1 >= e, || format!("only {} digits at n = 1e{e}", a.digits));
    }
    rep
}

/// Wall-clock seconds for `γₙ(1)` at `p` bits, best of `reps`.
pub fn timed(n: &Integer, p: u32, reps: usize) -> f64 {
    let opts = Options::default();
    (0..reps)
        .map(|_| {
            let t = Instant::now();
            let _ = gamma(n, &ComplexBall::one(), p, &opts);
            t.elapsed().as_secs_f64()
        })
        .fold(f64::INFINITY, f64::min)
}

// ---------------------------------------------------------------- published values

/// Digits of a decimal string without sign and point, and its exponent.
fn split_decimal(s: &str) -> (String, Integer) {
    let s = s.trim_start_matches('-');
    let (m, e) = match s.find('e') {
        Some(i) => (&s[..i], s[i + 1..].trim_start_matches('+').parse().unwrap()),
        None => (s, Integer::new()),
    };
    (m.replace('.', ""), e)
}

/// Matching leading digits between a rendered ball and a published
/// significand, limited by what the radius certifies.
pub fn matching_digits(value: &stieltjes_core::DecimalBall, published: &str, e10: &Integer) -> usize {
    let (mid, me) = split_decimal(&value.mid);
    let (_, re) = split_decimal(&value.rad);
    if &me != e10 {
        return 0;
    }
    let certified = Integer::from(&me - &re).to_usize().unwrap_or(usize::MAX).saturating_sub(1);
    let common = mid.chars().zip(published.chars()).take_while(|(a, b)| a == b).count();
    common.min(certified)
}

pub fn published_digits(s: &str) -> String {
    s.chars().filter(|c| c.is_ascii_digit()).collect()
}

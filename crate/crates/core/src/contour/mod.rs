//! Saddle point location, tail cutoff and the integration path.

mod lambert;

pub use lambert::lambert_w0;

use rug::float::Round;
use rug::{Complex, Float, Integer};

use crate::balls::{ComplexBall, RealBall};
use crate::error::Error;
use crate::integrand::StieltjesIntegrand;
use crate::quadrature::Segment;

/// Default `n` above which the path is shifted through the saddle region.
pub const SHIFT_THRESHOLD: u64 = 1000;

#[derive(Clone, Debug)]
pub struct SaddleSolution {
    pub omega: Complex,
    pub u: Complex,
    pub w0: Complex,
    /// `|(n+1) + 2πi(a+iω) log(a+iω)| / (n+1)`.
    pub residual: f64,
    pub bits: u32,
}

#[derive(Clone, Debug)]
pub struct ContourPlan {
    pub segments: Vec<Segment>,
    pub n_cut: Float,
    pub m: Float,
    pub c: Float,
    pub omega: Complex,
    pub residual: f64,
    pub shifted: bool,
}

/// Precision used for the saddle point, `max(53, 2⌈log₂(n+2)⌉)`.
pub fn saddle_bits(n: &Integer) -> u32 {
    let b = Integer::from(n + 2).significant_bits();
    (2 * b).max(53)
}

/// Solves `g′(ω) = 0` via `ω = i(a − u/W₀(u))`, `u = (n+1)i/(2π)`, and checks
/// the residual of `(n+1) + 2πi(a + iω) log(a + iω) = 0`.
pub fn saddle_point(n: &Integer, a: &Complex, bits: u32) -> Result<SaddleSolution, Error> {
    let prec = bits + 20;
    let k = Float::with_val(prec.max(n.significant_bits() + 1), Integer::from(n + 1u32));
    let two_pi = Float::with_val(prec, rug::float::Constant::Pi) * 2u32;
    let u = Complex::with_val(prec, (Float::new(prec), Float::with_val(prec, &k / &two_pi)));
    let w0 = lambert_w0(&u, bits)?;
    let a = Complex::with_val(prec, a);
    let q = Complex::with_val(prec, &u / &w0);
    let omega = Complex::with_val(prec, &a - &q) * Complex::with_val(prec, (0, 1));

    let t = Complex::with_val(prec, &a + Complex::with_val(prec, &omega * Complex::with_val(prec, (0, 1))));
    let lt = Complex::with_val(prec, t.ln_ref());
    let two_pi_i = Complex::with_val(prec, (Float::new(prec), two_pi));
    let lhs = Complex::with_val(prec, &t * &lt) * two_pi_i + &k;
    let rel = Float::with_val(prec, lhs.abs_ref()) / &k;
    let residual = rel.to_f64();
    let mut tol = Float::with_val(64, 1);
    tol >>= bits / 2;
    if !(rel <= tol) {
        return Err(Error::Convergence(format!("saddle point residual {residual:e} too large")));
    }
    Ok(SaddleSolution {
        omega,
        u,
        w0,
        residual,
        bits,
    })
}

/// Smallest `N` in the sequence `N₀, 2N₀, 4N₀, …`, `N₀ = ⌈n + 2 + |Im a|⌉`,
/// whose tail bound is at most `2^(−p−20)`.
pub fn choose_n(n: &Integer, a: &ComplexBall, p: u32) -> Result<Float, Error> {
    let wp = p + Integer::from(n + 1).significant_bits() + 40;
    let f = StieltjesIntegrand::new(n, a, wp);
    choose_n_for(&f, p)
}

pub(crate) fn choose_n_for(f: &StieltjesIntegrand, p: u32) -> Result<Float, Error> {
    let im = Float::with_val_round(64, f.a().im.upper(64).abs(), Round::Up).0;
    let (im_ceil, _) = im.ceil().to_integer_round(Round::Up).unwrap();
    let mut big_n = Integer::from(f.n() + 2) + im_ceil;
    let goal = -Float::with_val(64, (p + 20) as f64 * std::f64::consts::LN_2);
    loop {
        let nf = Float::with_val(big_n.significant_bits().max(64), &big_n);
        let lt = f.log_tail_bound(&nf)?;
        if lt <= goal {
            return Ok(nf);
        }
        big_n <<= 1;
    }
}

fn exact(re: &Float, im: &Float) -> ComplexBall {
    ComplexBall::new(RealBall::exact(re.clone()), RealBall::exact(im.clone()))
}

/// Builds the integration path from 0 to `N` for `I_n(a)`.
///
/// Up to `shift_threshold` a single real segment is used. Above it, the
/// path runs `0 → M → M + Ci → N + Ci → N` with `C = Im ω`.
pub fn build_contour(n: &Integer, a: &ComplexBall, p: u32, shift_threshold: &Integer) -> Result<ContourPlan, Error> {
    let mut big_n = choose_n(n, a, p)?;
    let a_mid = Complex::with_val(64, (a.re.mid(), a.im.mid()));
    let zero = Float::new(64);
    if n <= shift_threshold {
        let omega = saddle_point(n, &a_mid, saddle_bits(n))
            .map(|s| s.omega)
            .unwrap_or_else(|_| Complex::new(64));
        return Ok(ContourPlan {
            segments: vec![Segment::new(exact(&zero, &zero), exact(&big_n, &zero))],
            n_cut: big_n,
            m: Float::new(64),
            c: Float::new(64),
            omega,
            residual: 0.0,
            shifted: false,
        });
    }
    let bits = saddle_bits(n);
    let sol = saddle_point(n, &a_mid, bits)?;
    let re_w = sol.omega.real().clone();
    let c = sol.omega.imag().clone();
    let half_re = Float::with_val(64, &re_w / 2u32);
    let m = half_re.min(&Float::with_val(64, 10)).max(&Float::with_val(64, 1));
    // the horizontal segment must cover the Gaussian peak around the saddle
    let sqrt_n = Float::with_val(bits, n).sqrt();
    let floor = (Float::with_val(bits, &re_w + &sqrt_n) + 10u32).ceil();
    if floor > big_n {
        big_n = Float::with_val(floor.prec(), &floor);
    }
    let p0 = exact(&zero, &zero);
    let p1 = exact(&m, &zero);
    let p2 = exact(&m, &c);
    let p3 = exact(&big_n, &c);
    let p4 = exact(&big_n, &zero);
    Ok(ContourPlan {
        segments: vec![
            Segment::new(p0, p1.clone()),
            Segment::new(p1, p2.clone()),
            Segment::new(p2, p3.clone()),
            Segment::new(p3, p4),
        ],
        n_cut: big_n,
        m,
        c,
        omega: sol.omega,
        residual: sol.residual,
        shifted: true,
    })
}

impl ContourPlan {
    /// Endpoints are exact and consecutive segments share endpoints.
    pub fn is_connected(&self) -> bool {
        let Some(first) = self.segments.first() else { return false };
        let start_ok = first.a.is_zero_exact();
        let last = self.segments.last().unwrap();
        let end_ok = last.b.im.is_zero() && last.b.re.mid() == &self.n_cut;
        let chain = self.segments.windows(2).all(|w| {
            w[0].b.re.mid() == w[1].a.re.mid() && w[0].b.im.mid() == w[1].a.im.mid()
        });
        let exact = self.segments.iter().all(|s| s.a.is_exact() && s.b.is_exact());
        start_ok && end_ok && chain && exact
    }
}

impl SaddleSolution {
    pub fn omega_f64(&self) -> (f64, f64) {
        (self.omega.real().to_f64(), self.omega.imag().to_f64())
    }
}

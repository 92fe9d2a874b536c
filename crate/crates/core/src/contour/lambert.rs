use rug::{Complex, Float};

use crate::error::Error;

const MAX_STEPS: usize = 200;

fn initial_guess(u: &Complex, prec: u32) -> Complex {
    let r = Float::with_val(prec, u.abs_ref()).to_f64();
    if r >= 3.0 {
        // asymptotic expansion  L1 − L2 + L2/L1
        let l1 = Complex::with_val(prec, u.ln_ref());
        let l2 = Complex::with_val(prec, l1.ln_ref());
        let q = Complex::with_val(prec, &l2 / &l1);
        Complex::with_val(prec, &l1 - &l2) + q
    } else if r < 0.25 {
        // w ≈ u − u²
        let u2 = Complex::with_val(prec, u.square_ref());
        Complex::with_val(prec, u - u2)
    } else {
        let one_plus = Complex::with_val(prec, u + 1u32);
        Complex::with_val(prec, one_plus.ln_ref()) * Float::with_val(prec, 0.8)
    }
}

/// Principal branch `W₀(u)` by Halley iteration, to about `bits` relative bits.
///
/// Not rigorous; the callers only need an approximation.
pub fn lambert_w0(u: &Complex, bits: u32) -> Result<Complex, Error> {
    let prec = bits + 20;
    if u.real().is_zero() && u.imag().is_zero() {
        return Ok(Complex::new(prec));
    }
    let u = Complex::with_val(prec, u);
    let abs_u = Float::with_val(prec, u.abs_ref());
    let mut tol = abs_u.clone();
    tol >>= bits;
    let mut w = initial_guess(&u, prec);
    for _ in 0..MAX_STEPS {
        let ew = Complex::with_val(prec, w.exp_ref());
        let wew = Complex::with_val(prec, &w * &ew);
        let f = Complex::with_val(prec, &wew - &u);
        if Float::with_val(prec, f.abs_ref()) <= tol {
            return Ok(w);
        }
        // Halley: w − f / (e^w (w+1) − (w+2) f / (2w+2))
        let wp1 = Complex::with_val(prec, &w + 1u32);
        let wp2 = Complex::with_val(prec, &w + 2u32);
        let t = Complex::with_val(prec, &ew * &wp1);
        let c = Complex::with_val(prec, &wp2 * &f) / Complex::with_val(prec, &wp1 * 2u32);
        let den = t - c;
        let step = Complex::with_val(prec, &f / &den);
        w -= step;
    }
    Err(Error::Convergence("Lambert W iteration did not converge".into()))
}

mod args;

use std::process::ExitCode;

use clap::Parser;
use rug::Integer;
use serde_json::{json, Value};

use args::{AsymptoticArgs, BenchArgs, Cli, Command, Format, StieltjesArgs, ZetaArgs};
use stieltjes_core::asymptotics::{agreement, knessl_coffey};
use stieltjes_core::balls::parse_decimal;
use stieltjes_core::{
    hurwitz_zeta, stieltjes, ComplexBall, DecimalBall, Error, Options, RealBall, ScaledComplex, StieltjesRequest,
};

const EXIT_DOMAIN: u8 = 1;
const EXIT_NONCONVERGENT: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_DOMAIN) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Stieltjes(a) => run_stieltjes(&a),
        Command::Zeta(a) => run_zeta(&a),
        Command::Asymptotic(a) => run_asymptotic(&a),
        Command::Bench(a) => run_bench(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_DOMAIN)
        }
    }
}

fn ball_from(re: &str, im: &str, prec: u32) -> Result<ComplexBall, String> {
    let r = parse_decimal(re).ok_or_else(|| format!("not a decimal number: {re:?}"))?;
    let i = parse_decimal(im).ok_or_else(|| format!("not a decimal number: {im:?}"))?;
    Ok(ComplexBall::new(RealBall::from_rational(&r, prec), RealBall::from_rational(&i, prec)))
}

fn err_string(e: Error) -> String {
    e.to_string()
}

fn fmt_part(d: &DecimalBall) -> String {
    format!("{} +/- {}", d.mid, d.rad)
}

fn fmt_value(re: &DecimalBall, im: Option<&DecimalBall>) -> String {
    match im {
        None => fmt_part(re),
        Some(im) => format!("({}) + ({})*i", fmt_part(re), fmt_part(im)),
    }
}

fn decimal_json(d: &DecimalBall) -> Value {
    json!({ "mid": d.mid, "rad": d.rad })
}

fn value_json(re: &DecimalBall, im: &DecimalBall) -> Value {
    json!({ "re": decimal_json(re), "im": decimal_json(im) })
}

fn scaled_parts(v: &ScaledComplex, digits: usize) -> (DecimalBall, DecimalBall) {
    (v.re_decimal(digits), v.im_decimal(digits))
}

fn print_warnings(w: &[String]) {
    for msg in w {
        eprintln!("warning: {msg}");
    }
}

fn run_stieltjes(a: &StieltjesArgs) -> Result<u8, String> {
    let (p, digits) = a.accuracy.resolve()?;
    let v = ball_from(&a.v, &a.v_im, p + 64)?;
    let req = StieltjesRequest { n: a.n.clone(), v: v.clone(), p };
    let mut opts = Options::default();
    if let Some(t) = &a.shift_threshold {
        opts.shift_threshold = t.clone();
    }
    if let Some(m) = a.max_evals {
        opts.limits.max_evals = m;
    }
    let res = stieltjes(&req, &opts).map_err(err_string)?;
    let (re, im) = scaled_parts(&res.value, digits);
    let real = res.value.ball.im.is_zero();
    let check = if a.check_asymptotic && a.n >= 1 {
        let kc = knessl_coffey(&a.n).map_err(err_string)?;
        Some((agreement(&kc, &res.value), kc))
    } else {
        None
    };
    let label = format!("gamma_{}({})", a.n, complex_arg(&a.v, &a.v_im, v.is_real()));
    match a.format {
        Format::Plain => {
            println!("{label} = {}", fmt_value(&re, (!real).then_some(&im)));
            if a.diagnostics {
                let d = &res.diagnostics;
                println!(
                    "wp = {}  shifted = {}  N = {}  M = {}  C = {}  omega = {} {:+}i",
                    d.wp, d.shifted, d.n_cut, d.m, d.c, d.omega[0], d.omega[1]
                );
                println!(
                    "integrals = {}  segments = {}  evals = {}  recurrence steps = {}  seconds = {:.3}",
                    d.integrals, d.segments, d.evaluations, d.shift_count, d.seconds
                );
            }
            if let Some((agr, kc)) = &check {
                println!("knessl-coffey = {:.15}e{}  (cos factor {:.4})", kc.significand(), kc.exponent10(), kc.cos_factor);
                match agr {
                    Some(g) => println!(
                        "agreement: sign {}  exponent {}  digits {}",
                        if g.same_sign { "ok" } else { "differs" },
                        if g.same_exponent { "ok" } else { "differs" },
                        g.digits
                    ),
                    None => println!("agreement: not available"),
                }
            }
        }
        Format::Json => {
            let mut out = json!({
                "input": { "n": a.n.to_string(), "v": [a.v, a.v_im], "prec": p, "digits": digits },
                "value": value_json(&re, &im),
                "diagnostics": serde_json::to_value(&res.diagnostics).unwrap(),
                "warnings": res.warnings,
                "nonconvergent": res.nonconvergent,
            });
            if let Some((agr, kc)) = &check {
                out["asymptotic"] = json!({
                    "significand": kc.significand(),
                    "exponent": kc.exponent10().to_string(),
                    "cos_factor": kc.cos_factor,
                    "agreement": agr,
                });
            }
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
    }
    print_warnings(&res.warnings);
    Ok(if res.nonconvergent { EXIT_NONCONVERGENT } else { 0 })
}

fn run_zeta(a: &ZetaArgs) -> Result<u8, String> {
    let (p, digits) = a.accuracy.resolve()?;
    let s = ball_from(&a.s, &a.s_im, p + 64)?;
    let v = ball_from(&a.v, &a.v_im, p + 64)?;
    let res = hurwitz_zeta(&s, &v, p, &Options::default()).map_err(err_string)?;
    let value = ScaledComplex::from_ball(res.value.clone());
    let (re, im) = scaled_parts(&value, digits);
    match a.format {
        Format::Plain => {
            let real = res.value.im.is_zero();
            println!(
                "zeta({}, {}) = {}",
                complex_arg(&a.s, &a.s_im, s.is_real()),
                complex_arg(&a.v, &a.v_im, v.is_real()),
                fmt_value(&re, (!real).then_some(&im))
            );
            if a.diagnostics {
                let d = &res.diagnostics;
                println!(
                    "wp = {}  N = {}  segments = {}  evals = {}  recurrence steps = {}  seconds = {:.3}",
                    d.wp, d.n_cut, d.segments, d.evaluations, d.shift_count, d.seconds
                );
            }
        }
        Format::Json => {
            let out = json!({
                "input": { "s": [a.s, a.s_im], "v": [a.v, a.v_im], "prec": p, "digits": digits },
                "value": value_json(&re, &im),
                "diagnostics": serde_json::to_value(&res.diagnostics).unwrap(),
                "warnings": res.warnings,
                "nonconvergent": res.nonconvergent,
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
    }
    print_warnings(&res.warnings);
    Ok(if res.nonconvergent { EXIT_NONCONVERGENT } else { 0 })
}

fn run_asymptotic(a: &AsymptoticArgs) -> Result<u8, String> {
    let kc = knessl_coffey(&a.n).map_err(err_string)?;
    let f = |x: &rug::Float| x.to_f64();
    match a.format {
        Format::Plain => {
            println!("beta = {}  alpha = {}", f(&kc.beta), f(&kc.alpha));
            println!("A = {}  B = {}  a = {}  b = {}", f(&kc.big_a), f(&kc.big_b), f(&kc.a), f(&kc.b));
            println!("gamma_{} ~ {:.15}e{}  (cos factor {:.6})", a.n, kc.significand(), kc.exponent10(), kc.cos_factor);
        }
        Format::Json => {
            let out = json!({
                "n": a.n.to_string(),
                "beta": f(&kc.beta), "alpha": f(&kc.alpha),
                "A": f(&kc.big_a), "B": f(&kc.big_b), "a": f(&kc.a), "b": f(&kc.b),
                "cos_factor": kc.cos_factor,
                "significand": kc.significand(),
                "exponent": kc.exponent10().to_string(),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
    }
    Ok(0)
}

fn run_bench(a: &BenchArgs) -> Result<u8, String> {
    let opts = Options::default();
    print!("{:>12}", "n \\ digits");
    for d in &a.digits {
        print!("{d:>12}");
    }
    println!();
    for n in &a.n {
        print!("{:>12}", short_n(n));
        for &d in &a.digits {
            let req = StieltjesRequest {
                n: n.clone(),
                v: ComplexBall::one(),
                p: args::digits_to_bits(d),
            };
            let t = std::time::Instant::now();
            match stieltjes(&req, &opts) {
                Ok(_) => print!("{:>12.4}", t.elapsed().as_secs_f64()),
                Err(_) => print!("{:>12}", "error"),
            }
        }
        println!();
    }
    Ok(0)
}

fn short_n(n: &Integer) -> String {
    let s = n.to_string();
    let zeros = s.len() - s.trim_end_matches('0').len();
    if zeros >= 3 {
        format!("{}e{}", &s[..s.len() - zeros], zeros)
    } else {
        s
    }
}

fn complex_arg(re: &str, im: &str, real: bool) -> String {
    if real {
        re.to_string()
    } else {
        format!("{re} + {im}*i")
    }
}

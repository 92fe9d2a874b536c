use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::ops::Pow;
use rug::Integer;

#[derive(Parser, Debug)]
#[command(name = "stieltjes", version, about = "Rigorous generalized Stieltjes constants and Hurwitz zeta values")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enclose γₙ(v).
    Stieltjes(StieltjesArgs),
    /// Enclose ζ(s, v).
    Zeta(ZetaArgs),
    /// Knessl-Coffey estimate of γₙ.
    Asymptotic(AsymptoticArgs),
    /// Time γₙ over a grid of n and precisions.
    Bench(BenchArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
}

#[derive(Args, Debug, Clone)]
#[group(multiple = false)]
pub struct Accuracy {
    /// Significant decimal digits (at least 3).
    #[arg(long)]
    pub digits: Option<u32>,
    /// Target precision in bits (at least 16).
    #[arg(long)]
    pub prec: Option<u32>,
}

impl Accuracy {
    /// `(bits, digits shown)`.
    pub fn resolve(&self) -> Result<(u32, usize), String> {
        match (self.digits, self.prec) {
            (Some(d), _) => {
                if d < 3 {
                    return Err("--digits must be at least 3".into());
                }
                Ok((digits_to_bits(d), d as usize))
            }
            (None, Some(p)) => {
                if p < 16 {
                    return Err("--prec must be at least 16".into());
                }
                Ok((p, ((p as f64) * std::f64::consts::LOG10_2).floor().max(3.0) as usize))
            }
            (None, None) => Ok((digits_to_bits(20), 20)),
        }
    }
}

/// `⌈d log₂ 10⌉ + 10`.
pub fn digits_to_bits(d: u32) -> u32 {
    ((d as f64) * std::f64::consts::LOG2_10).ceil() as u32 + 10
}

#[derive(Args, Debug)]
pub struct StieltjesArgs {
    /// Index n; accepts `123`, `1e100` or `10^100`.
    #[arg(value_parser = parse_n)]
    pub n: Integer,
    /// Real part of v.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub v: String,
    /// Imaginary part of v.
    #[arg(long = "v-im", default_value = "0", allow_hyphen_values = true)]
    pub v_im: String,
    #[command(flatten)]
    pub accuracy: Accuracy,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
    /// Print working precision, contour and timing.
    #[arg(long)]
    pub diagnostics: bool,
    /// Compare with the Knessl-Coffey estimate.
    #[arg(long)]
    pub check_asymptotic: bool,
    /// Use the saddle-point path above this n.
    #[arg(long, value_parser = parse_n)]
    pub shift_threshold: Option<Integer>,
    /// Integrand evaluation budget per integral.
    #[arg(long)]
    pub max_evals: Option<u64>,
}

#[derive(Args, Debug)]
pub struct ZetaArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    #[arg(long = "s-im", default_value = "0", allow_hyphen_values = true)]
    pub s_im: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub v: String,
    #[arg(long = "v-im", default_value = "0", allow_hyphen_values = true)]
    pub v_im: String,
    #[command(flatten)]
    pub accuracy: Accuracy,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
    #[arg(long)]
    pub diagnostics: bool,
}

#[derive(Args, Debug)]
pub struct AsymptoticArgs {
    #[arg(value_parser = parse_n)]
    pub n: Integer,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Comma-separated values of n.
    #[arg(long, default_value = "1e3,1e6,1e10,1e15", value_delimiter = ',', value_parser = parse_n)]
    pub n: Vec<Integer>,
    /// Comma-separated digit counts.
    #[arg(long, default_value = "16,100", value_delimiter = ',')]
    pub digits: Vec<u32>,
}

/// Parses `123`, `1e100`, `3e5` or `10^100` into a nonnegative integer.
pub fn parse_n(s: &str) -> Result<Integer, String> {
    let s = s.trim();
    let bad = || format!("invalid n: {s:?}");
    let parse_u = |t: &str| t.parse::<Integer>().map_err(|_| bad());
    let n = if let Some((b, e)) = s.split_once('^') {
        let e: u32 = e.parse().map_err(|_| bad())?;
        parse_u(b)?.pow(e)
    } else if let Some((m, e)) = s.split_once(['e', 'E']) {
        let e: u32 = e.parse().map_err(|_| bad())?;
        parse_u(m)? * Integer::from(10).pow(e)
    } else {
        parse_u(s)?
    };
    if n < 0 {
        return Err("n must be nonnegative".into());
    }
    Ok(n)
}

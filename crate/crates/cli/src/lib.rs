//! Command-line front end. [`run`] parses arguments, dispatches, writes to the
//! given streams and returns the process exit code.
//!
//! Exit codes: 0 success or passing check, 1 failing check, 2 usage error,
//! 3 domain or resource error.

use std::ffi::OsString;
use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use schurwalk::chains::simulate;
use schurwalk::kernels::{RowOptions, SpectralFunction, TransitionKernel};
use schurwalk::scalar::format_rational;
use schurwalk::signature::dimension;
use schurwalk::suite::{verify, Check, VerifyConfig};
use schurwalk::symfunc::{lr_coeff, schur_eval, weight_expansion, EvaluationPoint};
use schurwalk::{Error, Signature};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

fn parse<T: FromStr<Err = Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "schurwalk", version, about = "Markov kernels on U(n) signatures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// Rank
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated positive rationals, e.g. 1,1/2
    #[arg(long, allow_hyphen_values = true, value_parser = parse::<EvaluationPoint>)]
    theta: Option<EvaluationPoint>,
    /// Spectral function, e.g. beta-:1/2, laurent{0:1/2,1:1/2}, prod(beta+:1/2,alpha-:1/3)
    #[arg(long = "F", value_name = "F", value_parser = parse::<SpectralFunction>)]
    f: Option<SpectralFunction>,
    /// Second factor for the semigroup check
    #[arg(long = "F2", value_name = "F2", value_parser = parse::<SpectralFunction>)]
    f2: Option<SpectralFunction>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse::<Signature>)]
    lambda: Option<Signature>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse::<Signature>)]
    mu: Option<Signature>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse::<Signature>)]
    tau: Option<Signature>,
    #[arg(long)]
    eps: Option<f64>,
    /// Window half-width: parts in [-W, W]
    #[arg(long, value_name = "W")]
    window: Option<i64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    samples: Option<u64>,
    /// Total-variation threshold for the empirical check
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate s_λ(θ) (θ defaults to 1^n)
    Schur(Common),
    /// Dimension of V_λ
    Dim(Common),
    /// Littlewood-Richardson coefficient c_{λμ}^τ
    Lr(Common),
    /// Weight multiset of V_λ
    Weights(Common),
    /// One row of T_n(θ;F) from λ
    KernelRow(Common),
    /// Run a named verification and print its report
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(Check::NAMES))]
        check: String,
        #[command(flatten)]
        common: Common,
    },
    /// Simulate the θ = 1 chain from λ
    Simulate(Common),
}

enum Outcome {
    Text(String),
    Verdict(String, bool),
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn need<'a, T>(v: &'a Option<T>, flag: &str) -> schurwalk::Result<&'a T> {
    v.as_ref().ok_or_else(|| usage(format!("missing required flag --{flag}")))
}

fn text_only(c: &Common) -> schurwalk::Result<()> {
    match c.format {
        Some(Format::Csv) => Err(usage("--format csv applies to kernel-row and simulate only")),
        _ => Ok(()),
    }
}

fn rank(c: &Common) -> usize {
    c.n
        .or_else(|| c.lambda.as_ref().map(Signature::rank))
        .or_else(|| c.theta.as_ref().map(EvaluationPoint::rank))
        .unwrap_or(2)
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn dispatch(command: Command) -> schurwalk::Result<Outcome> {
    Ok(match command {
        Command::Schur(c) => {
            text_only(&c)?;
            let l = need(&c.lambda, "lambda")?;
            let theta = c.theta.clone().unwrap_or_else(|| EvaluationPoint::ones(l.rank()));
            Outcome::Text(format_rational(&schur_eval(l, &theta)?))
        }
        Command::Dim(c) => {
            text_only(&c)?;
            Outcome::Text(format_rational(&dimension(need(&c.lambda, "lambda")?)))
        }
        Command::Lr(c) => {
            text_only(&c)?;
            let (l, m, t) = (need(&c.lambda, "lambda")?, need(&c.mu, "mu")?, need(&c.tau, "tau")?);
            Outcome::Text(lr_coeff(l, m, t)?.to_string())
        }
        Command::Weights(c) => {
            text_only(&c)?;
            Outcome::Text(pretty(&weight_expansion(need(&c.lambda, "lambda")?)?.to_json()))
        }
        Command::KernelRow(c) => {
            let l = need(&c.lambda, "lambda")?;
            let f = need(&c.f, "F")?;
            let theta = c.theta.clone().unwrap_or_else(|| EvaluationPoint::ones(l.rank()));
            let opts = RowOptions::with_eps(c.eps.unwrap_or(1e-9));
            let row = TransitionKernel::new(theta, f)?.row(l, opts)?;
            Outcome::Text(match c.format {
                Some(Format::Csv) => row.to_csv().trim_end().to_string(),
                _ => pretty(&row.to_json()),
            })
        }
        Command::Simulate(c) => {
            let l = need(&c.lambda, "lambda")?;
            let f = need(&c.f, "F")?;
            let t = simulate(l, f, c.steps.unwrap_or(100), c.seed.unwrap_or(0))?;
            Outcome::Text(match c.format {
                Some(Format::Csv) => t.to_csv().trim_end().to_string(),
                _ => pretty(&t.summary_json()),
            })
        }
        Command::Verify { check, common: c } => {
            text_only(&c)?;
            let check: Check = check.parse()?;
            let d = VerifyConfig::default();
            let cfg = VerifyConfig {
                n: rank(&c),
                f: c.f.clone(),
                f2: c.f2.clone(),
                theta: c.theta.clone(),
                window: c.window.unwrap_or(d.window),
                eps: c.eps.unwrap_or(d.eps),
                lambda: c.lambda.clone(),
                mu: if check == Check::Center { c.tau.clone().or(c.mu.clone()) } else { c.mu.clone().or(c.tau.clone()) },
                seed: c.seed.unwrap_or(d.seed),
                samples: c.samples.unwrap_or(d.samples),
                delta: c.delta.unwrap_or(d.delta),
            };
            let r = verify(check, &cfg)?;
            Outcome::Verdict(r.to_string(), r.pass)
        }
    })
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(Outcome::Text(s)) => {
            let _ = writeln!(out, "{s}");
            EXIT_PASS
        }
        Ok(Outcome::Verdict(s, pass)) => {
            let _ = writeln!(out, "{s}");
            if pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(Error::Parse(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nRun with --help for usage.");
            EXIT_USAGE
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
    }
}

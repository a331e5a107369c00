//! Command-line front end: `eval`, `sweep` and `compare`.
//!
//! SNRs are entered and reported in dB. Exit codes:
//! 0 success, 1 I/O failure, 2 flag parse, 3 domain, 4 validity,
//! 5 convergence, 6 comparison failure.

mod sweep;
mod table;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use sweep::{evaluate_point, params_for, resolve_method, run_sweep, SweepAxis, SweepSpec};
pub use table::{fmt_f64, write_rows, OutputFormat, PointSpec, Row, COLUMNS, SCHEMA_LINE};

use crate::channel::delay_exponent_product;
use crate::error::Error;
use crate::monte_carlo::{McSpec, DEFAULT_SEED, DEFAULT_TRIALS};
use crate::rate::{compare_methods, EvalOptions, Method, MethodChoice};

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const IO: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const DOMAIN: i32 = 3;
    pub const VALIDITY: i32 = 4;
    pub const CONVERGENCE: i32 = 5;
    pub const COMPARISON: i32 = 6;
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain { .. } => exit::DOMAIN,
        Error::Unsupported { .. } | Error::Validity { .. } => exit::VALIDITY,
        Error::Convergence { .. } => exit::CONVERGENCE,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "effcap",
    version,
    about = "Effective throughput of MISO links over i.i.d. kappa-mu shadowed fading"
)]
pub struct Cli {
    /// Worker threads for sweeps and Monte Carlo (0 = all cores)
    #[arg(long, env = "EFFCAP_JOBS", global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the effective rate at one parameter point
    Eval(EvalArgs),
    /// Sweep the rate over rho (dB) or the antenna count and write a table
    Sweep(SweepArgs),
    /// Run every applicable method and check that they agree
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
struct ChannelArgs {
    /// Dominant-to-scattered power ratio kappa (>= 0)
    #[arg(long, allow_hyphen_values = true)]
    kappa: f64,
    /// Number of multipath clusters mu (> 0)
    #[arg(long, allow_hyphen_values = true)]
    mu: f64,
    /// Shadowing severity m (> 0)
    #[arg(long, allow_hyphen_values = true)]
    m: f64,
    /// Mean SNR per antenna in dB
    #[arg(long, allow_hyphen_values = true)]
    gamma_bar_db: f64,
}

#[derive(Debug, Args)]
struct ExponentArgs {
    /// Delay exponent product A = theta T B / ln 2
    #[arg(
        long,
        allow_hyphen_values = true,
        conflicts_with_all = ["theta", "block_t", "bandwidth"],
        required_unless_present_all = ["theta", "block_t", "bandwidth"]
    )]
    a_exp: Option<f64>,
    /// QoS delay exponent theta (with --block-t and --bandwidth)
    #[arg(long, allow_hyphen_values = true, requires_all = ["block_t", "bandwidth"])]
    theta: Option<f64>,
    /// Block duration T
    #[arg(long, allow_hyphen_values = true, requires_all = ["theta", "bandwidth"])]
    block_t: Option<f64>,
    /// Bandwidth B
    #[arg(long, allow_hyphen_values = true, requires_all = ["theta", "block_t"])]
    bandwidth: Option<f64>,
}

impl ExponentArgs {
    fn resolve(&self) -> Result<f64, Error> {
        match (self.a_exp, self.theta, self.block_t, self.bandwidth) {
            (Some(a), ..) => Ok(a),
            (None, Some(t), Some(tb), Some(b)) => delay_exponent_product(t, tb, b),
            _ => Err(Error::domain(
                "a_exp",
                f64::NAN,
                "give --a-exp or --theta/--block-t/--bandwidth",
            )),
        }
    }
}

#[derive(Debug, Args)]
struct McArgs {
    /// Monte Carlo trials
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: u64,
    /// Monte Carlo seed
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

impl McArgs {
    fn spec(&self) -> Result<McSpec, Error> {
        McSpec::with_trials(self.trials, self.seed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Quad,
    Closed,
    Asym,
    Mc,
}

impl MethodArg {
    fn choice(self) -> MethodChoice {
        match self {
            MethodArg::Auto => MethodChoice::Auto,
            MethodArg::Quad => MethodChoice::Only(Method::Quadrature),
            MethodArg::Closed => MethodChoice::Only(Method::ClosedInteger),
            MethodArg::Asym => MethodChoice::Only(Method::Asymptotic),
            MethodArg::Mc => MethodChoice::Only(Method::MonteCarlo),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepMethodArg {
    Quad,
    Closed,
    Asym,
    Mc,
}

impl From<SweepMethodArg> for Method {
    fn from(m: SweepMethodArg) -> Method {
        match m {
            SweepMethodArg::Quad => Method::Quadrature,
            SweepMethodArg::Closed => Method::ClosedInteger,
            SweepMethodArg::Asym => Method::Asymptotic,
            SweepMethodArg::Mc => Method::MonteCarlo,
        }
    }
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    exponent: ExponentArgs,
    /// Transmit SNR rho in dB
    #[arg(long, allow_hyphen_values = true)]
    rho_db: f64,
    /// Number of transmit antennas L
    #[arg(long)]
    antennas: u32,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    #[command(flatten)]
    mc: McArgs,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    axis: SweepAxis,
    #[arg(long, allow_hyphen_values = true)]
    start: f64,
    #[arg(long, allow_hyphen_values = true)]
    stop: f64,
    #[arg(long, allow_hyphen_values = true)]
    step: f64,
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    exponent: ExponentArgs,
    /// Transmit SNR in dB (required unless sweeping rho)
    #[arg(long, allow_hyphen_values = true, required_if_eq("axis", "antennas"))]
    rho_db: Option<f64>,
    /// Antenna count (required unless sweeping antennas)
    #[arg(long, required_if_eq("axis", "rho-db"))]
    antennas: Option<u32>,
    /// Methods evaluated at every axis value, in output order
    #[arg(long, value_enum, value_delimiter = ',', default_value = "quad")]
    methods: Vec<SweepMethodArg>,
    #[command(flatten)]
    mc: McArgs,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    exponent: ExponentArgs,
    #[arg(long, allow_hyphen_values = true)]
    rho_db: f64,
    #[arg(long)]
    antennas: u32,
    #[command(flatten)]
    mc: McArgs,
    /// Allowed Monte Carlo deviation in standard errors
    #[arg(long, default_value_t = 3.0)]
    mc_sigma: f64,
    /// Allowed relative disagreement between exact analytic methods
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    /// Skip the Monte Carlo run
    #[arg(long)]
    no_mc: bool,
}

fn point(
    channel: &ChannelArgs,
    exponent: &ExponentArgs,
    antennas: u32,
    rho_db: f64,
) -> Result<PointSpec, Error> {
    Ok(PointSpec {
        kappa: channel.kappa,
        mu: channel.mu,
        m: channel.m,
        gamma_bar_db: channel.gamma_bar_db,
        a_exp: exponent.resolve()?,
        antennas,
        rho_db,
    })
}

/// What a command produced; written to the caller's streams after the
/// (possibly parallel) computation finishes.
enum Outcome {
    Rows {
        rows: Vec<Row>,
        format: OutputFormat,
        out: Option<PathBuf>,
        code: i32,
    },
    Report {
        text: String,
        code: i32,
        message: Option<String>,
    },
    Failed(Error),
}

fn eval(args: &EvalArgs) -> Outcome {
    let run = || -> Result<Vec<Row>, Error> {
        let p = point(&args.channel, &args.exponent, args.antennas, args.rho_db)?;
        let (ch, _) = params_for(&p)?;
        let method = resolve_method(args.method.choice(), &ch);
        let opts = EvalOptions {
            mc: args.mc.spec()?,
            ..Default::default()
        };
        let result = evaluate_point(&p, method, &opts)?;
        Ok(vec![Row::from_result(
            "point",
            None,
            p,
            method,
            &Ok(result),
        )])
    };
    match run() {
        Ok(rows) => Outcome::Rows {
            rows,
            format: args.format,
            out: None,
            code: exit::SUCCESS,
        },
        Err(e) => Outcome::Failed(e),
    }
}

fn sweep(args: &SweepArgs) -> Outcome {
    let run = || -> Result<Vec<Row>, Error> {
        let base = point(
            &args.channel,
            &args.exponent,
            args.antennas.unwrap_or(1),
            args.rho_db.unwrap_or(0.0),
        )?;
        let spec = SweepSpec {
            axis: args.axis,
            start: args.start,
            stop: args.stop,
            step: args.step,
            base,
            methods: args.methods.iter().map(|&m| m.into()).collect(),
        };
        let opts = EvalOptions {
            mc: args.mc.spec()?,
            ..Default::default()
        };
        run_sweep(&spec, &opts)
    };
    match run() {
        Ok(rows) => Outcome::Rows {
            rows,
            format: args.format,
            out: args.out.clone(),
            code: exit::SUCCESS,
        },
        Err(e) => Outcome::Failed(e),
    }
}

fn compare(args: &CompareArgs) -> Outcome {
    let run = || -> Result<Outcome, Error> {
        let p = point(&args.channel, &args.exponent, args.antennas, args.rho_db)?;
        let (ch, sys) = params_for(&p)?;
        let opts = EvalOptions {
            mc: args.mc.spec()?,
            ..Default::default()
        };
        let cmp = compare_methods(&ch, &sys, &opts, !args.no_mc)?;

        let mut text = format!(
            "{:<8}{:>24}{:>16}  {}\n",
            "method", "rate_bps_hz", "stderr", "status"
        );
        for (method, result) in &cmp.results {
            let line = match result {
                Ok(r) => {
                    let stderr = r
                        .diagnostic("stderr")
                        .map(fmt_f64)
                        .unwrap_or_else(|| "-".into());
                    let status = if *method == Method::Asymptotic {
                        "ok (approximation, not compared)"
                    } else {
                        "ok"
                    };
                    format!(
                        "{:<8}{:>24}{:>16}  {}\n",
                        method.tag(),
                        fmt_f64(r.rate),
                        stderr,
                        status
                    )
                }
                Err(e) => format!(
                    "{:<8}{:>24}{:>16}  skipped: {}\n",
                    method.tag(),
                    "-",
                    "-",
                    e
                ),
            };
            text.push_str(&line);
        }
        if let Some(d) = cmp.max_rel_discrepancy {
            text.push_str(&format!(
                "max relative discrepancy (exact methods): {d:e}\n"
            ));
        }
        if let Some(s) = cmp.max_mc_sigma {
            text.push_str(&format!(
                "max Monte Carlo deviation: {s:.3} standard errors\n"
            ));
        }

        let validating = cmp.validating().count();
        let (code, message) = if validating < 2 {
            (
                exit::VALIDITY,
                Some(format!(
                    "fewer than two valid methods ({validating}) for this parameter set"
                )),
            )
        } else if cmp.max_rel_discrepancy.is_some_and(|d| d > args.tolerance) {
            (
                exit::COMPARISON,
                Some(format!(
                    "exact methods disagree beyond relative {:e}",
                    args.tolerance
                )),
            )
        } else if cmp
            .max_mc_sigma
            .is_some_and(|s| s.is_nan() || s > args.mc_sigma)
        {
            (
                exit::COMPARISON,
                Some(format!(
                    "Monte Carlo deviates by more than {} standard errors",
                    args.mc_sigma
                )),
            )
        } else {
            (exit::SUCCESS, None)
        };
        Ok(Outcome::Report {
            text,
            code,
            message,
        })
    };
    run().unwrap_or_else(Outcome::Failed)
}

fn emit_rows(
    rows: &[Row],
    format: OutputFormat,
    out: Option<&PathBuf>,
    stdout: &mut dyn Write,
) -> io::Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write_rows(&mut w, rows, format)?;
            w.flush()
        }
        None => write_rows(stdout, rows, format),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{rendered}")
            } else {
                write!(stderr, "{rendered}")
            };
            return code;
        }
    };

    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(stderr, "effcap: error: cannot start worker pool: {e}");
            return exit::IO;
        }
    };
    let outcome = pool.install(|| match &cli.command {
        Command::Eval(args) => eval(args),
        Command::Sweep(args) => sweep(args),
        Command::Compare(args) => compare(args),
    });

    match outcome {
        Outcome::Rows {
            rows,
            format,
            out,
            code,
        } => {
            if let Err(e) = emit_rows(&rows, format, out.as_ref(), stdout) {
                let _ = writeln!(stderr, "effcap: error: cannot write output: {e}");
                return exit::IO;
            }
            code
        }
        Outcome::Report {
            text,
            code,
            message,
        } => {
            let _ = write!(stdout, "{text}");
            if let Some(msg) = message {
                let _ = writeln!(stderr, "effcap: error: {msg}");
            }
            code
        }
        Outcome::Failed(e) => {
            let _ = writeln!(stderr, "effcap: error: {e}");
            exit_code(&e)
        }
    }
}

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use secant_core::expr::{parse, Expr};
use secant_core::probe::{DEFAULT_ANGLE_FLOOR, DEFAULT_MAX_STEPS};
use secant_core::{
    counterexample_points, normalized_inverse_entry_bound, probe, run_trajectory,
    secant_coefficients, Error, Jacobian, Point2, ProbeConfig, SecantSample, SequenceSpec, Verdict,
    DEFAULT_DEGENERACY_FLOOR,
};

mod output;
mod seqs;

const EXIT_USAGE: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;
const EXIT_CONTRADICTED: u8 = 4;
const EXIT_INCONCLUSIVE: u8 = 5;

#[derive(Parser, Debug)]
#[command(name = "secant", version)]
#[command(about = "Secant-plane slopes and differentiability probes for f(x, y)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Slopes of the plane through three points of the graph
    Estimate(EstimateArgs),
    /// Drive secant planes towards a point and compare their limits
    Probe(ProbeArgs),
    /// Tabulate the two secant-plane families of x^2 + y^2 whose limits
    /// differ from the tangent plane at the origin
    Counterexample(CounterexampleArgs),
}

#[derive(Args, Debug)]
struct EstimateArgs {
    /// Expression in x and y, e.g. "sin(x)*cos(y)"
    #[arg(long)]
    function: String,
    /// Base point as x,y
    #[arg(long, value_parser = point, allow_hyphen_values = true)]
    point: Point2,
    #[arg(long, value_parser = point, allow_hyphen_values = true)]
    a: Point2,
    #[arg(long, value_parser = point, allow_hyphen_values = true)]
    b: Point2,
    /// Reject bases with sin(theta) below this
    #[arg(long, default_value_t = DEFAULT_DEGENERACY_FLOOR)]
    floor: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct ProbeArgs {
    #[arg(long)]
    function: String,
    #[arg(long, value_parser = point, allow_hyphen_values = true)]
    point: Point2,
    /// Angle floor: admissible steps need sin(theta) >= p
    #[arg(long, default_value_t = DEFAULT_ANGLE_FLOOR)]
    p: f64,
    /// Maximum steps per sequence
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    steps: u32,
    /// Sequence list, e.g. "radial:1,0,radial:0,1,random:seed=7"
    #[arg(long)]
    seqs: Option<String>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct CounterexampleArgs {
    /// Tabulate k = 1..=kmax
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
    kmax: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write to this file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

fn point(s: &str) -> Result<Point2, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected x,y, got {s:?}"))?;
    let coord = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("not a number: {t:?}"))
    };
    Point2::new(coord(x)?, coord(y)?).map_err(|e| e.to_string())
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DegenerateBasis { .. } => EXIT_DEGENERATE,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // Exits 0 for --help and --version, 2 otherwise.
        Err(e) => e.exit(),
    };
    let result = match cli.command {
        Command::Estimate(args) => estimate(args),
        Command::Probe(args) => run_probe(args),
        Command::Counterexample(args) => counterexample(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("secant: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn function(src: &str) -> Result<Expr, Failure> {
    parse(src).map_err(|e| Failure::usage(format!("--function {src:?}: {e}")))
}

fn emit(
    out: &OutputArgs,
    render: impl FnOnce(Format) -> Result<String, String>,
) -> Result<(), Failure> {
    let text = render(out.format).map_err(Failure::usage)?;
    match &out.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn estimate(args: EstimateArgs) -> Result<u8, Failure> {
    let f = function(&args.function)?;
    let sample = SecantSample::from_field(&f, args.point, args.a, args.b)?;
    let plane = secant_coefficients(&sample, args.floor)?;
    let report = output::Estimate {
        function: &args.function,
        a: args.a,
        b: args.b,
        floor: args.floor,
        plane,
        quality: sample.quality()?,
        inverse_bound: normalized_inverse_entry_bound(&sample)?,
    };
    emit(&args.out, |fmt| match fmt {
        Format::Table => Ok(report.table()),
        Format::Csv => report.csv(),
        Format::Json => report.json(),
    })?;
    Ok(0)
}

fn run_probe(args: ProbeArgs) -> Result<u8, Failure> {
    let f = function(&args.function)?;
    let specs = match &args.seqs {
        Some(src) => {
            seqs::parse_specs(src, args.p).map_err(|e| Failure::usage(format!("--seqs: {e}")))?
        }
        None => ProbeConfig::default_specs(args.p),
    };
    let cfg = ProbeConfig {
        angle_floor: args.p,
        max_steps: args.steps,
        ..ProbeConfig::default()
    }
    .with_specs(specs);
    let report = probe(&f, args.point, &cfg)?;
    let view = output::Probe {
        function: &args.function,
        cfg: &cfg,
        report: &report,
    };
    emit(&args.out, |fmt| match fmt {
        Format::Table => Ok(view.table()),
        Format::Csv => view.csv(),
        Format::Json => view.json(),
    })?;
    Ok(match report.verdict {
        Verdict::ConsistentWithDifferentiable => 0,
        Verdict::Contradicted => EXIT_CONTRADICTED,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn counterexample(args: CounterexampleArgs) -> Result<u8, Failure> {
    const FUNCTION: &str = "x^2 + y^2";
    let f = |x: f64, y: f64| x * x + y * y;
    let cfg = ProbeConfig::default();

    let mut pairings = Vec::new();
    for (name, spec, shift) in [
        ("AB", SequenceSpec::counterexample_ab(), 2.0),
        ("AC", SequenceSpec::counterexample_ac(), 3.0),
    ] {
        let mut rows = Vec::new();
        for k in 1..=args.kmax {
            let (a, b, c) = counterexample_points(k);
            let q = if name == "AB" { b } else { c };
            let sample = SecantSample::from_field(&f, Point2::ORIGIN, a, q)?;
            let j = secant_coefficients(&sample, DEFAULT_DEGENERACY_FLOOR)?.jacobian();
            let t = 1.0 / k as f64;
            rows.push(output::PairingRow {
                k,
                sin_theta: sample.quality()?.sin_theta,
                alpha: j.alpha,
                beta: j.beta,
                alpha_check: j.alpha - t.sin(),
                beta_check: j.beta - (shift - t.cos()),
            });
        }
        let limit = run_trajectory(&f, Point2::ORIGIN, &spec, &cfg)?
            .limit
            .map(|l| l.jacobian());
        pairings.push(output::Pairing { name, rows, limit });
    }
    let tangent: Option<Jacobian> = probe(&f, Point2::ORIGIN, &cfg)?.jacobian_estimate;

    let view = output::Counterexample {
        function: FUNCTION,
        kmax: args.kmax,
        pairings,
        tangent,
    };
    emit(&args.out, |fmt| match fmt {
        Format::Table => Ok(view.table()),
        Format::Csv => view.csv(),
        Format::Json => view.json(),
    })?;
    Ok(0)
}

mod io;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use brokenline::generate::{random_data, sampled_data, seeded};
use brokenline::{
    best_fit, check_structure, error_norm, grid_oracle, regularize, remark1_data, remark1_fixture, PNorm, Tolerances,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "brokenline", version, about = "Best approximation of data by broken lines with free knots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a broken line with at most k knots.
    Fit(FitArgs),
    /// Check a spline against the structural properties of best approximations.
    Verify(VerifyArgs),
    /// Replace a spline by one with bounded values and slopes and the same values on the data.
    Regularize(RegularizeArgs),
    /// Best fixed-knot error over a grid of candidate knots.
    Oracle(OracleArgs),
    /// Write reference instances.
    Fixture(FixtureArgs),
}

#[derive(Args)]
struct Common {
    /// Output file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct FitArgs {
    /// CSV with columns x,f.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    /// 1, 2, inf or any decimal >= 1.
    #[arg(long, value_parser = parse_norm)]
    p: PNorm,
    #[arg(long)]
    emit_svg: Option<PathBuf>,
    /// Worker threads for the solver.
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    /// Spline JSON; a fit result is accepted as well.
    #[arg(long)]
    spline: PathBuf,
    #[arg(long, value_parser = parse_norm)]
    p: PNorm,
    /// Slope jump below which a knot counts as improper.
    #[arg(long)]
    slope_tol: Option<f64>,
    /// Tolerance for an abscissa to count as interpolated.
    #[arg(long)]
    interp_tol: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct RegularizeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    spline: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, value_parser = parse_norm)]
    p: PNorm,
    /// Candidate knots per gap.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct FixtureArgs {
    #[command(subcommand)]
    kind: FixtureKind,
}

#[derive(Subcommand)]
enum FixtureKind {
    /// A member of the unbounded minimizing sequence for three equal values.
    Remark1 {
        #[arg(long, default_value_t = 2)]
        i: u32,
        /// Where to write the three data points as CSV.
        #[arg(long)]
        data_out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Random data; seeded by BROKENLINE_SEED.
    Random {
        /// Number of inner abscissae.
        #[arg(long, default_value_t = 10)]
        mu: usize,
        /// Sample the data from a random broken line with at most this many knots.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse_norm(s: &str) -> Result<PNorm, String> {
    s.parse().map_err(|e: brokenline::Error| e.to_string())
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: String) -> Self {
        Self { code: 2, message }
    }

    fn internal(message: String) -> Self {
        Self { code: 1, message }
    }
}

impl From<brokenline::Error> for Failure {
    fn from(e: brokenline::Error) -> Self {
        match e {
            brokenline::Error::Configuration(_) => Failure::internal(e.to_string()),
            _ => Failure::input(e.to_string()),
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::internal(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn init_threads(threads: Option<usize>) -> Result<(), Failure> {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::internal(e.to_string()))?;
    }
    Ok(())
}

fn spline_out(common: &Common, s: &brokenline::BrokenLine) -> Result<(), Failure> {
    let text = match common.format {
        Format::Json => io::spline_json(s),
        Format::Csv => io::spline_csv(s),
    };
    emit(common.output.as_deref(), &text)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Fit(args) => {
            init_threads(args.threads)?;
            let data = io::read_data(&args.input)?;
            let fit = best_fit(&data, args.k, args.p)?;
            if let Some(path) = &args.emit_svg {
                emit(Some(path), &svg::plot(&data, &fit.spline))?;
            }
            match args.common.format {
                Format::Json => emit(args.common.output.as_deref(), &io::fit_json(&data, &fit, args.k, args.p))?,
                Format::Csv => spline_out(&args.common, &fit.spline)?,
            }
            Ok(0)
        }
        Command::Verify(args) => {
            let data = io::read_data(&args.input)?;
            let s = io::read_spline(&args.spline)?;
            let tol = Tolerances { slope: args.slope_tol, interp: args.interp_tol };
            let report = check_structure(&data, &s, args.p, tol)?;
            let error = error_norm(&data, &s, args.p)?;
            let text = match args.common.format {
                Format::Json => io::report_json(&report, error, args.p),
                Format::Csv => io::report_csv(&report),
            };
            emit(args.common.output.as_deref(), &text)?;
            Ok(if report.all_pass() { 0 } else { 3 })
        }
        Command::Regularize(args) => {
            let data = io::read_data(&args.input)?;
            let s = io::read_spline(&args.spline)?;
            spline_out(&args.common, &regularize(&data, &s)?)?;
            Ok(0)
        }
        Command::Oracle(args) => {
            let data = io::read_data(&args.input)?;
            let error = grid_oracle(&data, args.k, args.p, args.grid)?;
            let text = match args.common.format {
                Format::Json => format!(
                    "{{\"error\":{},\"p\":\"{}\",\"k\":{},\"grid\":{}}}\n",
                    io::num(error),
                    args.p,
                    args.k,
                    args.grid
                ),
                Format::Csv => format!("error\n{}\n", io::num(error)),
            };
            emit(args.common.output.as_deref(), &text)?;
            Ok(0)
        }
        Command::Fixture(FixtureArgs { kind: FixtureKind::Remark1 { i, data_out, common } }) => {
            let s = remark1_fixture(i)?;
            if let Some(path) = &data_out {
                emit(Some(path), &io::data_csv(&remark1_data()))?;
            }
            spline_out(&common, &s)?;
            Ok(0)
        }
        Command::Fixture(FixtureArgs { kind: FixtureKind::Random { mu, k, output } }) => {
            let seed = match std::env::var("BROKENLINE_SEED") {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| Failure::input(format!("BROKENLINE_SEED must be an unsigned integer, got {v:?}")))?,
                Err(_) => 0,
            };
            let mut rng = seeded(seed);
            let data = match k {
                Some(k) => sampled_data(&mut rng, mu, k).0,
                None => random_data(&mut rng, mu),
            };
            emit(output.as_deref(), &io::data_csv(&data))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

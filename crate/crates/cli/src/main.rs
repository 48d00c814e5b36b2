//! `srange`: densities, tables, simulation and goodness-of-fit from the command line.
//!
//! Exit status is 0 on success, 2 for usage or validation errors and 3 for
//! problems with input data or I/O. The reason goes to standard error.

mod io;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use srange_core::empirical::qq::levels;
use srange_core::empirical::report::{Rejections, DEFAULT_QQ_LEVELS};
use srange_core::format::fmt17;
use srange_core::simulation::write_ensemble_csv;
use srange_core::{
    ingest_ohlc_csv, joint_range_terminal_density, qq_points, qq_two_sample, s_density, s_density_one_sided,
    s_density_two_sided, s_quantile, simulate_ensemble, structural_quality_score, trivariate_density, Barriers,
    EnsembleSpec, PathSpec, ProcessParams, SDensityTable, SampleReport, ScaledValue, SeriesControl,
};

#[derive(Debug, Parser)]
#[command(name = "srange", version, about = "Range-scaled terminal value of Brownian paths")]
struct Cli {
    /// Output file; `-` is standard output.
    #[arg(long, global = true, default_value = "-")]
    out: String,

    /// Worker threads for simulation; defaults to one per core.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Joint density of (range, terminal) with --r, or of (max, -min, terminal) with --h and --l.
    Density(DensityArgs),
    /// Density of the range-scaled terminal value at one point.
    Sdensity(SdensityArgs),
    /// Tabulated s-density and CDF as `a,s,cdf` CSV.
    Table(TableArgs),
    /// Simulate an ensemble and write per-path summaries as CSV.
    Simulate(SimulateArgs),
    /// Structural quality report for an OHLC bar file.
    Sstat(SstatArgs),
    /// Kolmogorov-Smirnov report for a sample against the s-density or a second sample.
    Kstest(KstestArgs),
    /// QQ pairs for a sample against the s-density or a second sample.
    Qq(QqArgs),
}

#[derive(Debug, Args)]
struct Model {
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    mu: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
}

#[derive(Debug, Args)]
struct DensityArgs {
    #[command(flatten)]
    model: Model,
    /// Range.
    #[arg(long, conflicts_with_all = ["h", "l"], required_unless_present_all = ["h", "l"])]
    r: Option<f64>,
    /// Distance from the start to the running maximum.
    #[arg(long, requires = "l")]
    h: Option<f64>,
    /// Distance from the start to the running minimum.
    #[arg(long, requires = "h")]
    l: Option<f64>,
    /// Terminal value.
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
    #[arg(long, default_value_t = SeriesControl::DEFAULT_N_MAX)]
    nmax: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Form {
    /// Positive-index sum.
    One,
    /// Symmetric sum over all indices.
    Two,
}

#[derive(Debug, Args)]
struct SdensityArgs {
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, default_value_t = SeriesControl::DEFAULT_N_MAX)]
    nmax: usize,
    /// Raw truncated sum; without it the truncation error is extrapolated away.
    #[arg(long, value_enum)]
    form: Option<Form>,
}

#[derive(Debug, Args)]
struct TableArgs {
    /// Number of grid cells on [-1, 1]; must be even.
    #[arg(long, default_value_t = SDensityTable::DEFAULT_RESOLUTION)]
    resolution: usize,
    #[arg(long, default_value_t = SeriesControl::DEFAULT_N_MAX)]
    nmax: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProcessKind {
    Wiener,
    Ar1,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    process: ProcessKind,
    #[arg(long, default_value_t = 100_000)]
    paths: usize,
    #[arg(long)]
    steps: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    /// AR(1) coefficient.
    #[arg(long, allow_negative_numbers = true)]
    rho: Option<f64>,
}

#[derive(Debug, Args)]
struct SstatArgs {
    /// OHLC CSV with timestamp,open,high,low,close; `-` is standard input.
    #[arg(long = "in")]
    input: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Reference {
    Sdensity,
}

#[derive(Debug, Args)]
struct SampleSource {
    /// Column holding the sample; defaults to `s_stat`, or the only column.
    #[arg(long)]
    column: Option<String>,
    /// Theoretical reference distribution.
    #[arg(long = "ref", value_enum, conflicts_with = "b")]
    reference: Option<Reference>,
    /// Second sample file, for a two-sample comparison.
    #[arg(long)]
    b: Option<String>,
    #[arg(long, default_value_t = DEFAULT_QQ_LEVELS)]
    levels: usize,
}

#[derive(Debug, Args)]
struct KstestArgs {
    /// Sample CSV; `-` is standard input.
    #[arg(long = "in", default_value = "-")]
    input: String,
    #[command(flatten)]
    source: SampleSource,
}

#[derive(Debug, Args)]
struct QqArgs {
    /// Sample CSV; `-` is standard input.
    #[arg(long)]
    a: String,
    #[command(flatten)]
    source: SampleSource,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(String),
}

impl From<srange_core::Error> for Failure {
    fn from(e: srange_core::Error) -> Self {
        if e.is_validation() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Data(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn density(args: &DensityArgs, out: &mut dyn Write) -> Outcome {
    let p = ProcessParams::new(args.model.mu, args.model.sigma, args.model.t)?;
    let sc = SeriesControl::with_n_max(args.nmax)?;
    let value = match (args.r, args.h, args.l) {
        (Some(r), _, _) => joint_range_terminal_density(&p, r, args.x, &sc)?,
        (None, Some(h), Some(l)) => trivariate_density(&p, &Barriers::new(h, l, args.x)?, &sc)?,
        _ => return Err(Failure::Usage("give either --r or both --h and --l".into())),
    };
    writeln!(out, "{}", fmt17(value))?;
    Ok(())
}

fn sdensity(args: &SdensityArgs, out: &mut dyn Write) -> Outcome {
    let a = ScaledValue::new(args.a)?;
    let sc = SeriesControl::with_n_max(args.nmax)?;
    let value = match args.form {
        None => s_density(a, &sc),
        Some(Form::One) => s_density_one_sided(a, &sc),
        Some(Form::Two) => s_density_two_sided(a, &sc),
    };
    writeln!(out, "{}", fmt17(value))?;
    Ok(())
}

fn table(args: &TableArgs, out: &mut dyn Write) -> Outcome {
    let table = SDensityTable::new(args.resolution, &SeriesControl::with_n_max(args.nmax)?)?;
    table.write_csv(out)?;
    Ok(())
}

fn path_spec(args: &SimulateArgs) -> Result<PathSpec, Failure> {
    match args.process {
        ProcessKind::Wiener => {
            if args.rho.is_some() {
                return Err(Failure::Usage("--rho applies to --process ar1 only".into()));
            }
            Ok(PathSpec::wiener(
                args.mu.unwrap_or(0.0),
                args.sigma.unwrap_or(1.0),
                args.t.unwrap_or(1.0),
                args.steps,
                args.seed,
            )?)
        }
        ProcessKind::Ar1 => {
            if args.mu.is_some() || args.sigma.is_some() || args.t.is_some() {
                return Err(Failure::Usage("--mu, --sigma and --t apply to --process wiener only".into()));
            }
            let rho = args
                .rho
                .ok_or_else(|| Failure::Usage("--process ar1 requires --rho".into()))?;
            Ok(PathSpec::ar1(rho, args.steps, args.seed)?)
        }
    }
}

fn simulate(args: &SimulateArgs, out: &mut dyn Write) -> Outcome {
    let spec = EnsembleSpec::new(path_spec(args)?, args.paths)?;
    let summaries = simulate_ensemble(&spec)?;
    write_ensemble_csv(&summaries, out)?;
    Ok(())
}

fn sstat(args: &SstatArgs, out: &mut dyn Write) -> Outcome {
    let ingested = ingest_ohlc_csv(io::open_input(&args.input)?)?;
    let mut report = structural_quality_score(&ingested.bars, &SDensityTable::standard())?;
    report.rejected_bars.merge(&Rejections::from_diagnostics(&ingested.diagnostics));
    if report.rejected_bars.total > 0 {
        eprintln!("srange: {} bars rejected, see rejected_bars", report.rejected_bars.total);
    }
    writeln!(out, "{}", report.to_json()?)?;
    Ok(())
}

fn reference_of(source: &SampleSource) -> Result<Option<Vec<f64>>, Failure> {
    match (&source.b, source.reference) {
        (Some(path), _) => Ok(Some(io::read_sample(path, source.column.as_deref())?)),
        (None, Some(Reference::Sdensity)) => Ok(None),
        (None, None) => Err(Failure::Usage("give a reference with --ref sdensity or --b FILE".into())),
    }
}

fn kstest(args: &KstestArgs, out: &mut dyn Write) -> Outcome {
    let reference = reference_of(&args.source)?;
    let sample = io::read_sample(&args.input, args.source.column.as_deref())?;
    let report = match reference {
        Some(b) => SampleReport::against_sample(&sample, &b, args.source.levels)?,
        None => SampleReport::against_s_density(&sample, &SDensityTable::standard(), args.source.levels)?,
    };
    writeln!(out, "{}", report.to_json()?)?;
    Ok(())
}

fn qq(args: &QqArgs, out: &mut dyn Write) -> Outcome {
    let reference = reference_of(&args.source)?;
    let sample = io::read_sample(&args.a, args.source.column.as_deref())?;
    let count = args.source.levels;
    let pairs = match reference {
        Some(b) => qq_two_sample(&sample, &b, count)?,
        None => {
            let table = SDensityTable::standard();
            qq_points(&sample, |p| Ok(s_quantile(p, &table)?.get()), count)?
        }
    };
    writeln!(out, "p,reference_quantile,sample_quantile")?;
    for (p, (r, s)) in levels(count).into_iter().zip(pairs) {
        writeln!(out, "{},{},{}", fmt17(p), fmt17(r), fmt17(s))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Outcome {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .map_err(|e| Failure::Data(format!("thread pool: {e}")))?;
    }
    let mut out = io::open_output(&cli.out)?;
    match &cli.command {
        Command::Density(a) => density(a, &mut out)?,
        Command::Sdensity(a) => sdensity(a, &mut out)?,
        Command::Table(a) => table(a, &mut out)?,
        Command::Simulate(a) => simulate(a, &mut out)?,
        Command::Sstat(a) => sstat(a, &mut out)?,
        Command::Kstest(a) => kstest(a, &mut out)?,
        Command::Qq(a) => qq(a, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("srange: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("srange: {msg}");
            ExitCode::from(3)
        }
    }
}

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rindler_discord::sweep::{
    count_flagged, run_converge, run_sweep, write_converge, write_records, ConvergeConfig, OutputFormat, SideSelection,
};
use rindler_discord::verify::{run_criterion, Criterion, VerifyConfig};
use rindler_discord::{Error, OptimizerConfig, RunConfig, Statistics, TruncationSpec};

/// Quantum and geometric discord between an inertial and an accelerated observer.
#[derive(Parser, Debug)]
#[command(name = "rindler-discord", version)]
struct Cli {
    /// Worker threads for grid evaluation (defaults to the number of cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate every quantity over a grid of t (bosons) or r (fermions).
    Sweep(SweepArgs),
    /// Follow the bosonic quantities at one t over increasing cutoffs.
    Converge(ConvergeArgs),
    /// Run the acceptance checks and print one line per criterion.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum StatisticsArg {
    Boson,
    Fermion,
}

impl From<StatisticsArg> for Statistics {
    fn from(s: StatisticsArg) -> Self {
        match s {
            StatisticsArg::Boson => Statistics::Boson,
            StatisticsArg::Fermion => Statistics::Fermion,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SideArg {
    A,
    B,
    Both,
}

impl From<SideArg> for SideSelection {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::A => SideSelection::A,
            SideArg::B => SideSelection::B,
            SideArg::Both => SideSelection::Both,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Args, Debug)]
struct OptimizerArgs {
    /// Polar samples of the coarse grid over the hemisphere.
    #[arg(long, default_value_t = 16)]
    theta_samples: usize,
    /// Azimuthal samples of the coarse grid.
    #[arg(long, default_value_t = 32)]
    phi_samples: usize,
    /// Alternating line-search rounds after the grid.
    #[arg(long, default_value_t = 8)]
    refine_iterations: usize,
    /// Minimum improvement the optimizer accepts.
    #[arg(long, default_value_t = 1e-12)]
    opt_tolerance: f64,
    /// Extra refinements from random starting points.
    #[arg(long, default_value_t = 0)]
    restarts: usize,
    /// Seed for the random restarts.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl OptimizerArgs {
    fn config(&self) -> OptimizerConfig {
        OptimizerConfig {
            theta_samples: self.theta_samples,
            phi_samples: self.phi_samples,
            refine_iterations: self.refine_iterations,
            tolerance: self.opt_tolerance,
            restarts: self.restarts,
            seed: self.seed,
        }
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutputArgs {
    fn writer(&self) -> io::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum, default_value_t = StatisticsArg::Boson)]
    statistics: StatisticsArg,
    #[arg(long, default_value_t = 0.0)]
    param_min: f64,
    /// Defaults to 0.99 for bosons and pi/4 for fermions.
    #[arg(long)]
    param_max: Option<f64>,
    #[arg(long, default_value_t = 12)]
    steps: usize,
    /// Fixed Fock cutoff N (Rob's dimension is N + 2).
    #[arg(long, default_value_t = 128, conflicts_with = "adaptive")]
    cutoff: usize,
    /// Grow the cutoff per point until the tail mass is below --tail.
    #[arg(long)]
    adaptive: bool,
    #[arg(long, default_value_t = TruncationSpec::DEFAULT_TAIL_TARGET, requires = "adaptive")]
    tail: f64,
    #[arg(long, default_value_t = TruncationSpec::DEFAULT_CAP, requires = "adaptive")]
    cap: usize,
    #[arg(long, value_enum, default_value_t = SideArg::Both)]
    side: SideArg,
    /// Largest tail mass a fixed-cutoff point may carry unflagged.
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
    #[command(flatten)]
    optimizer: OptimizerArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ConvergeArgs {
    /// Bosonic t = tanh r.
    #[arg(long, alias = "param-min")]
    param: f64,
    /// Ascending, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = ConvergeConfig::DEFAULT_CUTOFFS)]
    cutoffs: Vec<usize>,
    /// Successive differences below this count as converged.
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
    #[arg(long, value_enum, default_value_t = SideArg::Both)]
    side: SideArg,
    #[command(flatten)]
    optimizer: OptimizerArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Only run the checks for one statistics.
    #[arg(long, value_enum)]
    statistics: Option<StatisticsArg>,
    /// Force every cutoff to this value.
    #[arg(long)]
    cutoff: Option<usize>,
    /// Comma-separated subset, e.g. A1,A7.
    #[arg(long, value_delimiter = ',')]
    criteria: Vec<String>,
    /// Seed for the randomised checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// First cutoff tried by `--adaptive` before doubling.
const ADAPTIVE_START: usize = 16;

enum Failure {
    Usage(Error),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::OutOfDomain { .. } => Failure::Usage(e),
            other => Failure::Run(other),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Run(e.into())
    }
}

fn sweep(args: SweepArgs) -> Result<bool, Failure> {
    let statistics: Statistics = args.statistics.into();
    let param_max = args.param_max.unwrap_or(match statistics {
        Statistics::Boson => 0.99,
        Statistics::Fermion => std::f64::consts::FRAC_PI_4,
    });
    let mut cfg = RunConfig::new(statistics, args.param_min, param_max, args.steps);
    cfg.truncation = if args.adaptive {
        TruncationSpec::adaptive(ADAPTIVE_START, args.tail, args.cap)
    } else {
        TruncationSpec::fixed(args.cutoff)
    };
    cfg.optimizer = args.optimizer.config();
    cfg.sides = args.side.into();
    cfg.format = args.output.format.into();
    cfg.tolerance = args.tolerance;
    cfg.validate()?;

    let records = run_sweep(&cfg)?;
    let mut out = args.output.writer()?;
    write_records(&records, &cfg, &mut out)?;
    out.flush()?;
    let flagged = count_flagged(&records);
    eprintln!("{} records, {flagged} flagged unconverged", records.len());
    Ok(flagged == 0)
}

fn converge(args: ConvergeArgs) -> Result<bool, Failure> {
    let mut cfg = ConvergeConfig::new(args.param);
    cfg.cutoffs = args.cutoffs;
    cfg.tolerance = args.tolerance;
    cfg.optimizer = args.optimizer.config();
    cfg.sides = args.side.into();
    cfg.format = args.output.format.into();
    cfg.validate()?;

    let report = run_converge(&cfg)?;
    let mut out = args.output.writer()?;
    write_converge(&report, &cfg, &mut out)?;
    out.flush()?;
    for s in &report.series {
        let status = match s.converged_at {
            Some(n) => format!("converged at N={n}"),
            None => format!("unconverged at N={}", s.last().cutoff),
        };
        let extrapolated = s.extrapolated.map_or(String::new(), |v| format!(", extrapolated {v}"));
        eprintln!("{}: {status}{extrapolated}", s.name);
    }
    Ok(report.converged())
}

fn verify(args: VerifyArgs) -> Result<bool, Failure> {
    let cfg = VerifyConfig {
        statistics: args.statistics.map(Into::into),
        cutoff: args.cutoff,
        seed: args.seed,
        ..VerifyConfig::default()
    };
    if cfg.cutoff == Some(0) {
        return Err(Error::Config("cutoff must be at least 1".into()).into());
    }
    let mut chosen = Vec::new();
    for name in &args.criteria {
        chosen.push(name.parse::<Criterion>()?);
    }
    let mut all_passed = true;
    let mut ran = 0;
    for c in Criterion::ALL {
        if !cfg.selects(c) || !(chosen.is_empty() || chosen.contains(&c)) {
            continue;
        }
        let report = run_criterion(c, &cfg);
        println!("{report}");
        all_passed &= report.passed;
        ran += 1;
    }
    eprintln!("{ran} criteria run, {}", if all_passed { "all passed" } else { "some failed" });
    Ok(all_passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Converge(a) => converge(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

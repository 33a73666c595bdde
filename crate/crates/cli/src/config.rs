use std::path::{Path, PathBuf};

use adiasearch::dynamics::{DEFAULT_EPSILON, DEFAULT_RESOLUTION, DEFAULT_STEPS, MIN_RESOLUTION};
use adiasearch::ensemble::{ENSEMBLE_MAX_N, MIN_SAMPLES};
use adiasearch::{ScheduleKind, Strategy};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "adiasearch",
    version,
    about = "Adiabatic quantum search experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gap, energies and matrix element along s in [0, 1]
    GapCurve {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Time parametrization s(t) and its total runtime
    Schedule {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Integrate the Schrödinger equation and report fidelity
    Evolve {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Runtime, gap and energy over a list of database sizes
    Sweep {
        /// Comma-separated database sizes, e.g. 1e4,1e6,1e8
        #[arg(long = "n-list", value_delimiter = ',', required = true)]
        n_list: Vec<f64>,
        /// One or more schedules (comma-separated)
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [KindArg::Linear, KindArg::Modified])]
        schedule: Vec<KindArg>,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Full-space ensemble audit of the ∫g dt lower bound
    Lowerbound {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    Linear,
    Modified,
}

impl From<KindArg> for ScheduleKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Linear => ScheduleKind::Linear,
            KindArg::Modified => ScheduleKind::Modified,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyArg {
    Uniform,
    Local,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Uniform => Strategy::UniformSpeed,
            StrategyArg::Local => Strategy::LocalAdiabatic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// Database size N
    #[arg(long)]
    pub n: f64,
    #[arg(long, value_enum, default_value_t = KindArg::Linear)]
    pub schedule: KindArg,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Adiabaticity budget ε in (0, 1]
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = StrategyArg::Local)]
    pub strategy: StrategyArg,
    /// Number of grid points used to build s(t)
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub resolution: usize,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; stdout when omitted
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
    /// Overrides the format inferred from the output extension
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl OutputArgs {
    pub fn resolve_format(&self, default: Format) -> Format {
        if let Some(f) = self.format {
            return f;
        }
        match self
            .output
            .as_deref()
            .and_then(Path::extension)
            .and_then(|e| e.to_str())
        {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => default,
        }
    }
}

/// The effective configuration, embedded in every output file.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<KindArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedules: Option<Vec<KindArg>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<StrategyArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    pub format: Format,
}

impl RunConfig {
    fn new(command: &'static str, format: Format) -> Self {
        RunConfig {
            command,
            n: None,
            n_list: None,
            schedule: None,
            schedules: None,
            epsilon: None,
            strategy: None,
            resolution: None,
            points: None,
            steps: None,
            samples: None,
            k: None,
            format,
        }
    }
}

fn check_n(n: f64) -> Result<(), CliError> {
    if !n.is_finite() || n < 2.0 {
        return Err(CliError::Config(format!("n must be >= 2, got {n}")));
    }
    Ok(())
}

fn check_run(run: &RunArgs) -> Result<(), CliError> {
    if !(run.epsilon > 0.0 && run.epsilon <= 1.0) {
        return Err(CliError::Config(format!(
            "epsilon must lie in (0, 1], got {}",
            run.epsilon
        )));
    }
    if run.resolution < MIN_RESOLUTION {
        return Err(CliError::Config(format!(
            "resolution must be >= {MIN_RESOLUTION}, got {}",
            run.resolution
        )));
    }
    Ok(())
}

fn check_min(name: &str, value: usize, min: usize) -> Result<(), CliError> {
    if value < min {
        return Err(CliError::Config(format!(
            "{name} must be >= {min}, got {value}"
        )));
    }
    Ok(())
}

impl RunConfig {
    fn with_run(mut self, run: &RunArgs) -> Self {
        self.epsilon = Some(run.epsilon);
        self.strategy = Some(run.strategy);
        self.resolution = Some(run.resolution);
        self
    }

    fn with_problem(mut self, problem: &ProblemArgs) -> Self {
        self.n = Some(problem.n);
        self.schedule = Some(problem.schedule);
        self
    }
}

/// Validates every numeric field and returns the config to embed.
pub fn validate(command: &Command) -> Result<RunConfig, CliError> {
    let config = match command {
        Command::GapCurve {
            problem,
            points,
            out,
        } => {
            check_n(problem.n)?;
            check_min("points", *points, 2)?;
            let mut c =
                RunConfig::new("gap-curve", out.resolve_format(Format::Csv)).with_problem(problem);
            c.points = Some(*points);
            c
        }
        Command::Schedule { problem, run, out } => {
            check_n(problem.n)?;
            check_run(run)?;
            RunConfig::new("schedule", out.resolve_format(Format::Json))
                .with_problem(problem)
                .with_run(run)
        }
        Command::Evolve {
            problem,
            run,
            steps,
            k,
            out,
        } => {
            check_n(problem.n)?;
            check_run(run)?;
            check_min("steps", *steps, 1)?;
            if !(k.is_finite() && *k > 0.0) {
                return Err(CliError::Config(format!("k must be positive, got {k}")));
            }
            let mut c = RunConfig::new("evolve", out.resolve_format(Format::Json))
                .with_problem(problem)
                .with_run(run);
            c.steps = Some(*steps);
            c.k = Some(*k);
            c
        }
        Command::Sweep {
            n_list,
            schedule,
            run,
            steps,
            points,
            out,
        } => {
            if n_list.is_empty() {
                return Err(CliError::Config("n-list must not be empty".into()));
            }
            n_list.iter().try_for_each(|&n| check_n(n))?;
            if schedule.is_empty() {
                return Err(CliError::Config("at least one schedule is required".into()));
            }
            check_run(run)?;
            check_min("steps", *steps, 1)?;
            check_min("points", *points, 2)?;
            let mut c = RunConfig::new("sweep", out.resolve_format(Format::Csv)).with_run(run);
            c.n_list = Some(n_list.clone());
            c.schedules = Some(schedule.clone());
            c.steps = Some(*steps);
            c.points = Some(*points);
            c
        }
        Command::Lowerbound {
            problem,
            run,
            steps,
            samples,
            out,
        } => {
            let n = problem.n;
            if !(n.fract() == 0.0 && (2.0..=ENSEMBLE_MAX_N as f64).contains(&n)) {
                return Err(CliError::Config(format!(
                    "n must be an integer in [2, {ENSEMBLE_MAX_N}], got {n}"
                )));
            }
            check_run(run)?;
            check_min("steps", *steps, 1)?;
            check_min("samples", *samples, MIN_SAMPLES)?;
            let mut c = RunConfig::new("lowerbound", out.resolve_format(Format::Json))
                .with_problem(problem)
                .with_run(run);
            c.steps = Some(*steps);
            c.samples = Some(*samples);
            c
        }
    };
    Ok(config)
}

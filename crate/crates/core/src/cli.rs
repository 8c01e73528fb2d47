//! Command-line front end. `main.rs` forwards to [`run`].

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::experiments::{
    run_experiment, sweep_n, sweep_sigma, ExperimentConfig, DEFAULT_PLANE, DEFAULT_SEED, DEFAULT_SIGMA_SWEEP_N,
    DEFAULT_TRIALS,
};
use crate::geometry::{Instance, Point};
use crate::io::{
    format_real, parse_scenario, render_routes_svg, write_results_csv, LabeledRoute, Metadata, ResultsError,
    ResultsTable, ScenarioError,
};
use crate::noise::derive_stream;
use crate::solvers::{exact, greedy, greedy_with_error, ExactSolver};
use crate::stats::TrialStats;
use crate::SolveResult;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;
pub const EXIT_SCENARIO: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "opentsp", version, about = "Greedy vs optimal collection routes on open maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one scenario file and print the visit order and length.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long, default_value_t = 0.4)]
        sigma: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Also draw the route to this SVG file.
        #[arg(long)]
        render: Option<PathBuf>,
    },
    /// Run repeated random trials at one N and write per-trial results.
    Experiment {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sigma: Option<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sweep the number of collectibles and write one stats row per N.
    SweepN {
        #[arg(long, default_value_t = 4)]
        n_min: usize,
        #[arg(long, default_value_t = 13)]
        n_max: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sweep the misjudgment spread at fixed N and write one stats row per sigma.
    SweepSigma {
        #[arg(long, default_value_t = DEFAULT_SIGMA_SWEEP_N)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_values_t = crate::experiments::DEFAULT_SIGMA_GRID)]
        sigmas: Vec<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Draw several solvers' routes for one scenario as SVG.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Algo::Greedy, Algo::GreedyError, Algo::Exact])]
        algos: Vec<Algo>,
        #[arg(long, default_value_t = 0.4)]
        sigma: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct CommonArgs {
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// CSV destination; stats are printed to stdout either way.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores). Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long, value_enum, default_value_t = ExactArg::HeldKarp)]
    exact: ExactArg,
    #[arg(long, default_value_t = DEFAULT_PLANE)]
    width: f64,
    #[arg(long, default_value_t = DEFAULT_PLANE)]
    height: f64,
    /// Start position; defaults to the centre of the plane.
    #[arg(long)]
    start_x: Option<f64>,
    #[arg(long)]
    start_y: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Greedy,
    GreedyError,
    Exact,
}

impl Algo {
    fn label(self) -> &'static str {
        match self {
            Algo::Greedy => "greedy",
            Algo::GreedyError => "greedy-error",
            Algo::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExactArg {
    HeldKarp,
    Exhaustive,
}

impl CommonArgs {
    fn config(&self, n: usize, sigma: Option<f64>) -> ExperimentConfig {
        ExperimentConfig {
            n_collectibles: n,
            trials: self.trials,
            plane_width: self.width,
            plane_height: self.height,
            start: Point { x: self.start_x.unwrap_or(self.width / 2.0), y: self.start_y.unwrap_or(self.height / 2.0) },
            sigma,
            master_seed: self.seed,
            exact_solver: match self.exact {
                ExactArg::HeldKarp => ExactSolver::HeldKarp,
                ExactArg::Exhaustive => ExactSolver::Exhaustive,
            },
            threads: self.threads,
        }
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to `stderr`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                // --help / --version
                let _ = write!(stdout, "{}", e.render());
                return EXIT_OK;
            }
            let _ = write!(stderr, "{}\n{}\n", e.render(), Cli::command().render_usage());
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> i32 {
    for cause in e.chain() {
        if cause.is::<std::io::Error>() || matches!(cause.downcast_ref(), Some(ResultsError::Io(_))) {
            return EXIT_IO;
        }
        if let Some(err) = cause.downcast_ref::<Error>() {
            return match err {
                Error::InvalidConfig(_) | Error::SizeExceeded { .. } => EXIT_CONFIG,
                _ => EXIT_FAILURE,
            };
        }
        if cause.is::<ScenarioError>() {
            return EXIT_SCENARIO;
        }
    }
    EXIT_FAILURE
}

fn load_scenario(path: &Path) -> anyhow::Result<Instance> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    parse_scenario(&bytes).with_context(|| format!("parsing {}", path.display()))
}

fn solve_with(algo: Algo, instance: &Instance, sigma: f64, seed: u64) -> anyhow::Result<SolveResult> {
    Ok(match algo {
        Algo::Greedy => greedy(instance),
        Algo::GreedyError => greedy_with_error(instance, sigma, &mut derive_stream(seed, 0))?,
        Algo::Exact => exact(instance)?,
    })
}

fn write_table(out: Option<&Path>, table: &ResultsTable) -> anyhow::Result<()> {
    if let Some(path) = out {
        write_results_csv(table, path).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn stats_line(stats: &TrialStats) -> String {
    format!(
        "mean={}% q1={}% median={}% q3={}% min={}% max={}% trials={}",
        format_real(stats.mean),
        format_real(stats.q1),
        format_real(stats.median),
        format_real(stats.q3),
        format_real(stats.min),
        format_real(stats.max),
        stats.trials
    )
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> anyhow::Result<()> {
    match command {
        Command::Solve { input, algo, sigma, seed, render } => {
            let instance = load_scenario(&input)?;
            let result = solve_with(algo, &instance, sigma, seed)?;
            writeln!(stdout, "algorithm: {}", result.solver_name)?;
            writeln!(stdout, "order: {}", result.route)?;
            writeln!(stdout, "length: {}", format_real(result.total_length))?;
            if let Some(path) = render {
                let svg = render_routes_svg(&instance, &[LabeledRoute::new(algo.label(), result.route)])?;
                std::fs::write(&path, svg).with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Command::Experiment { n, sigma, common } => {
            let config = common.config(n, sigma);
            let result = run_experiment(&config)?;
            let table = ResultsTable::trials(Metadata::new(config.master_seed, config.describe()), result.records);
            write_table(common.out.as_deref(), &table)?;
            writeln!(stdout, "{}", stats_line(&result.stats))?;
        }
        Command::SweepN { n_min, n_max, common } => {
            if n_min > n_max {
                return Err(Error::InvalidConfig(format!("--n-min {n_min} exceeds --n-max {n_max}")).into());
            }
            let template = common.config(0, None);
            let ns: Vec<usize> = (n_min..=n_max).collect();
            let rows = sweep_n(&ns, &template)?;
            for row in &rows {
                writeln!(stdout, "n={} {}", row.key, stats_line(&row.stats))?;
            }
            let config = format!("sweep=n values={n_min}..={n_max} {}", template.describe());
            write_table(
                common.out.as_deref(),
                &ResultsTable::sweep(Metadata::new(template.master_seed, config), rows),
            )?;
        }
        Command::SweepSigma { n, sigmas, common } => {
            if sigmas.is_empty() {
                bail!(Error::InvalidConfig("--sigmas must list at least one value".into()));
            }
            let template = common.config(n, None);
            let rows = sweep_sigma(&sigmas, &template)?;
            for row in &rows {
                writeln!(stdout, "sigma={} {}", format_real(row.key), stats_line(&row.stats))?;
            }
            let listed: Vec<String> = sigmas.iter().map(|&s| format_real(s)).collect();
            let config = format!("sweep=sigma values={} {}", listed.join(","), template.describe());
            write_table(
                common.out.as_deref(),
                &ResultsTable::sweep(Metadata::new(template.master_seed, config), rows),
            )?;
        }
        Command::Render { input, out, algos, sigma, seed } => {
            let instance = load_scenario(&input)?;
            let mut routes = Vec::with_capacity(algos.len());
            for algo in algos {
                let result = solve_with(algo, &instance, sigma, seed)?;
                let label = match algo {
                    Algo::GreedyError => format!("greedy-error (sigma={})", format_real(sigma)),
                    _ => algo.label().to_string(),
                };
                writeln!(stdout, "{label}: order {} length {}", result.route, format_real(result.total_length))?;
                routes.push(LabeledRoute::new(label, result.route));
            }
            let svg = render_routes_svg(&instance, &routes)?;
            std::fs::write(&out, svg).with_context(|| format!("writing {}", out.display()))?;
        }
    }
    Ok(())
}

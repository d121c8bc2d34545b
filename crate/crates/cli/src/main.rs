use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use qvrp_cli::commands::{self, BaselineArgs, GenerateArgs, InstanceSource, QuboArgs, SolveArgs};
use qvrp_core::encodings::Scheme;
use qvrp_core::optimize::{GradientMode, ShotMode};
use serde::Serialize;

/// Exit status of `solve` when it finishes but samples no feasible solution.
const EXIT_NO_FEASIBLE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "qvrp",
    version,
    about = "Variational route-selection solver for VRPTW"
)]
struct Cli {
    /// Master seed for every random choice the command makes.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Format of the summary printed on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Encoding {
    Minimal,
    Full,
}

impl From<Encoding> for Scheme {
    fn from(e: Encoding) -> Self {
        match e {
            Encoding::Minimal => Scheme::Minimal,
            Encoding::Full => Scheme::Full,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Gradient {
    NaiveShift,
    ChainRule,
}

impl From<Gradient> for GradientMode {
    fn from(g: Gradient) -> Self {
        match g {
            Gradient::NaiveShift => GradientMode::NaiveShift,
            Gradient::ChainRule => GradientMode::ChainRule,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate feasible routes of an instance into a route-set file.
    Generate {
        /// Instance JSON file; omit to draw a random instance.
        instance: Option<PathBuf>,
        /// Customers of the random instance (seeded by --seed).
        #[arg(
            long,
            conflicts_with = "instance",
            required_unless_present = "instance"
        )]
        customers: Option<usize>,
        #[arg(long, default_value_t = 3)]
        max_stops: usize,
        #[arg(long)]
        max_routes: Option<usize>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Compile a route set into a QUBO file.
    Qubo {
        route_set: PathBuf,
        /// Constraint penalty (defaults to the sum of absolute route costs).
        #[arg(long)]
        penalty: Option<f64>,
        /// Require exactly this many routes.
        #[arg(long)]
        vehicles: Option<usize>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Train the ansatz on a route set and write a report bundle.
    Solve {
        route_set: PathBuf,
        #[arg(long, value_enum, default_value_t = Encoding::Minimal)]
        encoding: Encoding,
        /// `exact` or a shot count per circuit evaluation.
        #[arg(long, default_value = "exact")]
        shots: ShotMode,
        #[arg(long, default_value_t = 20)]
        starts: usize,
        #[arg(long, default_value_t = 500)]
        iters: usize,
        /// Solutions sampled from each trained state.
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        layers: usize,
        #[arg(long, default_value_t = 0.01)]
        lr: f64,
        /// Defaults to chain-rule for minimal and naive-shift for full.
        #[arg(long, value_enum)]
        gradient: Option<Gradient>,
        /// Draw independent shots for the two halves of each shift pair.
        #[arg(long)]
        no_crn: bool,
        /// Stop a start after 50 iterations with cost changes below this.
        #[arg(long)]
        plateau_tol: Option<f64>,
        #[arg(long)]
        penalty: Option<f64>,
        #[arg(long)]
        vehicles: Option<usize>,
        /// Random bitstrings in the baseline series (defaults to the sample count).
        #[arg(long)]
        baseline_samples: Option<usize>,
        #[arg(short, long)]
        out_dir: PathBuf,
    },
    /// Empirical CDF of normalized costs of uniformly random bitstrings.
    Baseline {
        qubo: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Render SVG charts from a report bundle.
    Plot {
        report_dir: PathBuf,
        /// Defaults to the report directory.
        #[arg(short, long)]
        out_dir: Option<PathBuf>,
    },
    /// Exhaustive cost bounds of a QUBO file.
    Brute {
        qubo: PathBuf,
        /// Also write the bounds as JSON.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn print_summary<T: Serialize>(value: &T, format: Format) -> anyhow::Result<()> {
    let json = serde_json::to_value(value)?;
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&json)?),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(["key", "value"])?;
            if let serde_json::Value::Object(map) = json {
                for (k, v) in map {
                    let text = match v {
                        serde_json::Value::String(s) => s,
                        other => other.to_string(),
                    };
                    w.write_record([k, text])?;
                }
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let seed = cli.seed;
    match cli.command {
        Command::Generate {
            instance,
            customers,
            max_stops,
            max_routes,
            out,
        } => {
            let source = match (instance, customers) {
                (Some(path), _) => InstanceSource::File(path),
                (None, Some(customers)) => InstanceSource::Synthetic { customers },
                (None, None) => anyhow::bail!("give an instance file or --customers"),
            };
            let s = commands::generate(&GenerateArgs {
                source,
                max_stops,
                max_routes,
                seed,
                out,
            })?;
            print_summary(&s, cli.format)?;
        }
        Command::Qubo {
            route_set,
            penalty,
            vehicles,
            out,
        } => {
            let s = commands::qubo(&QuboArgs {
                route_set,
                penalty,
                vehicles,
                out,
            })?;
            print_summary(&s, cli.format)?;
        }
        Command::Solve {
            route_set,
            encoding,
            shots,
            starts,
            iters,
            samples,
            layers,
            lr,
            gradient,
            no_crn,
            plateau_tol,
            penalty,
            vehicles,
            baseline_samples,
            out_dir,
        } => {
            let args = SolveArgs {
                shots,
                starts,
                iterations: iters,
                samples,
                layers,
                learning_rate: lr,
                gradient: gradient.map(Into::into),
                common_random_numbers: !no_crn,
                plateau_tol,
                penalty,
                vehicles,
                baseline_samples,
                seed,
                ..SolveArgs::new(route_set, encoding.into(), out_dir)
            };
            let s = commands::solve(&args)?;
            print_summary(&s, cli.format)?;
            if s.feasible_samples == 0 {
                eprintln!("no feasible solution was sampled");
                return Ok(ExitCode::from(EXIT_NO_FEASIBLE));
            }
        }
        Command::Baseline { qubo, samples, out } => {
            let s = commands::baseline(&BaselineArgs {
                qubo,
                samples,
                seed,
                out,
            })?;
            print_summary(&s, cli.format)?;
        }
        Command::Plot {
            report_dir,
            out_dir,
        } => {
            let out = out_dir.unwrap_or_else(|| report_dir.clone());
            let s = commands::plot(&report_dir, &out)?;
            print_summary(&s, cli.format)?;
        }
        Command::Brute { qubo, out } => {
            let s = commands::brute(&qubo, out.as_deref())?;
            print_summary(&s, cli.format)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

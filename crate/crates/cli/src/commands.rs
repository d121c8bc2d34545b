use std::path::{Path, PathBuf};

use qvrp_core::encodings::{qubits_required, Scheme};
use qvrp_core::optimize::{run_experiment, AdamConfig, GradientMode, RunConfig, ShotMode};
use qvrp_core::qubo::io::{read_qubo, write_qubo};
use qvrp_core::qubo::{
    anneal_bounds, brute_force, build_qubo, AnnealSchedule, BoundsProvenance, CostBounds,
    QuboProblem, DEFAULT_BRUTE_FORCE_CAP,
};
use qvrp_core::rng::derive_seed;
use qvrp_core::vrptw::io::{instance_from_json, route_set_from_json, route_set_to_json};
use qvrp_core::vrptw::synth::{random_instance, SynthConfig};
use qvrp_core::vrptw::{generate_routes, max_routes, RouteGenConfig, RouteSet};
use serde::Serialize;

use crate::files::{read_text, write_atomic};
use crate::plot;
use crate::report::{
    self, cdf_rows, csv_bytes, random_baseline, BaselineInfo, BundleInput, ReportBundle, CDF_HEADER,
};
use crate::CliError;

/// Stream of the master seed that drives the random baseline in `solve`.
const BASELINE_STREAM: u64 = 1 << 32;

pub fn load_route_set(path: &Path) -> Result<RouteSet, CliError> {
    route_set_from_json(&read_text(path)?).map_err(|source| CliError::Instance {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_qubo(path: &Path) -> Result<QuboProblem, CliError> {
    read_qubo(&read_text(path)?).map_err(|source| CliError::QuboFile {
        path: path.to_path_buf(),
        source,
    })
}

/// Exhaustive bounds up to the brute-force cap, annealed estimates beyond it.
pub fn compute_bounds(qubo: &QuboProblem, seed: u64) -> Result<CostBounds, CliError> {
    if qubo.n_c() <= DEFAULT_BRUTE_FORCE_CAP {
        Ok(brute_force(qubo)?.into())
    } else {
        Ok(anneal_bounds(qubo, &AnnealSchedule::auto(qubo), seed)?.into())
    }
}

fn file_label(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

pub enum InstanceSource {
    File(PathBuf),
    /// Random instance with this many customers, drawn from the command seed.
    Synthetic {
        customers: usize,
    },
}

pub struct GenerateArgs {
    pub source: InstanceSource,
    pub max_stops: usize,
    pub max_routes: Option<usize>,
    pub seed: u64,
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
pub struct GenerateSummary {
    pub out: PathBuf,
    pub instance: String,
    pub customers: usize,
    pub n_c: usize,
    /// Upper bound on distinct routes for this customer count, if it fits.
    pub route_space: Option<String>,
    pub uncovered_customers: Vec<usize>,
}

pub fn generate(args: &GenerateArgs) -> Result<GenerateSummary, CliError> {
    let instance = match &args.source {
        InstanceSource::File(path) => {
            instance_from_json(&read_text(path)?).map_err(|source| CliError::Instance {
                path: path.clone(),
                source,
            })?
        }
        InstanceSource::Synthetic { customers } => {
            random_instance(&SynthConfig::new(*customers), args.seed)
        }
    };
    let set = generate_routes(
        &instance,
        RouteGenConfig::new(args.max_stops, args.max_routes),
    )?;
    write_atomic(&args.out, route_set_to_json(&set).as_bytes())?;
    let customers = instance.customer_count();
    Ok(GenerateSummary {
        out: args.out.clone(),
        instance: instance.name().to_string(),
        customers,
        n_c: set.len(),
        route_space: max_routes(customers as u64).ok().map(|m| m.to_string()),
        uncovered_customers: set.uncovered_customers(),
    })
}

pub struct QuboArgs {
    pub route_set: PathBuf,
    pub penalty: Option<f64>,
    pub vehicles: Option<usize>,
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
pub struct QuboSummary {
    pub out: PathBuf,
    pub n_c: usize,
    pub penalty: Option<f64>,
    pub offset: f64,
    pub qubits_minimal: usize,
    pub qubits_full: usize,
}

pub fn qubo(args: &QuboArgs) -> Result<QuboSummary, CliError> {
    let set = load_route_set(&args.route_set)?;
    let q = build_qubo(&set, args.penalty, args.vehicles)?;
    write_atomic(&args.out, write_qubo(&q).as_bytes())?;
    Ok(QuboSummary {
        out: args.out.clone(),
        n_c: q.n_c(),
        penalty: q.penalty(),
        offset: q.offset(),
        qubits_minimal: qubits_required(q.n_c(), Scheme::Minimal),
        qubits_full: qubits_required(q.n_c(), Scheme::Full),
    })
}

#[derive(Debug, Serialize)]
pub struct BruteSummary {
    pub n_c: usize,
    pub bounds: CostBounds,
}

/// Exhaustive minimum and maximum; optionally written as JSON.
pub fn brute(qubo_path: &Path, out: Option<&Path>) -> Result<BruteSummary, CliError> {
    let q = load_qubo(qubo_path)?;
    let bounds: CostBounds = brute_force(&q)?.into();
    if let Some(out) = out {
        let mut text = serde_json::to_string_pretty(&bounds).map_err(|source| CliError::Json {
            path: out.to_path_buf(),
            source,
        })?;
        text.push('\n');
        write_atomic(out, text.as_bytes())?;
    }
    Ok(BruteSummary {
        n_c: q.n_c(),
        bounds,
    })
}

pub struct SolveArgs {
    pub route_set: PathBuf,
    pub encoding: Scheme,
    pub shots: ShotMode,
    pub starts: usize,
    pub iterations: usize,
    pub samples: usize,
    pub layers: usize,
    pub learning_rate: f64,
    pub gradient: Option<GradientMode>,
    pub common_random_numbers: bool,
    pub plateau_tol: Option<f64>,
    pub penalty: Option<f64>,
    pub vehicles: Option<usize>,
    /// Defaults to the number of experiment samples.
    pub baseline_samples: Option<usize>,
    pub seed: u64,
    pub out_dir: PathBuf,
}

impl SolveArgs {
    pub fn new(route_set: PathBuf, encoding: Scheme, out_dir: PathBuf) -> Self {
        let d = RunConfig::new(encoding);
        Self {
            route_set,
            encoding,
            shots: d.shots,
            starts: d.n_starts,
            iterations: d.max_iterations,
            samples: d.samples_per_start,
            layers: d.layers,
            learning_rate: d.adam.lr,
            gradient: None,
            common_random_numbers: d.common_random_numbers,
            plateau_tol: d.plateau_tol,
            penalty: None,
            vehicles: None,
            baseline_samples: None,
            seed: d.seed,
            out_dir,
        }
    }

    pub fn run_config(&self) -> RunConfig {
        RunConfig {
            layers: self.layers,
            n_starts: self.starts,
            samples_per_start: self.samples,
            shots: self.shots,
            max_iterations: self.iterations,
            seed: self.seed,
            gradient_mode: self
                .gradient
                .unwrap_or_else(|| GradientMode::default_for(self.encoding)),
            adam: AdamConfig {
                lr: self.learning_rate,
                ..AdamConfig::default()
            },
            common_random_numbers: self.common_random_numbers,
            plateau_tol: self.plateau_tol,
            ..RunConfig::new(self.encoding)
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SolveSummary {
    pub out_dir: PathBuf,
    pub n_c: usize,
    pub n_qubits: usize,
    pub bounds_provenance: BoundsProvenance,
    pub samples: usize,
    pub feasible_samples: usize,
    pub best_bits: Option<String>,
    pub best_cost: Option<f64>,
    pub best_c_norm: Option<f64>,
    pub files: Vec<PathBuf>,
}

/// Compiles the route set, bounds it, trains and writes a report bundle.
/// The caller decides the exit status from `feasible_samples`.
pub fn solve(args: &SolveArgs) -> Result<SolveSummary, CliError> {
    let set = load_route_set(&args.route_set)?;
    let q = build_qubo(&set, args.penalty, args.vehicles)?;
    let bounds = compute_bounds(&q, args.seed)?;
    let provenance = bounds.provenance;
    let q = q.with_bounds(bounds);
    let config = args.run_config();
    let result = run_experiment(&q, &config)?;
    let baseline = BaselineInfo {
        samples: args
            .baseline_samples
            .unwrap_or(config.n_starts * config.samples_per_start),
        seed: derive_seed(args.seed, BASELINE_STREAM),
    };
    let bundle = ReportBundle::assemble(BundleInput {
        qubo: &q,
        result: &result,
        route_set: file_label(&args.route_set),
        baseline,
    })?;
    let files = bundle.write(&args.out_dir)?;
    let summary = &bundle.metadata.summary;
    Ok(SolveSummary {
        out_dir: args.out_dir.clone(),
        n_c: result.n_c,
        n_qubits: result.n_qubits,
        bounds_provenance: provenance,
        samples: summary.samples,
        feasible_samples: summary.feasible_samples,
        best_bits: summary.best.as_ref().map(|b| b.bits.clone()),
        best_cost: summary.best.as_ref().map(|b| b.cost),
        best_c_norm: summary.best.as_ref().and_then(|b| b.c_norm),
        files,
    })
}

pub struct BaselineArgs {
    pub qubo: PathBuf,
    pub samples: usize,
    pub seed: u64,
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
pub struct BaselineSummary {
    pub out: PathBuf,
    pub samples: usize,
    pub bounds: CostBounds,
    pub steps: usize,
}

/// CDF of normalized costs over uniformly random bitstrings.
pub fn baseline(args: &BaselineArgs) -> Result<BaselineSummary, CliError> {
    let q = load_qubo(&args.qubo)?;
    let bounds = compute_bounds(&q, args.seed)?;
    let values = random_baseline(&q, &bounds, args.samples, args.seed)?;
    let rows = cdf_rows(report::source::RANDOM_BASELINE, &values);
    let bytes = csv_bytes(&CDF_HEADER, &rows).map_err(|source| CliError::Csv {
        path: args.out.clone(),
        source,
    })?;
    write_atomic(&args.out, &bytes)?;
    Ok(BaselineSummary {
        out: args.out.clone(),
        samples: args.samples,
        bounds,
        steps: rows.len(),
    })
}

#[derive(Debug, Serialize)]
pub struct PlotSummary {
    pub files: Vec<PathBuf>,
}

pub fn plot(report_dir: &Path, out_dir: &Path) -> Result<PlotSummary, CliError> {
    let charts = plot::render_bundle(report_dir)?;
    let mut files = Vec::new();
    for (name, svg) in charts {
        let path = out_dir.join(name);
        write_atomic(&path, svg.as_bytes())?;
        files.push(path);
    }
    Ok(PlotSummary { files })
}

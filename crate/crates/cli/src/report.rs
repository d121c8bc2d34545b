//! Report bundles: the CSV tables, metadata and register-statistics dumps
//! written by `solve`, plus the harness that re-derives a sample of their
//! numbers from the bundled QUBO.

use std::path::{Path, PathBuf};

use qvrp_core::encodings::RegisterStats;
use qvrp_core::optimize::{evaluate_solution, ExperimentResult, RunConfig};
use qvrp_core::qubo::io::{read_qubo, write_qubo};
use qvrp_core::qubo::{evaluate, Bitstring, BoundsProvenance, CostBounds, QuboProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::files::{read_text, write_atomic};
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;
const SCHEMA_LINE: &str = "# schema_version: 1";

pub const CONVERGENCE_FILE: &str = "convergence.csv";
pub const CUMULATIVE_FILE: &str = "cumulative.csv";
pub const SOLUTIONS_FILE: &str = "solutions.csv";
pub const METADATA_FILE: &str = "metadata.json";
pub const QUBO_FILE: &str = "qubo.txt";
pub const STATS_DIR: &str = "register_stats";

/// Series labels in `cumulative.csv`.
pub mod source {
    pub const EXPERIMENT: &str = "experiment";
    pub const BRUTE_FORCE_ALL: &str = "brute_force_all";
    pub const RANDOM_BASELINE: &str = "random_baseline";
}

/// Largest problem whose full cost spectrum goes into `cumulative.csv`.
pub const BRUTE_FORCE_ALL_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub iteration: usize,
    pub start_id: usize,
    pub cost: f64,
    pub c_norm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRow {
    pub start_id: usize,
    pub sample_id: usize,
    pub bits: String,
    pub cost: f64,
    pub c_norm: Option<f64>,
    pub feasible: bool,
}

/// One step of an empirical CDF: `count` samples equal `c_norm`, and `cdf`
/// is the fraction of the series at or below it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfRow {
    pub source: String,
    pub c_norm: f64,
    pub count: u64,
    pub cdf: f64,
}

const CONVERGENCE_HEADER: [&str; 4] = ["iteration", "start_id", "cost", "c_norm"];
const SOLUTIONS_HEADER: [&str; 6] = [
    "start_id",
    "sample_id",
    "bits",
    "cost",
    "c_norm",
    "feasible",
];
pub const CDF_HEADER: [&str; 4] = ["source", "c_norm", "count", "cdf"];

/// Collapses `values` into CDF steps, one row per distinct value.
pub fn cdf_rows(source: &str, values: &[f64]) -> Vec<CdfRow> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut rows: Vec<CdfRow> = Vec::new();
    let mut seen = 0u64;
    for v in sorted {
        seen += 1;
        match rows.last_mut() {
            Some(last) if last.c_norm == v => {
                last.count += 1;
                last.cdf = seen as f64 / n;
            }
            _ => rows.push(CdfRow {
                source: source.to_string(),
                c_norm: v,
                count: 1,
                cdf: seen as f64 / n,
            }),
        }
    }
    rows
}

/// Normalized costs of `n_samples` uniformly random bitstrings.
pub fn random_baseline(
    qubo: &QuboProblem,
    bounds: &CostBounds,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<f64>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = qubo.n_c();
    (0..n_samples)
        .map(|_| {
            let x = Bitstring::new((0..n).map(|_| rng.random::<bool>()).collect());
            Ok(bounds.normalize(evaluate(qubo, &x, true)?)?)
        })
        .collect()
}

/// Serializes rows behind the schema line; the header is written even when
/// there are no rows.
pub fn csv_bytes<T: Serialize>(header: &[&str], rows: &[T]) -> Result<Vec<u8>, csv::Error> {
    let mut buf = format!("{SCHEMA_LINE}\n").into_bytes();
    {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(&mut buf);
        w.write_record(header)?;
        for row in rows {
            w.serialize(row)?;
        }
        w.flush()?;
    }
    Ok(buf)
}

pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, CliError> {
    let text = read_text(path)?;
    if text.lines().next().map(str::trim_end) != Some(SCHEMA_LINE) {
        return Err(CliError::Schema {
            path: path.to_path_buf(),
            expected: SCHEMA_VERSION,
        });
    }
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(|source| CliError::Csv {
            path: path.to_path_buf(),
            source,
        })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read_text(path)?).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FallbackSummary {
    /// Variables on the 0.5 fallback in the final sampled statistics.
    pub final_count: usize,
    pub min_over_iterations: usize,
    pub max_over_iterations: usize,
    /// Register outcomes at or beyond `n_c` in the final statistics.
    pub discarded: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartSummary {
    pub start_id: usize,
    pub start_seed: u64,
    pub iterations: usize,
    /// Cost estimate at the last iteration, as seen by the optimizer.
    pub last_cost: f64,
    /// Exact cost at the final parameters.
    pub final_cost_exact: f64,
    pub fallback: Option<FallbackSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineInfo {
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub samples: usize,
    pub feasible_samples: usize,
    pub feasible_fraction: f64,
    pub best: Option<SolutionRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub schema_version: u32,
    pub tool_version: String,
    pub route_set: String,
    pub n_c: usize,
    pub n_qubits: usize,
    pub parameter_count: usize,
    pub penalty: Option<f64>,
    pub offset: f64,
    pub bounds: CostBounds,
    /// `false` when the bounds are simulated-annealing estimates.
    pub bounds_certified: bool,
    pub config: RunConfig,
    pub prng: String,
    pub baseline: BaselineInfo,
    pub starts: Vec<StartSummary>,
    pub summary: SampleSummary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub metadata: Metadata,
    pub convergence: Vec<ConvergenceRow>,
    pub cumulative: Vec<CdfRow>,
    pub solutions: Vec<SolutionRow>,
    pub register_stats: Vec<(usize, RegisterStats)>,
    pub qubo_text: String,
}

pub struct BundleInput<'a> {
    /// QUBO carrying the bounds used for every `c_norm`.
    pub qubo: &'a QuboProblem,
    pub result: &'a ExperimentResult,
    pub route_set: String,
    pub baseline: BaselineInfo,
}

impl ReportBundle {
    pub fn assemble(input: BundleInput<'_>) -> Result<Self, CliError> {
        let BundleInput {
            qubo,
            result,
            route_set,
            baseline,
        } = input;
        let bounds = qubo
            .bounds()
            .cloned()
            .ok_or_else(|| CliError::Usage("report needs cost bounds".into()))?;

        let convergence = result
            .starts
            .iter()
            .flat_map(|s| {
                let norm = s.trace.normalized_costs.as_deref();
                s.trace
                    .costs
                    .iter()
                    .enumerate()
                    .map(move |(i, &cost)| ConvergenceRow {
                        iteration: i,
                        start_id: s.start_id,
                        cost,
                        c_norm: norm.map(|n| n[i]),
                    })
            })
            .collect();

        let solutions: Vec<SolutionRow> = result
            .starts
            .iter()
            .flat_map(|s| {
                s.solutions.iter().enumerate().map(|(j, sol)| SolutionRow {
                    start_id: s.start_id,
                    sample_id: j,
                    bits: sol.bits.to_string(),
                    cost: sol.cost,
                    c_norm: sol.normalized_cost,
                    feasible: sol.feasible,
                })
            })
            .collect();

        let sample_norms: Vec<f64> = solutions.iter().filter_map(|r| r.c_norm).collect();
        let mut cumulative = cdf_rows(source::EXPERIMENT, &sample_norms);
        if qubo.n_c() <= BRUTE_FORCE_ALL_CAP {
            let all = qvrp_core::qubo::all_costs(qubo, BRUTE_FORCE_ALL_CAP)?
                .into_iter()
                .map(|c| bounds.normalize(c))
                .collect::<Result<Vec<_>, _>>()?;
            cumulative.extend(cdf_rows(source::BRUTE_FORCE_ALL, &all));
        }
        let random = random_baseline(qubo, &bounds, baseline.samples, baseline.seed)?;
        cumulative.extend(cdf_rows(source::RANDOM_BASELINE, &random));

        let starts = result
            .starts
            .iter()
            .map(|s| StartSummary {
                start_id: s.start_id,
                start_seed: s.trace.start_seed,
                iterations: s.trace.costs.len(),
                last_cost: s.trace.costs.last().copied().unwrap_or(f64::NAN),
                final_cost_exact: s.final_cost_exact,
                fallback: s.final_stats.as_ref().map(|st| FallbackSummary {
                    final_count: st.fallback_count(),
                    min_over_iterations: s.trace.fallback_counts.iter().copied().min().unwrap_or(0),
                    max_over_iterations: s.trace.fallback_counts.iter().copied().max().unwrap_or(0),
                    discarded: st.discarded,
                }),
            })
            .collect();

        let feasible_samples = solutions.iter().filter(|r| r.feasible).count();
        let best = solutions
            .iter()
            .fold(None, |best: Option<&SolutionRow>, r| match best {
                Some(b) if b.cost <= r.cost => Some(b),
                _ => Some(r),
            })
            .cloned();
        let summary = SampleSummary {
            samples: solutions.len(),
            feasible_samples,
            feasible_fraction: if solutions.is_empty() {
                0.0
            } else {
                feasible_samples as f64 / solutions.len() as f64
            },
            best,
        };

        let register_stats = result
            .starts
            .iter()
            .filter_map(|s| s.final_stats.clone().map(|st| (s.start_id, st)))
            .collect();

        Ok(Self {
            metadata: Metadata {
                schema_version: SCHEMA_VERSION,
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                route_set,
                n_c: result.n_c,
                n_qubits: result.n_qubits,
                parameter_count: result.parameter_count,
                penalty: qubo.penalty(),
                offset: result.offset,
                bounds_certified: bounds.provenance == BoundsProvenance::Certified,
                bounds,
                config: result.config.clone(),
                prng: result.prng.clone(),
                baseline,
                starts,
                summary,
            },
            convergence,
            cumulative,
            solutions,
            register_stats,
            qubo_text: write_qubo(qubo),
        })
    }

    /// Writes every file of the bundle into `dir` and returns their paths.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        let csv_err = |path: &Path| {
            let path = path.to_path_buf();
            move |source| CliError::Csv { path, source }
        };
        let mut written = Vec::new();
        let mut put = |name: &str, bytes: &[u8]| -> Result<(), CliError> {
            let path = dir.join(name);
            write_atomic(&path, bytes)?;
            written.push(path);
            Ok(())
        };

        let p = dir.join(CONVERGENCE_FILE);
        put(
            CONVERGENCE_FILE,
            &csv_bytes(&CONVERGENCE_HEADER, &self.convergence).map_err(csv_err(&p))?,
        )?;
        let p = dir.join(CUMULATIVE_FILE);
        put(
            CUMULATIVE_FILE,
            &csv_bytes(&CDF_HEADER, &self.cumulative).map_err(csv_err(&p))?,
        )?;
        let p = dir.join(SOLUTIONS_FILE);
        put(
            SOLUTIONS_FILE,
            &csv_bytes(&SOLUTIONS_HEADER, &self.solutions).map_err(csv_err(&p))?,
        )?;
        let mut meta =
            serde_json::to_string_pretty(&self.metadata).map_err(|source| CliError::Json {
                path: dir.join(METADATA_FILE),
                source,
            })?;
        meta.push('\n');
        put(METADATA_FILE, meta.as_bytes())?;
        put(QUBO_FILE, self.qubo_text.as_bytes())?;
        for (start_id, stats) in &self.register_stats {
            put(
                &format!("{STATS_DIR}/start_{start_id:03}.txt"),
                stats.to_text().as_bytes(),
            )?;
        }
        Ok(written)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpotCheck {
    pub solution_rows: usize,
    pub solutions_checked: usize,
    pub convergence_checked: usize,
    pub mismatches: Vec<String>,
}

impl SpotCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

fn close_opt(a: Option<f64>, b: Option<f64>) -> bool {
    match (a, b) {
        (Some(a), Some(b)) => close(a, b),
        (None, None) => true,
        _ => false,
    }
}

fn pick(n: usize, fraction: f64, rng: &mut ChaCha8Rng) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    let k = ((n as f64 * fraction).ceil() as usize).clamp(1, n);
    let mut idx = rand::seq::index::sample(rng, n, k).into_vec();
    idx.sort_unstable();
    idx
}

/// Re-evaluates a random `fraction` of the solution and convergence rows
/// against the bundled QUBO and bounds, and checks every CDF series for
/// monotonicity and agreement with the solution table.
pub fn spot_check(dir: &Path, fraction: f64, seed: u64) -> Result<SpotCheck, CliError> {
    let meta: Metadata = read_json(&dir.join(METADATA_FILE))?;
    let qubo_path = dir.join(QUBO_FILE);
    let mut qubo = read_qubo(&read_text(&qubo_path)?).map_err(|source| CliError::QuboFile {
        path: qubo_path,
        source,
    })?;
    qubo.set_bounds(Some(meta.bounds.clone()));
    let solutions: Vec<SolutionRow> = read_csv(&dir.join(SOLUTIONS_FILE))?;
    let convergence: Vec<ConvergenceRow> = read_csv(&dir.join(CONVERGENCE_FILE))?;
    let cumulative: Vec<CdfRow> = read_csv(&dir.join(CUMULATIVE_FILE))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();

    let sol_idx = pick(solutions.len(), fraction, &mut rng);
    for &i in &sol_idx {
        let row = &solutions[i];
        let bits: Bitstring = row.bits.parse().map_err(|message| CliError::Invalid {
            path: dir.join(SOLUTIONS_FILE),
            message,
        })?;
        let sol = evaluate_solution(&qubo, &bits)?;
        if !close(sol.cost, row.cost)
            || !close_opt(sol.normalized_cost, row.c_norm)
            || sol.feasible != row.feasible
        {
            mismatches.push(format!(
                "{SOLUTIONS_FILE} row {i}: recomputed cost {} c_norm {:?} feasible {}",
                sol.cost, sol.normalized_cost, sol.feasible
            ));
        }
    }

    let conv_idx = pick(convergence.len(), fraction, &mut rng);
    for &i in &conv_idx {
        let row = &convergence[i];
        let expect = meta.bounds.normalize(row.cost).ok();
        if !close_opt(expect, row.c_norm) {
            mismatches.push(format!(
                "{CONVERGENCE_FILE} row {i}: c_norm should be {expect:?}"
            ));
        }
    }

    let mut series: Vec<&str> = cumulative.iter().map(|r| r.source.as_str()).collect();
    series.dedup();
    for name in series {
        let rows: Vec<&CdfRow> = cumulative.iter().filter(|r| r.source == name).collect();
        let monotone = rows
            .windows(2)
            .all(|w| w[0].c_norm < w[1].c_norm && w[0].cdf <= w[1].cdf);
        if !monotone || !rows.last().is_some_and(|r| close(r.cdf, 1.0)) {
            mismatches.push(format!("{CUMULATIVE_FILE} series {name}: not a valid CDF"));
        }
    }
    let norms: Vec<f64> = solutions.iter().filter_map(|r| r.c_norm).collect();
    let expected = cdf_rows(source::EXPERIMENT, &norms);
    let found: Vec<CdfRow> = cumulative
        .iter()
        .filter(|r| r.source == source::EXPERIMENT)
        .cloned()
        .collect();
    if expected != found {
        mismatches.push(format!(
            "{CUMULATIVE_FILE} series {}: disagrees with {SOLUTIONS_FILE}",
            source::EXPERIMENT
        ));
    }

    Ok(SpotCheck {
        solution_rows: solutions.len(),
        solutions_checked: sol_idx.len(),
        convergence_checked: conv_idx.len(),
        mismatches,
    })
}

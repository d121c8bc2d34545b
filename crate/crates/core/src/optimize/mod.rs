//! ADAM training of the ansatz against either encoding, and the multistart
//! experiment harness.

mod adam;
mod experiment;
mod objective;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::encodings::{EncodingError, Scheme};
use crate::qubo::QuboError;
use crate::simulator::SimError;

pub use adam::{AdamConfig, AdamState};
pub use experiment::{
    evaluate_solution, run_experiment, run_optimization, ExperimentResult, OptimizationTrace,
    StartResult, EXPERIMENT_SCHEMA_VERSION,
};
pub use objective::{parameter_shift_gradient, Evaluation, Objective, Step, SHIFT};

#[derive(Debug, Error)]
pub enum OptimizeError {
    #[error(transparent)]
    Encoding(#[from] EncodingError),
    #[error(transparent)]
    Simulator(#[from] SimError),
    #[error(transparent)]
    Qubo(#[from] QuboError),
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Exact probabilities or a finite number of measurements per evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShotMode {
    #[default]
    Exact,
    Shots(u64),
}

impl fmt::Display for ShotMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exact => f.write_str("exact"),
            Self::Shots(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for ShotMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("exact") {
            return Ok(Self::Exact);
        }
        match s.parse::<u64>() {
            Ok(n) if n > 0 => Ok(Self::Shots(n)),
            _ => Err(format!(
                "expected `exact` or a positive shot count, got {s:?}"
            )),
        }
    }
}

impl Serialize for ShotMode {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Exact => s.serialize_str("exact"),
            Self::Shots(n) => s.serialize_u64(*n),
        }
    }
}

impl<'de> Deserialize<'de> for ShotMode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Count(n) if n > 0 => Ok(Self::Shots(n)),
            Raw::Count(_) => Err(serde::de::Error::custom("shot count must be positive")),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientMode {
    /// Shift the scalar cost directly.
    NaiveShift,
    /// Shift each projector expectation and combine through `dC/dp`.
    ChainRule,
}

impl GradientMode {
    pub fn default_for(scheme: Scheme) -> Self {
        match scheme {
            Scheme::Minimal => Self::ChainRule,
            Scheme::Full => Self::NaiveShift,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub encoding: Scheme,
    pub layers: usize,
    pub n_starts: usize,
    pub samples_per_start: usize,
    pub shots: ShotMode,
    pub max_iterations: usize,
    pub seed: u64,
    pub gradient_mode: GradientMode,
    pub adam: AdamConfig,
    /// Reuse one measurement seed for both halves of each shift pair.
    pub common_random_numbers: bool,
    /// Stop once `|dC| < tol` for 50 consecutive iterations.
    pub plateau_tol: Option<f64>,
}

/// Consecutive small changes that trigger the plateau stop.
pub const PLATEAU_WINDOW: usize = 50;

impl RunConfig {
    pub fn new(encoding: Scheme) -> Self {
        Self {
            encoding,
            layers: 4,
            n_starts: 20,
            samples_per_start: 10,
            shots: ShotMode::Exact,
            max_iterations: 500,
            seed: 0,
            gradient_mode: GradientMode::default_for(encoding),
            adam: AdamConfig::default(),
            common_random_numbers: true,
            plateau_tol: None,
        }
    }

    pub fn validate(&self) -> Result<(), OptimizeError> {
        if self.layers == 0 {
            return Err(OptimizeError::Config("layers must be at least 1".into()));
        }
        if self.n_starts == 0 {
            return Err(OptimizeError::Config("n_starts must be at least 1".into()));
        }
        if self.samples_per_start == 0 {
            return Err(OptimizeError::Config(
                "samples_per_start must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

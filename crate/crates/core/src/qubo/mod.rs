//! QUBO compilation of route sets plus classical reference solvers.
//!
//! A route set with costs `c` and coverage matrix `delta` (customers x routes)
//! becomes
//!
//! ```text
//! A = diag(c) + rho * delta^T delta - diag(2 rho * 1^T delta),   offset = rho * N
//! ```
//!
//! so that `x^T A x + offset` equals the penalized objective
//! `sum_r c_r x_r + rho * sum_i (sum_r delta_ir x_r - 1)^2` for every `x`.
//! The offset is kept out of the matrix: `evaluate(.., false)` is the bare
//! quadratic form.

mod anneal;
mod exact;
pub mod io;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vrptw::RouteSet;

pub use anneal::{anneal_bounds, AnnealResult, AnnealSchedule};
pub use exact::{
    all_costs, brute_force, brute_force_with_cap, energy_table, BruteForceResult,
    DEFAULT_BRUTE_FORCE_CAP,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuboError {
    #[error("route set is empty")]
    EmptyRouteSet,
    #[error("penalty must be positive and finite, got {0}")]
    InvalidPenalty(f64),
    #[error("expected {expected} values, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("matrix has non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("{n_c} variables exceed the exhaustive-search cap of {cap}")]
    TooLarge { n_c: usize, cap: usize },
    #[error("cost range is degenerate: C_min = {c_min}, C_max = {c_max}")]
    DegenerateRange { c_min: f64, c_max: f64 },
    #[error("problem carries no route structure")]
    NoRouteStructure,
    #[error("problem has no variables")]
    NoVariables,
}

/// Assignment of the binary variables; `bits[k]` is `x_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitstring(Vec<bool>);

impl Bitstring {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![false; n])
    }

    /// Decodes a basis index: bit `k` of `index` (least significant first) is `x_k`.
    pub fn from_index(index: u64, n: usize) -> Self {
        Self((0..n).map(|k| k < 64 && (index >> k) & 1 == 1).collect())
    }

    pub fn to_index(&self) -> u64 {
        assert!(self.0.len() <= 64, "bitstring too long for an index");
        self.ones().fold(0, |acc, k| acc | (1 << k))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, k: usize) -> bool {
        self.0[k]
    }

    /// Indices of the variables set to one.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(k, _)| k)
    }
}

impl std::fmt::Display for Bitstring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Bitstring {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(format!("invalid bit {other:?}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Bitstring)
    }
}

impl Serialize for Bitstring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bitstring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Where the normalization bounds came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundsProvenance {
    /// Exhaustive search; exact.
    Certified,
    /// Simulated annealing; not guaranteed.
    Estimated,
}

/// Offset-inclusive minimum and maximum of the QUBO cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostBounds {
    pub c_min: f64,
    pub c_max: f64,
    pub x_min: Bitstring,
    pub x_max: Bitstring,
    pub provenance: BoundsProvenance,
}

impl CostBounds {
    pub fn normalize(&self, cost: f64) -> Result<f64, QuboError> {
        normalize_cost(cost, self.c_min, self.c_max)
    }
}

impl From<BruteForceResult> for CostBounds {
    fn from(r: BruteForceResult) -> Self {
        Self {
            c_min: r.c_min,
            c_max: r.c_max,
            x_min: r.x_min,
            x_max: r.x_max,
            provenance: BoundsProvenance::Certified,
        }
    }
}

impl From<AnnealResult> for CostBounds {
    fn from(r: AnnealResult) -> Self {
        Self {
            c_min: r.c_min_est,
            c_max: r.c_max_est,
            x_min: r.x_best,
            x_max: r.x_worst,
            provenance: BoundsProvenance::Estimated,
        }
    }
}

/// Route data behind a compiled QUBO, needed to check feasibility.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteStructure {
    pub penalty: f64,
    /// Number of customers `N`.
    pub node_count: usize,
    pub route_costs: Vec<f64>,
    /// Customers (ids `1..=N`) covered by each route.
    pub coverage: Vec<Vec<usize>>,
    pub vehicle_count: Option<usize>,
}

impl RouteStructure {
    /// Dense `N x n_c` 0/1 coverage matrix; row `i` is customer `i + 1`.
    pub fn coverage_matrix(&self) -> Vec<Vec<u8>> {
        let mut delta = vec![vec![0u8; self.route_costs.len()]; self.node_count];
        for (r, nodes) in self.coverage.iter().enumerate() {
            for &i in nodes {
                delta[i - 1][r] = 1;
            }
        }
        delta
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuboProblem {
    n: usize,
    /// Row-major `n x n`, exactly symmetric.
    matrix: Vec<f64>,
    offset: f64,
    structure: Option<RouteStructure>,
    bounds: Option<CostBounds>,
}

impl QuboProblem {
    /// Wraps a raw symmetric matrix with no route structure attached.
    pub fn from_matrix(n: usize, matrix: Vec<f64>, offset: f64) -> Result<Self, QuboError> {
        if matrix.len() != n * n {
            return Err(QuboError::LengthMismatch {
                expected: n * n,
                found: matrix.len(),
            });
        }
        for k in 0..n {
            for l in 0..n {
                if !matrix[k * n + l].is_finite() {
                    return Err(QuboError::NonFinite(k, l));
                }
                if matrix[k * n + l] != matrix[l * n + k] {
                    return Err(QuboError::NotSymmetric(k, l));
                }
            }
        }
        Ok(Self {
            n,
            matrix,
            offset,
            structure: None,
            bounds: None,
        })
    }

    /// Compiles route costs and coverage into the penalized QUBO.
    ///
    /// With a vehicle count `V`, the expansion of `rho * (sum_r x_r - V)^2`
    /// is added as well.
    pub fn from_routes(
        route_costs: Vec<f64>,
        coverage: Vec<Vec<usize>>,
        node_count: usize,
        penalty: f64,
        vehicle_count: Option<usize>,
    ) -> Result<Self, QuboError> {
        let n = route_costs.len();
        if n == 0 {
            return Err(QuboError::EmptyRouteSet);
        }
        if coverage.len() != n {
            return Err(QuboError::LengthMismatch {
                expected: n,
                found: coverage.len(),
            });
        }
        if !(penalty.is_finite() && penalty > 0.0) {
            return Err(QuboError::InvalidPenalty(penalty));
        }
        let rho = penalty;

        let mut matrix = vec![0.0; n * n];
        for (r, &c) in route_costs.iter().enumerate() {
            let visits = coverage[r].len() as f64;
            matrix[r * n + r] = c - 2.0 * rho * visits;
        }
        // rho * delta^T delta: one rho per customer shared by both routes.
        let mut routes_of = vec![Vec::new(); node_count];
        for (r, nodes) in coverage.iter().enumerate() {
            for &i in nodes {
                assert!(
                    (1..=node_count).contains(&i),
                    "coverage names customer {i} outside 1..={node_count}"
                );
                routes_of[i - 1].push(r);
            }
        }
        for routes in &routes_of {
            for &r in routes {
                for &s in routes {
                    matrix[r * n + s] += rho;
                }
            }
        }

        let mut offset = rho * node_count as f64;
        if let Some(v) = vehicle_count {
            let v = v as f64;
            for k in 0..n {
                for l in 0..n {
                    matrix[k * n + l] += if k == l { rho * (1.0 - 2.0 * v) } else { rho };
                }
            }
            offset += rho * v * v;
        }

        Ok(Self {
            n,
            matrix,
            offset,
            structure: Some(RouteStructure {
                penalty,
                node_count,
                route_costs,
                coverage,
                vehicle_count,
            }),
            bounds: None,
        })
    }

    pub fn n_c(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    pub fn entry(&self, k: usize, l: usize) -> f64 {
        self.matrix[k * self.n + l]
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.matrix[k * self.n..(k + 1) * self.n]
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn penalty(&self) -> Option<f64> {
        self.structure.as_ref().map(|s| s.penalty)
    }

    pub fn structure(&self) -> Option<&RouteStructure> {
        self.structure.as_ref()
    }

    pub fn bounds(&self) -> Option<&CostBounds> {
        self.bounds.as_ref()
    }

    pub fn set_bounds(&mut self, bounds: Option<CostBounds>) {
        self.bounds = bounds;
    }

    pub fn with_bounds(mut self, bounds: CostBounds) -> Self {
        self.bounds = Some(bounds);
        self
    }

    pub(crate) fn with_structure(mut self, structure: Option<RouteStructure>) -> Self {
        self.structure = structure;
        self
    }

    /// `A x` for a 0/1 vector given by its set indices.
    pub(crate) fn field(&self, ones: &[usize]) -> Vec<f64> {
        let mut h = vec![0.0; self.n];
        for &l in ones {
            for (k, hk) in h.iter_mut().enumerate() {
                *hk += self.matrix[k * self.n + l];
            }
        }
        h
    }
}

/// `rho = sum_r |c_r|`, or 1 when every route is free.
pub fn default_penalty(route_set: &RouteSet) -> f64 {
    default_penalty_for_costs(&route_set.costs())
}

pub fn default_penalty_for_costs(costs: &[f64]) -> f64 {
    let rho: f64 = costs.iter().map(|c| c.abs()).sum();
    if rho == 0.0 {
        1.0
    } else {
        rho
    }
}

pub fn build_qubo(
    route_set: &RouteSet,
    penalty: Option<f64>,
    vehicle_count: Option<usize>,
) -> Result<QuboProblem, QuboError> {
    if route_set.is_empty() {
        return Err(QuboError::EmptyRouteSet);
    }
    let rho = penalty.unwrap_or_else(|| default_penalty(route_set));
    QuboProblem::from_routes(
        route_set.costs(),
        route_set
            .routes()
            .iter()
            .map(|r| r.coverage.iter().copied().collect())
            .collect(),
        route_set.instance().customer_count(),
        rho,
        vehicle_count,
    )
}

/// `x^T A x`, plus the offset when `include_offset` is set.
pub fn evaluate(qubo: &QuboProblem, x: &Bitstring, include_offset: bool) -> Result<f64, QuboError> {
    if x.len() != qubo.n {
        return Err(QuboError::LengthMismatch {
            expected: qubo.n,
            found: x.len(),
        });
    }
    let ones: Vec<usize> = x.ones().collect();
    let mut total = 0.0;
    for &k in &ones {
        let row = qubo.row(k);
        total += ones.iter().map(|&l| row[l]).sum::<f64>();
    }
    Ok(if include_offset {
        total + qubo.offset
    } else {
        total
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluatedSolution {
    pub bits: Bitstring,
    /// Offset-inclusive cost.
    pub cost: f64,
    pub normalized_cost: Option<f64>,
    /// Times each customer `1..=N` is visited by the selected routes.
    pub visit_counts: Vec<u32>,
    pub vehicles_used: usize,
    pub feasible: bool,
}

/// Evaluates `x` and checks that every customer is visited exactly once
/// (and that exactly `V` routes are used when a vehicle count is set).
pub fn check_feasibility(
    qubo: &QuboProblem,
    x: &Bitstring,
) -> Result<EvaluatedSolution, QuboError> {
    let cost = evaluate(qubo, x, true)?;
    let structure = qubo.structure().ok_or(QuboError::NoRouteStructure)?;
    let mut visit_counts = vec![0u32; structure.node_count];
    let mut vehicles_used = 0;
    for r in x.ones() {
        vehicles_used += 1;
        for &i in &structure.coverage[r] {
            visit_counts[i - 1] += 1;
        }
    }
    let feasible = visit_counts.iter().all(|&c| c == 1)
        && structure.vehicle_count.is_none_or(|v| v == vehicles_used);
    let normalized_cost = qubo.bounds().and_then(|b| b.normalize(cost).ok());
    Ok(EvaluatedSolution {
        bits: x.clone(),
        cost,
        normalized_cost,
        visit_counts,
        vehicles_used,
        feasible,
    })
}

/// `(C - C_min) / (C_max - C_min)`, unclamped.
pub fn normalize_cost(cost: f64, c_min: f64, c_max: f64) -> Result<f64, QuboError> {
    if c_max <= c_min {
        return Err(QuboError::DegenerateRange { c_min, c_max });
    }
    Ok((cost - c_min) / (c_max - c_min))
}

/// QUBO rewritten over spins `s_k = 1 - 2 x_k`:
/// `E(s) = constant + sum_k linear[k] s_k + sum_{k != l} J[k][l] s_k s_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingView {
    pub n: usize,
    pub linear: Vec<f64>,
    /// Row-major, symmetric, zero diagonal.
    pub quadratic: Vec<f64>,
    pub constant: f64,
}

impl IsingView {
    pub fn energy(&self, spins: &[i8]) -> f64 {
        assert_eq!(spins.len(), self.n);
        let mut e = self.constant;
        for (k, &s) in spins.iter().enumerate() {
            let sk = f64::from(s);
            e += self.linear[k] * sk;
            let row = &self.quadratic[k * self.n..(k + 1) * self.n];
            for (l, (&j, &sl)) in row.iter().zip(spins).enumerate() {
                if l != k {
                    e += j * sk * f64::from(sl);
                }
            }
        }
        e
    }
}

/// Expands `1/4 sum_{k,l} A_kl (1 - Z_k)(1 - Z_l)` into Pauli-Z coefficients.
pub fn to_ising(qubo: &QuboProblem) -> IsingView {
    let n = qubo.n;
    let mut linear = vec![0.0; n];
    let mut quadratic = vec![0.0; n * n];
    let mut constant = 0.0;
    for k in 0..n {
        for l in 0..n {
            let a = qubo.entry(k, l) / 4.0;
            constant += a;
            linear[k] -= a;
            linear[l] -= a;
            if k == l {
                // Z_k^2 = 1
                constant += a;
            } else {
                quadratic[k * n + l] += a;
            }
        }
    }
    IsingView {
        n,
        linear,
        quadratic,
        constant,
    }
}

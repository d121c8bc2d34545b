//! Route-based VRPTW model: instances, time-window validation of routes,
//! route costs and enumeration of feasible route sets.
//!
//! Node 0 is always the depot. Its window is `[0, +inf)`, where the upper
//! bound is the sentinel [`UNBOUNDED`] rather than a large finite number.
//! Arrival times follow `T[p+1] = max(open[p+1], T[p] + travel(p, p+1))`
//! starting from `T = 0` at the depot, so vehicles arriving early wait for
//! the window to open. Service times are not modeled.

mod generate;
pub mod io;
pub mod synth;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use generate::{generate_routes, RouteGenConfig};

/// Window close time of a node that never closes.
pub const UNBOUNDED: f64 = f64::INFINITY;

/// Id of the depot node.
pub const DEPOT: usize = 0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: usize,
    pub window_open: f64,
    #[serde(with = "io::window_close")]
    pub window_close: f64,
}

impl Node {
    pub fn new(id: usize, window_open: f64, window_close: f64) -> Self {
        Self {
            id,
            window_open,
            window_close,
        }
    }

    pub fn depot() -> Self {
        Self::new(DEPOT, 0.0, UNBOUNDED)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub cost: f64,
    pub travel_time: f64,
}

impl Arc {
    pub fn new(from: usize, to: usize, cost: f64, travel_time: f64) -> Self {
        Self {
            from,
            to,
            cost,
            travel_time,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InstanceError {
    #[error("instance has no nodes")]
    NoNodes,
    #[error("node ids must be contiguous from 0: found id {found} at position {position}")]
    NonContiguousIds { position: usize, found: usize },
    #[error("depot window must be [0, inf), got [{open}, {close}]")]
    BadDepotWindow { open: f64, close: f64 },
    #[error("node {node} has an invalid window [{open}, {close}]")]
    BadWindow { node: usize, open: f64, close: f64 },
    #[error("arc ({from}, {to}) refers to a missing node")]
    DanglingArc { from: usize, to: usize },
    #[error("duplicate arc ({from}, {to})")]
    DuplicateArc { from: usize, to: usize },
    #[error("self-loop arc at node {node}; only the depot may loop onto itself")]
    SelfLoop { node: usize },
    #[error("arc ({from}, {to}) has invalid cost {cost} or travel time {travel_time}")]
    BadArcValue {
        from: usize,
        to: usize,
        cost: f64,
        travel_time: f64,
    },
}

/// A validated network of depot + customers joined by directed arcs.
#[derive(Debug, Clone)]
pub struct VrptwInstance {
    name: String,
    nodes: Vec<Node>,
    arcs: Vec<Arc>,
    /// Outgoing arc indices per node.
    outgoing: Vec<Vec<usize>>,
    lookup: HashMap<(usize, usize), usize>,
}

impl PartialEq for VrptwInstance {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.nodes == other.nodes && self.arcs == other.arcs
    }
}

impl VrptwInstance {
    pub fn new(
        name: impl Into<String>,
        nodes: Vec<Node>,
        arcs: Vec<Arc>,
    ) -> Result<Self, InstanceError> {
        if nodes.is_empty() {
            return Err(InstanceError::NoNodes);
        }
        for (position, node) in nodes.iter().enumerate() {
            if node.id != position {
                return Err(InstanceError::NonContiguousIds {
                    position,
                    found: node.id,
                });
            }
            if position == DEPOT {
                if node.window_open != 0.0 || node.window_close != UNBOUNDED {
                    return Err(InstanceError::BadDepotWindow {
                        open: node.window_open,
                        close: node.window_close,
                    });
                }
            } else if !(node.window_open.is_finite()
                && node.window_open >= 0.0
                && node.window_close >= node.window_open)
            {
                return Err(InstanceError::BadWindow {
                    node: node.id,
                    open: node.window_open,
                    close: node.window_close,
                });
            }
        }

        let mut outgoing = vec![Vec::new(); nodes.len()];
        let mut lookup = HashMap::with_capacity(arcs.len());
        for (index, arc) in arcs.iter().enumerate() {
            let (from, to) = (arc.from, arc.to);
            if from >= nodes.len() || to >= nodes.len() {
                return Err(InstanceError::DanglingArc { from, to });
            }
            if from == to && from != DEPOT {
                return Err(InstanceError::SelfLoop { node: from });
            }
            if !arc.cost.is_finite() || !arc.travel_time.is_finite() || arc.travel_time < 0.0 {
                return Err(InstanceError::BadArcValue {
                    from,
                    to,
                    cost: arc.cost,
                    travel_time: arc.travel_time,
                });
            }
            if lookup.insert((from, to), index).is_some() {
                return Err(InstanceError::DuplicateArc { from, to });
            }
            outgoing[from].push(index);
        }

        Ok(Self {
            name: name.into(),
            nodes,
            arcs,
            outgoing,
            lookup,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Number of customers `N` (every node except the depot).
    pub fn customer_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn arc(&self, from: usize, to: usize) -> Option<&Arc> {
        self.lookup.get(&(from, to)).map(|&i| &self.arcs[i])
    }

    pub fn outgoing(&self, from: usize) -> impl Iterator<Item = &Arc> {
        self.outgoing
            .get(from)
            .into_iter()
            .flatten()
            .map(move |&i| &self.arcs[i])
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RouteError {
    #[error("route is empty")]
    Empty,
    #[error("route must start and end at the depot and contain at least one arc")]
    BadEndpoints,
    #[error("route visits the depot in its interior at position {0}")]
    InteriorDepot(usize),
    #[error("route refers to unknown node {node} at position {position}")]
    UnknownNode { position: usize, node: usize },
    #[error("no arc for segment starting at position {0}")]
    MissingArc(usize),
    #[error("arrival time {arrival} at position {position} exceeds window close {close}")]
    WindowViolation {
        position: usize,
        arrival: f64,
        close: f64,
    },
    #[error("node {0} is visited more than once")]
    DuplicateNode(usize),
}

/// A time-window feasible route through the network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub sequence: Vec<usize>,
    pub cost: f64,
    /// Non-depot nodes visited by the route.
    pub coverage: BTreeSet<usize>,
    pub arrival_times: Vec<f64>,
}

impl Route {
    pub fn covers(&self, node: usize) -> bool {
        self.coverage.contains(&node)
    }
}

/// Checks a node sequence against the instance and computes arrival times.
pub fn validate_route(instance: &VrptwInstance, sequence: &[usize]) -> Result<Route, RouteError> {
    let (&first, &last) = match (sequence.first(), sequence.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(RouteError::Empty),
    };
    if sequence.len() < 2 || first != DEPOT || last != DEPOT {
        return Err(RouteError::BadEndpoints);
    }

    let mut coverage = BTreeSet::new();
    for (position, &node) in sequence.iter().enumerate() {
        if node >= instance.nodes.len() {
            return Err(RouteError::UnknownNode { position, node });
        }
        if node == DEPOT {
            if position != 0 && position != sequence.len() - 1 {
                return Err(RouteError::InteriorDepot(position));
            }
        } else if !coverage.insert(node) {
            return Err(RouteError::DuplicateNode(node));
        }
    }

    let mut arrival_times = Vec::with_capacity(sequence.len());
    let mut cost = 0.0;
    let mut time = 0.0;
    arrival_times.push(time);
    for (position, pair) in sequence.windows(2).enumerate() {
        let arc = instance
            .arc(pair[0], pair[1])
            .ok_or(RouteError::MissingArc(position))?;
        let next = &instance.nodes[pair[1]];
        time = next.window_open.max(time + arc.travel_time);
        if time > next.window_close {
            return Err(RouteError::WindowViolation {
                position: position + 1,
                arrival: time,
                close: next.window_close,
            });
        }
        cost += arc.cost;
        arrival_times.push(time);
    }

    Ok(Route {
        sequence: sequence.to_vec(),
        cost,
        coverage,
        arrival_times,
    })
}

/// Sum of arc costs along `sequence`; windows and endpoints are not checked.
pub fn route_cost(instance: &VrptwInstance, sequence: &[usize]) -> Result<f64, RouteError> {
    sequence
        .windows(2)
        .enumerate()
        .map(|(position, pair)| {
            instance
                .arc(pair[0], pair[1])
                .map(|arc| arc.cost)
                .ok_or(RouteError::MissingArc(position))
        })
        .sum()
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("route count for {0} customers overflows u128")]
pub struct Overflow(pub u64);

/// Number of distinct routes through a complete graph on `customers` nodes:
/// the sum over route lengths `i` of the falling factorial `N!/(N-i)!`.
pub fn max_routes(customers: u64) -> Result<u128, Overflow> {
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    for i in 1..=customers {
        term = term
            .checked_mul(u128::from(customers - i + 1))
            .ok_or(Overflow(customers))?;
        total = total.checked_add(term).ok_or(Overflow(customers))?;
    }
    Ok(total)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RouteSetError {
    #[error("route {index} is invalid: {source}")]
    InvalidRoute { index: usize, source: RouteError },
    #[error("route {0} covers no customer")]
    EmptyCoverage(usize),
    #[error("no feasible routes")]
    NoFeasibleRoutes,
}

/// The candidate routes that become the binary variables of the QUBO.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteSet {
    instance: VrptwInstance,
    routes: Vec<Route>,
}

impl RouteSet {
    /// Validates every sequence against `instance`.
    pub fn new(instance: VrptwInstance, sequences: &[Vec<usize>]) -> Result<Self, RouteSetError> {
        let routes = sequences
            .iter()
            .enumerate()
            .map(|(index, seq)| {
                let route = validate_route(&instance, seq)
                    .map_err(|source| RouteSetError::InvalidRoute { index, source })?;
                if route.coverage.is_empty() {
                    return Err(RouteSetError::EmptyCoverage(index));
                }
                Ok(route)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { instance, routes })
    }

    pub(crate) fn from_validated(instance: VrptwInstance, routes: Vec<Route>) -> Self {
        Self { instance, routes }
    }

    pub fn instance(&self) -> &VrptwInstance {
        &self.instance
    }

    pub fn routes(&self) -> &[Route] {
        &self.routes
    }

    /// Number of routes, i.e. the QUBO variable count `n_c`.
    pub fn len(&self) -> usize {
        self.routes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.routes.is_empty()
    }

    pub fn costs(&self) -> Vec<f64> {
        self.routes.iter().map(|r| r.cost).collect()
    }

    /// Customers that no route covers. Any such node makes every bitstring infeasible.
    pub fn uncovered_customers(&self) -> Vec<usize> {
        (1..=self.instance.customer_count())
            .filter(|&i| !self.routes.iter().any(|r| r.covers(i)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_customer(open: f64, close: f64, t01: f64) -> VrptwInstance {
        VrptwInstance::new(
            "one",
            vec![Node::depot(), Node::new(1, open, close)],
            vec![Arc::new(0, 1, 3.0, t01), Arc::new(1, 0, 4.0, 2.0)],
        )
        .unwrap()
    }

    #[test]
    fn depot_loop_is_a_valid_empty_route() {
        let inst = VrptwInstance::new("loop", vec![Node::depot()], vec![Arc::new(0, 0, 0.0, 0.0)])
            .unwrap();
        let route = validate_route(&inst, &[0, 0]).unwrap();
        assert_eq!(route.cost, 0.0);
        assert!(route.coverage.is_empty());
        assert_eq!(route_cost(&inst, &[0, 0]).unwrap(), 0.0);
    }

    #[test]
    fn early_arrival_waits_for_window() {
        let inst = one_customer(5.0, 6.0, 2.0);
        let route = validate_route(&inst, &[0, 1, 0]).unwrap();
        assert_eq!(route.arrival_times, vec![0.0, 5.0, 7.0]);
        assert_eq!(route.cost, 7.0);
        assert_eq!(route.coverage, BTreeSet::from([1]));
    }

    #[test]
    fn late_arrival_is_rejected() {
        let inst = one_customer(0.0, 4.0, 2.0);
        assert!(validate_route(&inst, &[0, 1, 0]).is_ok());
        let inst = one_customer(0.0, 4.0, 6.0);
        assert_eq!(
            validate_route(&inst, &[0, 1, 0]),
            Err(RouteError::WindowViolation {
                position: 1,
                arrival: 6.0,
                close: 4.0
            })
        );
    }

    #[test]
    fn structural_errors() {
        let inst = one_customer(0.0, 10.0, 1.0);
        assert_eq!(validate_route(&inst, &[]), Err(RouteError::Empty));
        assert_eq!(
            validate_route(&inst, &[1, 0]),
            Err(RouteError::BadEndpoints)
        );
        assert_eq!(validate_route(&inst, &[0]), Err(RouteError::BadEndpoints));
        assert_eq!(
            validate_route(&inst, &[0, 0]),
            Err(RouteError::MissingArc(0))
        );
        assert_eq!(
            validate_route(&inst, &[0, 1, 1, 0]),
            Err(RouteError::DuplicateNode(1))
        );
        assert_eq!(
            validate_route(&inst, &[0, 1, 0, 1, 0]),
            Err(RouteError::InteriorDepot(2))
        );
        assert_eq!(
            validate_route(&inst, &[0, 7, 0]),
            Err(RouteError::UnknownNode {
                position: 1,
                node: 7
            })
        );
    }

    #[test]
    fn route_costs_sum_arcs() {
        let inst = one_customer(0.0, 10.0, 1.0);
        assert_eq!(route_cost(&inst, &[0, 1, 0]).unwrap(), 7.0);
        let inst = VrptwInstance::new(
            "two",
            vec![
                Node::depot(),
                Node::new(1, 0.0, UNBOUNDED),
                Node::new(2, 0.0, UNBOUNDED),
            ],
            vec![
                Arc::new(0, 1, 1.0, 1.0),
                Arc::new(1, 2, 1.0, 1.0),
                Arc::new(2, 0, 1.0, 1.0),
            ],
        )
        .unwrap();
        assert_eq!(route_cost(&inst, &[0, 1, 2, 0]).unwrap(), 3.0);
        assert_eq!(
            route_cost(&inst, &[0, 2, 1]),
            Err(RouteError::MissingArc(0))
        );
    }

    #[test]
    fn max_routes_matches_falling_factorials() {
        assert_eq!(max_routes(0), Ok(0));
        assert_eq!(max_routes(1), Ok(1));
        assert_eq!(max_routes(2), Ok(4));
        assert_eq!(max_routes(3), Ok(15));
        assert_eq!(max_routes(62).map(|_| ()), Err(Overflow(62)));
        assert!(max_routes(30).is_ok());
    }

    #[test]
    fn instance_rejects_bad_input() {
        assert_eq!(
            VrptwInstance::new("x", vec![], vec![]).unwrap_err(),
            InstanceError::NoNodes
        );
        assert!(matches!(
            VrptwInstance::new("x", vec![Node::new(0, 0.0, 10.0)], vec![]),
            Err(InstanceError::BadDepotWindow { .. })
        ));
        assert!(matches!(
            VrptwInstance::new("x", vec![Node::depot(), Node::new(2, 0.0, 1.0)], vec![]),
            Err(InstanceError::NonContiguousIds { .. })
        ));
        assert!(matches!(
            VrptwInstance::new("x", vec![Node::depot(), Node::new(1, 5.0, 4.0)], vec![]),
            Err(InstanceError::BadWindow { .. })
        ));
        let nodes = vec![Node::depot(), Node::new(1, 0.0, 1.0)];
        assert!(matches!(
            VrptwInstance::new("x", nodes.clone(), vec![Arc::new(0, 3, 1.0, 1.0)]),
            Err(InstanceError::DanglingArc { .. })
        ));
        assert!(matches!(
            VrptwInstance::new("x", nodes.clone(), vec![Arc::new(1, 1, 1.0, 1.0)]),
            Err(InstanceError::SelfLoop { node: 1 })
        ));
        assert!(matches!(
            VrptwInstance::new(
                "x",
                nodes,
                vec![Arc::new(0, 1, 1.0, 1.0), Arc::new(0, 1, 2.0, 1.0)]
            ),
            Err(InstanceError::DuplicateArc { .. })
        ));
    }

    #[test]
    fn route_set_rejects_empty_coverage() {
        let inst = VrptwInstance::new(
            "loop",
            vec![Node::depot(), Node::new(1, 0.0, 5.0)],
            vec![
                Arc::new(0, 0, 0.0, 0.0),
                Arc::new(0, 1, 1.0, 1.0),
                Arc::new(1, 0, 1.0, 1.0),
            ],
        )
        .unwrap();
        assert_eq!(
            RouteSet::new(inst.clone(), &[vec![0, 1, 0], vec![0, 0]]).unwrap_err(),
            RouteSetError::EmptyCoverage(1)
        );
        let set = RouteSet::new(inst, &[vec![0, 1, 0]]).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.costs(), vec![2.0]);
        assert!(set.uncovered_customers().is_empty());
    }
}

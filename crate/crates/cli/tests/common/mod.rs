#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qvrp_core::vrptw::io::{instance_to_json, route_set_to_json};
use qvrp_core::vrptw::{Arc, Node, RouteSet, VrptwInstance, UNBOUNDED};

pub fn qvrp(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qvrp"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("qvrp runs")
}

pub fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad stdout ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

/// Every customer connected to every other node, all windows open.
pub fn complete_instance(customers: usize) -> VrptwInstance {
    let nodes = std::iter::once(Node::depot())
        .chain((1..=customers).map(|i| Node::new(i, 0.0, UNBOUNDED)))
        .collect();
    let mut arcs = Vec::new();
    for from in 0..=customers {
        for to in 0..=customers {
            if from != to {
                arcs.push(Arc::new(from, to, (1 + from + to) as f64, 1.0));
            }
        }
    }
    VrptwInstance::new("complete", nodes, arcs).unwrap()
}

/// Four customers reachable only directly from the depot, so the four
/// out-and-back routes partition them.
pub fn partition_route_set() -> RouteSet {
    let costs = [3.0, 5.0, 2.0, 7.0];
    let nodes = std::iter::once(Node::depot())
        .chain((1..=4).map(|i| Node::new(i, 0.0, UNBOUNDED)))
        .collect();
    let arcs = (1..=4)
        .flat_map(|i| [Arc::new(0, i, costs[i - 1], 1.0), Arc::new(i, 0, 0.0, 1.0)])
        .collect();
    let inst = VrptwInstance::new("partition", nodes, arcs).unwrap();
    let routes: Vec<Vec<usize>> = (1..=4).map(|i| vec![0, i, 0]).collect();
    RouteSet::new(inst, &routes).unwrap()
}

pub fn write_instance(dir: &Path, name: &str, inst: &VrptwInstance) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, instance_to_json(inst)).unwrap();
    p
}

pub fn write_route_set(dir: &Path, name: &str, set: &RouteSet) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, route_set_to_json(set)).unwrap();
    p
}

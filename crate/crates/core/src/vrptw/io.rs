//! JSON file formats for instances and route sets.
//!
//! Instance file:
//! ```json
//! {"schema_version": 1, "name": "toy",
//!  "nodes": [{"id": 0, "open": 0, "close": "inf"}, {"id": 1, "open": 5, "close": 6}],
//!  "arcs": [{"from": 0, "to": 1, "cost": 3, "time": 2}]}
//! ```
//! Route-set file: `{"schema_version": 1, "instance_name": ..., "instance": {...},
//! "routes": [[0, 1, 0], ...]}`. The instance is embedded so the file can be
//! re-validated on its own.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Arc, InstanceError, Node, RouteSet, RouteSetError, VrptwInstance};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {source}")]
    Parse {
        line: usize,
        column: usize,
        source: serde_json::Error,
    },
    #[error("unsupported schema_version {found} (expected {SCHEMA_VERSION})")]
    SchemaVersion { found: u32 },
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    RouteSet(#[from] RouteSetError),
    #[error("route set names instance {declared:?} but embeds {embedded:?}")]
    NameMismatch { declared: String, embedded: String },
}

impl From<serde_json::Error> for FormatError {
    fn from(source: serde_json::Error) -> Self {
        FormatError::Parse {
            line: source.line(),
            column: source.column(),
            source,
        }
    }
}

/// Serde helper writing unbounded window closes as `"inf"`.
pub mod window_close {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &f64, s: S) -> Result<S::Ok, S::Error> {
        if value.is_infinite() && *value > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*value)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Raw::Text(t) => Err(de::Error::custom(format!(
                "expected number or \"inf\", got {t:?}"
            ))),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeRecord {
    id: usize,
    open: f64,
    #[serde(with = "window_close")]
    close: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct ArcRecord {
    from: usize,
    to: usize,
    cost: f64,
    time: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceFile {
    schema_version: u32,
    name: String,
    nodes: Vec<NodeRecord>,
    arcs: Vec<ArcRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RouteSetFile {
    schema_version: u32,
    instance_name: String,
    instance: InstanceFile,
    routes: Vec<Vec<usize>>,
}

fn to_file(instance: &VrptwInstance) -> InstanceFile {
    InstanceFile {
        schema_version: SCHEMA_VERSION,
        name: instance.name().to_string(),
        nodes: instance
            .nodes()
            .iter()
            .map(|n| NodeRecord {
                id: n.id,
                open: n.window_open,
                close: n.window_close,
            })
            .collect(),
        arcs: instance
            .arcs()
            .iter()
            .map(|a| ArcRecord {
                from: a.from,
                to: a.to,
                cost: a.cost,
                time: a.travel_time,
            })
            .collect(),
    }
}

fn from_file(file: InstanceFile) -> Result<VrptwInstance, FormatError> {
    if file.schema_version != SCHEMA_VERSION {
        return Err(FormatError::SchemaVersion {
            found: file.schema_version,
        });
    }
    let nodes = file
        .nodes
        .into_iter()
        .map(|n| Node::new(n.id, n.open, n.close))
        .collect();
    let arcs = file
        .arcs
        .into_iter()
        .map(|a| Arc::new(a.from, a.to, a.cost, a.time))
        .collect();
    Ok(VrptwInstance::new(file.name, nodes, arcs)?)
}

pub fn instance_to_json(instance: &VrptwInstance) -> String {
    serde_json::to_string_pretty(&to_file(instance)).expect("instance serializes")
}

pub fn instance_from_json(text: &str) -> Result<VrptwInstance, FormatError> {
    from_file(serde_json::from_str(text)?)
}

pub fn route_set_to_json(set: &RouteSet) -> String {
    let file = RouteSetFile {
        schema_version: SCHEMA_VERSION,
        instance_name: set.instance().name().to_string(),
        instance: to_file(set.instance()),
        routes: set.routes().iter().map(|r| r.sequence.clone()).collect(),
    };
    serde_json::to_string_pretty(&file).expect("route set serializes")
}

/// Parses a route-set file and re-validates every route.
pub fn route_set_from_json(text: &str) -> Result<RouteSet, FormatError> {
    let file: RouteSetFile = serde_json::from_str(text)?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(FormatError::SchemaVersion {
            found: file.schema_version,
        });
    }
    let instance = from_file(file.instance)?;
    if instance.name() != file.instance_name {
        return Err(FormatError::NameMismatch {
            declared: file.instance_name,
            embedded: instance.name().to_string(),
        });
    }
    Ok(RouteSet::new(instance, &file.routes)?)
}

//! Text export of a QUBO.
//!
//! ```text
//! schema_version 1
//! n_c 2
//! penalty 3.0000000000000000e0
//! offset 3.0000000000000000e0
//! node_count 1
//! vehicle_count none
//! matrix
//! 0 0 -2.0000000000000000e0
//! 0 1 3.0000000000000000e0
//! 1 1 -1.0000000000000000e0
//! route_costs
//! 0 1.0000000000000000e0
//! 1 2.0000000000000000e0
//! coverage
//! 0 1
//! 1 1
//! end
//! ```
//!
//! `matrix` lists the non-zero upper triangle as `k l A_kl`; the lower
//! triangle is implied by symmetry. Reals are written with 17 significant
//! digits so a load reproduces every value bit for bit. When the QUBO has no
//! route structure, `penalty` and `node_count` are `none` and the
//! `route_costs`/`coverage` sections are omitted.

use thiserror::Error;

use super::{QuboError, QuboProblem, RouteStructure};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, PartialEq)]
pub enum QuboFormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Qubo(#[from] QuboError),
}

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_qubo(qubo: &QuboProblem) -> String {
    let n = qubo.n_c();
    let mut out = String::new();
    let s = qubo.structure();
    out.push_str(&format!("schema_version {SCHEMA_VERSION}\n"));
    out.push_str(&format!("n_c {n}\n"));
    out.push_str(&format!(
        "penalty {}\n",
        s.map_or("none".into(), |s| real(s.penalty))
    ));
    out.push_str(&format!("offset {}\n", real(qubo.offset())));
    out.push_str(&format!(
        "node_count {}\n",
        s.map_or("none".into(), |s| s.node_count.to_string())
    ));
    out.push_str(&format!(
        "vehicle_count {}\n",
        s.and_then(|s| s.vehicle_count)
            .map_or("none".into(), |v| v.to_string())
    ));
    out.push_str("matrix\n");
    for k in 0..n {
        for l in k..n {
            let a = qubo.entry(k, l);
            if a != 0.0 {
                out.push_str(&format!("{k} {l} {}\n", real(a)));
            }
        }
    }
    if let Some(s) = s {
        out.push_str("route_costs\n");
        for (r, c) in s.route_costs.iter().enumerate() {
            out.push_str(&format!("{r} {}\n", real(*c)));
        }
        out.push_str("coverage\n");
        for (r, nodes) in s.coverage.iter().enumerate() {
            out.push_str(&r.to_string());
            for i in nodes {
                out.push_str(&format!(" {i}"));
            }
            out.push('\n');
        }
    }
    out.push_str("end\n");
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Option<&'a str> {
        for (i, raw) in self.inner.by_ref() {
            self.line = i + 1;
            let t = raw.trim();
            if !t.is_empty() && !t.starts_with('#') {
                return Some(t);
            }
        }
        None
    }

    fn err(&self, message: impl Into<String>) -> QuboFormatError {
        QuboFormatError::Syntax {
            line: self.line,
            message: message.into(),
        }
    }

    fn header(&mut self, key: &str) -> Result<&'a str, QuboFormatError> {
        let line = self
            .next()
            .ok_or_else(|| self.err(format!("missing {key}")))?;
        match line.split_once(char::is_whitespace) {
            Some((k, v)) if k == key => Ok(v.trim()),
            _ => Err(self.err(format!("expected `{key} <value>`"))),
        }
    }

    fn parse<T: std::str::FromStr>(&self, text: &str, what: &str) -> Result<T, QuboFormatError> {
        text.parse()
            .map_err(|_| self.err(format!("invalid {what} {text:?}")))
    }

    fn optional<T: std::str::FromStr>(
        &self,
        text: &str,
        what: &str,
    ) -> Result<Option<T>, QuboFormatError> {
        if text == "none" {
            Ok(None)
        } else {
            self.parse(text, what).map(Some)
        }
    }
}

pub fn read_qubo(text: &str) -> Result<QuboProblem, QuboFormatError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        line: 0,
    };
    let version: u32 = {
        let v = lines.header("schema_version")?;
        lines.parse(v, "schema_version")?
    };
    if version != SCHEMA_VERSION {
        return Err(lines.err(format!("unsupported schema_version {version}")));
    }
    let n: usize = {
        let v = lines.header("n_c")?;
        lines.parse(v, "n_c")?
    };
    let penalty: Option<f64> = {
        let v = lines.header("penalty")?;
        lines.optional(v, "penalty")?
    };
    let offset: f64 = {
        let v = lines.header("offset")?;
        lines.parse(v, "offset")?
    };
    let node_count: Option<usize> = {
        let v = lines.header("node_count")?;
        lines.optional(v, "node_count")?
    };
    let vehicle_count: Option<usize> = {
        let v = lines.header("vehicle_count")?;
        lines.optional(v, "vehicle_count")?
    };
    if lines.next() != Some("matrix") {
        return Err(lines.err("expected `matrix`"));
    }

    let mut matrix = vec![0.0; n * n];
    let mut route_costs = vec![0.0; n];
    let mut coverage = vec![Vec::new(); n];
    let mut section = "matrix";
    loop {
        let line = lines.next().ok_or_else(|| lines.err("missing `end`"))?;
        match line {
            "end" => break,
            "route_costs" | "coverage" => {
                section = if line == "route_costs" {
                    "route_costs"
                } else {
                    "coverage"
                };
                continue;
            }
            _ => {}
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let index = |i: usize| -> Result<usize, QuboFormatError> {
            let v: usize = lines.parse(fields[i], "index")?;
            if v >= n {
                return Err(lines.err(format!("index {v} out of range for n_c = {n}")));
            }
            Ok(v)
        };
        match section {
            "matrix" => {
                if fields.len() != 3 {
                    return Err(lines.err("expected `k l value`"));
                }
                let (k, l) = (index(0)?, index(1)?);
                let v: f64 = lines.parse(fields[2], "value")?;
                matrix[k * n + l] = v;
                matrix[l * n + k] = v;
            }
            "route_costs" => {
                if fields.len() != 2 {
                    return Err(lines.err("expected `r cost`"));
                }
                route_costs[index(0)?] = lines.parse(fields[1], "cost")?;
            }
            _ => {
                let r = index(0)?;
                coverage[r] = fields[1..]
                    .iter()
                    .map(|f| lines.parse(f, "customer"))
                    .collect::<Result<_, _>>()?;
            }
        }
    }

    let structure = match (penalty, node_count) {
        (Some(penalty), Some(node_count)) => {
            if coverage.iter().flatten().any(|&i| i == 0 || i > node_count) {
                return Err(lines.err("coverage names a customer outside 1..=node_count"));
            }
            Some(RouteStructure {
                penalty,
                node_count,
                route_costs,
                coverage,
                vehicle_count,
            })
        }
        _ => None,
    };
    Ok(QuboProblem::from_matrix(n, matrix, offset)?.with_structure(structure))
}

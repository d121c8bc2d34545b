//! Minimal deterministic SVG line charts for report bundles.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::Path;

use crate::report::{
    read_csv, CdfRow, ConvergenceRow, SolutionRow, CONVERGENCE_FILE, CUMULATIVE_FILE,
    SOLUTIONS_FILE,
};
use crate::CliError;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

pub struct Series {
    pub label: Option<String>,
    pub color: String,
    pub stroke_width: f64,
    pub points: Vec<(f64, f64)>,
}

pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo <= f64::EPSILON * lo.abs().max(1.0) {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

impl Chart {
    pub fn render(&self) -> String {
        let points = || self.series.iter().flat_map(|s| s.points.iter());
        let (x0, x1) = range(points().map(|p| p.0));
        let (y0, y1) = range(points().map(|p| p.1));
        let pw = WIDTH - LEFT - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            LEFT + pw / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            out,
            r##"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>"##
        );
        for i in 0..=TICKS {
            let f = i as f64 / TICKS as f64;
            let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
            let (px, py) = (sx(xv), sy(yv));
            let _ = writeln!(
                out,
                r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="#333"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
                TOP + ph,
                TOP + ph + 5.0,
                TOP + ph + 18.0,
                tick_label(xv)
            );
            let _ = writeln!(
                out,
                r##"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="#333"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
                LEFT - 5.0,
                LEFT - 8.0,
                py + 4.0,
                tick_label(yv)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 10.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );

        let mut legend_y = TOP + 10.0;
        for s in &self.series {
            let pts: Vec<String> = s
                .points
                .iter()
                .filter(|p| p.0.is_finite() && p.1.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{}" stroke-width="{}" points="{}"/>"#,
                s.color,
                s.stroke_width,
                pts.join(" ")
            );
            if let Some(label) = &s.label {
                let lx = WIDTH - RIGHT + 12.0;
                let _ = writeln!(
                    out,
                    r#"<line x1="{lx:.2}" y1="{legend_y:.2}" x2="{:.2}" y2="{legend_y:.2}" stroke="{}" stroke-width="{}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
                    lx + 20.0,
                    s.color,
                    s.stroke_width,
                    lx + 26.0,
                    legend_y + 4.0,
                    escape(label)
                );
                legend_y += 18.0;
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Per-start traces plus their iteration-wise mean. Uses `c_norm` when every
/// row has it, raw cost otherwise.
pub fn convergence_chart(rows: &[ConvergenceRow]) -> Chart {
    let normalized = rows.iter().all(|r| r.c_norm.is_some());
    let value = |r: &ConvergenceRow| {
        if normalized {
            r.c_norm.unwrap_or(f64::NAN)
        } else {
            r.cost
        }
    };
    let mut by_start: BTreeMap<usize, Vec<(f64, f64)>> = BTreeMap::new();
    let mut by_iter: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for r in rows {
        let v = value(r);
        by_start
            .entry(r.start_id)
            .or_default()
            .push((r.iteration as f64, v));
        let e = by_iter.entry(r.iteration).or_insert((0.0, 0));
        e.0 += v;
        e.1 += 1;
    }
    let mut series: Vec<Series> = by_start
        .into_values()
        .enumerate()
        .map(|(i, points)| Series {
            label: None,
            color: PALETTE[i % PALETTE.len()].to_string(),
            stroke_width: 0.8,
            points,
        })
        .collect();
    series.push(Series {
        label: Some("mean over starts".into()),
        color: "#000000".into(),
        stroke_width: 2.0,
        points: by_iter
            .into_iter()
            .map(|(i, (sum, n))| (i as f64, sum / n as f64))
            .collect(),
    });
    Chart {
        title: "Convergence".into(),
        x_label: "iteration".into(),
        y_label: if normalized {
            "C_norm".into()
        } else {
            "cost".into()
        },
        series,
    }
}

/// Step curves of the empirical CDF, one per source, in file order.
pub fn cumulative_chart(rows: &[CdfRow]) -> Chart {
    let mut order: Vec<&str> = Vec::new();
    let mut steps: BTreeMap<&str, Vec<(f64, f64)>> = BTreeMap::new();
    for r in rows {
        if !order.contains(&r.source.as_str()) {
            order.push(&r.source);
        }
        let pts = steps.entry(&r.source).or_default();
        let prev = pts.last().map_or(0.0, |p| p.1);
        pts.push((r.c_norm, prev));
        pts.push((r.c_norm, r.cdf));
    }
    let series = order
        .iter()
        .enumerate()
        .map(|(i, name)| Series {
            label: Some((*name).to_string()),
            color: PALETTE[i % PALETTE.len()].to_string(),
            stroke_width: 1.5,
            points: steps.remove(name).unwrap_or_default(),
        })
        .collect();
    Chart {
        title: "Cumulative distribution of sampled solutions".into(),
        x_label: "C_norm".into(),
        y_label: "fraction of samples".into(),
        series,
    }
}

fn non_empty<T>(rows: Vec<T>, path: &Path) -> Result<Vec<T>, CliError> {
    if rows.is_empty() {
        Err(CliError::Empty {
            path: path.to_path_buf(),
        })
    } else {
        Ok(rows)
    }
}

/// Renders `convergence.svg` and `cumulative.svg` from a bundle directory.
pub fn render_bundle(dir: &Path) -> Result<Vec<(&'static str, String)>, CliError> {
    let path = dir.join(SOLUTIONS_FILE);
    non_empty(read_csv::<SolutionRow>(&path)?, &path)?;
    let path = dir.join(CONVERGENCE_FILE);
    let convergence = non_empty(read_csv::<ConvergenceRow>(&path)?, &path)?;
    let path = dir.join(CUMULATIVE_FILE);
    let cumulative = non_empty(read_csv::<CdfRow>(&path)?, &path)?;
    Ok(vec![
        ("convergence.svg", convergence_chart(&convergence).render()),
        ("cumulative.svg", cumulative_chart(&cumulative).render()),
    ])
}

//! Deterministic CSV assembly, atomic file writes and a bare-bones SVG
//! scatter renderer.
//!
//! Every CSV starts with `#`-prefixed comment lines carrying the tool
//! version and the fully resolved config, so the file is reproducible from
//! its own header. Floats are printed with 17 significant digits and '.'
//! decimal separator; fields containing separators are quoted RFC-4180
//! style.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::config::{format_float, ExperimentConfig};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One CSV cell.
#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    UInt(u64),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(x) => x.to_string(),
            Cell::UInt(x) => x.to_string(),
            Cell::Float(x) => format_float(*x),
            Cell::Text(s) => quote(s),
            Cell::Empty => String::new(),
        }
    }
}

fn quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV document under construction.
#[derive(Debug, Clone)]
pub struct Csv {
    header_comments: Vec<String>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Csv {
    pub fn new(command: &str, config: &ExperimentConfig, columns: Vec<&'static str>) -> Self {
        let mut header_comments = vec![format!("ptssh {command} v{TOOL_VERSION}")];
        for line in config.emit_experiment().lines() {
            header_comments.push(line.to_string());
        }
        Self {
            header_comments,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, text: impl Into<String>) {
        self.header_comments.push(text.into());
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.header_comments {
            let _ = writeln!(out, "# {c}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// Write via a temp file in the destination directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp-ptssh");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

/// A named point series for the SVG scatter.
pub struct Series {
    pub name: &'static str,
    pub points: Vec<(f64, f64)>,
}

const SVG_COLORS: &[&str] = &["#1b6ca8", "#c23b22", "#3a7d44", "#8d5a97", "#b8860b"];
const SVG_W: f64 = 640.0;
const SVG_H: f64 = 480.0;
const SVG_PAD: f64 = 54.0;

/// Minimal static scatter plot: axes box, per-series colored points joined
/// by thin lines, range labels. Purely a convenience view of the CSV; the
/// CSV content never depends on it.
pub fn render_svg(title: &str, series: &[Series]) -> String {
    let finite = series
        .iter()
        .flat_map(|s| s.points.iter())
        .filter(|(x, y)| x.is_finite() && y.is_finite());
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for (x, y) in finite {
        xmin = xmin.min(*x);
        xmax = xmax.max(*x);
        ymin = ymin.min(*y);
        ymax = ymax.max(*y);
    }
    if !xmin.is_finite() {
        (xmin, xmax, ymin, ymax) = (0.0, 1.0, 0.0, 1.0);
    }
    if xmax == xmin {
        xmax = xmin + 1.0;
    }
    if ymax == ymin {
        ymax = ymin + 1.0;
    }
    let sx = |x: f64| SVG_PAD + (x - xmin) / (xmax - xmin) * (SVG_W - 2.0 * SVG_PAD);
    let sy = |y: f64| SVG_H - SVG_PAD - (y - ymin) / (ymax - ymin) * (SVG_H - 2.0 * SVG_PAD);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" viewBox=\"0 0 {SVG_W} {SVG_H}\">"
    );
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{SVG_W}\" height=\"{SVG_H}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        out,
        "<rect x=\"{SVG_PAD}\" y=\"{SVG_PAD}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        SVG_W - 2.0 * SVG_PAD,
        SVG_H - 2.0 * SVG_PAD
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"13\">{}</text>",
        SVG_W / 2.0,
        title
    );
    let label = |v: f64| format!("{v:.6e}");
    let _ = writeln!(
        out,
        "<text x=\"{SVG_PAD}\" y=\"{}\" font-family=\"monospace\" font-size=\"10\">{}</text>",
        SVG_H - 34.0,
        label(xmin)
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">{}</text>",
        SVG_W - SVG_PAD,
        SVG_H - 34.0,
        label(xmax)
    );
    let _ = writeln!(
        out,
        "<text x=\"6\" y=\"{}\" font-family=\"monospace\" font-size=\"10\">{}</text>",
        SVG_H - SVG_PAD,
        label(ymin)
    );
    let _ = writeln!(
        out,
        "<text x=\"6\" y=\"{}\" font-family=\"monospace\" font-size=\"10\">{}</text>",
        SVG_PAD + 4.0,
        label(ymax)
    );

    for (si, s) in series.iter().enumerate() {
        let color = SVG_COLORS[si % SVG_COLORS.len()];
        let pts: Vec<(f64, f64)> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| (sx(x), sy(y)))
            .collect();
        if pts.len() > 1 {
            let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = writeln!(
                out,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"0.6\"/>",
                path.join(" ")
            );
        }
        for (x, y) in &pts {
            let _ = writeln!(out, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"1.8\" fill=\"{color}\"/>");
        }
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" fill=\"{color}\">{}</text>",
            SVG_W - SVG_PAD - 150.0,
            SVG_PAD + 16.0 + 14.0 * si as f64,
            s.name
        );
    }
    let _ = writeln!(out, "</svg>");
    out
}

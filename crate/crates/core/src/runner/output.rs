//! Deterministic artifact writers: CSV tables, the JSON run manifest, and
//! static SVG line plots.
//!
//! CSV rows are UTF-8, comma-separated, `.` decimal, with floats printed at
//! a fixed 17 significant digits so repeated runs are byte-identical.

use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::runner::RunnerError;

/// Fixed float formatting: 17 significant digits, scientific.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// An in-memory CSV table with a pinned header.
pub struct CsvTable {
    pub name: String,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, values: &[f64]) {
        assert_eq!(values.len(), self.header.len(), "row width must match header");
        self.rows.push(values.iter().map(|v| fmt_float(*v)).collect());
    }

    /// Mixed row: pre-formatted cells (e.g. labels or flags).
    pub fn push_cells(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.header.len(), "row width must match header");
        self.rows.push(cells);
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        writeln!(out, "{}", self.header.join(",")).unwrap();
        for row in &self.rows {
            writeln!(out, "{}", row.join(",")).unwrap();
        }
        out
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }
}

/// One produced artifact with its checksum.
#[derive(Clone, Debug, serde::Serialize)]
pub struct FileRecord {
    pub name: String,
    pub bytes: usize,
    pub sha256: String,
}

/// Echo of the resolved run, written as `manifest.json`. Identical configs
/// and engine versions reproduce identical artifact checksums; only the
/// wall-clock field varies between runs.
#[derive(Debug, serde::Serialize)]
pub struct RunManifest {
    pub command: String,
    pub engine_version: String,
    pub wall_clock_seconds: f64,
    pub config: serde_json::Value,
    pub files: Vec<FileRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_guard_flag: Option<bool>,
}

impl RunManifest {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        Self {
            command: command.to_string(),
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_clock_seconds: 0.0,
            config,
            files: Vec::new(),
            oracle_guard_flag: None,
        }
    }
}

/// Writes artifacts under one output directory, recording checksums.
pub struct ArtifactSink {
    dir: PathBuf,
    pub files: Vec<FileRecord>,
}

impl ArtifactSink {
    /// Create the directory and verify it is writable before any compute.
    pub fn prepare(dir: &Path) -> Result<Self, RunnerError> {
        std::fs::create_dir_all(dir).map_err(|e| RunnerError::Config {
            context: dir.display().to_string(),
            message: format!("cannot create output directory: {e}"),
        })?;
        let probe = dir.join(".write_probe");
        std::fs::write(&probe, b"ok").map_err(|e| RunnerError::Config {
            context: dir.display().to_string(),
            message: format!("output directory not writable: {e}"),
        })?;
        let _ = std::fs::remove_file(&probe);
        Ok(Self { dir: dir.to_path_buf(), files: Vec::new() })
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<(), RunnerError> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| RunnerError::Compute {
            message: format!("failed to write {}: {e}", path.display()),
        })?;
        let mut hasher = Sha256::new();
        hasher.update(bytes);
        self.files.push(FileRecord {
            name: name.to_string(),
            bytes: bytes.len(),
            sha256: format!("{:x}", hasher.finalize()),
        });
        Ok(())
    }

    pub fn write_csv(&mut self, table: &CsvTable) -> Result<(), RunnerError> {
        self.write_bytes(&format!("{}.csv", table.name), &table.to_bytes())
    }

    pub fn write_json<T: serde::Serialize>(&mut self, name: &str, value: &T) -> Result<(), RunnerError> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| RunnerError::Compute {
            message: format!("json serialization failed: {e}"),
        })?;
        bytes.push(b'\n');
        self.write_bytes(name, &bytes)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

/// Minimal static SVG 1.1 line chart of one or more series.
pub fn render_line_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[(&str, &[(f64, f64)])],
) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const ML: f64 = 64.0;
    const MR: f64 = 16.0;
    const MT: f64 = 36.0;
    const MB: f64 = 48.0;
    const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#000000"];

    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for (_, pts) in series {
        for &(x, y) in *pts {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
    }
    if !xmin.is_finite() || xmax <= xmin {
        xmin = 0.0;
        xmax = 1.0;
    }
    if !ymin.is_finite() || ymax <= ymin {
        ymin = 0.0;
        ymax = ymin + 1.0;
    }
    let pad = 0.05 * (ymax - ymin);
    let (ymin, ymax) = (ymin - pad, ymax + pad);

    let sx = (W - ML - MR) / (xmax - xmin);
    let sy = (H - MT - MB) / (ymax - ymin);
    let px = |x: f64| ML + (x - xmin) * sx;
    let py = |y: f64| H - MB - (y - ymin) * sy;

    let mut svg = String::new();
    svg.push_str(&format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r#"<rect width="{W}" height="{H}" fill="white"/>"#
    ));
    svg.push('\n');
    // Axes.
    svg.push_str(&format!(
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
        ML,
        H - MB,
        W - MR,
        H - MB
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
        ML,
        MT,
        ML,
        H - MB
    ));
    svg.push('\n');
    // Labels and range ticks.
    svg.push_str(&format!(
        r#"<text x="{:.2}" y="20" font-size="14" text-anchor="middle">{}</text>"#,
        0.5 * W,
        xml_escape(title)
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#,
        0.5 * W,
        H - 12.0,
        xml_escape(x_label)
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r#"<text x="14" y="{:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {:.2})">{}</text>"#,
        0.5 * H,
        0.5 * H,
        xml_escape(y_label)
    ));
    svg.push('\n');
    for (x, anchor) in [(xmin, "start"), (xmax, "end")] {
        svg.push_str(&format!(
            r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="{anchor}">{:.4}</text>"#,
            px(x),
            H - MB + 16.0,
            x
        ));
        svg.push('\n');
    }
    for y in [ymin + pad, ymax - pad] {
        svg.push_str(&format!(
            r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">{:.4}</text>"#,
            ML - 6.0,
            py(y) + 4.0,
            y
        ));
        svg.push('\n');
    }
    // Series.
    for (i, (label, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut d = String::new();
        for (j, &(x, y)) in pts.iter().enumerate() {
            d.push_str(if j == 0 { "M" } else { "L" });
            d.push_str(&format!("{:.3} {:.3} ", px(x), py(y)));
        }
        svg.push_str(&format!(
            r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            d.trim_end()
        ));
        svg.push('\n');
        svg.push_str(&format!(
            r#"<text x="{:.2}" y="{:.2}" font-size="11" fill="{color}">{}</text>"#,
            W - MR - 150.0,
            MT + 16.0 * (i as f64 + 1.0),
            xml_escape(label)
        ));
        svg.push('\n');
    }
    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Debug export of an evolution trajectory in the shared CSV schema.
pub fn trajectory_table(name: &str, times: &[f64], norms: &[f64], atom_pops: &[f64]) -> CsvTable {
    let mut table = CsvTable::new(name, &["t", "norm", "atom_population"]);
    for ((t, n), p) in times.iter().zip(norms).zip(atom_pops) {
        table.push_row(&[*t, *n, *p]);
    }
    table
}

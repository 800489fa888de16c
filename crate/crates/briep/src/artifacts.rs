//! CSV and JSON output of a run.

use std::fs;
use std::path::{Path, PathBuf};

use briep_core::Point;
use serde::Serialize;

use crate::config::RunConfig;
use crate::runner::RunReport;
use crate::CliError;

/// 17 significant digits; infinities as `inf`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "nan".into(), fmt_f64)
}

struct Table {
    path: PathBuf,
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    fn new(dir: &Path, name: &str, header: &[&str]) -> Result<Self, CliError> {
        let mut t = Self {
            path: dir.join(name),
            writer: csv::Writer::from_writer(Vec::new()),
        };
        t.row(header.iter().map(|s| s.to_string()))?;
        Ok(t)
    }

    fn row(&mut self, fields: impl IntoIterator<Item = String>) -> Result<(), CliError> {
        let fields: Vec<String> = fields.into_iter().collect();
        self.writer.write_record(&fields).map_err(|e| self.io(e.into()))
    }

    fn io(&self, source: std::io::Error) -> CliError {
        CliError::Io {
            path: self.path.clone(),
            source,
        }
    }

    fn finish(self) -> Result<(), CliError> {
        let bytes = self.writer.into_inner().map_err(|e| CliError::Io {
            path: self.path.clone(),
            source: e.into_error(),
        })?;
        fs::write(&self.path, bytes).map_err(|e| CliError::Io {
            path: self.path,
            source: e,
        })
    }
}

fn points(dir: &Path, name: &str, pts: &[Point]) -> Result<(), CliError> {
    let mut t = Table::new(dir, name, &["index", "re", "im"])?;
    for (i, z) in pts.iter().enumerate() {
        t.row([i.to_string(), fmt_f64(z.re), fmt_f64(z.im)])?;
    }
    t.finish()
}

#[derive(Serialize)]
struct Meta<'a> {
    tool: &'static str,
    version: &'static str,
    artifact_degree: usize,
    config: &'a RunConfig,
    report: &'a RunReport,
}

/// Writes nodes, poles and weights of the largest degree, the error sweep,
/// the rate fit, the potential grid (when requested) and `run_meta.json`.
pub fn emit(report: &RunReport, cfg: &RunConfig, dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    let last = report.sweeps.last().expect("at least one degree");
    points(dir, "nodes.csv", &last.nodes)?;
    points(dir, "poles.csv", &last.poles)?;

    let mut t = Table::new(dir, "weights.csv", &["index", "re", "im", "log_abs"])?;
    for (i, (w, l)) in last.weights.iter().zip(&last.log_abs_weights).enumerate() {
        t.row([i.to_string(), fmt_f64(w.re), fmt_f64(w.im), fmt_f64(*l)])?;
    }
    t.finish()?;

    let mut t = Table::new(dir, "errors.csv", &["n", "m", "max_error", "argmax_re", "argmax_im"])?;
    for s in &report.sweeps {
        t.row([
            s.n.to_string(),
            s.m.to_string(),
            fmt_f64(s.max_error),
            fmt_f64(s.argmax[0]),
            fmt_f64(s.argmax[1]),
        ])?;
    }
    t.finish()?;

    let mut t = Table::new(dir, "rates.csv", &["n_min", "n_max", "observed_rate", "predicted_rate"])?;
    let r = &report.rate;
    t.row([
        r.n_min.to_string(),
        r.n_max.to_string(),
        fmt_opt(r.observed_rate),
        fmt_opt(r.predicted_rate),
    ])?;
    t.finish()?;

    let mut t = Table::new(dir, "potential_grid.csv", &["x", "y", "U"])?;
    if let Some(g) = &report.grid {
        let nx = g.xs.len();
        for (k, u) in g.values.iter().enumerate() {
            t.row([fmt_f64(g.xs[k % nx]), fmt_f64(g.ys[k / nx]), fmt_f64(*u)])?;
        }
    }
    t.finish()?;

    let meta = Meta {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        artifact_degree: last.n,
        config: cfg,
        report,
    };
    let path = dir.join("run_meta.json");
    let mut text = serde_json::to_string_pretty(&meta).map_err(|e| CliError::Io {
        path: path.clone(),
        source: e.into(),
    })?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| CliError::Io { path, source: e })
}

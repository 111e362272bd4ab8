//! Plot-ready tables written into an output directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use triwell::dilute_gas;
use triwell::instanton::{self, InstantonSolution};
use triwell::PotentialParams;

use crate::config::{Format, Mode, Range, RunConfig, Swept};
use crate::failure::Failure;
use crate::output::{self, cell, num};

pub const ROWS: usize = 1001;
pub const DEFAULT_DIR: &str = "plot-data";

pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let cells: Vec<Vec<String>> =
                    self.rows.iter().map(|r| r.iter().map(|&x| cell(Some(x))).collect()).collect();
                output::csv_string(&self.columns, &cells)
            }
            Format::Json => {
                let rows: Vec<Value> =
                    self.rows.iter().map(|r| Value::Array(r.iter().map(|&x| num(x)).collect())).collect();
                output::json_string(&json!({"columns": self.columns, "rows": rows}))
            }
        }
    }
}

fn linspace(lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    (0..ROWS).map(move |i| if i + 1 == ROWS { hi } else { lo + (hi - lo) * i as f64 / (ROWS - 1) as f64 })
}

/// Potential, kink and zero mode at `params` over `[−T, T]`.
pub fn point_tables(params: &PotentialParams, t: f64) -> Vec<Table> {
    let b = params.beta();
    let sol = InstantonSolution::new(*params);
    vec![
        Table {
            name: "potential",
            columns: vec!["x", "V"],
            rows: linspace(-1.5 * b, 1.5 * b).map(|x| vec![x, params.evaluate(x)]).collect(),
        },
        Table {
            name: "kink",
            columns: vec!["tau", "phi"],
            rows: linspace(-t, t).map(|tau| vec![tau, sol.phi(tau)]).collect(),
        },
        Table {
            name: "zero_mode",
            columns: vec!["tau", "N"],
            rows: linspace(-t, t).map(|tau| vec![tau, instanton::zero_mode(&sol, tau)]).collect(),
        },
    ]
}

/// Instanton splitting along the configured range.
pub fn splitting_table(swept: Swept, fixed: f64, range: Range) -> Result<Table, Failure> {
    let rows = linspace(range.start, range.stop)
        .map(|v| {
            let (a, b) = match swept {
                Swept::Beta => (fixed, v),
                Swept::Alpha => (v, fixed),
            };
            let q = PotentialParams::new(a, b)?;
            Ok(vec![a, b, dilute_gas::block_prediction(&q).half_splitting])
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(Table { name: "splitting", columns: vec!["alpha", "beta", "dE_instanton"], rows })
}

fn write(dir: &Path, file: &str, text: &str) -> Result<PathBuf, Failure> {
    let path = dir.join(file);
    fs::write(&path, text).map_err(|e| Failure::Output { path: path.display().to_string(), message: e.to_string() })?;
    Ok(path)
}

/// Writes every table and returns the manifest. In sweep mode the point
/// tables use the first point of the sweep.
pub fn run(config: &RunConfig) -> Result<Value, Failure> {
    let (alpha, beta) = config.points()[0];
    let params = PotentialParams::new(alpha, beta)?;
    let t = config.half_interval(&params);
    let mut tables = point_tables(&params, t);
    if let Mode::Sweep { swept, fixed, range } = config.mode {
        tables.push(splitting_table(swept, fixed, range)?);
    }

    let dir = config.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_DIR));
    fs::create_dir_all(&dir)
        .map_err(|e| Failure::Output { path: dir.display().to_string(), message: e.to_string() })?;
    let ext = match config.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let mut files = Vec::new();
    for table in &tables {
        let path = write(&dir, &format!("{}.{ext}", table.name), &table.render(config.format))?;
        files.push(json!({
            "name": table.name,
            "path": path.display().to_string(),
            "columns": table.columns,
            "rows": table.rows.len(),
        }));
    }
    Ok(json!({
        "alpha": num(alpha),
        "beta": num(beta),
        "T": num(t),
        "directory": dir.display().to_string(),
        "files": files,
    }))
}

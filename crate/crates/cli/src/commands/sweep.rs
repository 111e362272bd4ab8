//! One row per parameter point: instanton prediction next to the oracle.

use rayon::prelude::*;
use serde_json::{json, Map, Value};
use triwell::dilute_gas::{self, fit_splitting_slope};
use triwell::instanton;
use triwell::spectrum::{self, compare::ACTION_GUARD};
use triwell::PotentialParams;

use crate::config::{ConfigError, Format, Mode, RunConfig, Swept};
use crate::failure::Failure;
use crate::output::{self, cell, num, opt};

pub const COLUMNS: [&str; 9] =
    ["alpha", "beta", "S_E", "E_instanton", "dE_instanton", "E_oracle", "dE_oracle", "ratio_dE", "gap_ratio"];

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub alpha: f64,
    pub beta: f64,
    pub action: f64,
    pub e_instanton: f64,
    pub de_instanton: f64,
    /// Oracle values; `None` when the regime guard trips.
    pub e_oracle: Option<f64>,
    pub de_oracle: Option<f64>,
    pub ratio_de: Option<f64>,
    pub gap_ratio: Option<f64>,
}

impl Row {
    fn cells(&self) -> Vec<String> {
        vec![
            cell(Some(self.alpha)),
            cell(Some(self.beta)),
            cell(Some(self.action)),
            cell(Some(self.e_instanton)),
            cell(Some(self.de_instanton)),
            cell(self.e_oracle),
            cell(self.de_oracle),
            cell(self.ratio_de),
            cell(self.gap_ratio),
        ]
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (key, value) in COLUMNS.iter().zip([
            Some(self.alpha),
            Some(self.beta),
            Some(self.action),
            Some(self.e_instanton),
            Some(self.de_instanton),
            self.e_oracle,
            self.de_oracle,
            self.ratio_de,
            self.gap_ratio,
        ]) {
            m.insert(key.to_string(), opt(value));
        }
        Value::Object(m)
    }
}

fn evaluate(config: &RunConfig, alpha: f64, beta: f64) -> Result<Row, Failure> {
    let params = PotentialParams::new(alpha, beta)?;
    let action = instanton::classical_action_analytic(&params).value();
    let bp = dilute_gas::block_prediction(&params);
    let mut row = Row {
        alpha,
        beta,
        action,
        e_instanton: bp.center_e,
        de_instanton: bp.half_splitting,
        e_oracle: None,
        de_oracle: None,
        ratio_de: None,
        gap_ratio: None,
    };
    if action >= ACTION_GUARD {
        let oracle = spectrum::lowest_levels(&params, &config.grid(&params), 4)?;
        row.e_oracle = Some(oracle.block_center);
        row.de_oracle = Some(oracle.block_half_width);
        row.ratio_de = Some(bp.half_splitting / oracle.block_half_width);
        row.gap_ratio = Some(oracle.gap_ratio());
    }
    Ok(row)
}

/// Rows in sweep order up to the first failing point, and that failure.
pub fn run(config: &RunConfig) -> Result<(Vec<Row>, Option<Failure>), Failure> {
    if !config.is_sweep() {
        return Err(ConfigError::new("beta_range", "sweep needs --beta-range or --alpha-range").into());
    }
    let results: Vec<Result<Row, Failure>> =
        config.points().into_par_iter().map(|(a, b)| evaluate(config, a, b)).collect();
    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => return Ok((rows, Some(e))),
        }
    }
    Ok((rows, None))
}

pub fn csv(rows: &[Row]) -> String {
    let cells: Vec<Vec<String>> = rows.iter().map(Row::cells).collect();
    output::csv_string(&COLUMNS, &cells)
}

pub fn json(config: &RunConfig, rows: &[Row], complete: bool) -> Value {
    let fit = match config.mode {
        Mode::Sweep { swept: Swept::Beta, .. } if complete => {
            let inst: Vec<(f64, f64)> = rows.iter().map(|r| (r.beta, r.de_instanton)).collect();
            let oracle: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.de_oracle.map(|d| (r.beta, d))).collect();
            json!({
                "instanton_slope": opt(fit_splitting_slope(&inst, 3).ok()),
                "oracle_slope": opt(fit_splitting_slope(&oracle, 3).ok()),
                "expected_slope": num(-(2.0 * rows.first().map_or(1.0, |r| r.alpha)).sqrt() / 4.0),
            })
        }
        _ => Value::Null,
    };
    json!({
        "columns": COLUMNS,
        "rows": rows.iter().map(Row::to_json).collect::<Vec<_>>(),
        "splitting_fit": fit,
    })
}

pub fn render(config: &RunConfig, rows: &[Row], complete: bool) -> String {
    match config.format {
        Format::Csv => csv(rows),
        Format::Json => output::json_string(&json(config, rows, complete)),
    }
}

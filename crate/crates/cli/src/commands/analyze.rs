//! Single-point report: closed forms, fluctuation factors, oracle, and the
//! comparison between them.

use serde_json::{json, Value};
use triwell::dilute_gas;
use triwell::fluctuation;
use triwell::instanton::{self, InstantonSolution};
use triwell::spectrum::{self, Comparison};
use triwell::PotentialParams;

use crate::config::{ConfigError, Format, Mode, RunConfig};
use crate::failure::Failure;
use crate::output::{self, num};

pub fn point_params(config: &RunConfig, command: &str) -> Result<PotentialParams, Failure> {
    match config.mode {
        Mode::Point { alpha, beta } => Ok(PotentialParams::new(alpha, beta)?),
        Mode::Sweep { swept, .. } => Err(ConfigError::new(
            swept.key(),
            format!("{command} takes a single parameter point; use the sweep command for ranges"),
        )
        .into()),
    }
}

pub fn geometry_json(params: &PotentialParams) -> Value {
    let g = params.geometry();
    json!({
        "omega1": num(g.omega1),
        "omega2": num(g.omega2),
        "omega_avg": num(g.omega_avg),
        "barrier_height": num(g.barrier_height),
        "barrier_positions": [num(g.barrier_positions.0), num(g.barrier_positions.1)],
    })
}

fn comparison_json(c: &Comparison) -> (Value, Value) {
    let levels: Vec<Value> = c
        .oracle
        .levels
        .iter()
        .map(|l| {
            json!({
                "energy": num(l.energy),
                "parity": match l.parity {
                    spectrum::Parity::Even => "even",
                    spectrum::Parity::Odd => "odd",
                },
                "purity": num(l.purity),
            })
        })
        .collect();
    let oracle = json!({
        "grid": {"x_max": num(c.oracle.grid.x_max), "n_points": c.oracle.grid.n_points},
        "levels": levels,
        "block_center": num(c.oracle.block_center),
        "block_half_width": num(c.oracle.block_half_width),
        "gap_to_next_block": num(c.oracle.gap_to_next_block),
    });
    let m = &c.matrix_elements;
    let p = &c.prefactor;
    let comparison = json!({
        "center_ratio": num(c.center_ratio),
        "splitting_ratio": num(c.splitting_ratio),
        "gap_ratio": num(c.gap_ratio),
        "block_isolated": c.block_isolated,
        "odd_level_central_weight": num(c.odd_level_central_weight),
        "odd_level_at_centre": num(c.odd_level_at_centre),
        "matrix_elements": {
            "H_LL": num(m.h_ll),
            "H_CC": num(m.h_cc),
            "H_LC": num(m.h_lc),
            "H_RR": num(m.h_rr),
            "overlap_LC": num(m.overlap_lc),
            "leakage_L": num(m.left.leakage),
            "leakage_C": num(m.centre.leakage),
        },
        "three_state_model": {
            "a_plus": num(c.model.a_plus),
            "a_minus": num(c.model.a_minus),
            "E0p": num(c.model.e0p),
            "E1p": num(c.model.e1p),
            "E2p": num(c.model.e2p),
        },
        "prefactor": {
            "kernel_weight": num(p.kernel_weight),
            "centre_amplitude": num(p.centre_amplitude),
            "left_amplitude": num(p.left_amplitude),
            "kernel_coefficient": num(p.kernel_coefficient),
            "amplitude_product": num(p.amplitude_product),
            "ratio": num(p.ratio),
            "oracle_ground_product": num(p.oracle_ground_product),
            "oracle_upper_product": num(p.oracle_upper_product),
        },
    });
    (oracle, comparison)
}

pub fn analyze(config: &RunConfig) -> Result<Value, Failure> {
    let params = point_params(config, "analyze")?;
    let t = config.half_interval(&params);

    let analytic = instanton::classical_action_analytic(&params).value();
    let quad_interval = instanton::minimum_interval(&params);
    let quadrature = instanton::classical_action_quadrature(&InstantonSolution::new(params), quad_interval)?.value();
    let f = fluctuation::fluctuation_report(&params, t)?;
    let bp = dilute_gas::block_prediction(&params);
    let propagator = dilute_gas::closed_form_propagator(&params, t)?;

    let comparison = spectrum::compare_with_instanton(&params, &config.grid(&params))?;
    let (oracle, comparison) = comparison_json(&comparison);

    Ok(json!({
        "alpha": num(params.alpha()),
        "beta": num(params.beta()),
        "T": num(t),
        "geometry": geometry_json(&params),
        "action": {
            "analytic": num(analytic),
            "quadrature": num(quadrature),
            "quadrature_T": num(quad_interval),
        },
        "fluctuation": {
            "T": num(f.t),
            "I_T": num(f.i_t),
            "I0": num(f.i0),
            "I0_from_determinant": num(f.i0_from_determinant),
            "determinant_factor": num(f.determinant_factor),
            "epsilon0": num(f.epsilon0),
            "kappa": num(f.kappa),
            "omega_avg": num(f.omega_avg),
            "S_E": num(f.action),
        },
        "prediction": {
            "center_E": num(bp.center_e),
            "half_splitting": num(bp.half_splitting),
            "amplitude_product": num(bp.amplitude_product),
            "S_E": num(bp.action),
            "propagator": num(propagator.value),
            "one_instanton": num(fluctuation::one_instanton_amplitude(&params, t)),
        },
        "oracle": oracle,
        "comparison": comparison,
    }))
}

/// Flattens nested objects into `section.key` rows for CSV output.
pub fn flatten(prefix: &str, value: &Value, rows: &mut Vec<Vec<String>>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), v, rows);
            }
        }
        Value::Number(n) => {
            let text = match (n.as_u64(), n.as_f64()) {
                (Some(u), _) => u.to_string(),
                (None, Some(x)) => output::number(x).unwrap_or_default(),
                _ => n.to_string(),
            };
            rows.push(vec![prefix.to_string(), text]);
        }
        Value::String(s) => rows.push(vec![prefix.to_string(), s.clone()]),
        Value::Bool(b) => rows.push(vec![prefix.to_string(), b.to_string()]),
        Value::Null => rows.push(vec![prefix.to_string(), String::new()]),
    }
}

pub fn render(config: &RunConfig, doc: &Value) -> String {
    match config.format {
        Format::Json => output::json_string(doc),
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", doc, &mut rows);
            output::csv_string(&["key", "value"], &rows)
        }
    }
}

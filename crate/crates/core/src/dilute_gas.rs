//! Dilute-gas resummation of alternating instanton/anti-instanton chains and
//! the block observables that follow from it.
//!
//! Times are half-interval times: the propagator is `⟨0|e^{−2HT}|−β⟩`.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fluctuation::{self, SAFE_SCALED_TIME};
use crate::instanton;
use crate::potential::PotentialParams;

/// Below this the sinh argument is expanded as a series.
const SINH_SERIES_CUTOFF: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockPrediction {
    pub center_e: f64,
    pub half_splitting: f64,
    pub amplitude_product: f64,
    pub action: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PropagatorValue {
    /// Half-interval.
    pub t: f64,
    pub value: f64,
}

/// The three numbers the resummation depends on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiluteGas {
    pub kappa: f64,
    pub action: f64,
    pub omega: f64,
}

impl DiluteGas {
    pub fn from_params(params: &PotentialParams) -> Self {
        Self {
            kappa: fluctuation::instanton_density(params),
            action: instanton::classical_action_analytic(params).value(),
            omega: params.geometry().omega_avg,
        }
    }

    /// Same gas with the density multiplied by `factor`.
    pub fn with_kappa_scale(self, factor: f64) -> Self {
        Self { kappa: self.kappa * factor, ..self }
    }

    /// `2κT√S_E`, the weight of one instanton integrated over its centre.
    fn chain_weight(&self, t: f64) -> f64 {
        2.0 * self.kappa * t * self.action.sqrt()
    }

    /// `ln` of the single-instanton term `2κT√S·√(ω/π)e^{−S}e^{−ωT}`.
    fn ln_leading_term(&self, t: f64) -> f64 {
        self.chain_weight(t).ln() + 0.5 * (self.omega / PI).ln() - self.action - self.omega * t
    }

    /// Ratio of consecutive chain lengths, `2e^{−2S}(2κT√S)²`.
    pub fn bracket(&self, t: f64) -> f64 {
        let w = self.chain_weight(t);
        2.0 * (-2.0 * self.action).exp() * w * w
    }

    /// `2√2·κT√S·e^{−S}`.
    pub fn sinh_argument(&self, t: f64) -> f64 {
        2.0 * SQRT_2 * self.kappa * t * self.action.sqrt() * (-self.action).exp()
    }

    /// Chains of `n + 1` instantons and `n` anti-instantons, `n ≤ n_max`,
    /// each weighted by the `2ⁿ` orderings of the anti-instantons.
    pub fn truncated_sum(&self, t: f64, n_max: usize) -> f64 {
        let x = self.bracket(t);
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 0..n_max {
            term *= x / ((2 * n + 2) as f64 * (2 * n + 3) as f64);
            sum += term;
        }
        (self.ln_leading_term(t) + sum.ln()).exp()
    }

    pub fn ln_closed_form(&self, t: f64) -> f64 {
        0.5 * (self.omega / (2.0 * PI)).ln() - self.omega * t + ln_sinh(self.sinh_argument(t))
    }

    /// `√(ω/2π)e^{−ωT}sinh(2√2κT√S e^{−S})`.
    pub fn closed_form(&self, t: f64) -> f64 {
        self.ln_closed_form(t).exp()
    }
}

fn ln_sinh(a: f64) -> f64 {
    if a < SINH_SERIES_CUTOFF {
        let a2 = a * a;
        a.ln() + (a2 / 6.0 + a2 * a2 / 120.0).ln_1p()
    } else {
        a + (-(-2.0 * a).exp_m1()).ln() - std::f64::consts::LN_2
    }
}

fn check_window(params: &PotentialParams, t: f64) -> Result<()> {
    let scaled = params.rate() * t;
    if !(scaled > 0.0 && scaled <= SAFE_SCALED_TIME) {
        return Err(Error::OverflowRisk { scaled_time: scaled, limit: SAFE_SCALED_TIME });
    }
    Ok(())
}

pub fn truncated_configuration_sum(params: &PotentialParams, t: f64, n_max: usize) -> Result<f64> {
    check_window(params, t)?;
    Ok(DiluteGas::from_params(params).truncated_sum(t, n_max))
}

pub fn closed_form_propagator(params: &PotentialParams, t: f64) -> Result<PropagatorValue> {
    check_window(params, t)?;
    Ok(PropagatorValue { t, value: DiluteGas::from_params(params).closed_form(t) })
}

/// Block centre `(3/4)β²√(2α)`, half-splitting
/// `√(8/(3π))(2α)^{3/4}β⁴e^{−S_E}`, and the vacuum amplitude product
/// `(β/4)(3√(2α)/π)^{1/2}`.
pub fn block_prediction(params: &PotentialParams) -> BlockPrediction {
    let a = params.alpha();
    let b = params.beta();
    let s = instanton::classical_action_analytic(params).value();
    let root = (2.0 * a).sqrt();
    BlockPrediction {
        center_e: 0.75 * params.rate(),
        half_splitting: (8.0 / (3.0 * PI)).sqrt() * (2.0 * a).powf(0.75) * b.powi(4) * (-s).exp(),
        amplitude_product: 0.25 * b * (3.0 * root / PI).sqrt(),
        action: s,
    }
}

/// Least-squares slope of `ln ΔE − 4 ln β` against `β⁴` for `(β, ΔE)` pairs.
pub fn fit_splitting_slope(points: &[(f64, f64)], min_points: usize) -> Result<f64> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(b, d)| *b > 0.0 && *d > 0.0 && d.is_finite())
        .map(|&(b, d)| (b.powi(4), d.ln() - 4.0 * b.ln()))
        .collect();
    if usable.len() < min_points.max(2) {
        return Err(Error::InsufficientPoints { required: min_points.max(2), got: usable.len() });
    }
    let n = usable.len() as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / n;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = usable.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientPoints { required: 2, got: 1 });
    }
    Ok(sxy / sxx)
}

/// Slope of the closed-form splitting over a β sweep; `−√(2α)/4` at fixed α.
pub fn splitting_scaling_exponent(params_list: &[PotentialParams]) -> Result<f64> {
    let points: Vec<(f64, f64)> = params_list.iter().map(|p| (p.beta(), block_prediction(p).half_splitting)).collect();
    fit_splitting_slope(&points, 4)
}

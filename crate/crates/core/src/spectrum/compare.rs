//! Instanton predictions set against the diagonalisation oracle.

use serde::Serialize;

use super::{
    estimate_matrix_elements, lowest_levels, three_state_model, GridSpec, MatrixElements, SpectrumResult,
    ThreeStateModel,
};
use crate::dilute_gas::{block_prediction, fit_splitting_slope, BlockPrediction};
use crate::error::{Error, Result};
use crate::instanton;
use crate::potential::PotentialParams;

/// Smallest classical action accepted for a comparison.
pub const ACTION_GUARD: f64 = 3.0;

/// Kernel prefactor from the three-state model next to the dilute-gas
/// amplitude product. Their ratio is reported, not asserted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrefactorReport {
    /// `2/√(d² + 8)`, `d = (H_LL − H_CC)/|H_LC|`.
    pub kernel_weight: f64,
    /// `C₀(0)`.
    pub centre_amplitude: f64,
    /// `L₀(−β)`.
    pub left_amplitude: f64,
    /// `kernel_weight·C₀(0)·L₀(−β)`.
    pub kernel_coefficient: f64,
    /// `(β/4)(3√(2α)/π)^{1/2}`.
    pub amplitude_product: f64,
    /// `kernel_coefficient / amplitude_product`.
    pub ratio: f64,
    /// `ψ₀(0)ψ₀(−β)` of the exact ground state.
    pub oracle_ground_product: f64,
    /// `−ψ₂(0)ψ₂(−β)` of the exact third level.
    pub oracle_upper_product: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub alpha: f64,
    pub beta: f64,
    pub action: f64,
    pub prediction: BlockPrediction,
    pub oracle: SpectrumResult,
    /// Instanton over oracle block centre.
    pub center_ratio: f64,
    /// Instanton half-splitting over oracle half-width.
    pub splitting_ratio: f64,
    pub gap_ratio: f64,
    pub block_isolated: bool,
    /// Probability of level 1 inside the central basin.
    pub odd_level_central_weight: f64,
    /// `ψ₁(0)`.
    pub odd_level_at_centre: f64,
    pub matrix_elements: MatrixElements,
    pub model: ThreeStateModel,
    pub prefactor: PrefactorReport,
}

fn guard(params: &PotentialParams) -> Result<f64> {
    let action = instanton::classical_action_analytic(params).value();
    if action < ACTION_GUARD {
        return Err(Error::RegimeGuard { action, threshold: ACTION_GUARD });
    }
    Ok(action)
}

pub fn compare_with_instanton(params: &PotentialParams, grid: &GridSpec) -> Result<Comparison> {
    let action = guard(params)?;
    let oracle = lowest_levels(params, grid, 4)?;
    let prediction = block_prediction(params);
    let elements = estimate_matrix_elements(params, grid)?;
    let model = three_state_model(elements.h_ll, elements.h_cc, elements.h_lc)?;

    let (c0, l0) = elements.boundary_amplitudes(params, grid);
    let kernel_weight = model.kernel_weight();
    let kernel_coefficient = kernel_weight * c0 * l0;
    let b = params.beta();
    let prefactor = PrefactorReport {
        kernel_weight,
        centre_amplitude: c0,
        left_amplitude: l0,
        kernel_coefficient,
        amplitude_product: prediction.amplitude_product,
        ratio: kernel_coefficient / prediction.amplitude_product,
        oracle_ground_product: oracle.amplitude_at(0, 0.0) * oracle.amplitude_at(0, -b),
        oracle_upper_product: -oracle.amplitude_at(2, 0.0) * oracle.amplitude_at(2, -b),
    };

    Ok(Comparison {
        alpha: params.alpha(),
        beta: b,
        action,
        center_ratio: prediction.center_e / oracle.block_center,
        splitting_ratio: prediction.half_splitting / oracle.block_half_width,
        gap_ratio: oracle.gap_ratio(),
        block_isolated: oracle.block_isolated(),
        odd_level_central_weight: oracle.central_weight(1, params),
        odd_level_at_centre: oracle.amplitude_at(1, 0.0),
        prediction,
        oracle,
        matrix_elements: elements,
        model,
        prefactor,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub beta: f64,
    pub action: f64,
    pub prediction: BlockPrediction,
    pub oracle_center: f64,
    pub oracle_half_width: f64,
    pub splitting_ratio: f64,
    pub gap_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepComparison {
    pub rows: Vec<SweepRow>,
    /// Fitted slope of `ln ΔE − 4 ln β` against `β⁴`, oracle half-widths.
    pub oracle_slope: f64,
    /// Same fit on the instanton half-splittings.
    pub instanton_slope: f64,
}

/// Oracle block versus instanton prediction along a β sweep at fixed α,
/// each point on its default grid.
pub fn compare_sweep(alpha: f64, betas: &[f64]) -> Result<SweepComparison> {
    let mut rows = Vec::with_capacity(betas.len());
    for &beta in betas {
        let params = PotentialParams::new(alpha, beta)?;
        let action = guard(&params)?;
        let oracle = lowest_levels(&params, &GridSpec::default_for(&params), 4)?;
        let prediction = block_prediction(&params);
        rows.push(SweepRow {
            alpha,
            beta,
            action,
            splitting_ratio: prediction.half_splitting / oracle.block_half_width,
            gap_ratio: oracle.gap_ratio(),
            oracle_center: oracle.block_center,
            oracle_half_width: oracle.block_half_width,
            prediction,
        });
    }
    let oracle: Vec<(f64, f64)> = rows.iter().map(|r| (r.beta, r.oracle_half_width)).collect();
    let inst: Vec<(f64, f64)> = rows.iter().map(|r| (r.beta, r.prediction.half_splitting)).collect();
    Ok(SweepComparison {
        oracle_slope: fit_splitting_slope(&oracle, 3)?,
        instanton_slope: fit_splitting_slope(&inst, 3)?,
        rows,
    })
}

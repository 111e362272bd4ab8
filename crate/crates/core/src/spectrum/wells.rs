//! Isolated-well ground states and their matrix elements against the full
//! Hamiltonian.
//!
//! Each well is isolated by raising the potential by `10³` barrier heights
//! outside its basin; the basins are separated by the barrier tops at
//! `±β/√3`.

use serde::Serialize;

use super::{build_hamiltonian, build_with_potential, interpolate, levels_from, GridSpec};
use crate::error::{Error, Result};
use crate::potential::PotentialParams;

pub const WALL_FACTOR: f64 = 1e3;
pub const LEAKAGE_LIMIT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Well {
    Left,
    Centre,
    Right,
}

impl Well {
    fn inside(self, x: f64, edge: f64) -> bool {
        match self {
            Well::Left => x < -edge,
            Well::Centre => x.abs() <= edge,
            Well::Right => x > edge,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Well::Left => "left",
            Well::Centre => "centre",
            Well::Right => "right",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WellState {
    pub well: Well,
    /// Ground-state energy of the walled potential.
    pub energy: f64,
    /// Probability outside the basin.
    pub leakage: f64,
    /// Grid samples with `Σψ²h = 1`.
    #[serde(skip)]
    pub wavefunction: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixElements {
    pub h_ll: f64,
    pub h_cc: f64,
    pub h_lc: f64,
    pub h_rr: f64,
    /// `⟨L₀|C₀⟩`.
    pub overlap_lc: f64,
    pub left: WellState,
    pub centre: WellState,
}

impl MatrixElements {
    /// `C₀(0)·L₀(−β)`, the boundary amplitudes entering the kernel.
    pub fn boundary_amplitudes(&self, params: &PotentialParams, grid: &GridSpec) -> (f64, f64) {
        let c0 = interpolate(grid, &self.centre.wavefunction, 0.0);
        let l0 = interpolate(grid, &self.left.wavefunction, -params.beta());
        (c0, l0)
    }
}

pub fn well_ground_state(params: &PotentialParams, grid: &GridSpec, well: Well) -> Result<WellState> {
    grid.validate(params)?;
    let edge = params.beta() / 3f64.sqrt();
    let wall = WALL_FACTOR * params.geometry().barrier_height;
    let matrix = build_with_potential(grid, |x| {
        let v = params.evaluate(x);
        if well.inside(x, edge) {
            v
        } else {
            v + wall
        }
    });
    let level = levels_from(&matrix, grid, 1, false)?.remove(0);
    let h = grid.step();
    let leakage: f64 = grid
        .points()
        .iter()
        .zip(&level.wavefunction)
        .filter(|(x, _)| !well.inside(**x, edge))
        .map(|(_, psi)| psi * psi * h)
        .sum();
    if leakage > LEAKAGE_LIMIT {
        return Err(Error::LocalizationFailure { well: well.name(), leakage });
    }
    Ok(WellState { well, energy: level.energy, leakage, wavefunction: level.wavefunction })
}

pub fn estimate_matrix_elements(params: &PotentialParams, grid: &GridSpec) -> Result<MatrixElements> {
    let full = build_hamiltonian(params, grid)?;
    let left = well_ground_state(params, grid, Well::Left)?;
    let centre = well_ground_state(params, grid, Well::Centre)?;
    let right = well_ground_state(params, grid, Well::Right)?;
    let h = grid.step();
    let element = |a: &[f64], b: &[f64]| -> f64 { full.matvec(b).iter().zip(a).map(|(x, y)| x * y).sum::<f64>() * h };
    let overlap_lc = left.wavefunction.iter().zip(&centre.wavefunction).map(|(a, b)| a * b).sum::<f64>() * h;
    Ok(MatrixElements {
        h_ll: element(&left.wavefunction, &left.wavefunction),
        h_cc: element(&centre.wavefunction, &centre.wavefunction),
        h_lc: element(&left.wavefunction, &centre.wavefunction),
        h_rr: element(&right.wavefunction, &right.wavefunction),
        overlap_lc,
        left,
        centre,
    })
}

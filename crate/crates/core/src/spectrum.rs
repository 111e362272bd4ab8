//! Exact-diagonalisation oracle for the lowest levels of
//! `H = −½d²/dx² + V(x)` on a uniform symmetric grid.

pub mod compare;
pub mod eigen;
pub mod three_state;
pub mod wells;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::PotentialParams;
use crate::tridiagonal::SymTridiagonal;

pub use compare::{compare_sweep, compare_with_instanton, Comparison, PrefactorReport, SweepComparison, SweepRow};
pub use three_state::{three_state_model, ThreeStateModel};
pub use wells::{estimate_matrix_elements, MatrixElements};

pub const DEFAULT_POINTS: usize = 8001;
pub const MIN_POINTS: usize = 201;

/// Probability mass that must agree with one parity.
pub const PARITY_PURITY: f64 = 0.99;

/// Gap to the next block, in block widths, above which the lowest three
/// levels count as an isolated block.
pub const ISOLATION_RATIO: f64 = 5.0;

/// Domain `[−x_max, x_max]` sampled at `n_points` (odd) points, Dirichlet one
/// step beyond each end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub x_max: f64,
    pub n_points: usize,
}

impl GridSpec {
    /// `x_max = β + 6/√ω₂`, [`DEFAULT_POINTS`] points.
    pub fn default_for(params: &PotentialParams) -> Self {
        let g = params.geometry();
        Self { x_max: params.beta() + 6.0 / g.omega2.sqrt(), n_points: DEFAULT_POINTS }
    }

    /// Same domain with the spacing halved.
    pub fn refined(&self) -> Self {
        Self { x_max: self.x_max, n_points: 2 * self.n_points - 1 }
    }

    /// Domain doubled at the same spacing.
    pub fn widened(&self) -> Self {
        Self { x_max: 2.0 * self.x_max, n_points: 2 * self.n_points - 1 }
    }

    pub fn step(&self) -> f64 {
        self.x_max / self.centre() as f64
    }

    pub fn centre(&self) -> usize {
        (self.n_points - 1) / 2
    }

    /// `x_i = (i − centre)·h`, exactly antisymmetric about the centre.
    pub fn points(&self) -> Vec<f64> {
        let h = self.step();
        let mid = self.centre() as f64;
        (0..self.n_points).map(|i| (i as f64 - mid) * h).collect()
    }

    pub fn validate(&self, params: &PotentialParams) -> Result<()> {
        let g = params.geometry();
        if self.n_points < MIN_POINTS {
            return Err(Error::GridInvariantViolation(format!(
                "n_points = {} is below the minimum {MIN_POINTS}",
                self.n_points
            )));
        }
        if self.n_points.is_multiple_of(2) {
            return Err(Error::GridInvariantViolation(format!(
                "n_points = {} must be odd so that x = 0 is a grid point",
                self.n_points
            )));
        }
        let reach = params.beta() + 6.0 / g.omega2.sqrt();
        if !(self.x_max >= reach * (1.0 - 1e-12)) {
            return Err(Error::GridInvariantViolation(format!(
                "x_max = {} must be at least beta + 6/sqrt(omega2) = {reach}",
                self.x_max
            )));
        }
        let h_max = 0.05 / g.omega1.sqrt();
        if !(self.step() <= h_max) {
            return Err(Error::GridInvariantViolation(format!(
                "spacing {} exceeds 0.05/sqrt(omega1) = {h_max}",
                self.step()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Serialize)]
pub struct Level {
    pub energy: f64,
    pub parity: Parity,
    /// Fraction of probability on which the assigned parity holds.
    pub purity: f64,
    /// Samples on the grid, normalised so that `Σψ²h = 1`.
    #[serde(skip)]
    pub wavefunction: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumResult {
    pub grid: GridSpec,
    pub levels: Vec<Level>,
    /// `(E′₀ + E′₂)/2`.
    pub block_center: f64,
    /// `(E′₂ − E′₀)/2`.
    pub block_half_width: f64,
    /// `E′₃ − E′₂`.
    pub gap_to_next_block: f64,
}

impl SpectrumResult {
    /// Gap to the next level in units of the block width `E′₂ − E′₀`.
    pub fn gap_ratio(&self) -> f64 {
        self.gap_to_next_block / (2.0 * self.block_half_width)
    }

    pub fn block_isolated(&self) -> bool {
        self.gap_ratio() > ISOLATION_RATIO
    }

    pub fn parity_pattern(&self) -> Vec<Parity> {
        self.levels.iter().map(|l| l.parity).collect()
    }

    /// `∫ψ_j²` over `|x| < β/√3`.
    pub fn central_weight(&self, level: usize, params: &PotentialParams) -> f64 {
        let edge = params.beta() / 3f64.sqrt();
        let h = self.grid.step();
        self.grid
            .points()
            .iter()
            .zip(&self.levels[level].wavefunction)
            .filter(|(x, _)| x.abs() < edge)
            .map(|(_, psi)| psi * psi * h)
            .sum()
    }

    /// Linear interpolation of level `j`'s wavefunction at `x`.
    pub fn amplitude_at(&self, level: usize, x: f64) -> f64 {
        interpolate(&self.grid, &self.levels[level].wavefunction, x)
    }
}

pub(crate) fn interpolate(grid: &GridSpec, samples: &[f64], x: f64) -> f64 {
    let h = grid.step();
    let s = (x + grid.x_max) / h;
    if s <= 0.0 {
        return samples[0];
    }
    let i = (s.floor() as usize).min(grid.n_points - 2);
    let frac = s - i as f64;
    samples[i] * (1.0 - frac) + samples[i + 1] * frac
}

/// `H` with diagonal `1/h² + V(x_i)` and off-diagonal `−1/(2h²)`, for an
/// arbitrary potential and no grid checks.
pub fn build_with_potential<F: Fn(f64) -> f64>(grid: &GridSpec, v: F) -> SymTridiagonal {
    let h = grid.step();
    let kinetic = 1.0 / (h * h);
    let diag = grid.points().iter().map(|&x| kinetic + v(x)).collect();
    SymTridiagonal::new(diag, vec![-0.5 * kinetic; grid.n_points - 1])
}

pub fn build_hamiltonian(params: &PotentialParams, grid: &GridSpec) -> Result<SymTridiagonal> {
    grid.validate(params)?;
    Ok(build_with_potential(grid, |x| params.evaluate(x)))
}

/// `(parity, purity)`: the parity holding on the larger share of `ψ²`.
pub fn classify_parity(samples: &[f64]) -> (Parity, f64) {
    let n = samples.len();
    let mut even = 0.0;
    let mut total = 0.0;
    for i in 0..n {
        let w = samples[i] * samples[i];
        total += w;
        if samples[i] * samples[n - 1 - i] >= 0.0 {
            even += w;
        }
    }
    let even = even / total;
    if even >= 0.5 {
        (Parity::Even, even)
    } else {
        (Parity::Odd, 1.0 - even)
    }
}

/// Eigenpairs of `matrix` turned into grid wavefunctions with parity labels.
pub(crate) fn levels_from(
    matrix: &SymTridiagonal,
    grid: &GridSpec,
    k: usize,
    check_parity: bool,
) -> Result<Vec<Level>> {
    let pairs = eigen::lowest_eigenpairs(matrix, k)?;
    let scale = grid.step().sqrt().recip();
    pairs
        .into_iter()
        .enumerate()
        .map(|(j, pair)| {
            let wavefunction: Vec<f64> = pair.vector.iter().map(|x| x * scale).collect();
            let (parity, purity) = classify_parity(&pair.vector);
            if check_parity && purity < PARITY_PURITY {
                return Err(Error::ParityAmbiguous { level: j, purity });
            }
            Ok(Level { energy: pair.value, parity, purity, wavefunction })
        })
        .collect()
}

/// The `k ≥ 4` lowest levels with block statistics for levels 0–2.
pub fn lowest_levels(params: &PotentialParams, grid: &GridSpec, k: usize) -> Result<SpectrumResult> {
    if k < 4 {
        return Err(Error::InsufficientPoints { required: 4, got: k });
    }
    let matrix = build_hamiltonian(params, grid)?;
    let levels = levels_from(&matrix, grid, k, true)?;
    for w in levels.windows(2) {
        if !(w[1].energy > w[0].energy) {
            return Err(Error::EigensolverFailure(format!(
                "levels not strictly increasing: {} then {}",
                w[0].energy, w[1].energy
            )));
        }
    }
    let (e0, e2, e3) = (levels[0].energy, levels[2].energy, levels[3].energy);
    Ok(SpectrumResult {
        grid: *grid,
        block_center: 0.5 * (e0 + e2),
        block_half_width: 0.5 * (e2 - e0),
        gap_to_next_block: e3 - e2,
        levels,
    })
}

//! The symmetric triple-well potential `V(x) = α x² (x − β)² (x + β)²`.
//!
//! Units are ħ = m = 1. The three vacua sit at `x = −β, 0, +β`; the outer wells
//! are twice as stiff as the central one (`ω₁ = 2ω₂`).

use serde::Serialize;

use crate::error::{Error, Result};

/// Validated `(α, β)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialParams {
    alpha: f64,
    beta: f64,
}

impl PotentialParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        // `!(x > 0)` also rejects NaN.
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter { name: "alpha", value: alpha });
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParameter { name: "beta", value: beta });
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `β²√(2α)`: half the kink's exponential rate, and the inverse time scale
    /// that appears throughout the instanton formulas.
    pub fn rate(&self) -> f64 {
        self.beta * self.beta * (2.0 * self.alpha).sqrt()
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        evaluate(self, x)
    }

    pub fn gradient(&self, x: f64) -> f64 {
        gradient(self, x)
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        second_derivative(self, x)
    }

    pub fn geometry(&self) -> WellGeometry {
        geometry(self)
    }
}

/// Well frequencies and barrier data derived from [`PotentialParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WellGeometry {
    /// Outer-well frequency, `ω₁² = V″(±β) = 8αβ⁴`.
    pub omega1: f64,
    /// Central-well frequency, `ω₂² = V″(0) = 2αβ⁴`.
    pub omega2: f64,
    /// Arithmetic mean `(ω₁ + ω₂)/2 = (3/2)β²√(2α)`.
    pub omega_avg: f64,
    pub barrier_height: f64,
    pub barrier_positions: (f64, f64),
}

/// `α x² (x² − β²)²`, kept in factored form so the three roots are exact.
pub fn evaluate(params: &PotentialParams, x: f64) -> f64 {
    let b = params.beta;
    let outer = (x - b) * (x + b);
    params.alpha * (x * x) * (outer * outer)
}

/// `V′(x) = 2αx(3x⁴ − 4β²x² + β⁴) = 2αx(x − β)(x + β)(3x² − β²)`.
pub fn gradient(params: &PotentialParams, x: f64) -> f64 {
    let b = params.beta;
    2.0 * params.alpha * x * ((x - b) * (x + b)) * (3.0 * x * x - b * b)
}

/// `V″(x) = 2α(15x⁴ − 12β²x² + β⁴)`.
pub fn second_derivative(params: &PotentialParams, x: f64) -> f64 {
    let b2 = params.beta * params.beta;
    let x2 = x * x;
    2.0 * params.alpha * (15.0 * x2 * x2 - 12.0 * b2 * x2 + b2 * b2)
}

pub fn geometry(params: &PotentialParams) -> WellGeometry {
    let b = params.beta;
    let b2 = b * b;
    let root = (2.0 * params.alpha).sqrt();
    let omega2 = b2 * root;
    let omega1 = 2.0 * omega2;
    let x_top = b / 3f64.sqrt();
    WellGeometry {
        omega1,
        omega2,
        omega_avg: 0.5 * (omega1 + omega2),
        barrier_height: 4.0 * params.alpha * b2 * b2 * b2 / 27.0,
        barrier_positions: (-x_top, x_top),
    }
}

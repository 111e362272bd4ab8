//! Gaussian fluctuations about one instanton: the fluctuation operator
//! `M̂ = −½ d²/dτ² + αY(τ)`, the change-of-variables determinant, the zero-mode
//! stripped factor `I₀`, the boundary eigenvalue `ε₀`, and the one-instanton
//! amplitude.
//!
//! All times are half-interval times: the propagator spans `[−T, T]`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instanton::{self, logistic_pair, InstantonSolution};
use crate::potential::PotentialParams;
use crate::quadrature::{self, QuadratureOptions};

/// Upper bound on `β²√(2α)·T`.
pub const SAFE_SCALED_TIME: f64 = 300.0;

/// Relative bound on the discrete zero-mode residual accepted by
/// [`apply_fluctuation_operator`].
pub const ZERO_MODE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluctuationReport {
    /// Half-interval.
    pub t: f64,
    /// Gaussian factor after the collective-coordinate replacement,
    /// `I(T) = 2T√S_E·I₀`.
    pub i_t: f64,
    /// Zero-mode-stripped factor `I₀` (closed form).
    pub i0: f64,
    /// `I₀` rebuilt from the quadrature determinant as `I_cv·√(ε₀/π)`.
    pub i0_from_determinant: f64,
    /// Change-of-variables determinant factor, zero mode included.
    pub determinant_factor: f64,
    pub epsilon0: f64,
    pub kappa: f64,
    pub omega_avg: f64,
    pub action: f64,
}

/// Uniform grid `lo = τ_0 < … < τ_{n−1} = hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformGrid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl UniformGrid {
    pub fn new(lo: f64, hi: f64, n: usize) -> Self {
        assert!(n >= 3 && hi > lo, "grid needs at least three points on a proper interval");
        Self { lo, hi, n }
    }

    /// Symmetric grid on `[−t, t]` with spacing close to `step`.
    pub fn symmetric(t: f64, step: f64) -> Self {
        let half = (t / step).ceil().max(1.0) as usize;
        Self::new(-t, t, 2 * half + 1)
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.hi
        } else {
            self.lo + i as f64 * self.step()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }
}

fn check_window(params: &PotentialParams, t: f64) -> Result<()> {
    let scaled = params.rate() * t;
    if !(scaled > 0.0 && scaled <= SAFE_SCALED_TIME) {
        return Err(Error::OverflowRisk { scaled_time: scaled, limit: SAFE_SCALED_TIME });
    }
    Ok(())
}

fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// `Y(τ) = 15φ⁴ − 12β²φ² + β⁴` along the instanton centred at 0.
pub fn curvature_profile(params: &PotentialParams, tau: f64) -> f64 {
    let (p, _) = logistic_pair(2.0 * params.rate() * tau);
    let b2 = params.beta() * params.beta();
    // φ² = β²p
    b2 * b2 * (15.0 * p * p - 12.0 * p + 1.0)
}

/// Max-norm of the discretised `M̂N` on `grid` and the scale `max|αY·N|`
/// it is measured against.
pub fn zero_mode_residual(params: &PotentialParams, grid: &UniformGrid) -> (f64, f64) {
    let sol = InstantonSolution::new(*params);
    let n_samples: Vec<f64> = grid.points().iter().map(|&t| sol.velocity(t)).collect();
    let applied = stencil(params, &n_samples, grid);
    let residual = applied.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = grid
        .points()
        .iter()
        .zip(&n_samples)
        .fold(0.0f64, |m, (&t, &n)| m.max((params.alpha() * curvature_profile(params, t) * n).abs()));
    (residual, scale)
}

fn stencil(params: &PotentialParams, f: &[f64], grid: &UniformGrid) -> Vec<f64> {
    let h = grid.step();
    let inv = 0.5 / (h * h);
    let alpha = params.alpha();
    let mut out = vec![0.0; f.len()];
    for i in 1..f.len() - 1 {
        let t = grid.point(i);
        out[i] = -inv * (f[i + 1] - 2.0 * f[i] + f[i - 1]) + alpha * curvature_profile(params, t) * f[i];
    }
    out
}

/// Applies `−½d²/dτ² + αY(τ)` with the second-order central stencil. The
/// end samples are Dirichlet data (`η(±T)`); the returned end values are 0.
/// Rejects grids on which the known zero mode is not annihilated to
/// [`ZERO_MODE_TOLERANCE`].
pub fn apply_fluctuation_operator(params: &PotentialParams, f: &[f64], grid: &UniformGrid) -> Result<Vec<f64>> {
    assert_eq!(f.len(), grid.n, "sample count must match the grid");
    let (residual, scale) = zero_mode_residual(params, grid);
    let bound = ZERO_MODE_TOLERANCE * scale;
    if residual > bound {
        return Err(Error::GridTooCoarse { residual, bound });
    }
    Ok(stencil(params, f, grid))
}

/// `ln I(T)` from `I(T) = (2π N(T)N(−T) ∫_{−T}^{T} dτ/N²)^{−1/2}`.
///
/// `1/N²` grows like `e^{4cτ}` towards `−T` (`c = β²√(2α)`), so each half of
/// the integral is evaluated with its endpoint growth factored out and the
/// result is assembled in log space.
pub fn ln_gaussian_factor(params: &PotentialParams, t: f64) -> Result<f64> {
    check_window(params, t)?;
    let c = params.rate();
    let cb = c * params.beta();
    let ln_n = |tau: f64| {
        let z = 2.0 * c * tau;
        cb.ln() - softplus(-z) - 0.5 * softplus(z)
    };

    // 1/N² = (1 + e^z)³ e^{−2z} / (cβ)²,  z = 2cτ
    let opts = QuadratureOptions { abs_tol: 1e-15 / c, rel_tol: 1e-13, ..Default::default() };
    let left = quadrature::integrate(|tau| (3.0 * softplus(2.0 * c * tau) - 4.0 * c * (tau + t)).exp(), -t, 0.0, opts)?;
    let right =
        quadrature::integrate(|tau| (3.0 * softplus(2.0 * c * tau) - 4.0 * c * tau - 2.0 * c * t).exp(), 0.0, t, opts)?;
    let ln_integral = -2.0 * cb.ln() + 4.0 * c * t + (left.value + right.value * (-2.0 * c * t).exp()).ln();

    Ok(-0.5 * ((2.0 * PI).ln() + ln_n(t) + ln_n(-t) + ln_integral))
}

pub fn gaussian_factor(params: &PotentialParams, t: f64) -> Result<f64> {
    ln_gaussian_factor(params, t).map(f64::exp)
}

/// Large-`T` form `β(2√(2α)/π)^{1/2} e^{−β²√(2α)T/2}`, in log space.
pub fn ln_gaussian_factor_asymptotic(params: &PotentialParams, t: f64) -> f64 {
    let root = (2.0 * params.alpha()).sqrt();
    params.beta().ln() + 0.5 * (2.0 * root / PI).ln() - 0.5 * params.rate() * t
}

pub fn gaussian_factor_asymptotic(params: &PotentialParams, t: f64) -> f64 {
    ln_gaussian_factor_asymptotic(params, t).exp()
}

/// `ln ε₀ = ln(8αβ⁴) − 2β²√(2α)T`.
pub fn ln_boundary_eigenvalue(params: &PotentialParams, t: f64) -> f64 {
    let b2 = params.beta() * params.beta();
    (8.0 * params.alpha() * b2 * b2).ln() - 2.0 * params.rate() * t
}

/// Lowest Dirichlet eigenvalue of `M̂` on `[−T, T]` at large `T`,
/// `ε₀ = 8αβ⁴ e^{−2β²√(2α)T}`.
pub fn boundary_eigenvalue(params: &PotentialParams, t: f64) -> f64 {
    ln_boundary_eigenvalue(params, t).exp()
}

pub fn ln_stripped_factor(params: &PotentialParams, t: f64) -> f64 {
    let a = params.alpha();
    let b = params.beta();
    (4.0 * b * b * b / PI).ln() + 0.5 * (a * (2.0 * a).sqrt()).ln() - 1.5 * params.rate() * t
}

/// `I₀ = (4β³/π)(α√(2α))^{1/2} e^{−(3/2)β²√(2α)T}`.
pub fn stripped_factor(params: &PotentialParams, t: f64) -> f64 {
    ln_stripped_factor(params, t).exp()
}

/// The same `I₀` written through the boundary eigenvalue,
/// `(β/π)(2√(2α)ε₀)^{1/2} e^{−β²√(2α)T/2}`.
pub fn stripped_factor_from_eigenvalue(params: &PotentialParams, t: f64) -> f64 {
    let root = (2.0 * params.alpha()).sqrt();
    let ln = (params.beta() / PI).ln() + 0.5 * ((2.0 * root).ln() + ln_boundary_eigenvalue(params, t))
        - 0.5 * params.rate() * t;
    ln.exp()
}

/// `I₀` from the quadrature determinant: removing the zero-mode factor
/// `√(π/ε₀)` from `I_cv(T)`.
pub fn stripped_factor_from_determinant(params: &PotentialParams, t: f64) -> Result<f64> {
    let ln = ln_gaussian_factor(params, t)? + 0.5 * (ln_boundary_eigenvalue(params, t) - PI.ln());
    Ok(ln.exp())
}

/// `κ = 4β²√(2α/(3π))`.
pub fn instanton_density(params: &PotentialParams) -> f64 {
    let b = params.beta();
    4.0 * b * b * (2.0 * params.alpha() / (3.0 * PI)).sqrt()
}

/// Gaussian factor after the collective-coordinate replacement,
/// `I(T) = 2T√S_E·I₀ = (8/π)β³T√S_E(α√(2α))^{1/2}e^{−(3/2)β²√(2α)T}`.
pub fn collective_gaussian_factor(params: &PotentialParams, t: f64) -> f64 {
    let s = instanton::classical_action_analytic(params).value();
    2.0 * t * s.sqrt() * stripped_factor(params, t)
}

/// `2κT√S_E·√(ω/π)·e^{−S_E}·e^{−ωT}` with `ω = (ω₁ + ω₂)/2`.
pub fn one_instanton_amplitude(params: &PotentialParams, t: f64) -> f64 {
    let s = instanton::classical_action_analytic(params).value();
    let omega = params.geometry().omega_avg;
    let ln = (2.0 * instanton_density(params) * t * s.sqrt()).ln() + 0.5 * (omega / PI).ln() - s - omega * t;
    ln.exp()
}

pub fn fluctuation_report(params: &PotentialParams, t: f64) -> Result<FluctuationReport> {
    let determinant = ln_gaussian_factor(params, t)?;
    Ok(FluctuationReport {
        t,
        i_t: collective_gaussian_factor(params, t),
        i0: stripped_factor(params, t),
        i0_from_determinant: stripped_factor_from_determinant(params, t)?,
        determinant_factor: determinant.exp(),
        epsilon0: boundary_eigenvalue(params, t),
        kappa: instanton_density(params),
        omega_avg: params.geometry().omega_avg,
        action: instanton::classical_action_analytic(params).value(),
    })
}

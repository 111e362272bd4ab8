//! The Euclidean kink joining the left vacuum `−β` to the central vacuum `0`.
//!
//! With `z = 2β²√(2α)(τ − τ₀)` the instanton is `φ = −β/√(1 + e^z)`. Every
//! quantity here is written through the two logistic weights
//! `p = 1/(1 + e^z)` and `q = e^z/(1 + e^z)`, which stay in `[0, 1]` for any
//! `z` and make the far tails underflow towards the correct vacuum.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{self, PotentialParams};
use crate::quadrature::{self, QuadratureOptions};

pub mod relax;

pub use relax::{solve_bvp_numeric, InitialGuess, RelaxationOptions, SampledPath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `−β → 0` as τ increases.
    Instanton,
    /// `0 → −β`, the time reflection of the instanton about `τ₀`.
    AntiInstanton,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InstantonSolution {
    pub params: PotentialParams,
    pub tau0: f64,
    pub orientation: Orientation,
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct ActionValue(pub f64);

impl ActionValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Returns `(p, q) = (1/(1+e^z), e^z/(1+e^z))` without overflow.
pub(crate) fn logistic_pair(z: f64) -> (f64, f64) {
    if z >= 0.0 {
        let e = (-z).exp();
        let s = 1.0 + e;
        (e / s, 1.0 / s)
    } else {
        let e = z.exp();
        let s = 1.0 + e;
        (1.0 / s, e / s)
    }
}

impl InstantonSolution {
    /// Instanton centred at `τ₀ = 0`.
    pub fn new(params: PotentialParams) -> Self {
        Self { params, tau0: 0.0, orientation: Orientation::Instanton }
    }

    pub fn centered_at(params: PotentialParams, tau0: f64) -> Self {
        Self { params, tau0, orientation: Orientation::Instanton }
    }

    pub fn anti(params: PotentialParams, tau0: f64) -> Self {
        Self { params, tau0, orientation: Orientation::AntiInstanton }
    }

    /// Signed time offset seen by the canonical (τ₀ = 0) instanton.
    fn local_time(&self, tau: f64) -> f64 {
        match self.orientation {
            Orientation::Instanton => tau - self.tau0,
            Orientation::AntiInstanton => self.tau0 - tau,
        }
    }

    fn weights(&self, tau: f64) -> (f64, f64) {
        logistic_pair(2.0 * self.params.rate() * self.local_time(tau))
    }

    pub fn phi(&self, tau: f64) -> f64 {
        phi_cl(self, tau)
    }

    pub fn velocity(&self, tau: f64) -> f64 {
        zero_mode(self, tau)
    }

    /// Closed-form `φ̈_cl`; identical for both orientations.
    pub fn acceleration(&self, tau: f64) -> f64 {
        let (p, q) = self.weights(tau);
        let b = self.params.beta();
        let c = self.params.rate();
        c * c * b * q * p.sqrt() * (2.0 * p - q)
    }
}

pub fn phi_cl(sol: &InstantonSolution, tau: f64) -> f64 {
    let (p, _) = sol.weights(tau);
    -sol.params.beta() * p.sqrt()
}

/// `N(τ) = φ̇_cl(τ)`, the translation zero mode. Positive for the instanton,
/// negative for the anti-instanton.
pub fn zero_mode(sol: &InstantonSolution, tau: f64) -> f64 {
    let (p, q) = sol.weights(tau);
    let n = sol.params.rate() * sol.params.beta() * q * p.sqrt();
    match sol.orientation {
        Orientation::Instanton => n,
        Orientation::AntiInstanton => -n,
    }
}

/// `S_E = √(2α)β⁴/4`.
pub fn classical_action_analytic(params: &PotentialParams) -> ActionValue {
    let b2 = params.beta() * params.beta();
    ActionValue((2.0 * params.alpha()).sqrt() * b2 * b2 / 4.0)
}

/// Smallest admissible half-interval for the action quadrature.
pub fn minimum_interval(params: &PotentialParams) -> f64 {
    20.0 / params.rate()
}

/// `∫_{−T}^{T} (½φ̇² + V(φ)) dτ`, split at the kink centre.
pub fn classical_action_quadrature(sol: &InstantonSolution, t: f64) -> Result<ActionValue> {
    let min = minimum_interval(&sol.params);
    if !(t >= min) {
        return Err(Error::TooShortInterval { t, min });
    }
    let lagrangian = |tau: f64| {
        let v = sol.velocity(tau);
        0.5 * v * v + potential::evaluate(&sol.params, sol.phi(tau))
    };
    let opts = QuadratureOptions { abs_tol: 5e-11, rel_tol: 1e-13, ..Default::default() };
    let split = sol.tau0.clamp(-t, t);
    let left = quadrature::integrate(lagrangian, -t, split, opts)?;
    let right = quadrature::integrate(lagrangian, split, t, opts)?;
    Ok(ActionValue(left.value + right.value))
}

/// `φ̈_cl − V′(φ_cl)` at `τ`.
pub fn eom_residual(sol: &InstantonSolution, tau: f64) -> f64 {
    sol.acceleration(tau) - potential::gradient(&sol.params, sol.phi(tau))
}

/// `½φ̇² − V(φ)`; vanishes on a zero-energy Euclidean trajectory.
pub fn first_integral(sol: &InstantonSolution, tau: f64) -> f64 {
    let v = sol.velocity(tau);
    0.5 * v * v - potential::evaluate(&sol.params, sol.phi(tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn p(alpha: f64, beta: f64) -> PotentialParams {
        PotentialParams::new(alpha, beta).unwrap()
    }

    #[test]
    fn kink_center_and_tails() {
        let sol = InstantonSolution::new(p(1.0, 1.0));
        assert_relative_eq!(sol.phi(0.0), -1.0 / 2f64.sqrt(), max_relative = 1e-15);
        assert!((sol.phi(-50.0) + 1.0).abs() < 1e-20);
        assert!(sol.phi(50.0).abs() < 1e-20);
    }

    #[test]
    fn extreme_times_stay_in_the_right_vacuum() {
        let q = p(1.0, 3.0);
        let sol = InstantonSolution::new(q);
        let far = 1e4 / q.rate();
        assert_eq!(sol.phi(-far), -3.0);
        assert!(sol.phi(far) <= 0.0 && sol.phi(far) > -1e-300);
        assert!(sol.velocity(far).is_finite() && sol.velocity(-far).is_finite());
    }

    #[test]
    fn zero_mode_at_center() {
        let sol = InstantonSolution::new(p(0.5, 1.0));
        assert_relative_eq!(sol.velocity(0.0), 2f64.powf(-1.5), max_relative = 1e-15);
        assert!(sol.velocity(60.0) < 1e-20 && sol.velocity(-60.0) < 1e-20);
    }

    #[test]
    fn analytic_action_examples() {
        assert_relative_eq!(classical_action_analytic(&p(2.0, 1.0)).0, 0.5, max_relative = 1e-15);
        assert_relative_eq!(classical_action_analytic(&p(1.0, 2.0)).0, 4.0 * 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(classical_action_analytic(&p(0.5, 1.0)).0, 0.25, max_relative = 1e-15);
    }

    #[test]
    fn quadrature_action_examples() {
        let s = classical_action_quadrature(&InstantonSolution::new(p(2.0, 1.0)), 30.0).unwrap();
        assert!((s.0 - 0.5).abs() < 1e-8);
        let s = classical_action_quadrature(&InstantonSolution::new(p(1.0, 2.0)), 10.0).unwrap();
        assert!((s.0 - 5.656_854_249_492_381).abs() < 1e-7);
        assert!(matches!(
            classical_action_quadrature(&InstantonSolution::new(p(1.0, 1.0)), 0.1),
            Err(Error::TooShortInterval { .. })
        ));
    }

    #[test]
    fn action_independent_of_center() {
        let q = p(1.3, 1.1);
        let t = 40.0 / q.rate();
        let a = classical_action_quadrature(&InstantonSolution::centered_at(q, 0.0), t).unwrap();
        let b = classical_action_quadrature(&InstantonSolution::centered_at(q, 3.0 / q.rate()), t).unwrap();
        assert!((a.0 - b.0).abs() < 1e-10);
    }

    #[test]
    fn eom_residual_examples() {
        let sol = InstantonSolution::new(p(1.0, 1.0));
        assert!(eom_residual(&sol, 0.0).abs() < 1e-12);
        let q = p(3.0, 2.0);
        let sol = InstantonSolution::new(q);
        assert!(eom_residual(&sol, 1.7).abs() < 1e-10 * 3.0 * 32.0);
    }

    #[test]
    fn perturbed_path_is_not_a_solution() {
        // φ_cl + 0.01 sech τ, differentiated by central differences
        let q = p(1.0, 1.0);
        let sol = InstantonSolution::new(q);
        let path = |t: f64| sol.phi(t) + 0.01 / t.cosh();
        let h = 1e-4;
        let worst = (-20..=20)
            .map(|i| i as f64 * 0.25)
            .map(|t| {
                let acc = (path(t + h) - 2.0 * path(t) + path(t - h)) / (h * h);
                (acc - potential::gradient(&q, path(t))).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst > 1e-3, "residual {worst}");
    }

    #[test]
    fn velocity_matches_finite_difference() {
        let sol = InstantonSolution::new(p(1.0, 1.0));
        let h = 1e-5;
        for i in -8..=8 {
            let t = i as f64 * 0.3;
            let fd = (sol.phi(t + h) - sol.phi(t - h)) / (2.0 * h);
            assert_relative_eq!(fd, sol.velocity(t), max_relative = 1e-6);
        }
    }

    #[test]
    fn anti_instanton_is_time_reflection() {
        let q = p(0.7, 1.4);
        let inst = InstantonSolution::centered_at(q, 0.5);
        let anti = InstantonSolution::anti(q, 0.5);
        for i in -10..=10 {
            let s = i as f64 * 0.2;
            assert_relative_eq!(anti.phi(0.5 + s), inst.phi(0.5 - s), max_relative = 1e-14);
            assert_relative_eq!(anti.velocity(0.5 + s), -inst.velocity(0.5 - s), max_relative = 1e-14);
            assert!(eom_residual(&anti, 0.5 + s).abs() < 1e-12);
        }
        assert!(anti.phi(-40.0).abs() < 1e-12);
        assert!((anti.phi(40.0) + 1.4).abs() < 1e-12);
    }

    #[test]
    fn zero_mode_norm_equals_action() {
        let q = p(1.0, 1.5);
        let sol = InstantonSolution::new(q);
        let t = 30.0 / q.rate();
        let norm =
            quadrature::integrate(|x| sol.velocity(x).powi(2), -t, t, QuadratureOptions::default()).unwrap().value;
        assert_relative_eq!(norm, classical_action_analytic(&q).0, max_relative = 1e-8);
    }

    proptest! {
        #[test]
        fn first_integral_vanishes(a in 0.1f64..5.0, b in 0.5f64..2.5, s in -15.0f64..15.0) {
            let q = p(a, b);
            let sol = InstantonSolution::new(q);
            let tau = s / q.rate();
            // relative to the energy scale of the crossing (the barrier height)
            let scale = q.geometry().barrier_height;
            prop_assert!((first_integral(&sol, tau) / scale).abs() < 1e-10);
        }

        #[test]
        fn monotone_increasing(a in 0.1f64..5.0, b in 0.5f64..2.5, s in -10.0f64..10.0) {
            let q = p(a, b);
            let sol = InstantonSolution::new(q);
            let tau = s / q.rate();
            let dt = 0.01 / q.rate();
            prop_assert!(sol.phi(tau + dt) > sol.phi(tau));
        }

        #[test]
        fn translation_covariance(a in 0.1f64..5.0, b in 0.5f64..2.5, t0 in -3.0f64..3.0, s in -5.0f64..5.0) {
            let q = p(a, b);
            let shifted = InstantonSolution::centered_at(q, t0);
            let base = InstantonSolution::new(q);
            let tau = t0 + s;
            prop_assert_eq!(shifted.phi(tau), base.phi(tau - t0));
            prop_assert_eq!(shifted.velocity(tau), base.velocity(tau - t0));
        }

        #[test]
        fn eom_residual_is_roundoff(a in 0.1f64..5.0, b in 0.5f64..2.5, s in -20.0f64..20.0) {
            let q = p(a, b);
            let sol = InstantonSolution::new(q);
            let scale = a * b.powi(5);
            prop_assert!(eom_residual(&sol, s / q.rate()).abs() < 1e-12 * scale);
        }
    }
}

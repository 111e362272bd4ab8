//! Variational model of the lowest block in the basis of isolated-well ground
//! states `|L₀⟩, |C₀⟩, |R₀⟩`, assuming `H_LL = H_RR` and no direct
//! outer-to-outer coupling.

use std::f64::consts::SQRT_2;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThreeStateModel {
    pub h_ll: f64,
    pub h_cc: f64,
    pub h_lc: f64,
    pub a_plus: f64,
    pub a_minus: f64,
    pub e0p: f64,
    pub e1p: f64,
    pub e2p: f64,
}

impl ThreeStateModel {
    /// `(H_LL − H_CC)/|H_LC|`.
    pub fn detuning(&self) -> f64 {
        (self.h_ll - self.h_cc) / self.h_lc.abs()
    }

    /// Coefficients on `(L₀, C₀, R₀)` of the three model states, unnormalised.
    pub fn coefficient_vectors(&self) -> [[f64; 3]; 3] {
        [[1.0, self.a_plus, 1.0], [1.0, 0.0, -1.0], [1.0, -self.a_minus, 1.0]]
    }

    /// Weight `2a/(2 + a²)` carried by the lowest and highest states in the
    /// centre-to-outer-well kernel; equal for `a₊` and `a₋`.
    pub fn kernel_weight(&self) -> f64 {
        2.0 * self.a_plus / (2.0 + self.a_plus * self.a_plus)
    }
}

pub fn three_state_model(h_ll: f64, h_cc: f64, h_lc: f64) -> Result<ThreeStateModel> {
    if h_lc == 0.0 || !h_lc.is_finite() {
        return Err(Error::DegenerateCoupling);
    }
    let g = h_lc.abs();
    let d = (h_ll - h_cc) / g;
    let root = (d * d + 8.0).sqrt();
    // a₊ = (d + root)/2 loses digits for large negative d; use a₊a₋ = 2
    let (a_plus, a_minus) = if d == 0.0 {
        (SQRT_2, SQRT_2)
    } else if d > 0.0 {
        let ap = 0.5 * (d + root);
        (ap, 2.0 / ap)
    } else {
        let am = 0.5 * (-d + root);
        (2.0 / am, am)
    };
    let e0p = (2.0 * h_ll + a_plus * a_plus * h_cc - 4.0 * a_plus * g) / (2.0 + a_plus * a_plus);
    let e1p = h_ll;
    let e2p = (2.0 * h_ll + a_minus * a_minus * h_cc + 4.0 * a_minus * g) / (2.0 + a_minus * a_minus);
    debug_assert!(e0p <= e1p && e1p <= e2p, "model ordering {e0p} {e1p} {e2p}");
    Ok(ThreeStateModel { h_ll, h_cc, h_lc, a_plus, a_minus, e0p, e1p, e2p })
}

//! Forward and inverse tomographic transforms, closed-form tomograms of the
//! benchmark states and sign-binned probabilities.
//!
//! A homodyne setting at angle `θ` measures `X = q cos θ + p sin θ`; the
//! general symplectic setting measures `X = μ q + ν p`. Closed forms use the
//! quadrature scale of the state they describe (see [`crate::states`]).

mod closed_form;
mod inverse;
mod pair_coherent;
mod quadrant;
mod radon;
mod single_mode;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::output::CsvTable;

pub use closed_form::{
    sign_binned_closed_form, sign_binned_closed_form_with, tomogram_closed_form, tomogram_fn,
    ClosedFormOptions, GaussianTomogramParams, TomogramFn,
};
pub use inverse::{
    inverse_fourier_wigner, kernel_reconstruct_density, InverseFourierConfig, KernelConfig,
    KernelReconstruction, SampledTomogram, WignerReconstruction,
};
pub use pair_coherent::{
    pair_coherent_integral_direct, pair_coherent_integral_series, pair_coherent_probs, SeriesSum,
    MIN_DIRECT_ORDER,
};
pub use quadrant::{sign_binned_numeric, QuadrantConfig};
pub use radon::{radon_forward, radon_forward_symplectic, RadonConfig, RadonProjector};
pub use single_mode::SingleModeState;

/// Tolerance on `Σ w = 1` for probabilities built from closed forms.
pub const PROBS_SUM_TOL: f64 = 1e-9;

/// Largest deviation of `Σ w` from one accepted from numerical quadrature.
pub const NUMERIC_SUM_TOL: f64 = 1e-6;

/// Measured quadrature `X = μ q + ν p` of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplecticSetting {
    pub mu: f64,
    pub nu: f64,
}

impl SymplecticSetting {
    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        if !(mu.is_finite() && nu.is_finite()) || (mu == 0.0 && nu == 0.0) {
            return Err(Error::domain(format!(
                "symplectic setting (mu, nu) = ({mu}, {nu}) is degenerate"
            )));
        }
        Ok(SymplecticSetting { mu, nu })
    }

    /// Homodyne setting `μ = cos θ`, `ν = sin θ`.
    pub fn homodyne(theta: f64) -> Self {
        SymplecticSetting {
            mu: theta.cos(),
            nu: theta.sin(),
        }
    }

    pub fn radius(&self) -> f64 {
        self.mu.hypot(self.nu)
    }

    pub fn angle(&self) -> f64 {
        self.nu.atan2(self.mu)
    }
}

/// The four sign-binned probabilities at homodyne angles `(θ1, θ2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignBinnedProbs {
    pub theta1: f64,
    pub theta2: f64,
    pub w_pp: f64,
    pub w_pm: f64,
    pub w_mp: f64,
    pub w_mm: f64,
}

impl SignBinnedProbs {
    /// Checks each entry lies in `[0, 1]` and the sum is one within
    /// [`PROBS_SUM_TOL`].
    pub fn new(theta1: f64, theta2: f64, w: [f64; 4]) -> Result<Self> {
        Self::with_tolerance(theta1, theta2, w, PROBS_SUM_TOL)
    }

    pub(crate) fn with_tolerance(theta1: f64, theta2: f64, w: [f64; 4], tol: f64) -> Result<Self> {
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("sign-binned probabilities {w:?}")));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::Normalization {
                sum,
                deviation: sum - 1.0,
            });
        }
        if w.iter().any(|&v| !(-tol..=1.0 + tol).contains(&v)) {
            return Err(Error::domain(format!("probability outside [0, 1]: {w:?}")));
        }
        Ok(SignBinnedProbs {
            theta1,
            theta2,
            w_pp: w[0],
            w_pm: w[1],
            w_mp: w[2],
            w_mm: w[3],
        })
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.w_pp, self.w_pm, self.w_mp, self.w_mm]
    }

    pub fn sum(&self) -> f64 {
        self.as_array().iter().sum()
    }

    /// `w++ - w+- - w-+ + w--`.
    pub fn correlation(&self) -> f64 {
        self.w_pp - self.w_pm - self.w_mp + self.w_mm
    }
}

/// CSV with columns `theta1, theta2, w_pp, w_pm, w_mp, w_mm`.
pub fn probs_csv(rows: &[SignBinnedProbs]) -> String {
    let mut t = CsvTable::new(["theta1", "theta2", "w_pp", "w_pm", "w_mp", "w_mm"]);
    for p in rows {
        t.push_floats(&[p.theta1, p.theta2, p.w_pp, p.w_pm, p.w_mp, p.w_mm]);
    }
    t.to_csv_string()
}

//! CHSH tests on sign-binned homodyne data and on pseudospin observables,
//! with Bell-angle optimization.

mod optimize;
mod pseudospin;

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::output::{fmt_g, CsvTable, CSV_DIGITS};
use crate::states::TwoModeState;
use crate::tomography::{sign_binned_closed_form, SignBinnedProbs, NUMERIC_SUM_TOL};

pub use optimize::{maximize_chsh, ChshOptimum, OptimizerConfig};
pub use pseudospin::{
    closed_form_correlation, correlation_pseudospin, fock_correlation,
    pair_coherent_coefficient_closed_form, pseudospin_discrepancy, pseudospin_matrices,
    CoplanarCorrelation, PseudospinDiscrepancy, PseudospinOps, PseudospinSettings, UnitVector,
    DISCREPANCY_TOL,
};

/// `|E(a, b) + E(a, b') + E(a', b) - E(a', b')|` from
/// `[E(a, b), E(a, b'), E(a', b), E(a', b')]`.
pub fn chsh(e: [f64; 4]) -> f64 {
    (e[0] + e[1] + e[2] - e[3]).abs()
}

/// `E = w++ - w+- - w-+ + w--`.
pub fn correlation_tomographic(probs: &SignBinnedProbs) -> Result<f64> {
    let sum = probs.sum();
    if !sum.is_finite() || (sum - 1.0).abs() > NUMERIC_SUM_TOL {
        return Err(Error::Normalization {
            sum,
            deviation: sum - 1.0,
        });
    }
    Ok(probs.correlation())
}

/// Tomographic correlation of a benchmark state from its closed-form
/// sign-binned probabilities.
pub fn tomographic_correlation(state: &TwoModeState, theta1: f64, theta2: f64) -> Result<f64> {
    correlation_tomographic(&sign_binned_closed_form(state, theta1, theta2)?)
}

/// Homodyne angles of a CHSH test: `(θ1, θ1')` on mode 1, `(θ2, θ2')` on
/// mode 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellAnglesQuadrature {
    pub theta1: f64,
    pub theta1p: f64,
    pub theta2: f64,
    pub theta2p: f64,
}

impl BellAnglesQuadrature {
    pub fn new(theta1: f64, theta1p: f64, theta2: f64, theta2p: f64) -> Result<Self> {
        let a = BellAnglesQuadrature {
            theta1,
            theta1p,
            theta2,
            theta2p,
        };
        if a.as_array().iter().any(|v| !v.is_finite()) {
            return Err(Error::domain(format!("Bell angles must be finite: {a:?}")));
        }
        Ok(a)
    }

    /// Settings of the pair-coherent B(r) figure: labels
    /// `(θ_u, θ_v, θ_u', θ_v')` read as `(θ1, θ2, θ1', θ2')`.
    pub fn pair_coherent_figure() -> Self {
        BellAnglesQuadrature {
            theta1: PI / 2.0,
            theta2: -PI / 4.0,
            theta1p: 0.0,
            theta2p: -3.0 * PI / 4.0,
        }
    }

    /// `[θ1, θ1', θ2, θ2']`.
    pub fn as_array(&self) -> [f64; 4] {
        [self.theta1, self.theta1p, self.theta2, self.theta2p]
    }

    /// Angles reduced to `[0, 2π)`.
    pub fn reduced(&self) -> Self {
        let r = |v: f64| v.rem_euclid(TAU);
        BellAnglesQuadrature {
            theta1: r(self.theta1),
            theta1p: r(self.theta1p),
            theta2: r(self.theta2),
            theta2p: r(self.theta2p),
        }
    }

    /// The four setting pairs in CHSH order.
    pub fn settings(&self) -> [(f64, f64); 4] {
        [
            (self.theta1, self.theta2),
            (self.theta1, self.theta2p),
            (self.theta1p, self.theta2),
            (self.theta1p, self.theta2p),
        ]
    }

    /// CHSH value of a correlation function `E(θ1, θ2)`.
    pub fn chsh_of<F: Fn(f64, f64) -> f64>(&self, e: F) -> f64 {
        let s = self.settings();
        chsh([
            e(s[0].0, s[0].1),
            e(s[1].0, s[1].1),
            e(s[2].0, s[2].1),
            e(s[3].0, s[3].1),
        ])
    }

    /// CHSH value of a fallible correlation function.
    pub fn try_chsh_of<F: Fn(f64, f64) -> Result<f64>>(&self, e: F) -> Result<f64> {
        let s = self.settings();
        Ok(chsh([
            e(s[0].0, s[0].1)?,
            e(s[1].0, s[1].1)?,
            e(s[2].0, s[2].1)?,
            e(s[3].0, s[3].1)?,
        ]))
    }
}

/// Tomographic CHSH value of a benchmark state.
pub fn tomographic_chsh(state: &TwoModeState, angles: &BellAnglesQuadrature) -> Result<f64> {
    angles.try_chsh_of(|a, b| tomographic_correlation(state, a, b))
}

/// One row of a Bell scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellScanRow {
    pub parameter: f64,
    pub angles: BellAnglesQuadrature,
    pub b: f64,
}

/// CSV with columns `parameter, theta1, theta1p, theta2, theta2p, B`.
pub fn bell_scan_csv(rows: &[BellScanRow]) -> String {
    let mut t = CsvTable::new(["parameter", "theta1", "theta1p", "theta2", "theta2p", "B"]);
    for r in rows {
        let a = r.angles;
        t.push_floats(&[r.parameter, a.theta1, a.theta1p, a.theta2, a.theta2p, r.b]);
    }
    t.to_csv_string()
}

/// `{max_B, argmax_angles, method}` summary of a scan or optimization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellSummary {
    #[serde(rename = "max_B")]
    pub max_b: f64,
    pub argmax_angles: BellAnglesQuadrature,
    pub method: String,
    /// Scanned parameter at the maximum, when a scan produced it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmax_parameter: Option<f64>,
    /// Maximal parameter intervals on which `B > 2`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violating_intervals: Vec<(f64, f64)>,
}

impl BellSummary {
    pub fn from_scan(rows: &[BellScanRow], method: &str) -> Result<Self> {
        let best = rows
            .iter()
            .max_by(|a, b| a.b.total_cmp(&b.b))
            .ok_or_else(|| Error::config("empty Bell scan"))?;
        Ok(BellSummary {
            max_b: best.b,
            argmax_angles: best.angles,
            method: method.into(),
            argmax_parameter: Some(best.parameter),
            violating_intervals: violating_intervals(rows),
        })
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Runs of consecutive scan rows with `B > 2`, as `(first, last)` parameters.
pub fn violating_intervals(rows: &[BellScanRow]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut start: Option<f64> = None;
    let mut last = 0.0;
    for r in rows {
        if r.b > 2.0 {
            start.get_or_insert(r.parameter);
            last = r.parameter;
        } else if let Some(s) = start.take() {
            out.push((s, last));
        }
    }
    if let Some(s) = start {
        out.push((s, last));
    }
    out
}

/// Formats a float the way the CSV writers do.
pub fn format_value(v: f64) -> String {
    fmt_g(v, CSV_DIGITS)
}

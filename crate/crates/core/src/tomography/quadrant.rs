use rayon::prelude::*;

use super::{SignBinnedProbs, NUMERIC_SUM_TOL};
use crate::error::{Error, Result};
use crate::special::quadrature::tanh_mapped_half_line;
use crate::states::TwoModeState;

/// Quadrant-integration settings.
#[derive(Debug, Clone, Copy)]
pub struct QuadrantConfig {
    /// Length scale of the `x = scale * atanh(u)` map; a few standard
    /// deviations of the marginal works well.
    pub scale: f64,
    /// Gauss–Legendre points per panel.
    pub order: usize,
    pub initial_panels: usize,
    pub max_panels: usize,
    /// Largest change of any probability between panel doublings accepted
    /// as converged.
    pub tol: f64,
}

impl Default for QuadrantConfig {
    fn default() -> Self {
        QuadrantConfig {
            scale: 1.0,
            order: 16,
            initial_panels: 2,
            max_panels: 1024,
            tol: 1e-10,
        }
    }
}

impl QuadrantConfig {
    /// Default settings with the map scaled to the state's homodyne spread.
    pub fn for_state(state: &TwoModeState) -> Result<Self> {
        Ok(QuadrantConfig {
            scale: 2.5 * state.quadrature_variance()?.sqrt(),
            ..QuadrantConfig::default()
        })
    }
}

/// The four quadrant integrals of a joint density in `(X1, X2)`.
///
/// Panels are doubled until no probability moves by more than `cfg.tol`.
/// The result is not renormalised: a sum further than `1e-6` from one is a
/// normalization error.
pub fn sign_binned_numeric(
    tomogram: &(dyn Fn(f64, f64) -> f64 + Sync),
    theta1: f64,
    theta2: f64,
    cfg: &QuadrantConfig,
) -> Result<SignBinnedProbs> {
    if cfg.initial_panels == 0 || cfg.max_panels < cfg.initial_panels || !(cfg.tol > 0.0) {
        return Err(Error::config(
            "quadrant panels must satisfy 1 <= initial <= max and tol > 0",
        ));
    }
    let mut prev: Option<[f64; 4]> = None;
    let mut panels = cfg.initial_panels;
    while panels <= cfg.max_panels {
        let nodes = tanh_mapped_half_line(panels, cfg.order, cfg.scale)?;
        let rows: Vec<[f64; 4]> = nodes
            .par_iter()
            .map(|&(x, wx)| {
                let mut acc = [0.0; 4];
                for &(y, wy) in &nodes {
                    let w = wx * wy;
                    acc[0] += w * tomogram(x, y);
                    acc[1] += w * tomogram(x, -y);
                    acc[2] += w * tomogram(-x, y);
                    acc[3] += w * tomogram(-x, -y);
                }
                acc
            })
            .collect();
        let mut q = [0.0; 4];
        for row in &rows {
            for k in 0..4 {
                q[k] += row[k];
            }
        }
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "quadrant integral of the tomogram at angles ({theta1}, {theta2})"
            )));
        }
        if let Some(p) = prev {
            let change = (0..4).map(|k| (q[k] - p[k]).abs()).fold(0.0, f64::max);
            if change < cfg.tol {
                return SignBinnedProbs::with_tolerance(theta1, theta2, q, NUMERIC_SUM_TOL);
            }
        }
        prev = Some(q);
        panels *= 2;
    }
    Err(Error::accuracy(format!(
        "quadrant integrals not converged to {:.1e} with {} panels",
        cfg.tol, cfg.max_panels
    )))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::tomography::{sign_binned_closed_form, tomogram_fn};

    #[test]
    fn product_density_gives_quarters() {
        let f = |x: f64, y: f64| 2.0 / PI * (-2.0 * x * x - 2.0 * y * y).exp();
        let cfg = QuadrantConfig {
            scale: 1.0,
            ..QuadrantConfig::default()
        };
        let p = sign_binned_numeric(&f, 0.0, 0.0, &cfg).unwrap();
        for v in p.as_array() {
            assert!((v - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn unnormalised_density_is_rejected() {
        let f = |x: f64, y: f64| 1.1 * 2.0 / PI * (-2.0 * x * x - 2.0 * y * y).exp();
        let r = sign_binned_numeric(&f, 0.0, 0.0, &QuadrantConfig::default());
        assert!(matches!(r, Err(Error::Normalization { .. })));
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let states = [
            TwoModeState::from_squeezing(0.5).unwrap(),
            TwoModeState::fock_pair(1).unwrap(),
            TwoModeState::fock_pair(3).unwrap(),
            TwoModeState::pair_coherent(1.05).unwrap(),
        ];
        for st in &states {
            let cfg = QuadrantConfig::for_state(st).unwrap();
            for &(t1, t2) in &[(0.0, 0.0), (0.7, 0.2), (PI / 2.0, -PI / 4.0)] {
                let f = tomogram_fn(st, t1, t2).unwrap();
                let num = sign_binned_numeric(&*f, t1, t2, &cfg).unwrap();
                let cf = sign_binned_closed_form(st, t1, t2).unwrap();
                for (a, b) in num.as_array().iter().zip(cf.as_array()) {
                    assert!(
                        (a - b).abs() < 1e-8,
                        "{:?} at ({t1}, {t2}): {a} vs {b}",
                        st.descriptor()
                    );
                }
            }
        }
    }
}

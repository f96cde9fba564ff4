use super::SymplecticSetting;
use crate::error::{Error, Result};
use crate::special::{make_quadrature, QuadratureKind, QuadratureRule};
use crate::states::{wigner_fn, TwoModeState, WignerFn, WignerOptions};

/// Integration settings for the numerical Radon projection.
#[derive(Debug, Clone, Copy)]
pub struct RadonConfig {
    /// Half-width of the integration box along each line. `None` uses eight
    /// standard deviations of the state's homodyne quadrature.
    pub half_width: Option<f64>,
    /// Gauss–Legendre order per line at the first pass; doubled until two
    /// passes agree.
    pub initial_order: usize,
    pub max_order: usize,
    /// Absolute change between passes accepted as converged.
    pub tol: f64,
    pub wigner: WignerOptions,
}

impl Default for RadonConfig {
    fn default() -> Self {
        RadonConfig {
            half_width: None,
            initial_order: 32,
            max_order: 512,
            tol: 1e-10,
            wigner: WignerOptions::default(),
        }
    }
}

/// Line projections of one state's Wigner function.
pub struct RadonProjector {
    wigner: WignerFn,
    half_width: f64,
    rules: Vec<QuadratureRule>,
    tol: f64,
}

impl RadonProjector {
    pub fn new(state: &TwoModeState, cfg: &RadonConfig) -> Result<Self> {
        if cfg.initial_order < 2 || cfg.max_order < cfg.initial_order {
            return Err(Error::config(format!(
                "Radon orders must satisfy 2 <= initial ({}) <= max ({})",
                cfg.initial_order, cfg.max_order
            )));
        }
        if !(cfg.tol > 0.0) {
            return Err(Error::config("Radon tolerance must be positive"));
        }
        let wigner = wigner_fn(state, cfg.wigner)?;
        let half_width = match cfg.half_width {
            Some(h) if h > 0.0 && h.is_finite() => h,
            Some(h) => {
                return Err(Error::config(format!(
                    "Radon half-width {h} must be positive"
                )))
            }
            None => 8.0 * state.quadrature_variance()?.sqrt(),
        };
        let mut rules = Vec::new();
        let mut order = cfg.initial_order;
        while order <= cfg.max_order {
            rules.push(make_quadrature(
                QuadratureKind::GaussLegendre,
                order,
                (-half_width, half_width),
            )?);
            order *= 2;
        }
        if rules.len() < 2 {
            return Err(Error::config("Radon order range allows no refinement step"));
        }
        Ok(RadonProjector {
            wigner,
            half_width,
            rules,
            tol: cfg.tol,
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// `w(X1, μ1, ν1, X2, μ2, ν2) = ∫ W δ(X1 - μ1 q1 - ν1 p1) δ(X2 - μ2 q2 - ν2 p2)`.
    pub fn project(
        &self,
        x1: f64,
        s1: &SymplecticSetting,
        x2: f64,
        s2: &SymplecticSetting,
    ) -> Result<f64> {
        let mut prev: Option<f64> = None;
        for rule in &self.rules {
            let v = self.integrate(rule, x1, s1, x2, s2);
            if !v.is_finite() {
                return Err(Error::NonFinite(format!(
                    "Radon projection at X = ({x1}, {x2})"
                )));
            }
            if let Some(p) = prev {
                if (v - p).abs() <= self.tol {
                    return Ok(v);
                }
            }
            prev = Some(v);
        }
        let last = self.rules.last().map_or(0, |r| r.len());
        Err(Error::accuracy(format!(
            "Radon projection at X = ({x1}, {x2}) not converged to {:.1e} by order {last}",
            self.tol
        )))
    }

    /// Homodyne projection at angles `(θ1, θ2)`.
    pub fn project_homodyne(&self, x1: f64, theta1: f64, x2: f64, theta2: f64) -> Result<f64> {
        self.project(
            x1,
            &SymplecticSetting::homodyne(theta1),
            x2,
            &SymplecticSetting::homodyne(theta2),
        )
    }

    fn integrate(
        &self,
        rule: &QuadratureRule,
        x1: f64,
        s1: &SymplecticSetting,
        x2: f64,
        s2: &SymplecticSetting,
    ) -> f64 {
        // μq + νp = ρ (q cos θ + p sin θ); the line is (X/ρ) n + t n⊥
        let (r1, r2) = (s1.radius(), s2.radius());
        let (sn1, cs1) = s1.angle().sin_cos();
        let (sn2, cs2) = s2.angle().sin_cos();
        let (u1, u2) = (x1 / r1, x2 / r2);
        let mut total = 0.0;
        for (t1, w1) in rule.iter() {
            let q1 = u1 * cs1 - t1 * sn1;
            let p1 = u1 * sn1 + t1 * cs1;
            let mut inner = 0.0;
            for (t2, w2) in rule.iter() {
                let q2 = u2 * cs2 - t2 * sn2;
                let p2 = u2 * sn2 + t2 * cs2;
                inner += w2 * (self.wigner)(q1, p1, q2, p2);
            }
            total += w1 * inner;
        }
        total / (r1 * r2)
    }
}

/// One-shot homodyne Radon projection.
pub fn radon_forward(
    state: &TwoModeState,
    x1: f64,
    theta1: f64,
    x2: f64,
    theta2: f64,
    cfg: &RadonConfig,
) -> Result<f64> {
    RadonProjector::new(state, cfg)?.project_homodyne(x1, theta1, x2, theta2)
}

/// One-shot projection for general symplectic settings.
pub fn radon_forward_symplectic(
    state: &TwoModeState,
    x1: f64,
    s1: &SymplecticSetting,
    x2: f64,
    s2: &SymplecticSetting,
    cfg: &RadonConfig,
) -> Result<f64> {
    RadonProjector::new(state, cfg)?.project(x1, s1, x2, s2)
}

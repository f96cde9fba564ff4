use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::{laguerre, scaled_hermite_table, MAX_POLY_ORDER};
use crate::states::{schmidt_coefficients, DensityMatrix, TwoModeState};

const POPULATION_TOL: f64 = 1e-14;

/// One-mode states used as reconstruction targets, in the `[q, p] = i`
/// quadrature scale.
#[derive(Debug, Clone, PartialEq)]
pub enum SingleModeState {
    Fock {
        n: usize,
    },
    Coherent {
        alpha: Complex64,
    },
    Thermal {
        nbar: f64,
    },
    /// Reduced state of either mode of a benchmark two-mode state.
    Marginal {
        state: TwoModeState,
    },
}

impl SingleModeState {
    pub fn vacuum() -> Self {
        SingleModeState::Fock { n: 0 }
    }

    fn validate(&self) -> Result<()> {
        match self {
            SingleModeState::Fock { n } if *n > MAX_POLY_ORDER => Err(Error::domain(format!(
                "Fock number {n} exceeds {MAX_POLY_ORDER}"
            ))),
            SingleModeState::Coherent { alpha }
                if !(alpha.re.is_finite() && alpha.im.is_finite()) =>
            {
                Err(Error::domain("coherent amplitude must be finite"))
            }
            SingleModeState::Thermal { nbar } if !(*nbar >= 0.0 && nbar.is_finite()) => Err(
                Error::domain(format!("thermal occupation {nbar} must be finite and >= 0")),
            ),
            SingleModeState::Marginal { state } => {
                if !state.is_benchmark() {
                    return Err(Error::UnsupportedState(
                        "marginals need a benchmark state".into(),
                    ));
                }
                state.validate()
            }
            _ => Ok(()),
        }
    }

    /// Fock populations of a phase-invariant state, or `None` for a
    /// coherent state.
    fn populations(&self) -> Result<Option<Vec<f64>>> {
        self.validate()?;
        let p = match self {
            SingleModeState::Fock { n } => {
                let mut p = vec![0.0; n + 1];
                p[*n] = 1.0;
                p
            }
            SingleModeState::Coherent { .. } => return Ok(None),
            SingleModeState::Thermal { nbar } => {
                let ratio = nbar / (1.0 + nbar);
                let mut p = Vec::new();
                let mut v = 1.0 / (1.0 + nbar);
                let mut left = 1.0;
                while left > POPULATION_TOL {
                    if p.len() > MAX_POLY_ORDER {
                        return Err(Error::domain(format!(
                            "thermal occupation {nbar} needs too many Fock terms"
                        )));
                    }
                    p.push(v);
                    left -= v;
                    v *= ratio;
                }
                p
            }
            SingleModeState::Marginal { state } => {
                let c = schmidt_coefficients(state, MAX_POLY_ORDER + 1)?;
                let p: Vec<f64> = c.coefficients.iter().map(|v| v * v).collect();
                if c.deficit() > POPULATION_TOL.sqrt() {
                    return Err(Error::domain(format!(
                        "marginal of {:?} has weight {:.2e} above Fock number {MAX_POLY_ORDER}",
                        state.descriptor(),
                        c.deficit()
                    )));
                }
                let last = p.iter().rposition(|&v| v > 0.0).unwrap_or(0);
                p[..=last].to_vec()
            }
        };
        Ok(Some(p))
    }

    /// Homodyne tomogram `w(X, θ)`.
    pub fn tomogram(&self) -> Result<Box<dyn Fn(f64, f64) -> f64 + Send + Sync>> {
        match self.populations()? {
            Some(p) => Ok(Box::new(move |x, _theta| {
                let h = scaled_hermite_table(p.len(), x);
                let s: f64 = p.iter().zip(&h).map(|(pk, hk)| pk * hk * hk).sum();
                s * (-x * x).exp() / PI.sqrt()
            })),
            None => {
                let SingleModeState::Coherent { alpha } = *self else {
                    unreachable!("only coherent states lack populations")
                };
                Ok(Box::new(move |x, theta| {
                    let mean = SQRT_2 * alpha.norm() * (theta - alpha.arg()).cos();
                    (-(x - mean).powi(2)).exp() / PI.sqrt()
                }))
            }
        }
    }

    /// Wigner function `W(q, p)`.
    pub fn wigner(&self) -> Result<Box<dyn Fn(f64, f64) -> f64 + Send + Sync>> {
        match self.populations()? {
            Some(p) => Ok(Box::new(move |q, pp| {
                let r2 = q * q + pp * pp;
                let s: f64 = p
                    .iter()
                    .enumerate()
                    .map(|(k, pk)| {
                        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                        sign * pk * laguerre(k, 2.0 * r2).unwrap_or(f64::NAN)
                    })
                    .sum();
                s * (-r2).exp() / PI
            })),
            None => {
                let SingleModeState::Coherent { alpha } = *self else {
                    unreachable!("only coherent states lack populations")
                };
                let (q0, p0) = (SQRT_2 * alpha.re, SQRT_2 * alpha.im);
                Ok(Box::new(move |q, p| {
                    (-(q - q0).powi(2) - (p - p0).powi(2)).exp() / PI
                }))
            }
        }
    }

    /// Exact density matrix truncated at `cutoff`.
    pub fn density(&self, cutoff: usize) -> Result<DensityMatrix> {
        if cutoff < 1 {
            return Err(Error::domain("cutoff must be at least 1"));
        }
        match self.populations()? {
            Some(p) => {
                let kept: f64 = p.iter().take(cutoff).sum();
                let entries = p
                    .iter()
                    .take(cutoff)
                    .enumerate()
                    .map(|(k, &v)| ((k, k), Complex64::new(v, 0.0)));
                DensityMatrix::new(1, cutoff, entries, (1.0 - kept).max(0.0))
            }
            None => {
                let SingleModeState::Coherent { alpha } = *self else {
                    unreachable!("only coherent states lack populations")
                };
                let g = (-0.5 * alpha.norm_sqr()).exp();
                let mut amp = Vec::with_capacity(cutoff);
                let mut a = Complex64::new(g, 0.0);
                for m in 0..cutoff {
                    if m > 0 {
                        a = a * alpha / (m as f64).sqrt();
                    }
                    amp.push(a);
                }
                let kept: f64 = amp.iter().map(|a| a.norm_sqr()).sum();
                let mut entries = Vec::with_capacity(cutoff * cutoff);
                for (m, am) in amp.iter().enumerate() {
                    for (n, an) in amp.iter().enumerate() {
                        entries.push(((m, n), am * an.conj()));
                    }
                }
                DensityMatrix::new(1, cutoff, entries, (1.0 - kept).max(0.0))
            }
        }
    }
}

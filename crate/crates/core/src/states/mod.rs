//! The three benchmark two-mode states: their Schmidt coefficients,
//! truncated density matrices and Wigner functions.
//!
//! # Quadrature conventions
//!
//! Each benchmark keeps the quadrature scale its closed forms are written
//! in. The two-mode squeezed vacuum uses `q = (a + a†)/2`, so the vacuum
//! Wigner function is `(2/pi) e^{-2(q^2+p^2)}` and a homodyne quadrature of
//! the vacuum has variance `1/4`. The Fock-pair superposition and the
//! pair-coherent state use `q = (a + a†)/sqrt(2)` (`[q, p] = i`, vacuum
//! variance `1/2`). Sign-binned probabilities and every CHSH quantity are
//! invariant under a rescaling of the quadratures, so the two scales never
//! mix in a physical result; [`TwoModeState::vacuum_variance`] reports the
//! scale in use.

mod density;
mod wigner;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::bessel_i0;

pub use density::{DensityMatrix, DensityMatrixJson};
pub use wigner::{wigner, wigner_fn, WignerFn, WignerOptions};

/// Default Fock cutoff per mode.
pub const DEFAULT_CUTOFF: usize = 64;

/// Largest `n` accepted for the `|00> + |nn>` superposition.
pub const FOCK_PAIR_N_MAX: u32 = 100;

/// Largest pair-coherent amplitude for which the closed forms are
/// validated. The integrands grow like `e^{2 r^2}`.
pub const PAIR_COHERENT_R_MAX: f64 = 2.5;

#[derive(Debug, Clone, PartialEq)]
pub enum TwoModeState {
    /// `sqrt(1 - λ²) Σ λⁿ |n>|n>`, with `λ = tanh s`.
    SqueezedVacuum { lambda: f64 },
    /// `(|0>|0> + |n>|n>) / sqrt(2)`.
    FockPairSuperposition { n: u32 },
    /// `Σ r^{2n}/n! |n>|n> / sqrt(I0(2 r²))`.
    PairCoherent { r: f64 },
    /// Arbitrary truncated two-mode state.
    ExplicitFock { dm: DensityMatrix },
}

impl TwoModeState {
    pub fn squeezed_vacuum(lambda: f64) -> Result<Self> {
        let s = TwoModeState::SqueezedVacuum { lambda };
        s.validate()?;
        Ok(s)
    }

    /// Two-mode squeezed vacuum from the squeezing parameter `s >= 0`.
    pub fn from_squeezing(s: f64) -> Result<Self> {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::domain(format!(
                "squeezing s = {s} must be finite and >= 0"
            )));
        }
        TwoModeState::squeezed_vacuum(s.tanh())
    }

    pub fn fock_pair(n: u32) -> Result<Self> {
        let s = TwoModeState::FockPairSuperposition { n };
        s.validate()?;
        Ok(s)
    }

    pub fn pair_coherent(r: f64) -> Result<Self> {
        let s = TwoModeState::PairCoherent { r };
        s.validate()?;
        Ok(s)
    }

    pub fn explicit(dm: DensityMatrix) -> Result<Self> {
        let s = TwoModeState::ExplicitFock { dm };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            TwoModeState::SqueezedVacuum { lambda } => {
                if !(*lambda >= 0.0 && *lambda < 1.0) {
                    return Err(Error::domain(format!(
                        "lambda = {lambda} must lie in [0, 1)"
                    )));
                }
            }
            TwoModeState::FockPairSuperposition { n } => {
                if *n < 1 || *n > FOCK_PAIR_N_MAX {
                    return Err(Error::domain(format!(
                        "n = {n} must lie in 1..={FOCK_PAIR_N_MAX} (n = 0 is not normalisable)"
                    )));
                }
            }
            TwoModeState::PairCoherent { r } => {
                if !(*r > 0.0 && *r <= PAIR_COHERENT_R_MAX) {
                    return Err(Error::domain(format!(
                        "pair-coherent amplitude r = {r} must lie in (0, {PAIR_COHERENT_R_MAX}]"
                    )));
                }
            }
            TwoModeState::ExplicitFock { dm } => {
                if dm.modes() != 2 {
                    return Err(Error::Dimension(
                        "explicit states need a two-mode density matrix".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Squeezing parameter `s = atanh λ` of a squeezed vacuum.
    pub fn squeezing(&self) -> Option<f64> {
        match self {
            TwoModeState::SqueezedVacuum { lambda } => Some(lambda.atanh()),
            _ => None,
        }
    }

    pub fn is_benchmark(&self) -> bool {
        !matches!(self, TwoModeState::ExplicitFock { .. })
    }

    pub fn descriptor(&self) -> StateDescriptor {
        match self {
            TwoModeState::SqueezedVacuum { lambda } => StateDescriptor {
                kind: "squeezed-vacuum".into(),
                parameter: Some(*lambda),
            },
            TwoModeState::FockPairSuperposition { n } => StateDescriptor {
                kind: "fock-pair".into(),
                parameter: Some(f64::from(*n)),
            },
            TwoModeState::PairCoherent { r } => StateDescriptor {
                kind: "pair-coherent".into(),
                parameter: Some(*r),
            },
            TwoModeState::ExplicitFock { dm } => StateDescriptor {
                kind: format!("explicit-fock(cutoff={})", dm.cutoff()),
                parameter: None,
            },
        }
    }

    /// Quadrature variance of the vacuum in this state's convention.
    pub fn vacuum_variance(&self) -> f64 {
        match self {
            TwoModeState::SqueezedVacuum { .. } => 0.25,
            _ => 0.5,
        }
    }

    /// Mean photon number per mode.
    pub fn mean_photon_number(&self) -> Result<f64> {
        match self {
            TwoModeState::SqueezedVacuum { lambda } => {
                Ok(lambda * lambda / (1.0 - lambda * lambda))
            }
            TwoModeState::FockPairSuperposition { n } => Ok(0.5 * f64::from(*n)),
            TwoModeState::PairCoherent { r } => {
                // Σ n r^{4n} / (n!)^2 / I0(2 r^2)
                let x = r.powi(4);
                let mut term = 1.0;
                let mut total = 0.0;
                let mut k = 1.0;
                loop {
                    term *= x / (k * k);
                    total += k * term;
                    if k * term < 1e-17 * total {
                        break;
                    }
                    k += 1.0;
                }
                Ok(total / bessel_i0(2.0 * r * r))
            }
            TwoModeState::ExplicitFock { .. } => Err(unsupported("mean photon number")),
        }
    }

    /// Variance of any homodyne quadrature of either mode.
    ///
    /// For every benchmark state the single-mode marginal is
    /// phase-invariant, so this is `vacuum_variance * (2 n̄ + 1)`.
    pub fn quadrature_variance(&self) -> Result<f64> {
        Ok(self.vacuum_variance() * (2.0 * self.mean_photon_number()? + 1.0))
    }
}

fn unsupported(what: &str) -> Error {
    Error::UnsupportedState(format!("{what} is only defined for the benchmark states"))
}

/// Serializable summary of a state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDescriptor {
    pub kind: String,
    pub parameter: Option<f64>,
}

/// Coefficients `c_n` of `|ψ> = Σ c_n |n>|n>` up to a cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtVector {
    pub coefficients: Vec<f64>,
}

impl SchmidtVector {
    /// `1 - Σ c_n²`: probability beyond the cutoff.
    pub fn deficit(&self) -> f64 {
        1.0 - self.coefficients.iter().map(|c| c * c).sum::<f64>()
    }
}

pub fn schmidt_coefficients(state: &TwoModeState, cutoff: usize) -> Result<SchmidtVector> {
    state.validate()?;
    if cutoff < 1 {
        return Err(Error::domain("cutoff must be at least 1"));
    }
    let coefficients = match state {
        TwoModeState::SqueezedVacuum { lambda } => {
            let mut c = Vec::with_capacity(cutoff);
            let mut v = (1.0 - lambda * lambda).sqrt();
            for _ in 0..cutoff {
                c.push(v);
                v *= lambda;
            }
            c
        }
        TwoModeState::FockPairSuperposition { n } => {
            let mut c = vec![0.0; cutoff];
            c[0] = std::f64::consts::FRAC_1_SQRT_2;
            if (*n as usize) < cutoff {
                c[*n as usize] = std::f64::consts::FRAC_1_SQRT_2;
            }
            c
        }
        TwoModeState::PairCoherent { r } => {
            let r2 = r * r;
            let mut c = Vec::with_capacity(cutoff);
            let mut v = 1.0 / bessel_i0(2.0 * r2).sqrt();
            for k in 0..cutoff {
                if k > 0 {
                    v *= r2 / k as f64;
                }
                c.push(v);
            }
            c
        }
        TwoModeState::ExplicitFock { .. } => return Err(unsupported("a Schmidt decomposition")),
    };
    Ok(SchmidtVector { coefficients })
}

/// Truncated `|ψ><ψ|` of a benchmark state, or the stored matrix of an
/// explicit one when the cutoffs agree.
pub fn density_matrix(state: &TwoModeState, cutoff: usize) -> Result<DensityMatrix> {
    if cutoff < 2 {
        return Err(Error::domain(format!(
            "cutoff {cutoff} is below the minimum of 2"
        )));
    }
    if let TwoModeState::ExplicitFock { dm } = state {
        if dm.cutoff() != cutoff {
            return Err(Error::Dimension(format!(
                "explicit state has cutoff {}, requested {cutoff}",
                dm.cutoff()
            )));
        }
        return Ok(dm.clone());
    }
    let schmidt = schmidt_coefficients(state, cutoff)?;
    let c = &schmidt.coefficients;
    let mut entries = Vec::new();
    for (n, &cn) in c.iter().enumerate() {
        for (m, &cm) in c.iter().enumerate() {
            let v = cn * cm;
            if v != 0.0 {
                entries.push((
                    (n * cutoff + n, m * cutoff + m),
                    num_complex::Complex64::new(v, 0.0),
                ));
            }
        }
    }
    DensityMatrix::new(2, cutoff, entries, schmidt.deficit())
}

pub(crate) fn pair_coherent_norm_sq(r: f64) -> f64 {
    // N² e^{-2 r²} = 1 / (4 π² I0(2 r²))
    1.0 / (4.0 * PI * PI * bessel_i0(2.0 * r * r))
}

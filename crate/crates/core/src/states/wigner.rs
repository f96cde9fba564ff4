use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use super::{pair_coherent_norm_sq, TwoModeState};
use crate::error::{Error, Result};
use crate::special::laguerre;

/// Phase-space evaluator `(q1, p1, q2, p2) -> W`.
pub type WignerFn = Box<dyn Fn(f64, f64, f64, f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy)]
pub struct WignerOptions {
    /// Periodic-trapezoid order for each of the two angular integrals of
    /// the pair-coherent Wigner function.
    pub pair_coherent_order: usize,
}

impl Default for WignerOptions {
    fn default() -> Self {
        WignerOptions {
            pair_coherent_order: 128,
        }
    }
}

const MIN_PAIR_COHERENT_ORDER: usize = 16;

pub fn wigner(state: &TwoModeState, q1: f64, p1: f64, q2: f64, p2: f64) -> Result<f64> {
    Ok(wigner_fn(state, WignerOptions::default())?(q1, p1, q2, p2))
}

/// Builds a reusable Wigner evaluator; state-dependent constants are
/// computed once.
pub fn wigner_fn(state: &TwoModeState, opts: WignerOptions) -> Result<WignerFn> {
    state.validate()?;
    match *state {
        TwoModeState::SqueezedVacuum { lambda } => Ok(squeezed_vacuum(lambda.atanh())),
        TwoModeState::FockPairSuperposition { n } => Ok(fock_pair(n)),
        TwoModeState::PairCoherent { r } => pair_coherent(r, opts.pair_coherent_order),
        TwoModeState::ExplicitFock { .. } => Err(Error::UnsupportedState(
            "Wigner functions are only available for the benchmark states".into(),
        )),
    }
}

/// Gaussian `exp(-e^{-2s}[(q1-q2)² + (p1+p2)²] - e^{2s}[(q1+q2)² + (p1-p2)²])`.
///
/// The prefactor is taken from the determinant of the quadratic form, so
/// the density integrates to one whatever the squeezing. (It comes out as
/// `4/π²` for every `s`.)
fn squeezed_vacuum(s: f64) -> WignerFn {
    let em = (-2.0 * s).exp();
    let ep = (2.0 * s).exp();
    // exponent = -(1/2) xᵀ M x; q and p blocks are each
    // 2 [[em + ep, ep - em], [ep - em, em + ep]] up to the sign of the off-diagonal
    let diag = 2.0 * (em + ep);
    let off = 2.0 * (ep - em);
    let det_block = diag * diag - off * off;
    let prefactor = det_block / (4.0 * PI * PI);
    Box::new(move |q1, p1, q2, p2| {
        let minus = (q1 - q2).powi(2) + (p1 + p2).powi(2);
        let plus = (q1 + q2).powi(2) + (p1 - p2).powi(2);
        prefactor * (-em * minus - ep * plus).exp()
    })
}

/// `(|00> + |nn>)/sqrt(2)` in the `[q, p] = i` convention.
fn fock_pair(n: u32) -> WignerFn {
    // 2^n / n!
    let coeff = (1..=n).fold(1.0, |acc, k| acc * 2.0 / f64::from(k));
    let n = n as usize;
    Box::new(move |q1, p1, q2, p2| {
        let z1 = Complex64::new(q1, -p1);
        let z2 = Complex64::new(q2, -p2);
        let cross = 2.0 * coeff * (z1 * z2).powu(n as u32).re;
        let r1 = 2.0 * (q1 * q1 + p1 * p1);
        let r2 = 2.0 * (q2 * q2 + p2 * p2);
        let lag = laguerre(n, r1).unwrap_or(f64::NAN) * laguerre(n, r2).unwrap_or(f64::NAN);
        (1.0 + cross + lag) * (-(r1 + r2) / 2.0).exp() / (2.0 * PI * PI)
    })
}

/// Pair-coherent Wigner function as a double angular integral.
///
/// With `γ_j = (q_j + i p_j)/sqrt(2)` and the coherent-state kernel
/// `W_{|α><β|} = <β|α> e^{-2(γ-α)(γ*-β*)} / π`, the state
/// `N ∫ |r e^{iφ}> |r e^{-iφ}> dφ` gives
///
/// `W = N² e^{-2r²} e^{-Σ(q²+p²)} / π² · ∫∫ a(φ) conj(a(φ')) e^{-2r² cos(φ - φ')} dφ dφ'`
///
/// where `a(φ) = exp(sqrt(2) r [(q1 - i p1) e^{iφ} + (q2 - i p2) e^{-iφ}])`.
/// The kernel matrix is real and symmetric, so the quadratic form is real.
fn pair_coherent(r: f64, order: usize) -> Result<WignerFn> {
    if order < MIN_PAIR_COHERENT_ORDER {
        return Err(Error::config(format!(
            "pair-coherent Wigner quadrature order {order} is below the minimum {MIN_PAIR_COHERENT_ORDER}"
        )));
    }
    let h = 2.0 * PI / order as f64;
    let phases: Vec<Complex64> = (0..order)
        .map(|j| Complex64::from_polar(1.0, j as f64 * h))
        .collect();
    // circulant kernel, stored by index difference
    let kernel: Vec<f64> = (0..order)
        .map(|d| (-2.0 * r * r * (d as f64 * h).cos()).exp())
        .collect();
    let prefactor = pair_coherent_norm_sq(r) / (PI * PI) * h * h;
    Ok(Box::new(move |q1, p1, q2, p2| {
        let z1 = Complex64::new(q1, -p1) * (SQRT_2 * r);
        let z2 = Complex64::new(q2, -p2) * (SQRT_2 * r);
        let a: Vec<Complex64> = phases
            .iter()
            .map(|e| (z1 * e + z2 * e.conj()).exp())
            .collect();
        let mut total = 0.0;
        for (j, aj) in a.iter().enumerate() {
            let mut row = Complex64::new(0.0, 0.0);
            for (k, ak) in a.iter().enumerate() {
                let d = (j + order - k) % order;
                row += ak.conj() * kernel[d];
            }
            total += (aj * row).re;
        }
        prefactor * total * (-(q1 * q1 + p1 * p1 + q2 * q2 + p2 * p2)).exp()
    }))
}

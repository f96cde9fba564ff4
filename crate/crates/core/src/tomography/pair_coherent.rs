//! The angular integral `I(X1, θ1, X2, θ2)` of the pair-coherent tomogram
//! and the pair-coherent sign-binned probabilities.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::erf_unchecked;
use crate::states::pair_coherent_norm_sq;

/// Smallest periodic-trapezoid order accepted by the direct integral.
pub const MIN_DIRECT_ORDER: usize = 64;

pub(crate) const DEFAULT_SERIES_CAP: usize = 400;

const SERIES_TOL: f64 = 1e-12;

/// Cramér's constant: `|H_n(x)| e^{-x²/2} <= K sqrt(2ⁿ n!)`.
const CRAMER_K: f64 = 1.086_435;

/// Partial sum of the Hermite series together with a rigorous bound on
/// the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: Complex64,
    pub terms: usize,
    pub tail_bound: f64,
}

/// `I = 2π Σ Hₙ(X1) Hₙ(X2) α^{2n} / (2ⁿ (n!)²)`, `α = r e^{-iφ0}`.
///
/// Summation stops once the tail bound, from Cramér's inequality and the
/// ratio `r²/(n+1)`, drops below `1e-12 max(1, |S|)`.
pub fn pair_coherent_integral_series(
    x1: f64,
    x2: f64,
    phi0: f64,
    r: f64,
    cap: usize,
) -> Result<SeriesSum> {
    if !(x1.is_finite() && x2.is_finite() && phi0.is_finite() && r >= 0.0 && r.is_finite()) {
        return Err(Error::domain(format!(
            "series arguments must be finite with r >= 0 (X1 = {x1}, X2 = {x2}, phi0 = {phi0}, r = {r})"
        )));
    }
    if cap == 0 {
        return Err(Error::config("series cap must be at least 1"));
    }
    if r == 0.0 {
        return Ok(SeriesSum {
            value: Complex64::new(2.0 * PI, 0.0),
            terms: 1,
            tail_bound: 0.0,
        });
    }
    let r2 = r * r;
    let a2 = Complex64::from_polar(r2, -2.0 * phi0);
    let log_r2 = r2.ln();
    let log_envelope = 2.0 * CRAMER_K.ln() + 0.5 * (x1 * x1 + x2 * x2);

    let (mut h1_prev, mut h1) = (0.0, 1.0);
    let (mut h2_prev, mut h2) = (0.0, 1.0);
    // a2ⁿ / n!
    let mut power = Complex64::new(1.0, 0.0);
    let mut log_fact = 0.0;
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 0..cap {
        let nf = n as f64;
        sum += power * (h1 * h2);
        // bound on terms n+1, n+2, ... with ratio r²/(n+2) once below 1
        let next = nf + 1.0;
        let q = r2 / (next + 1.0);
        if q < 1.0 {
            let log_next = log_envelope + next * log_r2 - (log_fact + next.ln());
            let tail = log_next.exp() / (1.0 - q);
            if tail < SERIES_TOL * sum.norm().max(1.0) {
                return Ok(SeriesSum {
                    value: sum * (2.0 * PI),
                    terms: n + 1,
                    tail_bound: 2.0 * PI * tail,
                });
            }
        }
        let s = next.sqrt();
        let nh1 = (SQRT_2 * x1 * h1 - nf.sqrt() * h1_prev) / s;
        let nh2 = (SQRT_2 * x2 * h2 - nf.sqrt() * h2_prev) / s;
        h1_prev = h1;
        h1 = nh1;
        h2_prev = h2;
        h2 = nh2;
        power *= a2 / next;
        log_fact += next.ln();
    }
    Err(Error::convergence(format!(
        "Hermite series for I did not converge within {cap} terms (X1 = {x1}, X2 = {x2}, r = {r})"
    )))
}

/// `I` by the periodic trapezoid rule on the shifted integrand
/// `exp(√2 r [X1 e^{i(φ-φ0)} + X2 e^{-i(φ+φ0)}] - r²/2 [e^{2i(φ-φ0)} + e^{-2i(φ+φ0)}])`.
///
/// The rule is refined once to `2 * order`; a disagreement above
/// `1e-10 max(1, |I|)` is an accuracy error.
pub fn pair_coherent_integral_direct(
    x1: f64,
    theta1: f64,
    x2: f64,
    theta2: f64,
    r: f64,
    order: usize,
) -> Result<Complex64> {
    if order < MIN_DIRECT_ORDER {
        return Err(Error::config(format!(
            "direct integral order {order} is below the minimum {MIN_DIRECT_ORDER}"
        )));
    }
    if !(x1.is_finite()
        && x2.is_finite()
        && theta1.is_finite()
        && theta2.is_finite()
        && r >= 0.0
        && r.is_finite())
    {
        return Err(Error::domain(
            "direct integral arguments must be finite with r >= 0",
        ));
    }
    let phi0 = 0.5 * (theta1 + theta2);
    let coarse = direct_trapezoid(x1, x2, phi0, r, order);
    let fine = direct_trapezoid(x1, x2, phi0, r, 2 * order);
    let diff = (fine - coarse).norm();
    if diff > 1e-10 * fine.norm().max(1.0) {
        return Err(Error::accuracy(format!(
            "direct integral changed by {diff:.3e} between orders {order} and {}",
            2 * order
        )));
    }
    Ok(fine)
}

fn direct_trapezoid(x1: f64, x2: f64, phi0: f64, r: f64, order: usize) -> Complex64 {
    let h = 2.0 * PI / order as f64;
    let c = SQRT_2 * r;
    let half_r2 = 0.5 * r * r;
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..order {
        let phi = j as f64 * h;
        let e1 = Complex64::from_polar(1.0, phi - phi0);
        let e2 = Complex64::from_polar(1.0, -(phi + phi0));
        sum += (c * (x1 * e1 + x2 * e2) - half_r2 * (e1 * e1 + e2 * e2)).exp();
    }
    sum * h
}

/// `(w++, w+-, w-+, w--)` of the pair-coherent state from the double
/// angular integral with complex error functions.
///
/// With `G = ∫∫ e^{2r² cos(φ1+φ2)}`, `E1`, `E2` the same integral weighted
/// by `erf k1`, `erf k2`, and `E12` by their product,
/// `w_{s1 s2} = N² e^{-2r²}/4 (G - s1 E1 - s2 E2 + s1 s2 E12)`, so the four
/// probabilities sum to one up to rounding. The imaginary parts cancel by
/// the `φ1 <-> φ2` symmetry; a residue above `1e-9` is an accuracy error.
pub fn pair_coherent_probs(r: f64, theta1: f64, theta2: f64, order: usize) -> Result<[f64; 4]> {
    if order < 16 {
        return Err(Error::config(format!(
            "pair-coherent probability order {order} is below 16"
        )));
    }
    let h = 2.0 * PI / order as f64;
    let phi0 = 0.5 * (theta1 + theta2);
    let c = r * FRAC_1_SQRT_2;
    let two_r2 = 2.0 * r * r;
    // phases e^{±i(φ ∓ φ0)} per node
    let nodes: Vec<(Complex64, Complex64, Complex64, Complex64, f64)> = (0..order)
        .map(|j| {
            let phi = j as f64 * h;
            (
                Complex64::from_polar(c, phi - phi0),
                Complex64::from_polar(c, -(phi + phi0)),
                Complex64::from_polar(c, phi + phi0),
                Complex64::from_polar(c, -(phi - phi0)),
                phi,
            )
        })
        .collect();
    let mut g = 0.0;
    let mut e1_sum = Complex64::new(0.0, 0.0);
    let mut e2_sum = Complex64::new(0.0, 0.0);
    let mut e12_sum = Complex64::new(0.0, 0.0);
    for &(a1, b1, _, _, p1) in &nodes {
        for &(_, _, a2, b2, p2) in &nodes {
            let weight = (two_r2 * (p1 + p2).cos()).exp();
            // k1 = r/√2 (e^{i(φ1-φ0)} + e^{i(φ2+φ0)}), k2 = r/√2 (e^{-i(φ1+φ0)} + e^{-i(φ2-φ0)})
            let e1 = erf_unchecked(a1 + a2);
            let e2 = erf_unchecked(b1 + b2);
            g += weight;
            e1_sum += e1 * weight;
            e2_sum += e2 * weight;
            e12_sum += e1 * e2 * weight;
        }
    }
    let scale = pair_coherent_norm_sq(r) / 4.0 * h * h;
    let mut out = [0.0; 4];
    let mut residue: f64 = 0.0;
    for (idx, (s1, s2)) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]
        .into_iter()
        .enumerate()
    {
        let w = (Complex64::new(g, 0.0) - e1_sum * s1 - e2_sum * s2 + e12_sum * (s1 * s2)) * scale;
        residue = residue.max(w.im.abs());
        out[idx] = w.re;
    }
    if residue > 1e-9 {
        return Err(Error::accuracy(format!(
            "pair-coherent probabilities carry an imaginary residue of {residue:.3e}"
        )));
    }
    Ok(out)
}

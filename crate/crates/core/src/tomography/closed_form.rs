use std::f64::consts::PI;

use super::pair_coherent::{
    pair_coherent_integral_series, pair_coherent_probs, DEFAULT_SERIES_CAP,
};
use super::SignBinnedProbs;
use crate::error::{Error, Result};
use crate::special::scaled_hermite_table;
use crate::states::{pair_coherent_norm_sq, TwoModeState};

/// Joint density `(X1, X2) -> w` at fixed angles.
pub type TomogramFn = Box<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Beyond this `X1² + X2²` the Fock-pair and pair-coherent tomograms are
/// below the smallest normal float and are returned as zero.
const UNDERFLOW_RADIUS_SQ: f64 = 1400.0;

#[derive(Debug, Clone, Copy)]
pub struct ClosedFormOptions {
    /// Periodic-trapezoid order per angle for the pair-coherent
    /// sign-binned probabilities.
    pub pair_coherent_order: usize,
}

impl Default for ClosedFormOptions {
    fn default() -> Self {
        ClosedFormOptions {
            pair_coherent_order: 128,
        }
    }
}

/// Bivariate Gaussian `(2/π) N exp(-2a X1² - 2a X2² - 4b X1 X2)`,
/// `N = sqrt(a² - b²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianTomogramParams {
    pub a: f64,
    pub b: f64,
    pub n: f64,
}

impl GaussianTomogramParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b.is_finite() && b.abs() < a) {
            return Err(Error::domain(format!(
                "Gaussian tomogram needs a > 0 and |b| < a, got a = {a}, b = {b}"
            )));
        }
        Ok(GaussianTomogramParams {
            a,
            b,
            n: ((a - b) * (a + b)).sqrt(),
        })
    }

    /// Parameters of the squeezed vacuum with squeezing `s` measured at
    /// angles summing to `theta_sum`.
    pub fn from_squeezing(s: f64, theta_sum: f64) -> Result<Self> {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::domain(format!(
                "squeezing s = {s} must be finite and >= 0"
            )));
        }
        let (sh, ch) = ((2.0 * s).sinh(), (2.0 * s).cosh());
        let c = theta_sum.cos();
        // cosh² - sinh² cos² = 1 + sinh² sin², without the cancellation
        let d = 1.0 + sh * sh * theta_sum.sin().powi(2);
        // a² - b² = 1/d exactly; taking N from d survives a ≈ |b| in floats
        Ok(GaussianTomogramParams {
            a: ch / d,
            b: sh * c / d,
            n: d.sqrt().recip(),
        })
    }

    pub fn density(&self, x1: f64, x2: f64) -> f64 {
        2.0 / PI * self.n * (-2.0 * self.a * (x1 * x1 + x2 * x2) - 4.0 * self.b * x1 * x2).exp()
    }

    /// Covariance `[[v, c], [c, v]]` of `(X1, X2)`.
    pub fn covariance(&self) -> [[f64; 2]; 2] {
        let det = 4.0 * self.n * self.n;
        let v = self.a / det;
        let c = -self.b / det;
        [[v, c], [c, v]]
    }

    /// `(w++, w+-, w-+, w--)` from the principal branch of `arctan(b/N)`.
    pub fn sign_binned(&self) -> [f64; 4] {
        let t = self.b.atan2(self.n);
        let same = (PI - 2.0 * t) / (4.0 * PI);
        let diff = (PI + 2.0 * t) / (4.0 * PI);
        [same, diff, diff, same]
    }
}

/// Closed-form tomogram at one point.
pub fn tomogram_closed_form(
    state: &TwoModeState,
    x1: f64,
    theta1: f64,
    x2: f64,
    theta2: f64,
) -> Result<f64> {
    if let TwoModeState::PairCoherent { r } = *state {
        let phi0 = 0.5 * (theta1 + theta2);
        let s = pair_coherent_integral_series(x1, x2, phi0, r, DEFAULT_SERIES_CAP)?;
        return Ok(pair_coherent_norm_sq(r) / PI * s.value.norm_sqr() * (-x1 * x1 - x2 * x2).exp());
    }
    Ok(tomogram_fn(state, theta1, theta2)?(x1, x2))
}

/// Closed-form tomogram at fixed angles as a reusable density.
///
/// The pair-coherent series runs to its term cap; a non-convergent point
/// evaluates to NaN so that integrators reject it.
pub fn tomogram_fn(state: &TwoModeState, theta1: f64, theta2: f64) -> Result<TomogramFn> {
    state.validate()?;
    let sum = theta1 + theta2;
    match *state {
        TwoModeState::SqueezedVacuum { lambda } => {
            let g = GaussianTomogramParams::from_squeezing(lambda.atanh(), sum)?;
            Ok(Box::new(move |x1, x2| g.density(x1, x2)))
        }
        TwoModeState::FockPairSuperposition { n } => {
            let n = n as usize;
            let c = (n as f64 * sum).cos();
            Ok(Box::new(move |x1, x2| {
                if x1 * x1 + x2 * x2 > UNDERFLOW_RADIUS_SQ {
                    return 0.0;
                }
                let h1 = scaled_hermite_table(n + 1, x1)[n];
                let h2 = scaled_hermite_table(n + 1, x2)[n];
                let p = h1 * h2;
                (1.0 + p * p + 2.0 * p * c) * (-x1 * x1 - x2 * x2).exp() / (2.0 * PI)
            }))
        }
        TwoModeState::PairCoherent { r } => {
            let pref = pair_coherent_norm_sq(r) / PI;
            let phi0 = 0.5 * sum;
            Ok(Box::new(move |x1, x2| {
                let rr = x1 * x1 + x2 * x2;
                if rr > UNDERFLOW_RADIUS_SQ {
                    return 0.0;
                }
                match pair_coherent_integral_series(x1, x2, phi0, r, DEFAULT_SERIES_CAP) {
                    Ok(s) => pref * s.value.norm_sqr() * (-rr).exp(),
                    Err(_) => f64::NAN,
                }
            }))
        }
        TwoModeState::ExplicitFock { .. } => Err(Error::UnsupportedState(
            "closed-form tomograms exist only for the benchmark states".into(),
        )),
    }
}

pub fn sign_binned_closed_form(
    state: &TwoModeState,
    theta1: f64,
    theta2: f64,
) -> Result<SignBinnedProbs> {
    sign_binned_closed_form_with(state, theta1, theta2, &ClosedFormOptions::default())
}

pub fn sign_binned_closed_form_with(
    state: &TwoModeState,
    theta1: f64,
    theta2: f64,
    opts: &ClosedFormOptions,
) -> Result<SignBinnedProbs> {
    state.validate()?;
    let sum = theta1 + theta2;
    let w = match *state {
        TwoModeState::SqueezedVacuum { lambda } => {
            GaussianTomogramParams::from_squeezing(lambda.atanh(), sum)?.sign_binned()
        }
        TwoModeState::FockPairSuperposition { n } => {
            let n = n as usize;
            // H²_{n-1}(0) / (π 2ⁿ n!) = ĥ²_{n-1}(0) / (2π n)
            let h = scaled_hermite_table(n, 0.0)[n - 1];
            let k = h * h / (2.0 * PI * n as f64) * (n as f64 * sum).cos();
            [0.25 + k, 0.25 - k, 0.25 - k, 0.25 + k]
        }
        TwoModeState::PairCoherent { r } => {
            pair_coherent_probs(r, theta1, theta2, opts.pair_coherent_order)?
        }
        TwoModeState::ExplicitFock { .. } => {
            return Err(Error::UnsupportedState(
                "closed-form probabilities exist only for the benchmark states".into(),
            ))
        }
    };
    SignBinnedProbs::new(theta1, theta2, w)
}

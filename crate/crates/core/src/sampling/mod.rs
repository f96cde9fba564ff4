//! Seeded Monte Carlo homodyne outcomes and estimators of the sign-binned
//! probabilities and CHSH values.
//!
//! Every batch draws from ChaCha20 seeded with a 64-bit `seed` and switched
//! to a `stream`; the four settings of a CHSH estimate use streams 0 to 3,
//! so batches can be produced in parallel and still reproduce bit for bit.

use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bell::{chsh, BellAnglesQuadrature};
use crate::error::{Error, Result};
use crate::states::{StateDescriptor, TwoModeState};
use crate::tomography::{tomogram_fn, GaussianTomogramParams, SignBinnedProbs};

/// Homodyne outcome pairs drawn at fixed angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub state: StateDescriptor,
    pub theta1: f64,
    pub theta2: f64,
    pub seed: u64,
    pub stream: u64,
    pub pairs: Vec<(f64, f64)>,
    /// Accepted over proposed points; `None` for exact samplers.
    pub acceptance_rate: Option<f64>,
}

/// JSON sidecar written next to a batch CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSidecar {
    pub state: StateDescriptor,
    pub angles: SidecarAngles,
    pub seed: u64,
    pub stream: u64,
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub acceptance_rate: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SidecarAngles {
    pub theta1: f64,
    pub theta2: f64,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `X1,X2` rows in shortest round-trip notation.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::with_capacity(40 * self.pairs.len() + 8);
        out.push_str("X1,X2\n");
        for (x1, x2) in &self.pairs {
            out.push_str(&format!("{x1},{x2}\n"));
        }
        out
    }

    pub fn sidecar(&self) -> BatchSidecar {
        BatchSidecar {
            state: self.state.clone(),
            angles: SidecarAngles {
                theta1: self.theta1,
                theta2: self.theta2,
            },
            seed: self.seed,
            stream: self.stream,
            count: self.pairs.len(),
            acceptance_rate: self.acceptance_rate,
        }
    }

    pub fn sidecar_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.sidecar())?)
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn check_count(count: usize) -> Result<()> {
    if count == 0 {
        return Err(Error::domain("sample count must be at least 1"));
    }
    Ok(())
}

/// Exact draws from the squeezed-vacuum tomogram, a bivariate Gaussian.
pub fn sample_gaussian_epr(
    s: f64,
    theta1: f64,
    theta2: f64,
    count: usize,
    seed: u64,
) -> Result<SampleBatch> {
    sample_gaussian_epr_stream(s, theta1, theta2, count, seed, 0)
}

pub fn sample_gaussian_epr_stream(
    s: f64,
    theta1: f64,
    theta2: f64,
    count: usize,
    seed: u64,
    stream: u64,
) -> Result<SampleBatch> {
    check_count(count)?;
    let g = GaussianTomogramParams::from_squeezing(s, theta1 + theta2)?;
    let cov = g.covariance();
    let chol = Matrix2::new(cov[0][0], cov[0][1], cov[1][0], cov[1][1])
        .cholesky()
        .ok_or_else(|| Error::domain(format!("covariance at s = {s} is not positive definite")))?;
    let l = chol.l();
    let mut rng = rng_for(seed, stream);
    let pairs = (0..count)
        .map(|_| {
            let z1: f64 = rng.sample(StandardNormal);
            let z2: f64 = rng.sample(StandardNormal);
            (l[(0, 0)] * z1, l[(1, 0)] * z1 + l[(1, 1)] * z2)
        })
        .collect();
    Ok(SampleBatch {
        state: TwoModeState::from_squeezing(s)?.descriptor(),
        theta1,
        theta2,
        seed,
        stream,
        pairs,
        acceptance_rate: None,
    })
}

/// Product-Gaussian proposal for rejection sampling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeConfig {
    /// Per-axis variance of the proposal.
    pub variance: f64,
    /// Half-width of the square scanned for `sup w / g`, in proposal
    /// standard deviations.
    pub scan_sigmas: f64,
    pub scan_points: usize,
    /// Factor applied to the scanned supremum to obtain `M`.
    pub safety: f64,
}

/// Default variance inflation of the proposal relative to the state's
/// homodyne variance.
pub const DEFAULT_INFLATION: f64 = 1.5;

impl EnvelopeConfig {
    pub fn for_state(state: &TwoModeState, inflation: f64) -> Result<Self> {
        if !(inflation > 0.0 && inflation.is_finite()) {
            return Err(Error::config(format!(
                "envelope inflation {inflation} must be positive"
            )));
        }
        Ok(EnvelopeConfig {
            variance: inflation * state.quadrature_variance()?,
            scan_sigmas: 6.0,
            scan_points: 201,
            safety: 1.1,
        })
    }
}

/// Envelope constant `M` with `w <= M g` on the scanned square.
pub fn envelope_bound(
    tomogram: &(dyn Fn(f64, f64) -> f64 + Sync),
    cfg: &EnvelopeConfig,
) -> Result<f64> {
    if !(cfg.variance > 0.0 && cfg.scan_sigmas > 0.0 && cfg.safety >= 1.0) || cfg.scan_points < 3 {
        return Err(Error::config(
            "envelope needs positive variance and scan width, safety >= 1 and at least 3 scan points",
        ));
    }
    let h = cfg.scan_sigmas * cfg.variance.sqrt();
    let n = cfg.scan_points;
    let step = 2.0 * h / (n - 1) as f64;
    let sup = (0..n)
        .into_par_iter()
        .map(|i| {
            let x1 = -h + i as f64 * step;
            (0..n)
                .map(|j| {
                    let x2 = -h + j as f64 * step;
                    tomogram(x1, x2) / gaussian(x1, x2, cfg.variance)
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    if !(sup.is_finite() && sup > 0.0) {
        return Err(Error::NonFinite(format!("envelope supremum {sup}")));
    }
    Ok(cfg.safety * sup)
}

fn gaussian(x1: f64, x2: f64, var: f64) -> f64 {
    (-(x1 * x1 + x2 * x2) / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var)
}

/// Rejection sampling of a tomogram under a Gaussian envelope.
///
/// A proposal whose density ratio exceeds `M` aborts the run with an
/// envelope error naming the point.
#[allow(clippy::too_many_arguments)]
pub fn sample_rejection(
    tomogram: &(dyn Fn(f64, f64) -> f64 + Sync),
    state: StateDescriptor,
    theta1: f64,
    theta2: f64,
    count: usize,
    seed: u64,
    stream: u64,
    cfg: &EnvelopeConfig,
) -> Result<SampleBatch> {
    check_count(count)?;
    let m = envelope_bound(tomogram, cfg)?;
    let sd = cfg.variance.sqrt();
    let mut rng = rng_for(seed, stream);
    let mut pairs = Vec::with_capacity(count);
    let mut proposed: u64 = 0;
    while pairs.len() < count {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let u: f64 = rng.random();
        let (x1, x2) = (sd * z1, sd * z2);
        proposed += 1;
        let w = tomogram(x1, x2);
        if !w.is_finite() {
            return Err(Error::NonFinite(format!("tomogram at ({x1}, {x2})")));
        }
        let ratio = w / gaussian(x1, x2, cfg.variance);
        if ratio > m {
            return Err(Error::EnvelopeViolation {
                x1,
                x2,
                ratio,
                bound: m,
            });
        }
        if u * m < ratio {
            pairs.push((x1, x2));
        }
    }
    Ok(SampleBatch {
        state,
        theta1,
        theta2,
        seed,
        stream,
        pairs,
        acceptance_rate: Some(count as f64 / proposed as f64),
    })
}

/// Draws from any benchmark state: exactly for the squeezed vacuum, by
/// rejection with the default envelope otherwise.
pub fn sample_state(
    state: &TwoModeState,
    theta1: f64,
    theta2: f64,
    count: usize,
    seed: u64,
    stream: u64,
) -> Result<SampleBatch> {
    match state {
        TwoModeState::SqueezedVacuum { .. } => {
            let s = state.squeezing().expect("squeezed vacuum has a squeezing");
            sample_gaussian_epr_stream(s, theta1, theta2, count, seed, stream)
        }
        TwoModeState::ExplicitFock { .. } => Err(Error::UnsupportedState(
            "sampling needs a closed-form tomogram".into(),
        )),
        _ => {
            let f = tomogram_fn(state, theta1, theta2)?;
            let cfg = EnvelopeConfig::for_state(state, DEFAULT_INFLATION)?;
            sample_rejection(
                &*f,
                state.descriptor(),
                theta1,
                theta2,
                count,
                seed,
                stream,
                &cfg,
            )
        }
    }
}

/// Sign-binned frequencies with binomial standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatedProbs {
    pub probs: SignBinnedProbs,
    /// `sqrt(p (1 - p) / M)` for `[w++, w+-, w-+, w--]`.
    pub std_errors: [f64; 4],
    pub count: usize,
}

/// Quadrant frequencies of a batch; `X = 0` counts as `+`.
pub fn estimate_probs(batch: &SampleBatch) -> Result<EstimatedProbs> {
    check_count(batch.len())?;
    let mut counts = [0usize; 4];
    for &(x1, x2) in &batch.pairs {
        let k = 2 * usize::from(x1 < 0.0) + usize::from(x2 < 0.0);
        counts[k] += 1;
    }
    let m = batch.len() as f64;
    let p = counts.map(|c| c as f64 / m);
    let std_errors = p.map(|v| (v * (1.0 - v) / m).sqrt());
    Ok(EstimatedProbs {
        probs: SignBinnedProbs::new(batch.theta1, batch.theta2, p)?,
        std_errors,
        count: batch.len(),
    })
}

/// Estimated CHSH value with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshEstimate {
    pub b: f64,
    pub std_error: f64,
    /// `E` at the four settings in CHSH order.
    pub correlations: [f64; 4],
    pub correlation_errors: [f64; 4],
}

/// Four independent batches, one per setting on streams 0 to 3.
///
/// The error of each `E` is `sqrt((1 - E²) / M)`; the four are combined in
/// quadrature.
pub fn estimate_chsh(
    state: &TwoModeState,
    angles: &BellAnglesQuadrature,
    count: usize,
    seed: u64,
) -> Result<ChshEstimate> {
    let settings = angles.settings();
    let est: Vec<(f64, f64)> = (0..4)
        .into_par_iter()
        .map(|i| {
            let (t1, t2) = settings[i];
            let batch = sample_state(state, t1, t2, count, seed, i as u64)?;
            let e = estimate_probs(&batch)?.probs.correlation();
            Ok((e, ((1.0 - e * e).max(0.0) / count as f64).sqrt()))
        })
        .collect::<Result<_>>()?;
    let correlations = [est[0].0, est[1].0, est[2].0, est[3].0];
    let correlation_errors = [est[0].1, est[1].1, est[2].1, est[3].1];
    Ok(ChshEstimate {
        b: chsh(correlations),
        std_error: correlation_errors.iter().map(|e| e * e).sum::<f64>().sqrt(),
        correlations,
        correlation_errors,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::bell::tomographic_chsh;
    use crate::tomography::sign_binned_closed_form;

    fn batch_of(pairs: Vec<(f64, f64)>) -> SampleBatch {
        SampleBatch {
            state: TwoModeState::squeezed_vacuum(0.0).unwrap().descriptor(),
            theta1: 0.0,
            theta2: 0.0,
            seed: 0,
            stream: 0,
            pairs,
            acceptance_rate: None,
        }
    }

    #[test]
    fn quadrant_counting() {
        let e = estimate_probs(&batch_of(vec![
            (1.0, 1.0),
            (1.0, -1.0),
            (-1.0, 1.0),
            (-1.0, -1.0),
        ]))
        .unwrap();
        assert_eq!(e.probs.as_array(), [0.25; 4]);
        let e = estimate_probs(&batch_of(vec![(0.5, 0.0), (0.0, 0.0)])).unwrap();
        assert_eq!(e.probs.w_pp, 1.0);
        assert_eq!(e.std_errors[0], 0.0);
        assert!(estimate_probs(&batch_of(vec![])).is_err());
    }

    #[test]
    fn gaussian_sampler_is_deterministic() {
        let a = sample_gaussian_epr(0.7, 0.1, 0.2, 1000, 42).unwrap();
        let b = sample_gaussian_epr(0.7, 0.1, 0.2, 1000, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_gaussian_epr(0.7, 0.1, 0.2, 1000, 43).unwrap();
        assert_ne!(a.pairs, c.pairs);
        let d = sample_gaussian_epr_stream(0.7, 0.1, 0.2, 1000, 42, 1).unwrap();
        assert_ne!(a.pairs, d.pairs);
        assert!(sample_gaussian_epr(0.7, 0.0, 0.0, 0, 1).is_err());
    }

    #[test]
    fn vacuum_samples_are_uncorrelated() {
        let n = 20_000;
        let b = sample_gaussian_epr(0.0, 0.3, 0.4, n, 7).unwrap();
        let m = n as f64;
        let (mut s1, mut s2, mut s11, mut s22, mut s12) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &(x, y) in &b.pairs {
            s1 += x;
            s2 += y;
            s11 += x * x;
            s22 += y * y;
            s12 += x * y;
        }
        let (m1, m2) = (s1 / m, s2 / m);
        let r = (s12 / m - m1 * m2) / ((s11 / m - m1 * m1) * (s22 / m - m2 * m2)).sqrt();
        assert!(r.abs() < 4.0 / m.sqrt());
        assert!((s11 / m - 0.25).abs() < 0.02);
    }

    #[test]
    fn squeezed_sign_agreement_rate() {
        let n = 100_000;
        let b = sample_gaussian_epr(1.0, 0.4, -0.4, n, 11).unwrap();
        let agree = b
            .pairs
            .iter()
            .filter(|(x, y)| (*x >= 0.0) == (*y >= 0.0))
            .count() as f64
            / n as f64;
        let st = TwoModeState::from_squeezing(1.0).unwrap();
        let cf = sign_binned_closed_form(&st, 0.4, -0.4).unwrap();
        let p = cf.w_pp + cf.w_mm;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        assert!((agree - p).abs() < 4.0 * sigma);
    }

    #[test]
    fn vacuum_rejection_acceptance() {
        // sup w / g = 1.5 at the origin
        let st = TwoModeState::squeezed_vacuum(0.0).unwrap();
        let f = tomogram_fn(&st, 0.0, 0.0).unwrap();
        let cfg = EnvelopeConfig::for_state(&st, 1.5).unwrap();
        let m = envelope_bound(&*f, &cfg).unwrap();
        assert!((m - 1.1 * 1.5).abs() < 1e-12);
        let n = 50_000;
        let b = sample_rejection(&*f, st.descriptor(), 0.0, 0.0, n, 3, 0, &cfg).unwrap();
        let rate = b.acceptance_rate.unwrap();
        let p = 1.0 / m;
        let proposed = n as f64 / rate;
        assert!((rate - p).abs() < 4.0 * (p * (1.0 - p) / proposed).sqrt());
    }

    #[test]
    fn envelope_violation_is_reported() {
        let f = |x: f64, y: f64| (-(x * x + y * y) / 8.0).exp();
        let cfg = EnvelopeConfig {
            variance: 1.0,
            scan_sigmas: 0.5,
            scan_points: 5,
            safety: 1.0,
        };
        let st = TwoModeState::squeezed_vacuum(0.0).unwrap().descriptor();
        let r = sample_rejection(&f, st, 0.0, 0.0, 100, 1, 0, &cfg);
        assert!(matches!(r, Err(Error::EnvelopeViolation { .. })));
    }

    #[test]
    fn fock_pair_and_pair_coherent_frequencies() {
        for st in [
            TwoModeState::fock_pair(1).unwrap(),
            TwoModeState::pair_coherent(1.05).unwrap(),
        ] {
            let (t1, t2) = (PI / 2.0, -PI / 4.0);
            let n = 40_000;
            let b = sample_state(&st, t1, t2, n, 5, 0).unwrap();
            let e = estimate_probs(&b).unwrap();
            let cf = sign_binned_closed_form(&st, t1, t2).unwrap();
            for k in 0..4 {
                let p = cf.as_array()[k];
                let sigma = (p * (1.0 - p) / n as f64).sqrt();
                assert!(
                    (e.probs.as_array()[k] - p).abs() < 4.0 * sigma,
                    "{:?} k={k}",
                    st.descriptor()
                );
            }
        }
    }

    #[test]
    fn chsh_estimate_agrees_and_scales() {
        let st = TwoModeState::squeezed_vacuum(0.54).unwrap();
        let angles = BellAnglesQuadrature::new(0.0, PI / 2.0, PI / 4.0, -PI / 4.0).unwrap();
        let truth = tomographic_chsh(&st, &angles).unwrap();
        let small = estimate_chsh(&st, &angles, 10_000, 9).unwrap();
        let large = estimate_chsh(&st, &angles, 40_000, 9).unwrap();
        assert!((small.b - truth).abs() < 4.0 * small.std_error);
        assert!((large.b - truth).abs() < 4.0 * large.std_error);
        assert!((small.std_error / large.std_error - 2.0).abs() < 0.1);
    }

    #[test]
    fn csv_and_sidecar() {
        let b = sample_gaussian_epr(0.3, 0.0, 0.1, 3, 1).unwrap();
        let csv = b.to_csv_string();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "X1,X2");
        assert_eq!(lines.len(), 4);
        let x: f64 = lines[1].split(',').next().unwrap().parse().unwrap();
        assert_eq!(x, b.pairs[0].0);
        let json = b.sidecar_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["count"], 3);
        assert_eq!(v["seed"], 1);
        assert_eq!(v["state"]["kind"], "squeezed-vacuum");
    }
}

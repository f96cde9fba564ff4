//! Single-mode inverse transforms: Wigner function by filtered
//! back-projection and Fock-basis density matrix by the kernel integral.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::special::{laguerre_assoc, make_quadrature, QuadratureKind};
use crate::states::DensityMatrix;

/// Largest cutoff accepted by the kernel reconstruction.
pub const MAX_KERNEL_CUTOFF: usize = 10;

/// Homodyne tomogram of one mode sampled on a regular `(θ, X)` grid with
/// `θ` covering `[0, π)`.
#[derive(Debug, Clone)]
pub struct SampledTomogram {
    xs: Vec<f64>,
    thetas: Vec<f64>,
    /// `values[k][i] = w(xs[i], thetas[k])`
    values: Vec<Vec<f64>>,
}

impl SampledTomogram {
    pub fn new(xs: Vec<f64>, thetas: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        if xs.len() < 3 || thetas.is_empty() {
            return Err(Error::config(
                "sampled tomogram needs at least 3 X points and 1 angle",
            ));
        }
        let dx = xs[1] - xs[0];
        if !(dx > 0.0)
            || xs
                .windows(2)
                .any(|w| ((w[1] - w[0]) - dx).abs() > 1e-9 * dx)
        {
            return Err(Error::config(
                "tomogram X grid must be regular and increasing",
            ));
        }
        if values.len() != thetas.len() || values.iter().any(|row| row.len() != xs.len()) {
            return Err(Error::Dimension(
                "tomogram values do not match the (theta, X) grid".into(),
            ));
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("sampled tomogram value".into()));
        }
        Ok(SampledTomogram { xs, thetas, values })
    }

    /// Samples `f(X, θ)` on `n_x` points of `[-half, half]` and `n_theta`
    /// angles `kπ/n_theta`.
    pub fn from_fn<F: Fn(f64, f64) -> f64>(
        f: F,
        half: f64,
        n_x: usize,
        n_theta: usize,
    ) -> Result<Self> {
        if n_x < 3 || n_theta == 0 || !(half > 0.0) {
            return Err(Error::config(
                "sampling grid needs n_x >= 3, n_theta >= 1 and half > 0",
            ));
        }
        let dx = 2.0 * half / (n_x - 1) as f64;
        let xs: Vec<f64> = (0..n_x).map(|i| -half + i as f64 * dx).collect();
        let thetas: Vec<f64> = (0..n_theta)
            .map(|k| k as f64 * PI / n_theta as f64)
            .collect();
        let values = thetas
            .iter()
            .map(|&t| xs.iter().map(|&x| f(x, t)).collect())
            .collect();
        SampledTomogram::new(xs, thetas, values)
    }

    pub fn dx(&self) -> f64 {
        self.xs[1] - self.xs[0]
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    /// `χ_θ(ρ) = ∫ w(X, θ) e^{iρX} dX` by the rectangle rule.
    fn characteristic(&self, k: usize, rho: f64) -> Complex64 {
        let dx = self.dx();
        self.xs
            .iter()
            .zip(&self.values[k])
            .map(|(&x, &w)| Complex64::from_polar(w, rho * x))
            .sum::<Complex64>()
            * dx
    }
}

#[derive(Debug, Clone, Copy)]
pub struct InverseFourierConfig {
    /// Frequency cutoff `R` of the `ρ` integral.
    pub rho_max: f64,
    /// Gauss–Legendre points on each of `[-R, 0]` and `[0, R]`.
    pub rho_order: usize,
    /// Damping `e^{-ε ρ²}` applied to the filtered projections.
    pub damping: f64,
}

impl Default for InverseFourierConfig {
    fn default() -> Self {
        InverseFourierConfig {
            rho_max: 40.0,
            rho_order: 256,
            damping: 2e-4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct WignerReconstruction {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    /// `values[i][j] = W(q[i], p[j])`
    pub values: Vec<Vec<f64>>,
    /// Largest `|Im W|` before the real part was taken.
    pub imag_residue: f64,
    /// `∫ W`, equal to the angle-averaged `χ_θ(0)`.
    pub normalization: f64,
}

/// `W(q, p) = (2π)^{-2} ∫_0^π dθ ∫ |ρ| χ_θ(ρ) e^{-iρ(q cos θ + p sin θ)} e^{-ερ²} dρ`.
///
/// The grid must resolve the cutoff (`ΔX R < π`). A reconstruction whose
/// integral is off by more than 5% is an accuracy error.
pub fn inverse_fourier_wigner(
    tomo: &SampledTomogram,
    q: &[f64],
    p: &[f64],
    cfg: &InverseFourierConfig,
) -> Result<WignerReconstruction> {
    if !(cfg.rho_max > 0.0 && cfg.damping >= 0.0) || cfg.rho_order < 2 {
        return Err(Error::config(
            "inverse Fourier needs rho_max > 0, damping >= 0, rho_order >= 2",
        ));
    }
    if tomo.dx() * cfg.rho_max >= PI {
        return Err(Error::config(format!(
            "X spacing {} aliases the frequency cutoff {}: need dX * R < pi",
            tomo.dx(),
            cfg.rho_max
        )));
    }
    let half = make_quadrature(
        QuadratureKind::GaussLegendre,
        cfg.rho_order,
        (0.0, cfg.rho_max),
    )?;
    let mut rho_nodes = Vec::with_capacity(2 * half.len());
    for (r, w) in half.iter() {
        rho_nodes.push((r, w));
        rho_nodes.push((-r, w));
    }
    let n_theta = tomo.thetas.len();
    let dtheta = PI / n_theta as f64;
    // filtered projections |ρ| χ_θ(ρ) e^{-ερ²} w_ρ
    let filtered: Vec<Vec<Complex64>> = (0..n_theta)
        .into_par_iter()
        .map(|k| {
            rho_nodes
                .iter()
                .map(|&(r, w)| {
                    tomo.characteristic(k, r) * (r.abs() * w * (-cfg.damping * r * r).exp())
                })
                .collect()
        })
        .collect();
    let scale = dtheta / (4.0 * PI * PI);
    let rows: Vec<(Vec<f64>, f64)> = q
        .par_iter()
        .map(|&qv| {
            let mut row = Vec::with_capacity(p.len());
            let mut residue: f64 = 0.0;
            for &pv in p {
                let mut total = Complex64::new(0.0, 0.0);
                for (k, &theta) in tomo.thetas.iter().enumerate() {
                    let u = qv * theta.cos() + pv * theta.sin();
                    for (f, &(r, _)) in filtered[k].iter().zip(&rho_nodes) {
                        total += f * Complex64::from_polar(1.0, -r * u);
                    }
                }
                total *= scale;
                residue = residue.max(total.im.abs());
                row.push(total.re);
            }
            (row, residue)
        })
        .collect();
    let imag_residue = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let values = rows.into_iter().map(|r| r.0).collect();
    let normalization = (0..n_theta)
        .map(|k| tomo.characteristic(k, 0.0).re)
        .sum::<f64>()
        / n_theta as f64;
    if (normalization - 1.0).abs() > 0.05 {
        return Err(Error::accuracy(format!(
            "reconstructed Wigner function integrates to {normalization}, more than 5% from 1"
        )));
    }
    Ok(WignerReconstruction {
        q: q.to_vec(),
        p: p.to_vec(),
        values,
        imag_residue,
        normalization,
    })
}

/// Settings of the kernel reconstruction. The tomogram must use the
/// `[q, p] = i` quadrature scale.
#[derive(Debug, Clone, Copy)]
pub struct KernelConfig {
    pub x_half_width: f64,
    pub x_order: usize,
    pub rho_max: f64,
    /// Gauss–Legendre points on `[0, R]`; mirrored onto `[-R, 0]`.
    pub rho_order: usize,
    pub n_theta: usize,
    /// Largest regularizer `ε` of the `e^{-ερ²}` window.
    pub epsilon: f64,
    /// Number of halvings of `ε` fed to Richardson extrapolation.
    pub levels: usize,
    /// Largest change of the extrapolated matrix between the last two
    /// extrapolation orders; also the tolerance on negative populations.
    pub tol: f64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig {
            x_half_width: 8.0,
            x_order: 128,
            rho_max: 12.0,
            rho_order: 64,
            n_theta: 32,
            epsilon: 0.01,
            levels: 4,
            tol: 1e-3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct KernelReconstruction {
    pub density: DensityMatrix,
    /// Extrapolated matrix before hermitization.
    pub raw: DMatrix<Complex64>,
    /// Regularizers used, largest first.
    pub epsilons: Vec<f64>,
    /// Max entry change between the last two extrapolation orders.
    pub extrapolation_change: f64,
}

/// `ρ_mn = (1/2π) ∫_0^π dθ ∫ |ρ| χ_θ(ρ) <m|e^{-iρ X̂_θ}|n> e^{-ερ²} dρ`,
/// extrapolated to `ε -> 0`.
///
/// `e^{-iρX̂_θ}` is the displacement `D(β)`, `β = ρ (sin θ - i cos θ)/√2`,
/// whose Fock elements are associated Laguerre polynomials.
pub fn kernel_reconstruct_density(
    tomogram: &(dyn Fn(f64, f64) -> f64 + Sync),
    cutoff: usize,
    cfg: &KernelConfig,
) -> Result<KernelReconstruction> {
    if cutoff == 0 || cutoff > MAX_KERNEL_CUTOFF {
        return Err(Error::domain(format!(
            "kernel reconstruction cutoff {cutoff} must lie in 1..={MAX_KERNEL_CUTOFF}"
        )));
    }
    if cfg.levels < 2 || !(cfg.epsilon > 0.0) || cfg.n_theta < 2 || !(cfg.tol > 0.0) {
        return Err(Error::config(
            "kernel reconstruction needs levels >= 2, epsilon > 0, n_theta >= 2, tol > 0",
        ));
    }
    let xr = make_quadrature(
        QuadratureKind::GaussLegendre,
        cfg.x_order,
        (-cfg.x_half_width, cfg.x_half_width),
    )?;
    let rr = make_quadrature(
        QuadratureKind::GaussLegendre,
        cfg.rho_order,
        (0.0, cfg.rho_max),
    )?;
    let thetas: Vec<f64> = (0..cfg.n_theta)
        .map(|k| k as f64 * PI / cfg.n_theta as f64)
        .collect();
    let epsilons: Vec<f64> = (0..cfg.levels)
        .map(|l| cfg.epsilon / f64::powi(2.0, l as i32))
        .collect();
    let dim = cutoff;

    // per angle: Σ_ρ w_ρ |ρ| χ_θ(ρ) D(β) e^{-ε ρ²} for every ε
    let partials: Vec<Vec<DMatrix<Complex64>>> = thetas
        .par_iter()
        .map(|&theta| {
            let samples: Vec<(f64, f64)> = xr
                .iter()
                .map(|(x, w)| (x, w * tomogram(x, theta)))
                .collect();
            let mut acc = vec![DMatrix::<Complex64>::zeros(dim, dim); epsilons.len()];
            for (r0, wr) in rr.iter() {
                for r in [r0, -r0] {
                    let chi: Complex64 = samples
                        .iter()
                        .map(|&(x, w)| Complex64::from_polar(w, r * x))
                        .sum();
                    let beta = Complex64::new(theta.sin(), -theta.cos()) * (r * FRAC_1_SQRT_2);
                    let d = displacement_matrix(beta, dim);
                    for (l, &eps) in epsilons.iter().enumerate() {
                        let f = chi * (wr * r.abs() * (-eps * r * r).exp());
                        acc[l] += &d * f;
                    }
                }
            }
            acc
        })
        .collect();
    let scale = Complex64::new(1.0 / (2.0 * PI) * PI / cfg.n_theta as f64, 0.0);
    let mut estimates: Vec<DMatrix<Complex64>> = (0..epsilons.len())
        .map(|l| {
            partials
                .iter()
                .map(|p| &p[l])
                .fold(DMatrix::zeros(dim, dim), |a, b| a + b)
                * scale
        })
        .collect();
    if estimates
        .iter()
        .flatten()
        .any(|v| !(v.re.is_finite() && v.im.is_finite()))
    {
        return Err(Error::NonFinite("kernel reconstruction".into()));
    }

    // Neville table for halving ε: T_{i,k} = T_{i,k-1} + (T_{i,k-1} - T_{i-1,k-1}) / (2^k - 1)
    let mut previous_order = estimates.last().cloned().expect("levels >= 2");
    for k in 1..estimates.len() {
        let factor = Complex64::new(1.0 / (f64::powi(2.0, k as i32) - 1.0), 0.0);
        let mut next = Vec::with_capacity(estimates.len() - 1);
        for i in 1..estimates.len() {
            next.push(&estimates[i] + (&estimates[i] - &estimates[i - 1]) * factor);
        }
        previous_order = estimates.last().cloned().expect("non-empty");
        estimates = next;
    }
    let raw = estimates.pop().expect("one extrapolant");
    let change = (&raw - &previous_order)
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    if change > cfg.tol {
        return Err(Error::accuracy(format!(
            "kernel reconstruction extrapolation changed by {change:.3e} (tolerance {:.1e}) over epsilons {epsilons:?}",
            cfg.tol
        )));
    }
    let mut clamped = raw.clone();
    for i in 0..dim {
        let v = clamped[(i, i)].re;
        if v < 0.0 {
            if v < -cfg.tol {
                return Err(Error::accuracy(format!(
                    "reconstructed population rho_{i}{i} = {v:.3e} is negative"
                )));
            }
            clamped[(i, i)] = Complex64::new(0.0, 0.0);
        }
    }
    let density = DensityMatrix::from_estimate(1, cutoff, &clamped)?;
    Ok(KernelReconstruction {
        density,
        raw,
        epsilons,
        extrapolation_change: change,
    })
}

/// `<m|D(β)|n>` for `m, n < dim`.
fn displacement_matrix(beta: Complex64, dim: usize) -> DMatrix<Complex64> {
    let x = beta.norm_sqr();
    let gauss = (-0.5 * x).exp();
    let mut d = DMatrix::zeros(dim, dim);
    for m in 0..dim {
        for n in 0..dim {
            let (lo, hi) = (m.min(n), m.max(n));
            let ratio: f64 = ((lo + 1)..=hi)
                .map(|k| 1.0 / k as f64)
                .product::<f64>()
                .sqrt();
            let lag = laguerre_assoc(lo, (hi - lo) as f64, x).expect("alpha >= 0");
            let power = if m >= n {
                beta.powu((m - n) as u32)
            } else {
                (-beta.conj()).powu((n - m) as u32)
            };
            d[(m, n)] = power * (ratio * gauss * lag);
        }
    }
    d
}

//! Fixed quadrature rules.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureKind {
    /// Gauss–Legendre on a finite interval; exact for polynomials of
    /// degree `2 * order - 1`.
    GaussLegendre,
    /// Equally spaced rule over one period; exact for trigonometric
    /// polynomials of degree below `order`.
    PeriodicTrapezoid,
}

/// Nodes and weights of a quadrature rule. Immutable once built.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub interval: (f64, f64),
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(&self, mut f: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Builds a rule of the given kind and order on `interval = (a, b)`.
///
/// For the periodic trapezoid the interval is one full period; nodes are
/// `a + k (b - a) / order` for `k = 0..order`.
pub fn make_quadrature(
    kind: QuadratureKind,
    order: usize,
    interval: (f64, f64),
) -> Result<QuadratureRule> {
    if order < 2 {
        return Err(Error::config(format!(
            "quadrature order {order} is below the minimum of 2"
        )));
    }
    let (a, b) = interval;
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(Error::domain(format!(
            "invalid quadrature interval [{a}, {b}]"
        )));
    }
    let (nodes, weights) = match kind {
        QuadratureKind::GaussLegendre => {
            let (x, w) = gauss_legendre_unit(order);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (b + a);
            (
                x.iter().map(|t| mid + half * t).collect(),
                w.iter().map(|v| v * half).collect(),
            )
        }
        QuadratureKind::PeriodicTrapezoid => {
            let h = (b - a) / order as f64;
            (
                (0..order).map(|k| a + k as f64 * h).collect(),
                vec![h; order],
            )
        }
    };
    Ok(QuadratureRule {
        kind,
        interval,
        nodes,
        weights,
    })
}

/// Periodic trapezoid rule on `[0, 2 pi)`.
pub fn periodic_rule(order: usize) -> Result<QuadratureRule> {
    make_quadrature(QuadratureKind::PeriodicTrapezoid, order, (0.0, 2.0 * PI))
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
///
/// Newton iteration on `P_n` from the Chebyshev-like initial guesses.
fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Nodes and weights on `(0, inf)` from Gauss–Legendre panels mapped
/// through `x = scale * atanh(u)`, `u` in `[0, 1)`.
///
/// `panels` equal sub-intervals of `[0, 1)` each carry an `order`-point
/// rule; doubling `panels` refines the mapping near `u = 1` together with
/// the rest of the range.
pub fn tanh_mapped_half_line(panels: usize, order: usize, scale: f64) -> Result<Vec<(f64, f64)>> {
    if panels == 0 || order < 2 || !(scale > 0.0) {
        return Err(Error::config(
            "half-line rule needs panels >= 1, order >= 2, scale > 0",
        ));
    }
    let (x, w) = gauss_legendre_unit(order);
    let width = 1.0 / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = p as f64 * width;
        for (t, wt) in x.iter().zip(&w) {
            let u = lo + 0.5 * width * (t + 1.0);
            let jac = scale / (1.0 - u * u);
            out.push((scale * u.atanh(), wt * 0.5 * width * jac));
        }
    }
    Ok(out)
}

//! Classical orthogonal polynomials evaluated by three-term recurrence.

use crate::error::{Error, Result};

/// Largest polynomial order accepted by [`hermite`] and [`laguerre`].
///
/// Above this the physicists' Hermite values overflow `f64` already for
/// moderate `|x|`, and nothing in this crate needs higher orders.
pub const MAX_POLY_ORDER: usize = 200;

fn check_order(n: usize, what: &str) -> Result<()> {
    if n > MAX_POLY_ORDER {
        return Err(Error::domain(format!(
            "{what} order {n} exceeds the supported maximum {MAX_POLY_ORDER}"
        )));
    }
    Ok(())
}

/// Physicists' Hermite polynomial `H_n(x)`.
///
/// Uses `H_{k+1} = 2x H_k - 2k H_{k-1}` starting from `H_0 = 1`, `H_1 = 2x`.
pub fn hermite(n: usize, x: f64) -> Result<f64> {
    check_order(n, "Hermite")?;
    Ok(hermite_unchecked(n, x))
}

pub(crate) fn hermite_unchecked(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Hermite functions normalised as `H_n(x) / sqrt(2^n n!)` for `n = 0..len`.
///
/// The normalised recurrence
/// `h_{n+1} = (sqrt(2) x h_n - sqrt(n) h_{n-1}) / sqrt(n + 1)`
/// keeps the values of order `e^{x^2/2}` instead of growing factorially,
/// which is what the pair-coherent series needs.
pub(crate) fn scaled_hermite_table(len: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    out.push(1.0);
    if len == 1 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x);
    for n in 1..len - 1 {
        let nf = n as f64;
        let next =
            (std::f64::consts::SQRT_2 * x * out[n] - nf.sqrt() * out[n - 1]) / (nf + 1.0).sqrt();
        out.push(next);
    }
    out
}

/// Laguerre polynomial `L_n(x)`.
pub fn laguerre(n: usize, x: f64) -> Result<f64> {
    laguerre_assoc(n, 0.0, x)
}

/// Generalised Laguerre polynomial `L_n^{(alpha)}(x)` for `alpha > -1`.
///
/// `(k+1) L_{k+1} = (2k + 1 + alpha - x) L_k - (k + alpha) L_{k-1}`.
pub fn laguerre_assoc(n: usize, alpha: f64, x: f64) -> Result<f64> {
    check_order(n, "Laguerre")?;
    if !(alpha > -1.0) {
        return Err(Error::domain(format!(
            "Laguerre parameter alpha = {alpha} must exceed -1"
        )));
    }
    let mut prev = 1.0;
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    // H_n(x) = n! sum_m (-1)^m (2x)^{n-2m} / (m! (n-2m)!)
    fn hermite_coefficient_sum(n: u32, x: f64) -> f64 {
        (0..=n / 2)
            .map(|m| {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                sign * factorial(n) * (2.0 * x).powi((n - 2 * m) as i32)
                    / (factorial(m) * factorial(n - 2 * m))
            })
            .sum()
    }

    // L_n(x) = sum_k (-1)^k C(n, k) x^k / k!
    fn laguerre_coefficient_sum(n: u32, x: f64) -> f64 {
        (0..=n)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let binom = factorial(n) / (factorial(k) * factorial(n - k));
                sign * binom * x.powi(k as i32) / factorial(k)
            })
            .sum()
    }

    #[test]
    fn hermite_low_orders() {
        assert_eq!(hermite(0, 3.7).unwrap(), 1.0);
        assert_eq!(hermite(2, 0.0).unwrap(), -2.0);
        assert_eq!(hermite(1, 0.25).unwrap(), 0.5);
    }

    #[test]
    fn hermite_matches_coefficient_sum() {
        let expected = hermite_coefficient_sum(5, 1.0);
        assert_eq!(expected, -8.0);
        assert!((hermite(5, 1.0).unwrap() - expected).abs() < 1e-12);
        for n in 0..12 {
            for &x in &[-2.3, -0.4, 0.0, 0.9, 3.1] {
                let want = hermite_coefficient_sum(n, x);
                let got = hermite(n as usize, x).unwrap();
                assert!(
                    (got - want).abs() <= 1e-10 * want.abs().max(1.0),
                    "n={n} x={x}"
                );
            }
        }
    }

    #[test]
    fn hermite_odd_orders_vanish_at_zero() {
        for n in (1..60).step_by(2) {
            assert_eq!(hermite(n, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn hermite_order_guard() {
        assert!(hermite(MAX_POLY_ORDER, 0.5).is_ok());
        assert!(matches!(
            hermite(MAX_POLY_ORDER + 1, 0.5),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            laguerre(MAX_POLY_ORDER + 1, 0.5),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn laguerre_values() {
        assert_eq!(laguerre(0, 5.0).unwrap(), 1.0);
        for &x in &[-1.0, 0.0, 0.3, 4.0] {
            assert!((laguerre(1, x).unwrap() - (1.0 - x)).abs() < 1e-15);
        }
        let want = laguerre_coefficient_sum(4, 2.0);
        assert!((laguerre(4, 2.0).unwrap() - want).abs() < 1e-13);
        for n in 0..10 {
            let want = laguerre_coefficient_sum(n, 1.7);
            assert!((laguerre(n as usize, 1.7).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn associated_laguerre_small_cases() {
        // L_1^{(a)}(x) = 1 + a - x, L_2^{(a)}(x) = (x^2 - 2(a+2)x + (a+1)(a+2)) / 2
        let (a, x) = (2.0, 0.7);
        assert!((laguerre_assoc(1, a, x).unwrap() - (1.0 + a - x)).abs() < 1e-15);
        let l2 = (x * x - 2.0 * (a + 2.0) * x + (a + 1.0) * (a + 2.0)) / 2.0;
        assert!((laguerre_assoc(2, a, x).unwrap() - l2).abs() < 1e-14);
        assert!(laguerre_assoc(3, -1.5, 0.1).is_err());
    }

    #[test]
    fn scaled_table_matches_hermite() {
        let x = 1.3;
        let table = scaled_hermite_table(30, x);
        for (n, h) in table.iter().enumerate() {
            let norm = (2f64.powi(n as i32) * factorial(n as u32)).sqrt();
            let want = hermite(n, x).unwrap() / norm;
            assert!((h - want).abs() < 1e-11 * want.abs().max(1.0), "n={n}");
        }
    }

    proptest::proptest! {
        #[test]
        fn hermite_recurrence_consistency(n in 1usize..50, x in -5.0f64..5.0) {
            let lhs = hermite(n + 1, x).unwrap();
            let rhs = 2.0 * x * hermite(n, x).unwrap() - 2.0 * n as f64 * hermite(n - 1, x).unwrap();
            let scale = lhs.abs().max(rhs.abs()).max(1.0);
            proptest::prop_assert!((lhs - rhs).abs() <= 1e-9 * scale);
        }
    }
}

//! Bessel functions of order zero for real arguments.

use std::f64::consts::PI;

/// Above this argument `I0` switches from its power series to the
/// large-argument expansion.
const I0_SERIES_LIMIT: f64 = 30.0;

/// Below this `|x|` `J0` is summed from its power series; above it the
/// integral representation is used.
const J0_SERIES_LIMIT: f64 = 8.0;

/// Arguments with `|x|` up to this value are covered by the `J0` accuracy
/// tests (absolute error below `1e-10`).
pub const J0_VALIDATED_RANGE: f64 = 50.0;

/// Modified Bessel function of the first kind, `I_0(x)`.
///
/// `I_0` is even, so negative inputs are folded. Returns `+inf` once
/// `e^x` overflows (roughly `x > 713`).
pub fn bessel_i0(x: f64) -> f64 {
    let x = x.abs();
    if x <= I0_SERIES_LIMIT {
        // sum (x/2)^{2k} / (k!)^2, all terms positive
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            term *= q / (k * k);
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
            k += 1.0;
        }
        sum
    } else {
        // e^x / sqrt(2 pi x) * sum_k ((2k-1)!!)^2 / (k! (8x)^k)
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..60 {
            let kf = k as f64;
            let next = term * (2.0 * kf - 1.0).powi(2) / (kf * 8.0 * x);
            if next.abs() > term.abs() {
                break;
            }
            term = next;
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        // split the exponential to delay overflow
        let half = (0.5 * x).exp();
        half * (sum / (2.0 * PI * x).sqrt()) * half
    }
}

/// Bessel function of the first kind, `J_0(x)`.
///
/// Small arguments use the alternating power series. Larger ones use
/// `J_0(x) = (1/pi) ∫_0^pi cos(x sin t) dt` with a trapezoid rule, which
/// converges geometrically because the integrand is smooth and periodic.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= J0_SERIES_LIMIT {
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            term *= -q / (k * k);
            sum += term;
            if term.abs() < 1e-18 {
                break;
            }
            k += 1.0;
        }
        sum
    } else {
        // The m-point rule over one period aliases onto J_{2m}(x), which is
        // negligible once 2m exceeds x by a few dozen.
        let m = (x.ceil() as usize) + 32;
        let h = PI / m as f64;
        let sum: f64 = (0..m).map(|j| (x * (j as f64 * h).sin()).cos()).sum();
        sum / m as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i0_series_oracle(x: f64, terms: u32) -> f64 {
        let mut total = 0.0;
        for k in 0..terms {
            let fact: f64 = (1..=k).map(f64::from).product();
            total += (x / 2.0).powi(2 * k as i32) / (fact * fact);
        }
        total
    }

    fn j0_series_oracle(x: f64, terms: u32) -> f64 {
        let mut total = 0.0;
        for k in 0..terms {
            let fact: f64 = (1..=k).map(f64::from).product();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * (x / 2.0).powi(2 * k as i32) / (fact * fact);
        }
        total
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn i0_basic_values() {
        assert_eq!(bessel_i0(0.0), 1.0);
        let oracle = i0_series_oracle(2.205, 60);
        assert!(rel(bessel_i0(2.205), oracle) < 1e-12);
        assert_eq!(bessel_i0(-1.3), bessel_i0(1.3));
    }

    #[test]
    fn i0_against_reference_values() {
        // 30-digit references
        let cases = [
            (0.7, 1.126_303_018_306_809_2),
            (12.0, 18_948.925_349_296_309),
            (29.9, 708_478_330_489.014_5),
            (30.1, 862_432_920_031.779_2),
            (45.0, 2.083_414_075_177_314_8e18),
            (120.0, 4.754_573_471_017_090_9e50),
            (600.0, 6.146_305_403_936_844_8e258),
        ];
        for (x, want) in cases {
            assert!(
                rel(bessel_i0(x), want) < 1e-12,
                "x={x}: {} vs {want}",
                bessel_i0(x)
            );
        }
    }

    #[test]
    fn i0_integral_representation() {
        // I0(x) = (1/2pi) ∫_0^{2pi} e^{x cos t} dt, periodic trapezoid with many points
        for &x in &[0.5, 3.0, 9.0, 20.0] {
            let m = 400;
            let h = 2.0 * PI / m as f64;
            let s: f64 = (0..m)
                .map(|j| (x * (j as f64 * h).cos()).exp())
                .sum::<f64>()
                / m as f64;
            assert!(rel(bessel_i0(x), s) < 1e-12, "x={x}");
        }
    }

    #[test]
    fn i0_is_monotone() {
        let mut prev = bessel_i0(0.0);
        let mut x = 0.05;
        while x < 80.0 {
            let v = bessel_i0(x);
            assert!(v > prev, "I0 not increasing at x={x}");
            prev = v;
            x += 0.05;
        }
    }

    #[test]
    fn j0_basic_values() {
        assert_eq!(bessel_j0(0.0), 1.0);
        let oracle = j0_series_oracle(2.205, 40);
        assert!(rel(bessel_j0(2.205), oracle) < 1e-12);
        for &x in &[0.3, 4.4, 9.0, 33.3] {
            assert_eq!(bessel_j0(-x), bessel_j0(x));
        }
    }

    #[test]
    fn j0_against_reference_values() {
        let cases = [
            (10.0, -0.245_935_764_451_348_34),
            (25.0, 0.096_266_783_275_958_116),
            (31.5, 0.108_238_926_711_472_62),
            (49.9, 0.045_788_625_467_906_905),
            (-37.2, 0.036_518_620_107_154_28),
        ];
        for (x, want) in cases {
            assert!((bessel_j0(x) - want).abs() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn j0_series_and_integral_agree_at_switch() {
        let below = bessel_j0(J0_SERIES_LIMIT);
        let m = 80;
        let h = PI / m as f64;
        let integral: f64 = (0..m)
            .map(|j| (J0_SERIES_LIMIT * (j as f64 * h).sin()).cos())
            .sum::<f64>()
            / m as f64;
        assert!((below - integral).abs() < 1e-13);
    }
}

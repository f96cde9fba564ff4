//! Error function of a complex argument.
//!
//! `erf z = 1 - e^{-z^2} w(iz)` where `w` is the Faddeeva function. For the
//! upper half plane `w` is evaluated with Weideman's rational expansion
//! (`N = 40` terms), whose coefficients come from a discrete Fourier
//! transform of `e^{-t^2}(L^2 + t^2)` sampled on a tangent grid. Small
//! arguments use the Maclaurin series instead, since the subtraction above
//! cancels catastrophically near the origin.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Real and imaginary parts of the argument must not exceed this in
/// magnitude. Within the box `erf_complex` is accurate to `1e-10` relative
/// to `max(1, |erf z|)`.
pub const ERF_VALIDATED_RANGE: f64 = 12.0;

const WEIDEMAN_TERMS: usize = 40;
const MACLAURIN_RADIUS: f64 = 0.5;

struct Weideman {
    l: f64,
    coeffs: Vec<f64>,
}

fn weideman() -> &'static Weideman {
    static TABLE: OnceLock<Weideman> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = WEIDEMAN_TERMS;
        let m = 2 * n;
        let m2 = 2 * m;
        let l = (n as f64 / std::f64::consts::SQRT_2).sqrt();
        // f[0] = 0, f[j] for k = j - m, j = 1..m2
        let mut f = vec![0.0; m2];
        for (j, slot) in f.iter_mut().enumerate().skip(1) {
            let k = j as f64 - m as f64;
            let t = l * (k * PI / m as f64 / 2.0).tan();
            *slot = (-t * t).exp() * (l * l + t * t);
        }
        // fftshift, then keep the real part of DFT bins 1..=n
        let shifted: Vec<f64> = (0..m2).map(|i| f[(i + m) % m2]).collect();
        let coeffs = (1..=n)
            .map(|bin| {
                let s: f64 = shifted
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v * (2.0 * PI * (bin * i) as f64 / m2 as f64).cos())
                    .sum();
                s / m2 as f64
            })
            .collect();
        Weideman { l, coeffs }
    })
}

/// Faddeeva function `w(z) = e^{-z^2} erfc(-iz)` for `Im z >= 0`.
pub fn faddeeva_upper(z: Complex64) -> Complex64 {
    debug_assert!(z.im >= 0.0);
    let tab = weideman();
    let i = Complex64::i();
    let l = Complex64::new(tab.l, 0.0);
    let denom = l - i * z;
    let zz = (l + i * z) / denom;
    let mut p = Complex64::new(0.0, 0.0);
    for c in tab.coeffs.iter().rev() {
        p = p * zz + c;
    }
    2.0 * p / (denom * denom) + 1.0 / (PI.sqrt() * denom)
}

fn maclaurin(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut t = z;
    let mut sum = z;
    let mut n = 0.0;
    loop {
        n += 1.0;
        t *= -z2 / n;
        let term = t / (2.0 * n + 1.0);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum * (2.0 / PI.sqrt())
}

/// Error function of a complex argument.
pub fn erf_complex(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain(format!("erf of non-finite argument {z}")));
    }
    if z.re.abs() > ERF_VALIDATED_RANGE || z.im.abs() > ERF_VALIDATED_RANGE {
        return Err(Error::domain(format!(
            "erf argument {z} outside the validated box |Re|, |Im| <= {ERF_VALIDATED_RANGE}"
        )));
    }
    Ok(erf_unchecked(z))
}

pub(crate) fn erf_unchecked(z: Complex64) -> Complex64 {
    if z.norm() < MACLAURIN_RADIUS {
        return maclaurin(z);
    }
    if z.re < 0.0 {
        return -erf_unchecked(-z);
    }
    let iz = Complex64::new(-z.im, z.re);
    Complex64::new(1.0, 0.0) - (-z * z).exp() * faddeeva_upper(iz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::quadrature::{make_quadrature, QuadratureKind};

    fn close(got: Complex64, want: Complex64, tol: f64) -> bool {
        (got - want).norm() <= tol * want.norm().max(1.0)
    }

    // (2/sqrt(pi)) ∫_0^1 e^{-(z t)^2} z dt on the straight contour
    fn contour_oracle(z: Complex64) -> Complex64 {
        let rule = make_quadrature(QuadratureKind::GaussLegendre, 80, (0.0, 1.0)).unwrap();
        let s: Complex64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&t, &w)| (-(z * t) * (z * t)).exp() * w)
            .sum();
        s * z * (2.0 / PI.sqrt())
    }

    #[test]
    fn erf_at_zero() {
        assert_eq!(
            erf_complex(Complex64::new(0.0, 0.0)).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn erf_one_plus_i_matches_contour_quadrature() {
        let z = Complex64::new(1.0, 1.0);
        let oracle = contour_oracle(z);
        let got = erf_complex(z).unwrap();
        assert!(close(got, oracle, 1e-12), "{got} vs {oracle}");
        // 20-digit reference for the same point
        assert!(close(
            got,
            Complex64::new(1.316_151_281_697_947_6, 0.190_453_469_237_834_69),
            1e-13
        ));
    }

    #[test]
    fn erf_on_real_axis() {
        let cases = [
            (0.05, 0.056_371_977_797_016_627),
            (0.3, 0.328_626_759_459_127_42),
            (1.7, 0.983_790_458_590_774_56),
            (-2.5, -0.999_593_047_982_555_04),
            (4.0, 0.999_999_984_582_742_1),
        ];
        for (x, want) in cases {
            let got = erf_complex(Complex64::new(x, 0.0)).unwrap();
            assert!((got.re - want).abs() < 1e-12, "x={x}");
            assert!(got.im.abs() < 1e-15);
        }
    }

    #[test]
    fn erf_reference_points_across_the_box() {
        let cases = [
            (
                (3.5, -2.25),
                (1.000_084_142_181_747_9, 0.000_056_180_607_950_101_93),
            ),
            (
                (-8.0, 11.5),
                (-1.627_392_391_561_973e28, 6.753_702_989_338_138e27),
            ),
            ((11.9, 0.3), (1.0, 1.090_782_982_947_353e-36)),
            (
                (0.2, -0.1),
                (0.224_881_445_339_237_99, -0.108_746_861_679_588_63),
            ),
            (
                (-0.01, 6.0),
                (-48_528_755_243_082.89, 408_359_969_874_301.8),
            ),
        ];
        for ((x, y), (re, im)) in cases {
            let got = erf_complex(Complex64::new(x, y)).unwrap();
            assert!(
                close(got, Complex64::new(re, im), 1e-10),
                "z=({x},{y}): {got}"
            );
        }
    }

    #[test]
    fn erf_contour_oracle_on_moderate_grid() {
        for i in -6..=6 {
            for j in -6..=6 {
                let z = Complex64::new(0.45 * i as f64, 0.4 * j as f64);
                let got = erf_complex(z).unwrap();
                let want = contour_oracle(z);
                assert!(close(got, want, 1e-11), "z={z}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn erf_rejects_outside_box() {
        assert!(matches!(
            erf_complex(Complex64::new(12.5, 0.0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            erf_complex(Complex64::new(0.0, -13.0)),
            Err(Error::Domain(_))
        ));
        assert!(erf_complex(Complex64::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn erf_symmetries() {
        let z = Complex64::new(0.8, -1.3);
        let a = erf_complex(z).unwrap();
        assert!(close(erf_complex(-z).unwrap(), -a, 1e-14));
        assert!(close(erf_complex(z.conj()).unwrap(), a.conj(), 1e-14));
    }
}

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::chsh;
use crate::error::{Error, Result};
use crate::special::{bessel_i0, bessel_j0};
use crate::states::{density_matrix, DensityMatrix, TwoModeState};

const UNIT_TOL: f64 = 1e-12;
const IMAG_TOL: f64 = 1e-10;

/// Per-mode pseudospin operators on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudospinOps {
    pub sx: DMatrix<Complex64>,
    pub sy: DMatrix<Complex64>,
    pub sz: DMatrix<Complex64>,
}

impl PseudospinOps {
    pub fn cutoff(&self) -> usize {
        self.sz.nrows()
    }

    /// `u · S`.
    pub fn along(&self, u: &UnitVector) -> DMatrix<Complex64> {
        let [x, y, z] = u.components();
        &self.sx * Complex64::from(x)
            + &self.sy * Complex64::from(y)
            + &self.sz * Complex64::from(z)
    }
}

/// `Sx`, `Sy`, `Sz` pairing `|2n>` with `|2n+1>`; `cutoff` must be even.
pub fn pseudospin_matrices(cutoff: usize) -> Result<PseudospinOps> {
    if cutoff < 2 || !cutoff.is_multiple_of(2) {
        return Err(Error::domain(format!(
            "pseudospin cutoff must be even and >= 2, got {cutoff}"
        )));
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut sx = DMatrix::from_element(cutoff, cutoff, zero);
    let mut sy = sx.clone();
    let mut sz = sx.clone();
    for n in (0..cutoff).step_by(2) {
        sx[(n, n + 1)] = Complex64::new(1.0, 0.0);
        sx[(n + 1, n)] = Complex64::new(1.0, 0.0);
        sy[(n, n + 1)] = Complex64::new(0.0, -1.0);
        sy[(n + 1, n)] = Complex64::new(0.0, 1.0);
        sz[(n, n)] = Complex64::new(1.0, 0.0);
        sz[(n + 1, n + 1)] = Complex64::new(-1.0, 0.0);
    }
    Ok(PseudospinOps { sx, sy, sz })
}

/// A direction in R³ of unit norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitVector([f64; 3]);

impl UnitVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::domain(format!(
                "({x}, {y}, {z}) has norm {norm}, not 1"
            )));
        }
        Ok(UnitVector([x, y, z]))
    }

    /// `(sin θ, 0, cos θ)` in the x–z plane.
    pub fn coplanar(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        UnitVector([s, 0.0, c])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        (0..3).map(|k| self.0[k] * other.0[k]).sum()
    }
}

/// Pseudospin CHSH settings `u, u'` on mode 1 and `v, v'` on mode 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PseudospinSettings {
    pub u: UnitVector,
    pub up: UnitVector,
    pub v: UnitVector,
    pub vp: UnitVector,
}

impl PseudospinSettings {
    pub fn coplanar(theta_u: f64, theta_up: f64, theta_v: f64, theta_vp: f64) -> Self {
        PseudospinSettings {
            u: UnitVector::coplanar(theta_u),
            up: UnitVector::coplanar(theta_up),
            v: UnitVector::coplanar(theta_v),
            vp: UnitVector::coplanar(theta_vp),
        }
    }

    pub fn pairs(&self) -> [(UnitVector, UnitVector); 4] {
        [
            (self.u, self.v),
            (self.u, self.vp),
            (self.up, self.v),
            (self.up, self.vp),
        ]
    }

    /// CHSH value of a correlation `E(u, v)`.
    pub fn try_chsh_of<F: Fn(&UnitVector, &UnitVector) -> Result<f64>>(&self, e: F) -> Result<f64> {
        let p = self.pairs();
        Ok(chsh([
            e(&p[0].0, &p[0].1)?,
            e(&p[1].0, &p[1].1)?,
            e(&p[2].0, &p[2].1)?,
            e(&p[3].0, &p[3].1)?,
        ]))
    }
}

/// `Tr[ρ (u·S) ⊗ (v·S)]` for a two-mode density matrix with even cutoff.
pub fn correlation_pseudospin(
    rho: &DensityMatrix,
    ops: &PseudospinOps,
    u: &UnitVector,
    v: &UnitVector,
) -> Result<f64> {
    let n = rho.cutoff();
    if rho.modes() != 2 {
        return Err(Error::Dimension(format!(
            "pseudospin correlation needs two modes, got {}",
            rho.modes()
        )));
    }
    if ops.cutoff() != n {
        return Err(Error::Dimension(format!(
            "density matrix cutoff {n} differs from operator cutoff {}",
            ops.cutoff()
        )));
    }
    let a = ops.along(u);
    let b = ops.along(v);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, j, val) in rho.iter() {
        let (n1, n2) = (i / n, i % n);
        let (m1, m2) = (j / n, j % n);
        acc += val * a[(m1, n1)] * b[(m2, n2)];
    }
    if !(acc.re.is_finite() && acc.im.is_finite()) {
        return Err(Error::NonFinite("pseudospin correlation".into()));
    }
    if acc.im.abs() > IMAG_TOL {
        return Err(Error::accuracy(format!(
            "pseudospin correlation has imaginary part {:.3e}",
            acc.im
        )));
    }
    Ok(acc.re)
}

/// Coefficient `c(r) = r² (1 - J0(2r²) / I0(2r²))` multiplying
/// `sin θu sin θv` in the closed-form pair-coherent correlation.
pub fn pair_coherent_coefficient_closed_form(r: f64) -> f64 {
    let x = 2.0 * r * r;
    r * r * (1.0 - bessel_j0(x) / bessel_i0(x))
}

/// Coplanar pseudospin correlation of a benchmark state in closed form.
pub fn closed_form_correlation(state: &TwoModeState, theta_u: f64, theta_v: f64) -> Result<f64> {
    state.validate()?;
    let (su, cu) = theta_u.sin_cos();
    let (sv, cv) = theta_v.sin_cos();
    let k = match state {
        TwoModeState::SqueezedVacuum { lambda } => 2.0 * lambda / (1.0 + lambda * lambda),
        TwoModeState::FockPairSuperposition { n } => {
            if *n == 1 {
                1.0
            } else {
                0.0
            }
        }
        TwoModeState::PairCoherent { r } => pair_coherent_coefficient_closed_form(*r),
        TwoModeState::ExplicitFock { .. } => {
            return Err(Error::UnsupportedState(
                "closed-form pseudospin correlations exist only for the benchmark states".into(),
            ))
        }
    };
    Ok(cu * cv + k * su * sv)
}

/// Pseudospin correlation from the truncated Fock-basis density matrix.
pub fn fock_correlation(
    state: &TwoModeState,
    cutoff: usize,
    u: &UnitVector,
    v: &UnitVector,
) -> Result<f64> {
    let rho = density_matrix(state, cutoff)?;
    let ops = pseudospin_matrices(cutoff)?;
    correlation_pseudospin(&rho, &ops, u, v)
}

/// Comparison of the closed-form pair-coherent coefficient with the value of
/// `<Sx ⊗ Sx>` computed in the Fock basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudospinDiscrepancy {
    pub r: f64,
    pub cutoff: usize,
    pub closed_form_coefficient: f64,
    pub fock_coefficient: f64,
    pub difference: f64,
    pub tolerance: f64,
    pub agrees: bool,
    /// The closed-form coefficient exceeds one, which no expectation of a
    /// product of two unit-norm operators can.
    pub closed_form_exceeds_one: bool,
    /// Coefficient used downstream: the Fock value when the two disagree.
    pub adopted_coefficient: f64,
}

impl PseudospinDiscrepancy {
    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub fn pseudospin_discrepancy(
    r: f64,
    cutoff: usize,
    tolerance: f64,
) -> Result<PseudospinDiscrepancy> {
    let state = TwoModeState::pair_coherent(r)?;
    let x = UnitVector::coplanar(std::f64::consts::FRAC_PI_2);
    let fock = fock_correlation(&state, cutoff, &x, &x)?;
    let closed = pair_coherent_coefficient_closed_form(r);
    let difference = closed - fock;
    let agrees = difference.abs() <= tolerance;
    Ok(PseudospinDiscrepancy {
        r,
        cutoff,
        closed_form_coefficient: closed,
        fock_coefficient: fock,
        difference,
        tolerance,
        agrees,
        closed_form_exceeds_one: closed > 1.0,
        adopted_coefficient: if agrees { closed } else { fock },
    })
}

/// Coplanar correlation `E(θu, θv) = Σ u_i T_ij v_j` over `i, j ∈ {x, z}`.
///
/// Every correlation of the crate is bilinear in the two unit vectors, so
/// the four entries of `T` determine it completely.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoplanarCorrelation {
    pub xx: f64,
    pub xz: f64,
    pub zx: f64,
    pub zz: f64,
}

impl CoplanarCorrelation {
    /// From the closed form.
    pub fn closed_form(state: &TwoModeState) -> Result<Self> {
        let k = closed_form_correlation(
            state,
            std::f64::consts::FRAC_PI_2,
            std::f64::consts::FRAC_PI_2,
        )?;
        Ok(CoplanarCorrelation {
            xx: k,
            xz: 0.0,
            zx: 0.0,
            zz: 1.0,
        })
    }

    /// From a two-mode density matrix.
    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        let ops = pseudospin_matrices(rho.cutoff())?;
        let x = UnitVector([1.0, 0.0, 0.0]);
        let z = UnitVector([0.0, 0.0, 1.0]);
        Ok(CoplanarCorrelation {
            xx: correlation_pseudospin(rho, &ops, &x, &x)?,
            xz: correlation_pseudospin(rho, &ops, &x, &z)?,
            zx: correlation_pseudospin(rho, &ops, &z, &x)?,
            zz: correlation_pseudospin(rho, &ops, &z, &z)?,
        })
    }

    /// From the truncated Fock-basis density matrix of a state.
    pub fn fock(state: &TwoModeState, cutoff: usize) -> Result<Self> {
        Self::from_density(&density_matrix(state, cutoff)?)
    }

    /// Closed form for the squeezed vacuum and the Fock pair; for the
    /// pair-coherent state the coefficient adopted by
    /// [`pseudospin_discrepancy`]; the Fock value for explicit states.
    pub fn auto(state: &TwoModeState, cutoff: usize) -> Result<Self> {
        match state {
            TwoModeState::SqueezedVacuum { .. } | TwoModeState::FockPairSuperposition { .. } => {
                Self::closed_form(state)
            }
            TwoModeState::PairCoherent { r } => {
                let rep = pseudospin_discrepancy(*r, cutoff, DISCREPANCY_TOL)?;
                Ok(CoplanarCorrelation {
                    xx: rep.adopted_coefficient,
                    xz: 0.0,
                    zx: 0.0,
                    zz: 1.0,
                })
            }
            TwoModeState::ExplicitFock { .. } => Self::fock(state, cutoff),
        }
    }

    pub fn at(&self, theta_u: f64, theta_v: f64) -> f64 {
        let (su, cu) = theta_u.sin_cos();
        let (sv, cv) = theta_v.sin_cos();
        su * (self.xx * sv + self.xz * cv) + cu * (self.zx * sv + self.zz * cv)
    }

    /// `𝓑` at four coplanar angles.
    pub fn chsh(&self, theta_u: f64, theta_up: f64, theta_v: f64, theta_vp: f64) -> f64 {
        chsh([
            self.at(theta_u, theta_v),
            self.at(theta_u, theta_vp),
            self.at(theta_up, theta_v),
            self.at(theta_up, theta_vp),
        ])
    }

    /// `max_θu 𝓑` with the other three angles fixed, and its argmax.
    ///
    /// `𝓑 = |α sin θu + β cos θu + γ|`, whose maximum is
    /// `sqrt(α² + β²) + |γ|`.
    pub fn max_over_u(&self, theta_up: f64, theta_v: f64, theta_vp: f64) -> (f64, f64) {
        let alpha = self.at(std::f64::consts::FRAC_PI_2, theta_v)
            + self.at(std::f64::consts::FRAC_PI_2, theta_vp);
        let beta = self.at(0.0, theta_v) + self.at(0.0, theta_vp);
        let gamma = self.at(theta_up, theta_v) - self.at(theta_up, theta_vp);
        let arg = if gamma >= 0.0 {
            alpha.atan2(beta)
        } else {
            (-alpha).atan2(-beta)
        };
        (arg, alpha.hypot(beta) + gamma.abs())
    }
}

/// Tolerance between the closed-form pair-coherent coefficient and the Fock
/// value.
pub const DISCREPANCY_TOL: f64 = 1e-6;

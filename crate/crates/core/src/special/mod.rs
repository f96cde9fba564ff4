//! Special functions and quadrature rules used by the closed-form
//! tomograms and probabilities.
//!
//! Every routine is a pure function; rules are plain data.

mod bessel;
mod erf;
mod polynomials;
pub mod quadrature;

pub use bessel::{bessel_i0, bessel_j0, J0_VALIDATED_RANGE};
pub use erf::{erf_complex, faddeeva_upper, ERF_VALIDATED_RANGE};
pub use polynomials::{hermite, laguerre, laguerre_assoc, MAX_POLY_ORDER};
pub use quadrature::{make_quadrature, periodic_rule, QuadratureKind, QuadratureRule};

pub(crate) use erf::erf_unchecked;
pub(crate) use polynomials::scaled_hermite_table;

//! Special functions and quadrature rules used throughout the crate.

mod bessel;
mod gamma;
mod hermite;
mod quadrature;

pub use bessel::{bessel_j, hankel_coefficients};
pub use gamma::{gamma, ln_gamma, ln_gamma_real};
pub use hermite::{hermite_function, hermite_poly, HERMITE_MAX_DEGREE};
pub use quadrature::{gauss_laguerre, gauss_legendre, GaussRule};

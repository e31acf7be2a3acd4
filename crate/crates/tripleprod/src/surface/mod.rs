//! Special functions and numerics on the modular surface SL₂(ℤ)\ℍ:
//! K-Bessel and Whittaker functions, reduction to the fundamental domain,
//! evaluation of automorphic functions from their Fourier expansions, and
//! quadrature over the fundamental domain.

pub mod bessel;
mod domain;
mod forms;
mod integrate;
mod table;

pub use bessel::{kbessel, kbessel_it_scaled, kbessel_it_scaled_many, kbessel_log, kbessel_scaled, whittaker_w};
pub use domain::{mat_mul, reduce, translation, Mat2, PointH, IDENTITY, S};
pub use forms::{AutomorphicFunction, FormKind, MaassExpansion};
pub use integrate::{
    integrate_fd, petersson_norm, triple_integral, unfolded_eisenstein_integral, Decay, FdIntegral,
};
pub use table::BesselTable;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("coefficient shortfall: need {needed} coefficients, have {available}")]
    Shortfall { needed: usize, available: usize },
    #[error("weights sum to {0}, not zero")]
    Weight(i64),
    #[error("integrand has no decay certificate and no cutoff")]
    NoDecay,
}

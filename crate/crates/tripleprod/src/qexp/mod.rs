//! Exact q-expansions of level-one modular forms: Eisenstein series, the
//! cusp-form basis, Hecke operators, Hecke eigenforms and their Satake
//! parameters.
//!
//! Coefficients are exact. Eigenforms in two-dimensional spaces carry their
//! coefficients in ℚ(√D); conversion to `f64` goes through a fixed-point
//! square root so the float values are correctly rounded up to one ulp.

mod eigen;
mod kernel;
pub mod ntt;
mod series;

pub use eigen::{
    cusp_eigenforms, hecke_power, lambda_power, paper_lambda, CoeffField, EigenformJson, ExactQuadratic,
    HoloEigenform, QuadCoeff, Satake, SatakeBranch, DEFAULT_PRECISION,
};
pub use kernel::cusp_basis;
pub use series::{
    bernoulli, delta_qexp, dim_cusp_forms, dim_cusp_forms_oracle, divisor_sums, eisenstein_qexp, hecke_apply,
    hecke_apply_n, QSeries,
};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum QexpError {
    #[error("precision: {0}")]
    Precision(String),
    #[error("weight: {0}")]
    Weight(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("failed to diagonalize: {0}")]
    Diagonalize(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, QexpError>;

/// Satake parameters of an eigenform at p (unitary normalisation).
pub fn satake_params(f: &HoloEigenform, p: u64) -> Result<Satake> {
    f.satake(p).copied().ok_or_else(|| {
        if series::is_prime_u64(p) {
            QexpError::Precision(format!("λ_{p} is beyond precision {}", f.precision()))
        } else {
            QexpError::NotPrime(p)
        }
    })
}

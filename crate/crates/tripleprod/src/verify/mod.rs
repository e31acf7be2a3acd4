//! Both sides of each identity, assembled from the other modules and
//! compared in an [`IdentityReport`].
//!
//! Global checks run through a [`Session`], which owns the cache of adjoint
//! values L*(1, Ad) shared by the norm and triple-product identities. Local and
//! archimedean checks are free functions.

mod arch;
mod constants;
mod global;
mod local;
mod report;

pub use arch::{
    beta_numeric, check_gross_kudla_arch, check_gross_kudla_central, check_gross_kudla_kk0, check_ikeda_arch,
    check_ikeda_boundary, gross_kudla_final_line, gross_kudla_gamma_line, ikeda_boundary_ratio, ikeda_gamma_product,
    ikeda_integral, kk0_closed_form, kk0_integral, TOL_CENTRAL_LINE, TOL_GROSS_KUDLA, TOL_IKEDA, TOL_KK0,
};
pub use constants::{ConstantTable, LocalType, Sign};
pub use global::{
    check_eismth_symmetry, AdjointCache, Constituent, Session, ThirdMomentReport, ThirdMomentRow, TOL_EISMTH,
    TOL_RANSEL, TOL_THRD_CROSS, TOL_UNFOLDING, TOL_WATSON_HOLO, TOL_WATSON_MAASS,
};
pub use local::{check_local_zeta_unramified, local_zeta_closed_form, local_zeta_sum, TOL_LOCAL_ZETA};
pub use report::{csv_summary, IdentityReport};

use crate::langlands::LanglandsError;
use crate::lfun::LfunError;
use crate::maass::MaassError;
use crate::qexp::QexpError;
use crate::surface::SurfaceError;

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("unsupported weight pattern: {0}")]
    Pattern(String),
    #[error("too close to a pole: {0}")]
    Pole(String),
    #[error("input is not a Hecke-normalised eigenform: {0}")]
    NotNormalized(String),
    #[error("accuracy target not reached: {0}")]
    Accuracy(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Lfun(#[from] LfunError),
    #[error(transparent)]
    Langlands(#[from] LanglandsError),
    #[error(transparent)]
    Maass(#[from] MaassError),
    #[error(transparent)]
    Qexp(#[from] QexpError),
}

pub type Result<T> = std::result::Result<T, VerifyError>;

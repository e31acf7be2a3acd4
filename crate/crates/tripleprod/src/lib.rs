//! Level-one modular forms, their L-functions, and numerical checks of the
//! Rankin–Selberg, Eisenstein, Watson and local zeta-integral identities.

pub mod langlands;
pub mod lfun;
pub mod maass;
pub mod qexp;
pub mod quad;
pub mod special;
pub mod surface;
pub mod verify;

//! Special-function kernels used by the inversion solvers.

mod beta;
mod carlson;
mod elliptic;
mod gamma;

pub use beta::{reg_beta, BetaParams};
pub use carlson::{carlson_rd, carlson_rf};
pub use elliptic::{ellip_e_complete, ellip_e_inc};
pub use gamma::{gamma_density, ln_gamma, reg_gamma_p, reg_gamma_q, GammaParams};

pub(crate) use beta::{ln_beta, reg_beta_logs};
pub(crate) use gamma::{ln_gamma_prefactor, reg_gamma_pq};

//! Special functions: Legendre elliptic integrals (complete and incomplete),
//! Jacobi elliptic functions, and Jacobi theta functions with their
//! logarithmic derivatives.
//!
//! Everything here is plain `f64`. The modulus convention is `k` itself
//! (never the parameter m = k²), matching the rest of the crate.

pub mod elliptic;
pub mod jacobi;
pub mod theta;

pub use elliptic::{
    complete_e, complete_e_derivative, complete_k, complete_k_derivative, complete_k_e,
    heuman_lambda0, heuman_lambda0_dk, heuman_lambda0_dl, incomplete_e, incomplete_e_minus_f,
    incomplete_f, EllipticModulus,
};
pub use jacobi::{inverse_cn, inverse_dn, inverse_sn, jacobi_sn_cn_dn};
pub use theta::{jacobi_zeta, Complex};

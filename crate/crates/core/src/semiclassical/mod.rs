//! Isomonodromy and ladder-operator quantities for the deformed weight and the identities
//! that tie them to the recurrence coefficients.

pub mod aux;
pub mod identities;
pub mod lax;

pub use aux::{
    ladder_integral_values, ladder_integrals, theta_kappa_from_recurrence, theta_prev, AuxPair,
    LadderIntegrals, Provenance,
};
pub use identities::{verify_identities, x_panel};
pub use lax::{build_lax, omega_poly, theta_poly, v_poly, w_poly, LaxData};

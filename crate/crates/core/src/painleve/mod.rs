//! The Painleve V layer: Hamiltonian structure, the coupled `(theta_n, kappa_n)` flow, its
//! small-`t` data and numerical integration.

pub mod checks;
pub mod evolve;
pub mod flow;
pub mod hamiltonian;
pub mod series;

pub use checks::{ab_flow_check, compatibility_check, hamilton_pv_residual, hamiltonian_flow_residual, two_theory_residual};
pub use evolve::{evolve_from, IntegratorStats, Method, StepControl, Trajectory, TrajectoryNode};
pub use flow::{ladder_image_of_ode, ladder_rhs, ode_rhs, ode_rhs_log, FlowParams};
pub use hamiltonian::{
    from_hamiltonian, hamilton_rhs, hamiltonian_eval, pv_residual, pv_rhs, qp_map, to_hamiltonian, Convention,
    HamiltonPoint, PvParams,
};
pub use series::{series_init, small_t_expansion, taylor_series, InitKind, SeriesInit, SmallTExpansion};

use crate::error::Result;
use crate::scalar::Real;
use crate::weight::WeightParams;

/// Evolves `(theta_n, kappa_n)` from series initial data at `t0` to `t1`.
pub fn evolve<T: Real>(n: usize, t0: f64, t1: f64, weight: &WeightParams, ctrl: &StepControl) -> Result<Trajectory<T>> {
    let init = series_init::<T>(n, t0, weight, ctrl.tol * 1e-2)?;
    let fp = FlowParams {
        n,
        alpha: weight.alpha,
        mu: weight.mu,
    };
    evolve_from(fp, t0, t1, init.theta, init.kappa, ctrl, init.kind)
}

//! The coupled `t`-flows: `(theta_n, kappa_n)` from the isomonodromy side and `(R_n, r_n)` from
//! the ladder side. Neither references `zeta`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// The flow parameters: degree and the two exponents of the weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowParams {
    pub n: usize,
    pub alpha: u32,
    pub mu: f64,
}

/// `t theta' ` and `t kappa' `, the right sides in the variable `ln t`.
pub fn ode_rhs_log<T: Real>(theta: &T, kappa: &T, t: &T, fp: &FlowParams) -> Result<(T, T)> {
    let tp = theta.clone() + t.clone();
    if t.is_zero() || theta.is_zero() || tp.is_zero() {
        return Err(Error::SingularRhs { t: t.to_f64_lossy() });
    }
    let n = T::int(fp.n as i64);
    let a = T::int(fp.alpha as i64);
    let mu = T::real(fp.mu);
    let two = T::int(2);
    let nh = n.clone() + mu.clone() / two.clone();
    let s = two.clone() * n.clone() + a.clone() + mu.clone();
    let dtheta = two * kappa.clone() + (s.clone() + T::one() + t.clone() + theta.clone()) * theta.clone();
    let dkappa = (T::one() / tp.clone() + T::one() / theta.clone()) * kappa.square()
        + (s.clone() + T::one() - s * t.clone() / tp.clone()) * kappa.clone()
        - (n.square() + nh.clone() * (a.clone() + mu.clone())) * t.clone()
        - (mu.clone() * t.clone()).square() / (T::int(4) * theta.clone())
        + nh.clone() * (nh + a) * t.square() / tp;
    Ok((dtheta, dkappa))
}

/// `(theta', kappa')`.
pub fn ode_rhs<T: Real>(theta: &T, kappa: &T, t: &T, fp: &FlowParams) -> Result<(T, T)> {
    let (a, b) = ode_rhs_log(theta, kappa, t, fp)?;
    Ok((a / t.clone(), b / t.clone()))
}

/// `(R', r')` from the ladder system.
pub fn ladder_rhs<T: Real>(big_r: &T, small_r: &T, t: &T, fp: &FlowParams) -> Result<(T, T)> {
    let one = T::one();
    if t.is_zero() || big_r.is_zero() || *big_r == one {
        return Err(Error::SingularRhs { t: t.to_f64_lossy() });
    }
    let n = T::int(fp.n as i64);
    let a = T::int(fp.alpha as i64);
    let mu = T::real(fp.mu);
    let two = T::int(2);
    let (rr, r) = (big_r.clone(), small_r.clone());
    let s = two.clone() * n.clone() + a.clone() + mu.clone();
    let dr_big = two.clone() * r.clone() - a.clone() + rr.clone() * (t.clone() * rr.clone() + s.clone() - t.clone());
    let omr = one.clone() - rr.clone();
    let dr_small = (one - two.clone() * rr.clone()) / (rr.clone() * omr.clone()) * r.square()
        // n(n + mu), not n(n + alpha): only this makes the field the image of the coupled flow
        - n.clone() * (n.clone() + mu.clone()) * rr.clone() / omr
        + s * r.clone()
        + (two * n + mu) * r.clone() / (rr.clone() - T::one())
        - a * r / rr;
    Ok((dr_big / t.clone(), dr_small / t.clone()))
}

/// Image of the `(theta, kappa)` field under `R = (theta + t)/t`, `r = kappa/t - (n + mu/2)`.
pub fn ladder_image_of_ode<T: Real>(theta: &T, kappa: &T, t: &T, fp: &FlowParams) -> Result<(T, T)> {
    let (dth, dk) = ode_rhs(theta, kappa, t, fp)?;
    // d/dt (theta + t)/t = (theta' + 1)/t - (theta + t)/t^2
    let dr_big = (dth + T::one()) / t.clone() - (theta.clone() + t.clone()) / t.square();
    let dr_small = dk / t.clone() - kappa.clone() / t.square();
    Ok((dr_big, dr_small))
}

//! Explicit `Theta_n`, `Omega_n` and the 2x2 Lax matrices in `x` and `t`.

use crate::error::Result;
use crate::linalg::Mat2;
use crate::poly::Poly;
use crate::scalar::Real;
use crate::semiclassical::aux::{n_half_mu, theta_prev};
use crate::weight::WeightParams;

/// `W = x (x - t)`.
pub fn w_poly<T: Real>(params: &WeightParams) -> Poly<T> {
    Poly::new(vec![T::zero(), -T::real(params.t), T::one()])
}

/// `V` with `2V = -x^2 + (alpha + mu + t) x - mu t`, so that `2V/W = w'/w` off the jump.
pub fn v_poly<T: Real>(params: &WeightParams) -> Poly<T> {
    let two = T::int(2);
    let (a, mu, t) = (T::int(params.alpha as i64), T::real(params.mu), T::real(params.t));
    Poly::new(vec![
        -(mu.clone() * t.clone()) / two.clone(),
        (a + mu + t) / two.clone(),
        -T::one() / two,
    ])
}

/// `Theta_n = -x - theta_n`.
pub fn theta_poly<T: Real>(theta: &T) -> Poly<T> {
    Poly::new(vec![-theta.clone(), -T::one()])
}

/// `Omega_n = -x^2/2 + (2n + alpha + mu + t) x / 2 - kappa_n`.
pub fn omega_poly<T: Real>(n: usize, params: &WeightParams, kappa: &T) -> Poly<T> {
    let two = T::int(2);
    let lin = (T::int(2 * n as i64 + params.alpha as i64) + T::real(params.mu) + T::real(params.t)) / two.clone();
    Poly::new(vec![-kappa.clone(), lin, -T::one() / two])
}

#[derive(Debug, Clone)]
pub struct LaxData<T> {
    pub n: usize,
    pub t: f64,
    pub a_n: T,
    pub theta: T,
    pub theta_prev: T,
    pub kappa: T,
    pub a0: Mat2<T>,
    pub at: Mat2<T>,
    pub ainf: Mat2<T>,
    pub b: Mat2<T>,
    pub theta_n: Poly<T>,
    pub omega_n: Poly<T>,
    pub w: Poly<T>,
    pub v: Poly<T>,
}

/// Residue matrices at `0`, `t`, `infinity` and the deformation matrix, with `theta_{n-1}`
/// eliminated through the ratio recurrence.
pub fn build_lax<T: Real>(
    params: &WeightParams,
    n: usize,
    a_n: &T,
    theta: &T,
    kappa: &T,
    tol: f64,
) -> Result<LaxData<T>> {
    let th1 = theta_prev(n, params, theta, kappa, tol)?;
    let t = T::real(params.t);
    let inv_t = T::one() / t.clone();
    let mu_t2 = T::real(params.mu) * t.clone() / T::int(2);
    let nh = n_half_mu::<T>(n, params);
    let nah = nh.clone() + T::int(params.alpha as i64);
    let a0 = Mat2::new(
        kappa.clone() - mu_t2.clone(),
        -(a_n.clone() * theta.clone()),
        a_n.clone() * th1.clone(),
        -kappa.clone() - mu_t2,
    )
    .scale(&inv_t);
    let at = Mat2::new(
        nh * t.clone() - kappa.clone(),
        a_n.clone() * (theta.clone() + t.clone()),
        -(a_n.clone() * (th1.clone() + t.clone())),
        kappa.clone() - nah * t.clone(),
    )
    .scale(&inv_t);
    let half_inv_t = inv_t / T::int(2);
    let b = Mat2::diag(
        (theta.clone() + t.clone()) * half_inv_t.clone(),
        -(th1.clone() + t) * half_inv_t,
    );
    Ok(LaxData {
        n,
        t: params.t,
        a_n: a_n.clone(),
        theta: theta.clone(),
        theta_prev: th1,
        kappa: kappa.clone(),
        a0,
        at,
        ainf: Mat2::diag(T::zero(), T::one()),
        b,
        theta_n: theta_poly(theta),
        omega_n: omega_poly(n, params, kappa),
        w: w_poly(params),
        v: v_poly(params),
    })
}

impl<T: Real> LaxData<T> {
    /// `A_inf + A_0/x + A_t/(x - t)`.
    pub fn a_matrix(&self, x: &T) -> Mat2<T> {
        let t = T::real(self.t);
        self.ainf.clone()
            + self.a0.scale(&(T::one() / x.clone()))
            + self.at.scale(&(T::one() / (x.clone() - t)))
    }

    /// `B - A_t/(x - t)`.
    pub fn b_matrix(&self, x: &T) -> Mat2<T> {
        let t = T::real(self.t);
        self.b.clone() - self.at.scale(&(T::one() / (x.clone() - t)))
    }

    /// The Magnus form `(1/W) [[Omega_n - V, -a_n Theta_n], [a_n Theta_{n-1}, -Omega_n - V]]`.
    pub fn magnus_matrix(&self, x: &T) -> Mat2<T> {
        let w = self.w.eval(x);
        let v = self.v.eval(x);
        let om = self.omega_n.eval(x);
        let th = self.theta_n.eval(x);
        let th1 = theta_poly(&self.theta_prev).eval(x);
        Mat2::new(
            om.clone() - v.clone(),
            -(self.a_n.clone() * th),
            self.a_n.clone() * th1,
            -om - v,
        )
        .scale(&(T::one() / w))
    }
}

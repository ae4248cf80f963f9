//! The Painleve V Hamiltonian, its parameter wiring and the maps to `(theta_n, kappa_n)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Field, Real};
use crate::semiclassical::aux::check_theta;
use crate::weight::WeightParams;

/// Which of the two Mobius maps ties `q` to `theta_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum Convention {
    /// `q = (theta + t)/theta`.
    #[default]
    #[serde(rename = "prop11")]
    Direct,
    /// `q = theta/(theta + t)`, the reciprocal of the direct map.
    #[serde(rename = "cor12")]
    Reciprocal,
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prop11" | "direct" => Ok(Self::Direct),
            "cor12" | "reciprocal" => Ok(Self::Reciprocal),
            other => Err(Error::InvalidParameters(format!(
                "convention must be prop11 or cor12, got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PvParams<T> {
    pub v: [T; 4],
    /// Parameters of the second-order equation, derived from `v`.
    pub alphas: [T; 4],
    pub n: usize,
    pub alpha: u32,
    pub mu: f64,
    pub convention: Convention,
}

impl<T: Field> PvParams<T> {
    /// `alpha_1 = (v3 - v4)^2/2`, `alpha_2 = -(v2 - v1)^2/2`, `alpha_3 = 2 v1 + 2 v2 - 1`,
    /// `alpha_4 = -1/2`.
    pub fn from_v(v: [T; 4], n: usize, weight: &WeightParams, convention: Convention) -> Self {
        let half = T::ratio(1, 2);
        let alphas = [
            half.clone() * (v[2].clone() - v[3].clone()).square(),
            -(half.clone() * (v[1].clone() - v[0].clone()).square()),
            T::int(2) * (v[0].clone() + v[1].clone()) - T::one(),
            -half,
        ];
        Self {
            v,
            alphas,
            n,
            alpha: weight.alpha,
            mu: weight.mu,
            convention,
        }
    }

    /// The `v` wiring for the weight at degree `n`.
    pub fn for_weight(n: usize, weight: &WeightParams, convention: Convention) -> Self {
        let (nn, a, mu) = (T::int(n as i64), T::int(weight.alpha as i64), T::real(weight.mu));
        let four = T::int(4);
        let v = match convention {
            Convention::Direct => {
                let v3 = (T::int(2) * nn.clone() + a.clone() - mu.clone()) / four;
                [
                    v3.clone() - nn.clone() - a,
                    v3.clone() - nn,
                    v3.clone(),
                    v3 + mu,
                ]
            }
            Convention::Reciprocal => {
                let v2 = (T::int(2) * nn.clone() + a.clone() + T::int(2) - mu.clone()) / four;
                [
                    v2.clone() + mu,
                    v2.clone(),
                    v2.clone() - nn.clone() - T::one(),
                    v2 - nn - a - T::one(),
                ]
            }
        };
        Self::from_v(v, n, weight, convention)
    }

    pub fn v_sum(&self) -> T {
        self.v.iter().cloned().fold(T::zero(), |a, b| a + b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HamiltonPoint<T> {
    pub q: T,
    pub p: T,
    pub t: T,
    pub h: T,
}

fn p_coefficient<T: Field>(q: &T, t: &T, v: &[T; 4]) -> T {
    let q1 = q.clone() - T::one();
    (v[1].clone() - v[0].clone()) * q1.square() - T::int(2) * (v[0].clone() + v[1].clone()) * q.clone() * q1
        + t.clone() * q.clone()
}

/// `H(q, p, t)`.
pub fn hamiltonian_eval<T: Field>(q: &T, p: &T, t: &T, pv: &PvParams<T>) -> T {
    let v = &pv.v;
    let q1 = q.clone() - T::one();
    let th = q.clone() * q1.square() * p.square() - p_coefficient(q, t, v) * p.clone()
        + (v[2].clone() - v[0].clone()) * (v[3].clone() - v[0].clone()) * q1;
    th / t.clone()
}

/// `(dq/dt, dp/dt) = (dH/dp, -dH/dq)` in closed form.
pub fn hamilton_rhs<T: Field>(q: &T, p: &T, t: &T, pv: &PvParams<T>) -> (T, T) {
    let v = &pv.v;
    let two = T::int(2);
    let q1 = q.clone() - T::one();
    let dh_dp = two.clone() * q.clone() * q1.square() * p.clone() - p_coefficient(q, t, v);
    let dcoef = two.clone() * (v[1].clone() - v[0].clone()) * q1.clone()
        - two.clone() * (v[0].clone() + v[1].clone()) * (two.clone() * q.clone() - T::one())
        + t.clone();
    let dh_dq = (q1.square() + two * q.clone() * q1) * p.square() - dcoef * p.clone()
        + (v[2].clone() - v[0].clone()) * (v[3].clone() - v[0].clone());
    (dh_dp / t.clone(), -(dh_dq / t.clone()))
}

/// The map `(theta, kappa, t) -> (q, p)` in any field, so that it can be pushed through series.
pub fn qp_map<F: Field>(theta: &F, kappa: &F, t: &F, n: usize, weight: &WeightParams, convention: Convention) -> (F, F) {
    let nn = F::int(n as i64);
    let mu = F::real(weight.mu);
    let a = F::int(weight.alpha as i64);
    let two = F::int(2);
    let tp = theta.clone() + t.clone();
    match convention {
        Convention::Direct => {
            let c = nn + a + mu / two;
            let p = theta.clone() * (c * t.clone() - kappa.clone()) / (t.clone() * tp.clone());
            (tp / theta.clone(), p)
        }
        Convention::Reciprocal => {
            let inner = kappa.clone() - mu.clone() * t.clone() / two.clone()
                + theta.clone() * (two * nn + F::one() + t.clone() + a + mu + theta.clone());
            let p = tp.clone() * inner / (t.clone() * theta.clone());
            (theta.clone() / tp, p)
        }
    }
}

/// Maps `(theta_n, kappa_n)` at `t` to the canonical pair `(q, p)`.
pub fn to_hamiltonian<T: Real>(
    theta: &T,
    kappa: &T,
    n: usize,
    weight: &WeightParams,
    convention: Convention,
) -> Result<HamiltonPoint<T>> {
    check_theta(n, weight, theta, 0.0)?;
    let t = T::real(weight.t);
    let (q, p) = qp_map(theta, kappa, &t, n, weight, convention);
    let pv = PvParams::for_weight(n, weight, convention);
    let h = hamiltonian_eval(&q, &p, &t, &pv);
    Ok(HamiltonPoint { q, p, t, h })
}

/// Inverse of [`to_hamiltonian`].
pub fn from_hamiltonian<T: Real>(
    q: &T,
    p: &T,
    n: usize,
    weight: &WeightParams,
    convention: Convention,
) -> Result<(T, T)> {
    let t = T::real(weight.t);
    let mu = T::real(weight.mu);
    let a = T::int(weight.alpha as i64);
    let singular = |v: &T| v.is_zero() || !v.is_finite();
    match convention {
        Convention::Direct => {
            let d = q.clone() - T::one();
            if singular(&d) {
                return Err(Error::DegenerateTheta { n, t: weight.t });
            }
            let theta = t.clone() / d;
            let c = T::int(n as i64) + a + mu / T::int(2);
            Ok((theta, t * (c - p.clone() * q.clone())))
        }
        Convention::Reciprocal => {
            let d = T::one() - q.clone();
            if singular(&d) || q.is_zero() {
                return Err(Error::DegenerateTheta { n, t: weight.t });
            }
            let theta = t.clone() * q.clone() / d;
            let tp = theta.clone() + t.clone();
            let kappa = p.clone() * t.clone() * theta.clone() / tp + mu * t.clone() / T::int(2)
                - theta.clone() * (T::int(2 * n as i64 + 1) + t + a + T::real(weight.mu) + theta.clone());
            Ok((theta, kappa))
        }
    }
}

/// Right side of the second-order Painleve V equation for `y'' `.
pub fn pv_rhs<T: Field>(y: &T, dy: &T, t: &T, alphas: &[T; 4]) -> T {
    let one = T::one();
    let y1 = y.clone() - one.clone();
    (one.clone() / (T::int(2) * y.clone()) + one / y1.clone()) * dy.square() - dy.clone() / t.clone()
        + y1.square() / t.square() * (alphas[0].clone() * y.clone() + alphas[1].clone() / y.clone())
        + alphas[2].clone() * y.clone() / t.clone()
        + alphas[3].clone() * y.clone() * (y.clone() + T::one()) / y1
}

/// Maximum over `t_panel` of `|y'' - rhs| / max |y''|`, with `y'`, `y''` by fourth-order central
/// differences of `q` at spacing `h`.
pub fn pv_residual<T: Real>(
    q: &mut dyn FnMut(f64) -> Result<T>,
    alphas: &[T; 4],
    t_panel: &[f64],
    h: f64,
) -> Result<f64> {
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for &t in t_panel {
        let s: Vec<T> = [-2.0, -1.0, 0.0, 1.0, 2.0]
            .iter()
            .map(|k| q(t + k * h))
            .collect::<Result<_>>()?;
        let y = s[2].clone();
        if y.is_zero() || (y.clone() - T::one()).abs().to_f64_lossy() < 1e-12 || !y.is_finite() {
            return Err(Error::SingularPanel { t });
        }
        let hh = T::real(h);
        let dy = (s[0].clone() - T::int(8) * s[1].clone() + T::int(8) * s[3].clone() - s[4].clone())
            / (T::int(12) * hh.clone());
        let d2y = (-s[0].clone() + T::int(16) * s[1].clone() - T::int(30) * y.clone() + T::int(16) * s[3].clone()
            - s[4].clone())
            / (T::int(12) * hh.square());
        let r = (d2y.clone() - pv_rhs(&y, &dy, &T::real(t), alphas)).abs().to_f64_lossy();
        worst = worst.max(r);
        scale = scale.max(d2y.abs().to_f64_lossy());
    }
    Ok(if scale == 0.0 { worst } else { worst / scale })
}

//! Small-`t` data for the flow: the leading expansion of `theta_n`, `kappa_n`, and (for integer
//! `mu`, where both functions are analytic at `t = 0`) their full Taylor series computed from
//! power series of the Hankel determinants.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::det_unpivoted;
use crate::moments::moment_series;
use crate::scalar::{Field, Real};
use crate::series::PowerSeries;
use crate::weight::WeightParams;

/// Coefficients of `theta_n = theta1 t + theta2 t^2 + theta_na t^{1+alpha+mu} + ...` and the
/// same for `kappa_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallTExpansion<T> {
    pub theta1: T,
    pub theta2: T,
    pub theta_na: T,
    pub kappa1: T,
    pub kappa2: T,
    pub kappa_na: T,
    /// `1 + alpha + mu`.
    pub na_exponent: f64,
}

pub fn small_t_expansion<T: Real>(n: usize, weight: &WeightParams) -> Result<SmallTExpansion<T>> {
    weight.validate()?;
    if weight.zeta >= 1.0 {
        return Err(Error::UnsupportedParameters(
            "the small-t expansion needs zeta < 1".into(),
        ));
    }
    let (a, mu) = (T::int(weight.alpha as i64), T::real(weight.mu));
    let s = a.clone() + mu.clone();
    let nn = T::int(n as i64);
    let two = T::int(2);
    let s2 = s.square();
    let theta1 = -(mu.clone() / s.clone());
    let theta2 = a.clone() * mu.clone() * (two.clone() * nn.clone() + s.clone() + T::one())
        / ((s2.clone() - T::one()) * s2.clone());
    let kappa1 = mu.clone() * (two.clone() * nn.clone() + s.clone()) / (two.clone() * s.clone());
    let kappa2 = -(two * nn.clone() * a.clone() * mu.clone() * (nn.clone() + s.clone()) / ((s2.clone() - T::one()) * s2));
    let zeta = T::real(weight.zeta);
    let sign = if weight.alpha.is_multiple_of(2) { T::one() } else { -T::one() };
    let g = |v: T| v.gamma();
    let theta_na = -(sign * g(a.clone() + T::one()) * zeta.clone() * g(s.clone() + nn.clone() + T::one()) * g(mu + T::one())
        / ((T::one() - zeta) * g(nn.clone() + T::one()) * g(s.clone() + T::one()).powi(3)));
    let kappa_na = -(nn * theta_na.clone());
    Ok(SmallTExpansion {
        theta1,
        theta2,
        theta_na,
        kappa1,
        kappa2,
        kappa_na,
        na_exponent: 1.0 + weight.alpha as f64 + weight.mu,
    })
}

impl<T: Real> SmallTExpansion<T> {
    /// Truncation at `t`. The non-analytic terms are included when `include_na` is set.
    pub fn eval(&self, t: &T, include_na: bool) -> (T, T) {
        let t2 = t.square();
        let mut theta = self.theta1.clone() * t.clone() + self.theta2.clone() * t2.clone();
        let mut kappa = self.kappa1.clone() * t.clone() + self.kappa2.clone() * t2;
        if include_na {
            let tn = t.powf(&T::real(self.na_exponent));
            theta = theta + self.theta_na.clone() * tn.clone();
            kappa = kappa + self.kappa_na.clone() * tn;
        }
        (theta, kappa)
    }

    /// The non-analytic terms matter at the truncation order only when they precede `t^3`.
    pub fn na_is_relevant(&self) -> bool {
        self.na_exponent < 3.0
    }
}

fn hankel_series<F: Field>(mu: &[PowerSeries<F>], n: usize, shifted: bool) -> PowerSeries<F> {
    if n == 0 {
        return if shifted { PowerSeries::zero() } else { PowerSeries::one() };
    }
    let m: Vec<Vec<PowerSeries<F>>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| mu[j + k + usize::from(shifted && k + 1 == n)].clone())
                .collect()
        })
        .collect();
    det_unpivoted(&m)
}

/// Taylor series of `theta_n(t)` and `kappa_n(t)` to `order` terms, exact in `F` when `F` is.
/// Requires integer `mu` so that every moment is a power series in `t`.
pub fn taylor_series<F: Field>(
    n: usize,
    weight: &WeightParams,
    order: usize,
) -> Result<(PowerSeries<F>, PowerSeries<F>)> {
    weight.require_integer_mu()?;
    let mu: Vec<PowerSeries<F>> = (0..=2 * n + 2)
        .map(|k| moment_series::<F>(k, weight, order))
        .collect::<Result<_>>()?;
    let delta: Vec<_> = (0..=n + 1).map(|k| hankel_series(&mu, k, false)).collect();
    let sigma: Vec<_> = (0..=n + 1).map(|k| hankel_series(&mu, k, true)).collect();
    if delta.iter().any(|d| d.coeff(0).is_zero()) {
        return Err(Error::SingularHankel { n });
    }
    let ratio = |k: usize| sigma[k].clone() / delta[k].clone();
    let t = PowerSeries::<F>::variable(order);
    let c = |v: F| PowerSeries::constant(v);
    let b_n = ratio(n + 1) - ratio(n);
    let theta = b_n
        - c(F::int(2 * n as i64 + 1 + weight.alpha as i64))
        - c(F::real(weight.mu))
        - t.clone();
    let a2 = if n == 0 {
        PowerSeries::zero()
    } else {
        delta[n - 1].clone() * delta[n + 1].clone() / (delta[n].clone() * delta[n].clone())
    };
    let nh = F::int(n as i64) + F::real(weight.mu) / F::int(2);
    let kappa = c(nh) * t + a2 - ratio(n);
    Ok((theta, kappa))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum InitKind {
    /// Full Taylor series with this many terms.
    Taylor { terms: usize },
    /// Leading small-`t` expansion, with or without the `t^{1+alpha+mu}` terms.
    Expansion { non_analytic: bool },
    /// Values from the Hankel determinants at `t0`.
    Determinants,
    Supplied,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesInit<T> {
    pub theta: T,
    pub kappa: T,
    pub kind: InitKind,
}

const MAX_TERMS: usize = 64;

/// Initial `(theta_n, kappa_n)` at a small `t0`. Integer `mu` uses the Taylor series, grown until
/// the tail is below `tol`; otherwise the leading expansion.
pub fn series_init<T: Real>(n: usize, t0: f64, weight: &WeightParams, tol: f64) -> Result<SeriesInit<T>> {
    if !(t0 > 0.0 && t0 <= 1e-2) {
        return Err(Error::InvalidParameters(format!(
            "series initial data needs 0 < t0 <= 1e-2, got {t0}"
        )));
    }
    let w = weight.with_t(t0);
    w.validate()?;
    if weight.alpha as f64 + weight.mu <= 1.0 {
        return Err(Error::UnsupportedParameters(
            "series initial data needs alpha + mu > 1".into(),
        ));
    }
    let t = T::real(t0);
    if w.require_integer_mu().is_err() {
        let e = small_t_expansion::<T>(n, &w)?;
        let na = e.na_is_relevant();
        let (theta, kappa) = e.eval(&t, na);
        return Ok(SeriesInit {
            theta,
            kappa,
            kind: InitKind::Expansion { non_analytic: na },
        });
    }
    let mut terms = 16;
    loop {
        let (th, ka) = taylor_series::<T>(n, &w, terms)?;
        let tail = |s: &PowerSeries<T>| {
            let k = terms - 1;
            (s.coeff(k).abs() * t.powi(k as i32)).to_f64_lossy()
                + (s.coeff(k - 1).abs() * t.powi(k as i32 - 1)).to_f64_lossy()
        };
        let theta = th.eval(&t);
        let kappa = ka.eval(&t);
        let scale = theta.abs().to_f64_lossy().max(kappa.abs().to_f64_lossy());
        if tail(&th).max(tail(&ka)) <= tol * scale {
            return Ok(SeriesInit {
                theta,
                kappa,
                kind: InitKind::Taylor { terms },
            });
        }
        if terms >= MAX_TERMS {
            return Err(Error::NoConvergence {
                what: "Taylor series of theta_n, kappa_n",
                limit: MAX_TERMS,
            });
        }
        terms *= 2;
    }
}

//! The auxiliary variables `(theta_n, kappa_n)` and their ladder counterparts `(R_n, r_n)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hankel::RecurrenceTable;
use crate::precision::PrecisionCtx;
use crate::quadrature::{integrate_weighted, Integrator, QuadratureSpec};
use crate::scalar::{rel_diff, Real};
use crate::weight::WeightParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    FromRecurrence,
    FromIntegrals,
    FromOde,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuxPair<T> {
    pub n: usize,
    pub t: f64,
    pub theta: T,
    pub kappa: T,
    #[serde(rename = "R")]
    pub big_r: T,
    #[serde(rename = "r")]
    pub small_r: T,
    pub provenance: Provenance,
}

/// `n + mu/2` in the working type.
pub(crate) fn n_half_mu<T: Real>(n: usize, params: &WeightParams) -> T {
    T::int(n as i64) + T::real(params.mu) / T::int(2)
}

impl<T: Real> AuxPair<T> {
    /// Completes `(theta, kappa)` with `R = (theta + t)/t`, `r = kappa/t - (n + mu/2)`.
    pub fn from_theta_kappa(
        n: usize,
        params: &WeightParams,
        theta: T,
        kappa: T,
        provenance: Provenance,
    ) -> Self {
        let t = T::real(params.t);
        let (big_r, small_r) = if params.t > 0.0 {
            (
                (theta.clone() + t.clone()) / t.clone(),
                kappa.clone() / t - n_half_mu::<T>(n, params),
            )
        } else {
            // limits from the small-t behaviour of theta and kappa
            let am = T::int(params.alpha as i64) + T::real(params.mu);
            let mu = T::real(params.mu);
            let r0 = T::int(params.alpha as i64) / am.clone();
            let k1 = mu.clone() * (T::int(2 * n as i64) + am.clone()) / (T::int(2) * am);
            (r0, k1 - n_half_mu::<T>(n, params))
        };
        Self {
            n,
            t: params.t,
            theta,
            kappa,
            big_r,
            small_r,
            provenance,
        }
    }

    /// Inverse of [`AuxPair::from_theta_kappa`] for `t > 0`.
    pub fn from_ladder(n: usize, params: &WeightParams, big_r: T, small_r: T, provenance: Provenance) -> Self {
        let t = T::real(params.t);
        Self {
            n,
            t: params.t,
            theta: t.clone() * big_r.clone() - t.clone(),
            kappa: t * (small_r.clone() + n_half_mu::<T>(n, params)),
            big_r,
            small_r,
            provenance,
        }
    }
}

/// `theta_n = b_n - 2n - 1 - alpha - mu - t` and `kappa_n = (n + mu/2) t + a_n^2 - sum_{i<n} b_i`.
/// The alternative form of `kappa_n` through `gamma_{n,1}/gamma_n` is checked against the sum.
pub fn theta_kappa_from_recurrence<T: Real>(
    table: &RecurrenceTable<T>,
    n: usize,
    ctx: &PrecisionCtx,
) -> Result<AuxPair<T>> {
    if n > table.n_max + 1 {
        return Err(Error::InvalidParameters(format!(
            "n = {n} exceeds the table (n_max = {})",
            table.n_max
        )));
    }
    let p = &table.params;
    let t = T::real(p.t);
    let theta = table.b[n].clone()
        - T::int(2 * n as i64 + 1 + p.alpha as i64)
        - T::real(p.mu)
        - t.clone();
    let base = n_half_mu::<T>(n, p) * t + table.a2[n].clone();
    let kappa = base.clone() - table.b_sum(n);
    let via_gamma = base + table.ratio1(n);
    let scale = kappa.abs().to_f64_lossy().max(table.a2[n].abs().to_f64_lossy()).max(1.0);
    let diff = (kappa.clone() - via_gamma).abs().to_f64_lossy() / scale;
    let allowed = ctx.tol_for::<T>() * 10f64.powf(table.digits_lost);
    if diff > allowed {
        return Err(Error::CrossCheck {
            what: "kappa_n sum form against gamma_{n,1}/gamma_n form",
            index: n,
            rel: diff,
            tol: allowed,
        });
    }
    Ok(AuxPair::from_theta_kappa(n, p, theta, kappa, Provenance::FromRecurrence))
}

/// Raw ladder integrals at degree `n`:
/// `R_n = alpha int w p_n^2 / (y - t)`, `r_n = alpha a_n int w p_n p_{n-1} / (y - t)`,
/// `int w p_n^2 / y` and `a_n int w p_n p_{n-1} / y`.
#[derive(Debug, Clone)]
pub struct LadderIntegrals<T> {
    pub big_r: T,
    pub small_r: T,
    pub inv_x_diag: T,
    pub inv_x_off: T,
}

pub fn ladder_integral_values<T: Real>(
    table: &RecurrenceTable<T>,
    n: usize,
    ctx: &PrecisionCtx,
) -> Result<LadderIntegrals<T>> {
    let p = table.params;
    p.require_alpha_at_least_one()?;
    let q = Integrator::new(QuadratureSpec::new(ctx.tol_for::<T>()));
    let deg = 2.0 * n as f64;
    let a = T::int(p.alpha as i64);
    let an = table.a(n);
    let poly = |y: &T| {
        let e = table.eval(n, y);
        (e.value_n.clone() * e.value_n.clone(), e.value_n * e.value_nm1)
    };
    let at_t = |pick: fn((T, T)) -> T| {
        integrate_weighted(&q, &p, deg, &|y: &T| pick(poly(y)) * p.eval_shifted(y, -1, 0))
    };
    let at_0 = |pick: fn((T, T)) -> T| {
        integrate_weighted(&q, &p, deg, &|y: &T| {
            if y.is_zero() {
                T::zero()
            } else {
                pick(poly(y)) * p.eval(y) / y.clone()
            }
        })
    };
    let diag: fn((T, T)) -> T = |v| v.0;
    let off: fn((T, T)) -> T = |v| v.1;
    Ok(LadderIntegrals {
        big_r: a.clone() * at_t(diag)?.value,
        small_r: a * an.clone() * at_t(off)?.value,
        inv_x_diag: at_0(diag)?.value,
        inv_x_off: an * at_0(off)?.value,
    })
}

/// `(R_n, r_n)` by quadrature, checked against `R = (theta + t)/t`, `r = kappa/t - (n + mu/2)`.
pub fn ladder_integrals<T: Real>(
    table: &RecurrenceTable<T>,
    n: usize,
    ctx: &PrecisionCtx,
) -> Result<AuxPair<T>> {
    if table.params.t <= 0.0 {
        return Err(Error::InvalidParameters("ladder integrals need t > 0".into()));
    }
    let li = ladder_integral_values(table, n, ctx)?;
    let pair = AuxPair::from_ladder(n, &table.params, li.big_r, li.small_r, Provenance::FromIntegrals);
    let rec = theta_kappa_from_recurrence(table, n, ctx)?;
    let allowed = (1e3 * ctx.tol_for::<T>()).max(ctx.tol_for::<T>() * 10f64.powf(table.digits_lost));
    for (what, a, b) in [
        ("R_n from quadrature against (theta_n + t)/t", &pair.big_r, &rec.big_r),
        ("r_n from quadrature against kappa_n/t - (n + mu/2)", &pair.small_r, &rec.small_r),
    ] {
        let rel = rel_diff(a, b);
        if rel > allowed {
            return Err(Error::CrossCheck {
                what,
                index: n,
                rel,
                tol: allowed,
            });
        }
    }
    Ok(pair)
}

/// `theta_{n-1}` from `theta_n`, `kappa_n` by the ratio recurrence. Degree 0 has no predecessor
/// and returns zero.
pub fn theta_prev<T: Real>(n: usize, params: &WeightParams, theta: &T, kappa: &T, tol: f64) -> Result<T> {
    let t = T::real(params.t);
    check_theta(n, params, theta, tol)?;
    if n == 0 {
        return Ok(T::zero());
    }
    let mu_t2 = (T::real(params.mu) * t.clone()).square() / T::int(4);
    let lower = kappa.clone() - n_half_mu::<T>(n, params) * t.clone();
    let upper = kappa.clone() - (n_half_mu::<T>(n, params) + T::int(params.alpha as i64)) * t.clone();
    let rhs = (kappa.square() - mu_t2) / (upper * lower);
    let rho = rhs * (theta.clone() + t.clone()) / theta.clone();
    Ok(rho.clone() * t / (T::one() - rho))
}

pub(crate) fn check_theta<T: Real>(n: usize, params: &WeightParams, theta: &T, tol: f64) -> Result<()> {
    let t = T::real(params.t);
    let scale = params.t.max(f64::MIN_POSITIVE);
    let near = |v: T| v.abs().to_f64_lossy() <= tol * scale;
    if params.t == 0.0 || near(theta.clone()) || near(theta.clone() + t) {
        return Err(Error::DegenerateTheta { n, t: params.t });
    }
    Ok(())
}

//! Moments `mu_k = int_0^inf x^k w(x) dx` of the deformed weight.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precision::PrecisionCtx;
use crate::quadrature::{integrate_weighted, Estimate, Integrator, QuadratureSpec};
use crate::scalar::{binomial, factorial, rel_diff, Field, Real};
use crate::series::PowerSeries;
use crate::special::confluent_1f1;
use crate::weight::WeightParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentSource {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone)]
pub struct MomentTable<T> {
    pub params: WeightParams,
    pub k_max: usize,
    pub values: Vec<T>,
    pub source: MomentSource,
}

impl<T> MomentTable<T> {
    pub fn get(&self, k: usize) -> &T {
        &self.values[k]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Closed form for integer `alpha`, `mu` (with `m = mu + k`):
///
/// `mu_k = (1 - zeta) Gamma(1 + m + alpha) 1F1(-alpha; -m - alpha; -t)
///       + zeta (-1)^alpha m! alpha! / (m + alpha + 1)! t^{m + alpha + 1} 1F1(m + 1; m + alpha + 2; -t)`.
///
/// The first hypergeometric factor is a polynomial of degree `alpha` in `t`; the second
/// term is the piece of `int_0^t` that the jump leaves uncancelled.
pub fn moment_closed_form<T: Real>(k: usize, params: &WeightParams, ctx: &PrecisionCtx) -> Result<T> {
    params.validate()?;
    let mu = params.require_integer_mu()?;
    let a = params.alpha;
    let m = mu + k as u32;
    let t = T::real(params.t);
    let zeta = T::real(params.zeta);
    let poly = confluent_1f1(-(a as f64), -((m + a) as f64), &-t.clone(), ctx)?;
    let first = (T::one() - zeta.clone()) * factorial::<T>(m + a) * poly;
    if params.zeta == 0.0 || params.t == 0.0 {
        return Ok(first);
    }
    let sign = if a.is_multiple_of(2) { T::one() } else { -T::one() };
    let c2 = zeta * sign * factorial::<T>(m) * factorial::<T>(a) / factorial::<T>(m + a + 1);
    let tail = confluent_1f1((m + 1) as f64, (m + a + 2) as f64, &-t.clone(), ctx)?;
    Ok(first + c2 * t.powi((m + a + 1) as i32) * tail)
}

/// `t = 0` limit `(1 - zeta) Gamma(k + alpha + mu + 1)`, exact in any field.
pub fn moment_limit_t0<F: Field>(k: usize, params: &WeightParams) -> Result<F> {
    params.validate()?;
    let mu = params.require_integer_mu()?;
    Ok((F::one() - F::real(params.zeta)) * factorial::<F>(k as u32 + params.alpha + mu))
}

/// Direct quadrature of `int_0^t` and `(1 - zeta) int_t^inf` of `x^k (x - t)^alpha x^mu e^{-x}`.
/// Accepts real `mu`.
pub fn moment_quadrature<T: Real>(
    k: usize,
    params: &WeightParams,
    ctx: &PrecisionCtx,
) -> Result<Estimate<T>> {
    params.validate()?;
    let integrator = Integrator::new(QuadratureSpec::new(ctx.tol_for::<T>()));
    moment_quadrature_with(&integrator, k, params)
}

pub fn moment_quadrature_with<T: Real>(
    integrator: &Integrator<T>,
    k: usize,
    params: &WeightParams,
) -> Result<Estimate<T>> {
    let f = |x: &T| x.powi(k as i32) * params.eval(x);
    integrate_weighted(integrator, params, k as f64, &f)
}

pub fn build_moment_table<T: Real>(
    params: &WeightParams,
    k_max: usize,
    ctx: &PrecisionCtx,
    source: MomentSource,
) -> Result<MomentTable<T>> {
    params.validate()?;
    let values = match source {
        MomentSource::ClosedForm => {
            let values = (0..=k_max)
                .map(|k| moment_closed_form::<T>(k, params, ctx))
                .collect::<Result<Vec<_>>>()?;
            let tol = ctx.tol_for::<T>();
            let integrator = Integrator::new(QuadratureSpec::new(tol));
            let mut checked = vec![0, k_max];
            checked.dedup();
            for k in checked {
                let q = moment_quadrature_with(&integrator, k, params)?;
                let rel = rel_diff(&values[k], &q.value);
                let allowed = tol.max(10.0 * q.error / q.value.abs().to_f64_lossy());
                if rel > allowed {
                    return Err(Error::CrossCheck {
                        what: "closed-form moment against quadrature",
                        index: k,
                        rel,
                        tol: allowed,
                    });
                }
            }
            values
        }
        MomentSource::Quadrature => {
            let integrator = Integrator::new(QuadratureSpec::new(ctx.tol_for::<T>()));
            (0..=k_max)
                .map(|k| moment_quadrature_with(&integrator, k, params).map(|e| e.value))
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(MomentTable {
        params: *params,
        k_max,
        values,
        source,
    })
}

/// Exact moments at `t = 0` in rational arithmetic.
pub fn exact_moment_table_t0(params: &WeightParams, k_max: usize) -> Result<MomentTable<BigRational>> {
    let values = (0..=k_max)
        .map(|k| moment_limit_t0::<BigRational>(k, params))
        .collect::<Result<Vec<_>>>()?;
    Ok(MomentTable {
        params: params.with_t(0.0),
        k_max,
        values,
        source: MomentSource::ClosedForm,
    })
}

/// Taylor series in `t` of `mu_k(t)` to `order` terms, for integer `alpha`, `mu`.
///
/// Both pieces of the closed form expand with rational coefficients: the polynomial
/// `(1 - zeta) sum_i C(alpha, i) (-t)^i (m + alpha - i)!` and the termwise expansion of
/// the `t^{m + alpha + 1} 1F1(m + 1; m + alpha + 2; -t)` piece.
pub fn moment_series<F: Field>(k: usize, params: &WeightParams, order: usize) -> Result<PowerSeries<F>> {
    params.validate()?;
    let mu = params.require_integer_mu()?;
    let a = params.alpha;
    let m = mu + k as u32;
    let mut coeffs = vec![F::zero(); order];
    let one_minus_zeta = F::one() - F::real(params.zeta);
    for i in 0..=a as usize {
        if i >= order {
            break;
        }
        let sign = if i % 2 == 0 { F::one() } else { -F::one() };
        coeffs[i] = one_minus_zeta.clone()
            * sign
            * binomial::<F>(a, i as u32)
            * factorial::<F>(m + a - i as u32);
    }
    // (m+1)_j / (m+a+2)_j (-1)^j / j! times the prefactor
    let start = (m + a + 1) as usize;
    if params.zeta != 0.0 && start < order {
        let sign = if a.is_multiple_of(2) { F::one() } else { -F::one() };
        let mut c = F::real(params.zeta) * sign * factorial::<F>(m) * factorial::<F>(a)
            / factorial::<F>(m + a + 1);
        for j in 0..order - start {
            coeffs[start + j] = coeffs[start + j].clone() + c.clone();
            let jj = j as i64;
            c = c * F::int(m as i64 + 1 + jj) / F::int((m + a + 2) as i64 + jj) * F::int(-1)
                / F::int(jj + 1);
        }
    }
    Ok(PowerSeries::new(coeffs, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::{Mp, PrecisionGuard};
    use num_traits::Zero;

    fn p(alpha: u32, mu: f64, zeta: f64, t: f64) -> WeightParams {
        WeightParams::new(alpha, mu, zeta, t).unwrap()
    }

    #[test]
    fn t0_moments_exact() {
        let tab = exact_moment_table_t0(&p(2, 2.0, 0.5, 0.0), 2).unwrap();
        let want: Vec<BigRational> = [12, 60, 360].iter().map(|&v| BigRational::int(v)).collect();
        assert_eq!(tab.values, want);
    }

    #[test]
    fn closed_form_at_t0_matches_limit() {
        let ctx = PrecisionCtx::default();
        let _g = ctx.enter();
        let v: Mp = moment_closed_form(0, &p(2, 2.0, 0.5, 0.0), &ctx).unwrap();
        assert!(rel_diff(&v, &Mp::int(12)) < 1e-70);
    }

    #[test]
    fn classical_laguerre_moment_by_quadrature() {
        let ctx = PrecisionCtx::default();
        let _g = ctx.enter();
        let e: Estimate<Mp> = moment_quadrature(2, &p(2, 2.0, 0.0, 0.0), &ctx).unwrap();
        assert!(rel_diff(&e.value, &Mp::int(720)) < 1e-30);
        let e: Estimate<Mp> = moment_quadrature(0, &p(2, 2.0, 0.5, 0.0), &ctx).unwrap();
        assert!(rel_diff(&e.value, &Mp::int(12)) < 1e-30);
    }

    #[test]
    fn no_jump_and_no_x_power_gives_gamma() {
        // alpha = 0, zeta = 0: the weight is x^mu e^{-x} for every t
        let ctx = PrecisionCtx::default();
        let _g = PrecisionGuard::new(256);
        for k in 0..5 {
            let v: Mp = moment_closed_form(k, &p(0, 3.0, 0.0, 0.7), &ctx).unwrap();
            assert!(rel_diff(&v, &factorial::<Mp>(k as u32 + 3)) < 1e-70);
        }
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let ctx = PrecisionCtx::default();
        let _g = ctx.enter();
        let params = p(2, 2.0, 0.5, 0.3);
        let c: Mp = moment_closed_form(1, &params, &ctx).unwrap();
        let q: Estimate<Mp> = moment_quadrature(1, &params, &ctx).unwrap();
        assert!(rel_diff(&c, &q.value) < 1e-25);
    }

    #[test]
    fn non_integer_mu_is_quadrature_only() {
        let ctx = PrecisionCtx::default();
        let params = p(1, 1.5, 0.5, 0.3);
        let err = moment_closed_form::<f64>(0, &params, &ctx).unwrap_err();
        assert!(matches!(err, Error::UnsupportedParameters(_)));
        let e: Estimate<f64> = moment_quadrature(0, &params, &ctx).unwrap();
        assert!(e.value.is_finite() && e.value > 0.0);
    }

    #[test]
    fn single_entry_table() {
        let ctx = PrecisionCtx::default();
        let _g = ctx.enter();
        let tab: MomentTable<Mp> =
            build_moment_table(&p(1, 2.0, -1.0, 0.5), 0, &ctx, MomentSource::ClosedForm).unwrap();
        assert_eq!(tab.len(), 1);
    }

    #[test]
    fn series_reproduces_closed_form_at_small_t() {
        let ctx = PrecisionCtx::default();
        let _g = ctx.enter();
        let params = p(2, 2.0, 0.5, 0.01);
        for k in [0usize, 3] {
            let s: PowerSeries<Mp> = moment_series(k, &params, 30).unwrap();
            let v = s.eval(&Mp::real(0.01));
            let c: Mp = moment_closed_form(k, &params, &ctx).unwrap();
            assert!(rel_diff(&v, &c) < 1e-55, "k = {k}");
        }
        let s: PowerSeries<Mp> = moment_series(0, &params, 3).unwrap();
        assert!(!s.coeff(0).is_zero());
    }
}

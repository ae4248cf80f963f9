//! Hankel determinants, recurrence coefficients and evaluation of the orthonormal
//! polynomials, their associated functions and the Christoffel-Darboux kernel.

use std::ops::{Add, Div, Mul, Sub};

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::det_with_condition;
use crate::moments::{build_moment_table, MomentSource, MomentTable};
use crate::mp::Mp;
use crate::precision::PrecisionCtx;
use crate::quadrature::{integrate_weighted, Integrator, QuadratureSpec};
use crate::scalar::{Real, Scalar};
use crate::weight::WeightParams;

/// Recurrence data of the orthonormal system at fixed `t`.
///
/// `delta[n] = Delta_n` and `sigma[n]` (the shifted determinant) for `n <= n_max + 2`;
/// `a2[n] = a_n^2` (with `a2[0] = 0`) and `b[n]` for `n <= n_max + 1`.
#[derive(Debug, Clone)]
pub struct RecurrenceTable<T> {
    pub params: WeightParams,
    pub n_max: usize,
    pub delta: Vec<T>,
    pub sigma: Vec<T>,
    pub a2: Vec<T>,
    pub b: Vec<T>,
    /// Decimal digits lost to the conditioning of the largest moment matrix.
    pub digits_lost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyEval<X> {
    pub n: usize,
    pub x: X,
    pub value_n: X,
    pub value_nm1: X,
}

fn hankel_matrix<T: Scalar>(m: &MomentTable<T>, n: usize, shift_last: bool) -> Vec<Vec<T>> {
    (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    let idx = j + k + usize::from(shift_last && k + 1 == n);
                    m.get(idx).clone()
                })
                .collect()
        })
        .collect()
}

fn check_cover<T>(m: &MomentTable<T>, needed: usize) -> Result<()> {
    if m.len() <= needed {
        return Err(Error::InvalidParameters(format!(
            "moment table has k_max = {}, need {needed}",
            m.len().saturating_sub(1)
        )));
    }
    Ok(())
}

/// Digits that must survive the elimination: half of the representation, at most 20.
fn required_digits<T: Scalar>() -> Option<f64> {
    T::precision_digits().map(|d| (d / 2.0).min(20.0))
}

fn determinant<T: Scalar>(m: &MomentTable<T>, n: usize, shifted: bool) -> Result<(T, f64)> {
    if n == 0 {
        return Ok((if shifted { T::zero() } else { T::one() }, 0.0));
    }
    let (det, cond) = det_with_condition(&hankel_matrix(m, n, shifted));
    if det.is_zero() {
        return Err(Error::SingularHankel { n });
    }
    let lost = cond.map_or(0.0, |c| c.max(1.0).log10());
    if let (Some(total), Some(needed)) = (T::precision_digits(), required_digits::<T>()) {
        if total - lost < needed && !shifted {
            return Err(Error::PrecisionExhausted {
                n,
                digits: total - lost,
            });
        }
    }
    Ok((det, lost))
}

/// `Delta_N = det[mu_{j+k}]_{j,k<N}` with `Delta_0 = 1`.
pub fn hankel_determinant<T: Scalar>(moments: &MomentTable<T>, n: usize) -> Result<T> {
    if n > 0 {
        check_cover(moments, 2 * n - 2)?;
    }
    determinant(moments, n, false).map(|(d, _)| d)
}

/// Recurrence coefficients from determinants. `b_n` uses `sum_{i<n} b_i = sigma_n / Delta_n`.
pub fn recurrence_coefficients<T: Scalar>(
    moments: &MomentTable<T>,
    n_max: usize,
) -> Result<RecurrenceTable<T>> {
    check_cover(moments, 2 * n_max + 3)?;
    let mut delta = Vec::with_capacity(n_max + 3);
    let mut sigma = Vec::with_capacity(n_max + 3);
    let mut digits_lost = 0.0f64;
    for n in 0..=n_max + 2 {
        let (d, lost) = determinant(moments, n, false)?;
        let (s, _) = determinant(moments, n, true).or_else(|e| match e {
            // a vanishing shifted determinant is a legitimate value (b sums to zero)
            Error::SingularHankel { .. } => Ok((T::zero(), 0.0)),
            other => Err(other),
        })?;
        digits_lost = digits_lost.max(lost);
        delta.push(d);
        sigma.push(s);
    }
    let mut a2 = vec![T::zero()];
    for n in 1..=n_max + 1 {
        a2.push(delta[n - 1].clone() * delta[n + 1].clone() / delta[n].square());
    }
    let ratio = |n: usize| sigma[n].clone() / delta[n].clone();
    let b: Vec<T> = (0..=n_max + 1).map(|n| ratio(n + 1) - ratio(n)).collect();
    if moments.params.is_positive() {
        if let Some(n) = (1..a2.len()).find(|&n| a2[n] <= T::zero()) {
            return Err(Error::NonPositiveNorm { n });
        }
    }
    Ok(RecurrenceTable {
        params: moments.params,
        n_max,
        delta,
        sigma,
        a2,
        b,
        digits_lost,
    })
}

impl<T: Scalar> RecurrenceTable<T> {
    /// `gamma_{n,1} / gamma_n = -sigma_n / Delta_n`, minus the sum of `b_i` for `i < n`.
    pub fn ratio1(&self, n: usize) -> T {
        -(self.sigma[n].clone() / self.delta[n].clone())
    }

    pub fn b_sum(&self, n: usize) -> T {
        self.b[..n].iter().cloned().fold(T::zero(), |a, b| a + b)
    }
}

impl<T: Real> RecurrenceTable<T> {
    /// Leading coefficient `gamma_n = sqrt(Delta_n / Delta_{n+1})`.
    pub fn gamma(&self, n: usize) -> T {
        (self.delta[n].clone() / self.delta[n + 1].clone()).sqrt()
    }

    pub fn gamma1(&self, n: usize) -> T {
        self.gamma(n) * self.ratio1(n)
    }

    pub fn a(&self, n: usize) -> T {
        self.a2[n].sqrt()
    }

    /// `(p_n(x), p_{n-1}(x))` by the forward recurrence from `p_0 = gamma_0`, `p_{-1} = 0`.
    pub fn eval<X>(&self, n: usize, x: &X) -> PolyEval<X>
    where
        X: Clone + From<T> + Add<Output = X> + Sub<T, Output = X> + Mul<T, Output = X> + Mul<Output = X>
            + Sub<Output = X> + Div<T, Output = X>,
    {
        assert!(n <= self.n_max + 1, "degree {n} beyond the table");
        let mut prev = X::from(T::zero());
        let mut cur = X::from(self.gamma(0));
        for k in 0..n {
            let next = ((x.clone() - self.b[k].clone()) * cur.clone() - prev * self.a(k)) / self.a(k + 1);
            prev = cur;
            cur = next;
        }
        PolyEval {
            n,
            x: x.clone(),
            value_n: cur,
            value_nm1: prev,
        }
    }

    /// `p_n, p_{n-1}, p_n', p_{n-1}'` at a real point.
    pub fn eval_with_derivative(&self, n: usize, x: &T) -> [T; 4] {
        assert!(n <= self.n_max + 1, "degree {n} beyond the table");
        let (mut p0, mut p1) = (T::zero(), self.gamma(0));
        let (mut d0, mut d1) = (T::zero(), T::zero());
        for k in 0..n {
            let xb = x.clone() - self.b[k].clone();
            let a_next = self.a(k + 1);
            let p2 = (xb.clone() * p1.clone() - self.a(k) * p0.clone()) / a_next.clone();
            let d2 = (p1.clone() + xb * d1.clone() - self.a(k) * d0) / a_next;
            p0 = p1;
            p1 = p2;
            d0 = d1;
            d1 = d2;
        }
        [p1, p0, d1, d0]
    }

    /// Christoffel-Darboux form of `D_N(y1, y2)`, with the derivative form when `y1 = y2`.
    pub fn dn_kernel(&self, n: usize, y1: &T, y2: &T) -> T {
        assert!(n <= self.n_max, "N beyond the table");
        let scale = self.delta[n].clone() / (self.gamma(n) * self.gamma(n + 1));
        if y1 == y2 {
            let [pn1, pn, dn1, dn] = self.eval_with_derivative(n + 1, y1);
            return scale * (dn1 * pn - dn * pn1);
        }
        let e1 = self.eval(n + 1, y1);
        let e2 = self.eval(n + 1, y2);
        scale * (e1.value_n * e2.value_nm1 - e1.value_nm1 * e2.value_n) / (y1.clone() - y2.clone())
    }

    fn integrator(&self, ctx: &PrecisionCtx) -> Integrator<T> {
        Integrator::new(QuadratureSpec::new(ctx.tol_for::<T>()))
    }

    /// `epsilon_n(x) = int p_n(s) w(s) / (x - s) ds` for real `x < 0`.
    pub fn epsilon(&self, n: usize, x: &T, ctx: &PrecisionCtx) -> Result<T> {
        self.epsilon_derivative(n, x, 0, ctx)
    }

    /// `d^j/dx^j epsilon_n(x)` for `j` in {0, 1} at real `x < 0`.
    pub fn epsilon_derivative(&self, n: usize, x: &T, order: u32, ctx: &PrecisionCtx) -> Result<T> {
        if *x >= T::zero() {
            return Err(Error::InvalidParameters(
                "epsilon_n is evaluated off the support only (x < 0 or complex x)".into(),
            ));
        }
        let sign = if order.is_multiple_of(2) { T::one() } else { -T::one() };
        let f = |s: &T| {
            let d = x.clone() - s.clone();
            let mut den = d.clone();
            for _ in 0..order {
                den = den * d.clone();
            }
            sign.clone() * self.eval(n, s).value_n / den
        };
        integrate_weighted(&self.integrator(ctx), &self.params, n as f64, &|s: &T| {
            f(s) * self.params.eval(s)
        })
        .map(|e| e.value)
    }

    /// `epsilon_n` at a complex point off the real axis, real and imaginary parts integrated separately.
    pub fn epsilon_complex(&self, n: usize, x: &Complex<T>, ctx: &PrecisionCtx) -> Result<Complex<T>> {
        if x.im.is_zero() && x.re >= T::zero() {
            return Err(Error::InvalidParameters("epsilon_n is not evaluated on the support".into()));
        }
        let q = self.integrator(ctx);
        let den = |s: &T| (x.re.clone() - s.clone()).square() + x.im.square();
        let base = |s: &T| self.eval(n, s).value_n * self.params.eval(s) / den(s);
        let re = integrate_weighted(&q, &self.params, n as f64, &|s: &T| {
            base(s) * (x.re.clone() - s.clone())
        })?;
        let im = integrate_weighted(&q, &self.params, n as f64, &|s: &T| -base(s) * x.im.clone())?;
        Ok(Complex::new(re.value, im.value))
    }
}

/// Moments, recurrence table and the precision that conditioning required.
#[derive(Debug, Clone)]
pub struct HankelPipeline {
    pub ctx: PrecisionCtx,
    pub moments: MomentTable<Mp>,
    pub table: RecurrenceTable<Mp>,
}

const MAX_BITS: u32 = 8192;

/// Closed-form moments and recurrence data for `n <= n_max`. Starts at `ctx` and doubles the
/// precision while the largest Hankel matrix loses more than half of the digits. The returned
/// values carry the final precision; enter `pipeline.ctx` before computing with them.
pub fn hankel_pipeline(params: &WeightParams, n_max: usize, ctx: &PrecisionCtx) -> Result<HankelPipeline> {
    let mut ctx = *ctx;
    loop {
        let _g = ctx.enter();
        let half = ctx.decimal_digits() as f64 / 2.0;
        let moments = build_moment_table::<Mp>(params, 2 * n_max + 3, &ctx, MomentSource::ClosedForm)?;
        let attempt = recurrence_coefficients(&moments, n_max);
        let escalate = match &attempt {
            Ok(t) => t.digits_lost > half,
            Err(Error::PrecisionExhausted { .. }) => true,
            Err(_) => false,
        };
        if escalate && ctx.significand_bits * 2 <= MAX_BITS {
            ctx = ctx.doubled().with_tol(ctx.tol)?;
            continue;
        }
        let table = attempt?;
        return Ok(HankelPipeline { ctx, moments, table });
    }
}

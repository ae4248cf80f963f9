//! Kummer's confluent hypergeometric function by direct power series.

use crate::error::{Error, Result};
use crate::precision::PrecisionCtx;
use crate::scalar::{is_integer, Real};

/// `1F1(a; b; z) = sum_j (a)_j / (b)_j z^j / j!`.
///
/// The series is summed to the unit roundoff of `T` (never looser than `ctx.tol`).
/// For a non-positive integer `a` the sum is a finite polynomial. For a
/// non-terminating series with `z < -1` Kummer's transformation
/// `1F1(a; b; z) = e^z 1F1(b - a; b; -z)` removes the alternating cancellation.
pub fn confluent_1f1<T: Real>(a: f64, b: f64, z: &T, ctx: &PrecisionCtx) -> Result<T> {
    if !a.is_finite() || !b.is_finite() || !z.is_finite() {
        return Err(Error::InvalidParameters("1F1 arguments must be finite".into()));
    }
    let terminates_at = terminating_degree(a);
    if let Some(pole) = pole_index(b) {
        match terminates_at {
            Some(m) if m < pole => {}
            _ => return Err(Error::NonterminatingPolePassed { b }),
        }
    }
    if terminates_at.is_none() && z.to_f64_lossy() < -1.0 {
        let flipped = confluent_1f1(b - a, b, &-z.clone(), ctx)?;
        return Ok(z.exp() * flipped);
    }
    series(a, b, z, terminates_at, ctx)
}

fn terminating_degree(a: f64) -> Option<usize> {
    (a <= 0.0 && is_integer(a)).then(|| (-a) as usize)
}

/// Index `j` at which `(b)_j` first acquires a zero factor.
fn pole_index(b: f64) -> Option<usize> {
    (b <= 0.0 && is_integer(b)).then_some((1.0 - b) as usize)
}

fn series<T: Real>(
    a: f64,
    b: f64,
    z: &T,
    terminates_at: Option<usize>,
    ctx: &PrecisionCtx,
) -> Result<T> {
    let eps = T::epsilon().to_f64_lossy().min(ctx.tol);
    let zf = z.to_f64_lossy().abs();
    let (ta, tb) = (T::real(a), T::real(b));
    let mut term = T::one();
    let mut sum = T::one();
    let mut j = 0usize;
    loop {
        if let Some(m) = terminates_at {
            if j == m {
                return Ok(sum);
            }
        }
        if j >= ctx.max_series_terms {
            return Err(Error::NoConvergence {
                what: "1F1 series",
                limit: ctx.max_series_terms,
            });
        }
        let jj = T::int(j as i64);
        term = term * (ta.clone() + jj.clone()) / (tb.clone() + jj) * z.clone()
            / T::int(j as i64 + 1);
        sum = sum + term.clone();
        j += 1;
        // terms only shrink monotonically once j exceeds |z|
        if (j as f64) > zf + 1.0 && term.abs().to_f64_lossy() <= eps * sum.abs().to_f64_lossy() {
            return Ok(sum);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::{Mp, PrecisionGuard};
    use crate::scalar::{rel_diff, Field};
    use num_traits::One;

    #[test]
    fn zero_argument_is_one() {
        let ctx = PrecisionCtx::default();
        let v: f64 = confluent_1f1(3.7, 5.1, &0.0, &ctx).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn two_term_polynomial() {
        let ctx = PrecisionCtx::default();
        let v: f64 = confluent_1f1(-1.0, 4.0, &2.0, &ctx).unwrap();
        assert_eq!(v, 0.5);
    }

    #[test]
    fn exponential_special_case_at_256_bits() {
        let ctx = PrecisionCtx::default();
        let _g = PrecisionGuard::new(256);
        let z = Mp::real(-0.3);
        let v = confluent_1f1(1.0, 2.0, &z, &ctx).unwrap();
        let expect = (Mp::one() - z.exp()) / -z;
        assert!(rel_diff(&v, &expect) < 1e-70);
    }

    #[test]
    fn kummer_branch_matches_direct_sum() {
        let ctx = PrecisionCtx::default();
        let _g = PrecisionGuard::new(256);
        let z = Mp::int(-5);
        let via_kummer = confluent_1f1(3.0, 7.0, &z, &ctx).unwrap();
        let direct = series(3.0, 7.0, &z, None, &ctx).unwrap();
        assert!(rel_diff(&via_kummer, &direct) < 1e-60);
    }

    #[test]
    fn pole_before_termination_is_rejected() {
        let ctx = PrecisionCtx::default();
        let err = confluent_1f1(-5.0, -2.0, &1.0f64, &ctx).unwrap_err();
        assert!(matches!(err, Error::NonterminatingPolePassed { .. }));
        let err = confluent_1f1(0.5, -2.0, &1.0f64, &ctx).unwrap_err();
        assert!(matches!(err, Error::NonterminatingPolePassed { .. }));
        // the series stops at j = 2, before (b)_j vanishes at j = 4
        assert!(confluent_1f1(-2.0, -3.0, &1.0f64, &ctx).is_ok());
    }
}

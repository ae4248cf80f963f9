//! The deformed Laguerre weight `w(x) = (1 - zeta H(x - t)) (x - t)^alpha x^mu e^{-x}` on `[0, inf)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{is_integer, Field, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    pub alpha: u32,
    pub mu: f64,
    pub zeta: f64,
    pub t: f64,
}

impl WeightParams {
    pub fn new(alpha: u32, mu: f64, zeta: f64, t: f64) -> Result<Self> {
        let p = Self { alpha, mu, zeta, t };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.zeta.is_finite() || self.zeta >= 1.0 {
            return Err(Error::InvalidParameters(format!(
                "zeta must be finite and < 1, got {}",
                self.zeta
            )));
        }
        if !self.t.is_finite() || self.t < 0.0 {
            return Err(Error::InvalidParameters(format!(
                "t must be finite and >= 0, got {}",
                self.t
            )));
        }
        if !self.mu.is_finite() || self.mu < 0.0 {
            return Err(Error::InvalidParameters(format!(
                "mu must be finite and >= 0, got {}",
                self.mu
            )));
        }
        Ok(())
    }

    pub fn with_t(&self, t: f64) -> Self {
        Self { t, ..*self }
    }

    pub fn mu_int(&self) -> Option<u32> {
        is_integer(self.mu).then_some(self.mu as u32)
    }

    pub fn require_integer_mu(&self) -> Result<u32> {
        self.mu_int().ok_or_else(|| {
            Error::UnsupportedParameters(format!(
                "mu = {} is not an integer; only the quadrature path supports it",
                self.mu
            ))
        })
    }

    pub fn require_alpha_at_least_one(&self) -> Result<()> {
        if self.alpha == 0 {
            return Err(Error::UnsupportedParameters(
                "alpha >= 1 is required for the residue integrals at x = t".into(),
            ));
        }
        Ok(())
    }

    /// Nonnegative almost everywhere (even alpha, zeta < 1).
    pub fn is_positive(&self) -> bool {
        self.alpha.is_multiple_of(2)
    }

    /// Total polynomial degree of the algebraic factor for integer mu.
    pub fn algebraic_degree(&self) -> f64 {
        self.alpha as f64 + self.mu
    }

    pub fn eval<T: Real>(&self, x: &T) -> T {
        self.eval_shifted(x, 0, 0)
    }

    /// Weight with exponents `alpha + da` and `mu + dm`; `da = -1` gives `w / (x - t)`.
    pub fn eval_shifted<T: Real>(&self, x: &T, da: i32, dm: i32) -> T {
        let t = T::real(self.t);
        let xt = x.clone() - t.clone();
        let jump = if *x > t { T::one() - T::real(self.zeta) } else { T::one() };
        let a = self.alpha as i32 + da;
        let left = if a == 0 { T::one() } else { xt.powi(a) };
        let m = self.mu + dm as f64;
        let right = if m == 0.0 {
            T::one()
        } else if is_integer(m) {
            x.powi(m as i32)
        } else if x.is_zero() {
            T::zero()
        } else {
            x.powf(&T::real(m))
        };
        jump * left * right * (-x.clone()).exp()
    }

    /// `2V(x)/W(x) = alpha/(x - t) + mu/x - 1`, the logarithmic derivative of the weight.
    pub fn log_derivative<T: Field>(&self, x: &T) -> T {
        T::int(self.alpha as i64) / (x.clone() - T::real(self.t)) + T::real(self.mu) / x.clone()
            - T::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(WeightParams::new(2, 2.0, 0.5, 0.3).is_ok());
        assert!(WeightParams::new(2, 2.0, 1.0, 0.3).is_err());
        assert!(WeightParams::new(2, 2.0, 0.5, -0.1).is_err());
        assert!(WeightParams::new(2, -0.5, 0.5, 0.1).is_err());
    }

    #[test]
    fn jump_across_t() {
        let p = WeightParams::new(1, 1.0, 0.5, 1.0).unwrap();
        let below: f64 = p.eval(&0.5);
        let above: f64 = p.eval(&1.5);
        assert!((below - (-0.5 * 0.5 * (-0.5f64).exp())).abs() < 1e-15);
        assert!((above - 0.5 * (0.5 * 1.5 * (-1.5f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn log_derivative_matches_finite_difference() {
        let p = WeightParams::new(2, 3.0, 0.2, 0.4).unwrap();
        let x = 1.3f64;
        let h = 1e-6;
        let fd = (p.eval(&(x + h)).ln() - p.eval(&(x - h)).ln()) / (2.0 * h);
        assert!((fd - p.log_derivative(&x)).abs() < 1e-8);
    }
}

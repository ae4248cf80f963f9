use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mp::{PrecisionGuard, DEFAULT_BITS};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionCtx {
    pub significand_bits: u32,
    pub tol: f64,
    pub max_series_terms: usize,
}

impl Default for PrecisionCtx {
    fn default() -> Self {
        Self::new(DEFAULT_BITS).expect("default precision is valid")
    }
}

impl PrecisionCtx {
    pub fn new(bits: u32) -> Result<Self> {
        if bits < 64 {
            return Err(Error::InvalidParameters(format!(
                "significand_bits must be at least 64, got {bits}"
            )));
        }
        Ok(Self {
            significand_bits: bits,
            tol: Self::default_tol(bits),
            max_series_terms: 20_000,
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidParameters(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        self.tol = tol;
        Ok(self)
    }

    /// 40% of the representable decimal digits: 1e-30 at 256 bits.
    pub fn default_tol(bits: u32) -> f64 {
        let digits = (0.4 * bits as f64 * std::f64::consts::LOG10_2).floor();
        10f64.powf(-digits)
    }

    pub fn decimal_digits(&self) -> usize {
        crate::mp::Mp::decimal_digits(self.significand_bits)
    }

    /// Makes this precision the working precision of the thread.
    pub fn enter(&self) -> PrecisionGuard {
        PrecisionGuard::new(self.significand_bits)
    }

    /// Tolerance achievable in `T`: never tighter than a few hundred ulps.
    pub fn tol_for<T: Real>(&self) -> f64 {
        let eps = T::epsilon().to_f64_lossy();
        self.tol.max(256.0 * eps)
    }

    pub fn doubled(&self) -> Self {
        let bits = self.significand_bits * 2;
        Self {
            significand_bits: bits,
            tol: Self::default_tol(bits),
            max_series_terms: self.max_series_terms,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_tolerance_at_256_bits() {
        let ctx = PrecisionCtx::default();
        assert_eq!(ctx.significand_bits, 256);
        assert_eq!(ctx.tol, 1e-30);
    }

    #[test]
    fn rejects_short_significands() {
        assert!(PrecisionCtx::new(53).is_err());
        assert!(PrecisionCtx::default().with_tol(0.0).is_err());
    }

    #[test]
    fn f64_tolerance_is_clamped() {
        let ctx = PrecisionCtx::default();
        assert!(ctx.tol_for::<f64>() > 1e-14);
    }
}

//! Truncated power series over any [`Field`].
//!
//! A series carries its truncation order: coefficients of `t^order` and above are
//! unknown. Constants built through [`Field::int`] or [`Field::real`] are exact and
//! have unbounded order, so they combine freely with truncated series.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::Field;

const EXACT: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries<F> {
    coeffs: Vec<F>,
    order: usize,
}

impl<F: Field> PowerSeries<F> {
    pub fn new(mut coeffs: Vec<F>, order: usize) -> Self {
        coeffs.truncate(order);
        Self { coeffs, order }
    }

    pub fn constant(c: F) -> Self {
        Self {
            coeffs: vec![c],
            order: EXACT,
        }
    }

    /// The series `t` itself.
    pub fn variable(order: usize) -> Self {
        Self::new(vec![F::zero(), F::one()], order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    /// Horner evaluation of the known coefficients.
    pub fn eval(&self, t: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * F::int(i as i64))
            .collect();
        Self {
            coeffs,
            order: self.order.saturating_sub(1),
        }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> PowerSeries<G> {
        PowerSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
            order: self.order,
        }
    }
}

impl<F: Field> Add for PowerSeries<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let order = self.order.min(rhs.order);
        let len = self.coeffs.len().max(rhs.coeffs.len()).min(order);
        let coeffs = (0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        Self { coeffs, order }
    }
}

impl<F: Field> Neg for PowerSeries<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
            order: self.order,
        }
    }
}

impl<F: Field> Sub for PowerSeries<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<F: Field> Mul for PowerSeries<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let order = self.order.min(rhs.order);
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self {
                coeffs: Vec::new(),
                order,
            };
        }
        let len = (self.coeffs.len() + rhs.coeffs.len() - 1).min(order);
        let mut coeffs = vec![F::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self { coeffs, order }
    }
}

impl<F: Field> Div for PowerSeries<F> {
    type Output = Self;
    /// Panics if the divisor has a zero constant term, or if both operands are exact
    /// and the divisor is not a constant (the quotient would need an order).
    fn div(self, rhs: Self) -> Self {
        let order = self.order.min(rhs.order);
        if rhs.coeffs.len() == 1 {
            let c = rhs.coeffs[0].clone();
            return Self {
                coeffs: self.coeffs.into_iter().map(|a| a / c.clone()).collect(),
                order,
            };
        }
        assert!(order != EXACT, "quotient of exact polynomials needs a truncation order");
        let lead = rhs.coeff(0);
        let mut q: Vec<F> = Vec::with_capacity(order);
        for n in 0..order {
            let mut acc = self.coeff(n);
            for k in 1..=n.min(rhs.coeffs.len().saturating_sub(1)) {
                acc = acc - rhs.coeffs[k].clone() * q[n - k].clone();
            }
            q.push(acc / lead.clone());
        }
        Self { coeffs: q, order }
    }
}

impl<F: Field> Zero for PowerSeries<F> {
    fn zero() -> Self {
        Self {
            coeffs: Vec::new(),
            order: EXACT,
        }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl<F: Field> One for PowerSeries<F> {
    fn one() -> Self {
        Self::constant(F::one())
    }
}

impl<F: Field> Field for PowerSeries<F> {
    fn int(v: i64) -> Self {
        Self::constant(F::int(v))
    }
    fn real(v: f64) -> Self {
        Self::constant(F::real(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type S = PowerSeries<BigRational>;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::ratio(n, d)
    }

    #[test]
    fn geometric_series_by_division() {
        let one_minus_t = S::new(vec![q(1, 1), q(-1, 1)], 6);
        let g = S::one() / one_minus_t;
        assert_eq!(g.coeffs(), &vec![q(1, 1); 6][..]);
    }

    #[test]
    fn product_truncates_to_smaller_order() {
        let a = S::new(vec![q(1, 1), q(1, 1)], 3);
        let b = S::new(vec![q(1, 1), q(2, 1), q(1, 1), q(5, 1)], 4);
        let c = a * b;
        assert_eq!(c.order(), 3);
        assert_eq!(c.coeffs(), &[q(1, 1), q(3, 1), q(3, 1)][..]);
    }

    #[test]
    fn constants_are_exact() {
        let t = S::variable(5);
        let s = S::int(3) * t.clone() + S::ratio(1, 2);
        assert_eq!(s.order(), 5);
        assert_eq!(s.coeff(0), q(1, 2));
        assert_eq!(s.coeff(1), q(3, 1));
        assert_eq!(s.derivative().coeff(0), q(3, 1));
    }

    #[test]
    fn eval_of_polynomial() {
        let s = S::new(vec![q(1, 1), q(2, 1), q(3, 1)], 3);
        assert_eq!(s.eval(&q(2, 1)), q(17, 1));
    }
}

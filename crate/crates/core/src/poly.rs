//! Dense univariate polynomials with coefficients in ascending order.

use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Field> Poly<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// Index of the highest nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::int(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }
}

impl<T: Field> Add for Poly<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let len = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<T: Field> Neg for Poly<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<T: Field> Sub for Poly<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<T: Field> Mul for Poly<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Self::new(Vec::new());
        }
        let mut c = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_degree() {
        let p = Poly::new(vec![1.0, 2.0]);
        let q = Poly::new(vec![-1.0, 0.0, 3.0]);
        let r = p.clone() * q.clone();
        assert_eq!(r.coeffs(), &[-1.0, -2.0, 3.0, 6.0]);
        assert_eq!((q.clone() - q).degree(), None);
        assert_eq!(r.eval(&2.0), 5.0 * 11.0);
        assert_eq!(r.derivative().coeffs(), &[-2.0, 6.0, 18.0]);
    }
}

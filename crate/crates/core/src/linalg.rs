//! Small dense linear algebra: determinants with a condition estimate, and 2x2 matrices.

use std::ops::{Add, Mul, Sub};

use crate::scalar::{Field, Scalar};

/// Determinant by Gaussian elimination with partial pivoting, together with the
/// infinity-norm condition estimate `||A|| ||A^{-1}||` (`None` for exact arithmetic or a
/// singular matrix).
pub fn det_with_condition<T: Scalar>(a: &[Vec<T>]) -> (T, Option<f64>) {
    let n = a.len();
    if n == 0 {
        return (T::one(), Some(1.0));
    }
    let norm = a
        .iter()
        .map(|row| row.iter().map(|v| v.abs().to_f64_lossy()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut lu: Vec<Vec<T>> = a.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut det = T::one();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| {
                lu[i][k]
                    .abs()
                    .partial_cmp(&lu[j][k].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if lu[p][k].is_zero() {
            return (T::zero(), None);
        }
        if p != k {
            lu.swap(p, k);
            perm.swap(p, k);
            det = -det;
        }
        let pivot = lu[k][k].clone();
        det = det * pivot.clone();
        for i in k + 1..n {
            let f = lu[i][k].clone() / pivot.clone();
            lu[i][k] = f.clone();
            for j in k + 1..n {
                let v = lu[i][j].clone() - f.clone() * lu[k][j].clone();
                lu[i][j] = v;
            }
        }
    }
    if T::precision_digits().is_none() {
        return (det, None);
    }
    // columns of A^{-1} from the LU factors
    let mut inv_norm_rows = vec![0.0f64; n];
    for c in 0..n {
        let mut y: Vec<T> = (0..n)
            .map(|i| if perm[i] == c { T::one() } else { T::zero() })
            .collect();
        for i in 0..n {
            for j in 0..i {
                let v = y[i].clone() - lu[i][j].clone() * y[j].clone();
                y[i] = v;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let v = y[i].clone() - lu[i][j].clone() * y[j].clone();
                y[i] = v;
            }
            y[i] = y[i].clone() / lu[i][i].clone();
        }
        for (i, v) in y.iter().enumerate() {
            inv_norm_rows[i] += v.abs().to_f64_lossy();
        }
    }
    let inv_norm = inv_norm_rows.into_iter().fold(0.0, f64::max);
    (det, Some(norm * inv_norm))
}

/// Determinant by elimination without pivoting; every leading principal minor must be
/// invertible. Works over fields without an ordering, e.g. truncated power series.
pub fn det_unpivoted<F: Field>(a: &[Vec<F>]) -> F {
    let n = a.len();
    let mut m: Vec<Vec<F>> = a.to_vec();
    let mut det = F::one();
    for k in 0..n {
        let pivot = m[k][k].clone();
        det = det * pivot.clone();
        for i in k + 1..n {
            let f = m[i][k].clone() / pivot.clone();
            for j in k + 1..n {
                let v = m[i][j].clone() - f.clone() * m[k][j].clone();
                m[i][j] = v;
            }
        }
    }
    det
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mat2<T>(pub [[T; 2]; 2]);

impl<T: Field> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn diag(a: T, d: T) -> Self {
        Self::new(a, T::zero(), T::zero(), d)
    }

    pub fn scale(&self, s: &T) -> Self {
        let m = &self.0;
        Self::new(
            m[0][0].clone() * s.clone(),
            m[0][1].clone() * s.clone(),
            m[1][0].clone() * s.clone(),
            m[1][1].clone() * s.clone(),
        )
    }

    pub fn trace(&self) -> T {
        self.0[0][0].clone() + self.0[1][1].clone()
    }

    pub fn det(&self) -> T {
        let m = &self.0;
        m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone()
    }

    pub fn apply(&self, v: &[T; 2]) -> [T; 2] {
        let m = &self.0;
        [
            m[0][0].clone() * v[0].clone() + m[0][1].clone() * v[1].clone(),
            m[1][0].clone() * v[0].clone() + m[1][1].clone() * v[1].clone(),
        ]
    }

    pub fn entries(&self) -> [T; 4] {
        let m = &self.0;
        [m[0][0].clone(), m[0][1].clone(), m[1][0].clone(), m[1][1].clone()]
    }
}

impl<T: Field> Add for Mat2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let [a, b, c, d] = self.entries();
        let [e, f, g, h] = o.entries();
        Self::new(a + e, b + f, c + g, d + h)
    }
}

impl<T: Field> Sub for Mat2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let [a, b, c, d] = self.entries();
        let [e, f, g, h] = o.entries();
        Self::new(a - e, b - f, c - g, d - h)
    }
}

impl<T: Field> Mul for Mat2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let [a, b, c, d] = self.entries();
        let [e, f, g, h] = o.entries();
        Self::new(
            a.clone() * e.clone() + b.clone() * g.clone(),
            a * f.clone() + b * h.clone(),
            c.clone() * e + d.clone() * g,
            c * f + d * h,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn determinant_of_moment_matrix() {
        let m = vec![vec![12.0, 60.0], vec![60.0, 360.0]];
        let (d, cond) = det_with_condition(&m);
        assert!((d - 720.0).abs() < 1e-9);
        assert!(cond.unwrap() > 1.0);
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let m = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert_eq!(det_with_condition(&m).0, -1.0);
        let s = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert_eq!(det_with_condition(&s), (0.0, None));
    }

    #[test]
    fn exact_determinants_agree() {
        let r = |v: i64| BigRational::int(v);
        let m = vec![
            vec![r(12), r(60), r(360)],
            vec![r(60), r(360), r(2520)],
            vec![r(360), r(2520), r(20160)],
        ];
        let (d, cond) = det_with_condition(&m);
        assert!(cond.is_none());
        assert_eq!(d, det_unpivoted(&m));
    }

    #[test]
    fn mat2_algebra() {
        let a = Mat2::new(1.0, 2.0, 3.0, 4.0);
        let b = Mat2::diag(2.0, -1.0);
        assert_eq!((a.clone() * b.clone()).entries(), [2.0, -2.0, 6.0, -4.0]);
        assert_eq!(a.det(), -2.0);
        assert_eq!(a.trace(), 5.0);
        assert_eq!(a.apply(&[1.0, 1.0]), [3.0, 7.0]);
    }
}

//! Brute-force references: a discrete measure reproducing the weight, inner products,
//! Stieltjes orthogonalization, small multiple integrals and finite differences.
//!
//! Nothing here touches the moment closed form or the Hankel determinants.

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::scalar::Real;
use crate::weight::WeightParams;

/// Gauss-Laguerre rule for `int_0^inf g(u) e^{-u} du`, exact for polynomials of degree `< 2m`.
pub fn gauss_laguerre<T: Real>(m: usize) -> (Vec<T>, Vec<T>) {
    assert!(m >= 2, "need at least two nodes");
    let tol = T::epsilon() * T::int(64);
    let mut nodes: Vec<T> = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    let mut guesses: Vec<f64> = Vec::with_capacity(m);
    let mf = m as f64;
    for i in 0..m {
        // classical asymptotic starting values, each refined to full precision below
        let z = match i {
            0 => 3.0 / (1.0 + 2.4 * mf),
            1 => guesses[0] + 15.0 / (1.0 + 2.5 * mf),
            _ => {
                let ai = (i - 1) as f64;
                guesses[i - 1] + (1.0 + 2.55 * ai) / (1.9 * ai) * (guesses[i - 1] - guesses[i - 2])
            }
        };
        let mut x = T::real(z);
        let mut dp = T::one();
        let mut prev = T::one();
        for _ in 0..200 {
            let (p, p_prev) = laguerre(m, &x);
            dp = T::int(m as i64) * (p.clone() - p_prev.clone()) / x.clone();
            prev = p_prev;
            let dx = p / dp.clone();
            x = x - dx.clone();
            if dx.abs() <= tol.clone() * x.abs() {
                let (p, p_prev) = laguerre(m, &x);
                dp = T::int(m as i64) * (p - p_prev.clone()) / x.clone();
                prev = p_prev;
                break;
            }
        }
        guesses.push(x.to_f64_lossy());
        weights.push(-T::one() / (T::int(m as i64) * dp * prev));
        nodes.push(x);
    }
    (nodes, weights)
}

/// `(L_m(x), L_{m-1}(x))` with `L_j(0) = 1`.
fn laguerre<T: Real>(m: usize, x: &T) -> (T, T) {
    let mut p0 = T::zero();
    let mut p1 = T::one();
    for j in 1..=m {
        let jj = j as i64;
        let p2 = ((T::int(2 * jj - 1) - x.clone()) * p1.clone() - T::int(jj - 1) * p0) / T::int(jj);
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Point masses `sum_i c_i delta(x - x_i)` whose moments match the weight: Gauss-Legendre on
/// `[0, t]` and Gauss-Laguerre on `[t, inf)` in the variable `x - t`.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure<T> {
    pub nodes: Vec<T>,
    pub masses: Vec<T>,
}

impl<T: Real> DiscreteMeasure<T> {
    /// `m` nodes per segment. On the tail the rule integrates `x^k w(x)` exactly while
    /// `alpha + mu + k < 2m`; on `[0, t]` the error is that of `e^{-x}` on a short interval.
    pub fn for_weight(params: &WeightParams, m: usize) -> Result<Self> {
        params.validate()?;
        params.require_integer_mu()?;
        let t = T::real(params.t);
        let mut nodes = Vec::with_capacity(2 * m);
        let mut masses = Vec::with_capacity(2 * m);
        if params.t > 0.0 {
            let gl: GaussLegendre<T> = GaussLegendre::new(m);
            for (x, c) in gl.mapped(&T::zero(), &t) {
                masses.push(c * params.eval(&x));
                nodes.push(x);
            }
        }
        let (u, c) = gauss_laguerre::<T>(m);
        let shift = (-t.clone()).exp() * (T::one() - T::real(params.zeta));
        for (u, c) in u.into_iter().zip(c) {
            let x = t.clone() + u.clone();
            let poly = u.powi(params.alpha as i32) * x.powi(params.mu as i32);
            masses.push(shift.clone() * c * poly);
            nodes.push(x);
        }
        Ok(Self { nodes, masses })
    }

    pub fn integrate(&self, f: impl Fn(&T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.masses)
            .fold(T::zero(), |acc, (x, c)| acc + c.clone() * f(x))
    }

    pub fn moment(&self, k: usize) -> T {
        self.integrate(|x| x.powi(k as i32))
    }

    /// `<f, g> = int f g w`.
    pub fn inner_product(&self, f: impl Fn(&T) -> T, g: impl Fn(&T) -> T) -> T {
        self.integrate(|x| f(x) * g(x))
    }

    /// Orthonormal polynomials by the Stieltjes procedure on the point masses, returned as
    /// `(a_n^2 for n <= n_max + 1 with a_0^2 = 0, b_n for n <= n_max)`.
    pub fn stieltjes(&self, n_max: usize) -> (Vec<T>, Vec<T>) {
        let k = self.nodes.len();
        let norm0 = self.integrate(|_| T::one()).sqrt();
        let mut prev = vec![T::zero(); k];
        let mut cur: Vec<T> = vec![T::one() / norm0; k];
        let mut a2 = vec![T::zero()];
        let mut b = Vec::new();
        let mut a_prev = T::zero();
        for _ in 0..=n_max {
            let bn = self.sum(|i| self.nodes[i].clone() * cur[i].square());
            let next: Vec<T> = (0..k)
                .map(|i| {
                    (self.nodes[i].clone() - bn.clone()) * cur[i].clone() - a_prev.clone() * prev[i].clone()
                })
                .collect();
            let an2 = self.sum(|i| next[i].square());
            let an = an2.sqrt();
            prev = std::mem::replace(&mut cur, next.into_iter().map(|v| v / an.clone()).collect());
            a_prev = an;
            a2.push(an2);
            b.push(bn);
        }
        (a2, b)
    }

    fn sum(&self, f: impl Fn(usize) -> T) -> T {
        (0..self.nodes.len()).fold(T::zero(), |acc, i| acc + self.masses[i].clone() * f(i))
    }

    /// `(1/N!) int prod w(x_l) prod_{j<k} (x_k - x_j)^2`, written as a sum over strictly
    /// increasing node tuples, optionally with `prod (y1 - x_l)(y2 - x_l)` inserted.
    fn vandermonde_sum(&self, n: usize, insert: Option<(&T, &T)>) -> Result<T> {
        let k = self.nodes.len();
        let factor = |i: usize| match insert {
            Some((y1, y2)) => {
                self.masses[i].clone() * (y1.clone() - self.nodes[i].clone()) * (y2.clone() - self.nodes[i].clone())
            }
            None => self.masses[i].clone(),
        };
        let x = &self.nodes;
        let f: Vec<T> = (0..k).map(factor).collect();
        let mut total = T::zero();
        match n {
            0 => total = T::one(),
            1 => {
                for fi in &f {
                    total = total + fi.clone();
                }
            }
            2 => {
                for i in 0..k {
                    for j in i + 1..k {
                        total = total + f[i].clone() * f[j].clone() * (x[j].clone() - x[i].clone()).square();
                    }
                }
            }
            3 => {
                for i in 0..k {
                    for j in i + 1..k {
                        let fij = f[i].clone() * f[j].clone() * (x[j].clone() - x[i].clone()).square();
                        for l in j + 1..k {
                            let v = (x[l].clone() - x[i].clone()) * (x[l].clone() - x[j].clone());
                            total = total + fij.clone() * f[l].clone() * v.square();
                        }
                    }
                }
            }
            _ => {
                return Err(Error::UnsupportedParameters(format!(
                    "brute-force multiple integrals are limited to N <= 3, got {n}"
                )))
            }
        }
        Ok(total)
    }
}

/// Nodes per segment: enough for the degree `alpha + mu + 4N + 2` of the largest integrand.
fn nodes_for(params: &WeightParams, n: usize) -> usize {
    ((params.alpha as usize + params.mu as usize + 4 * n + 4) / 2 + 1).max(16)
}

/// `Delta_N` as the `N`-fold integral with the squared Vandermonde, `N <= 3`.
pub fn delta_by_quadrature<T: Real>(params: &WeightParams, n: usize) -> Result<T> {
    let m = DiscreteMeasure::for_weight(params, nodes_for(params, n))?;
    m.vandermonde_sum(n, None)
}

/// `D_N(y1, y2)` by the defining `N`-fold integral, `N <= 2`.
pub fn dn_by_quadrature<T: Real>(params: &WeightParams, n: usize, y1: &T, y2: &T) -> Result<T> {
    if n > 2 {
        return Err(Error::UnsupportedParameters(format!(
            "D_N by brute force is limited to N <= 2, got {n}"
        )));
    }
    let m = DiscreteMeasure::for_weight(params, nodes_for(params, n + 1))?;
    m.vandermonde_sum(n, Some((y1, y2)))
}

/// A derivative estimate with the difference against the estimate at twice the step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative<T> {
    pub value: T,
    pub error: T,
}

/// Fourth-order central differences for the first or second derivative.
pub fn finite_difference<T: Real>(f: impl Fn(&T) -> T, x0: &T, h: &T, order: u32) -> Derivative<T> {
    let stencil = |h: &T| {
        let at = |k: i64| f(&(x0.clone() + h.clone() * T::int(k)));
        match order {
            1 => (T::int(8) * (at(1) - at(-1)) - (at(2) - at(-2))) / (T::int(12) * h.clone()),
            2 => {
                (-(at(2) + at(-2)) + T::int(16) * (at(1) + at(-1)) - T::int(30) * at(0))
                    / (T::int(12) * h.square())
            }
            _ => panic!("finite differences of order {order} are not provided"),
        }
    };
    let fine = stencil(h);
    let coarse = stencil(&(h.clone() * T::int(2)));
    let error = (fine.clone() - coarse).abs();
    Derivative { value: fine, error }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::{Mp, PrecisionGuard};
    use crate::scalar::{rel_diff, Field};

    #[test]
    fn laguerre_rule_reproduces_factorials() {
        let _g = PrecisionGuard::new(256);
        let (x, w) = gauss_laguerre::<Mp>(12);
        for k in 0..24 {
            let s = x
                .iter()
                .zip(&w)
                .fold(Mp::int(0), |a, (x, w)| a + w.clone() * x.powi(k));
            let want = crate::scalar::factorial::<Mp>(k as u32);
            assert!(rel_diff(&s, &want) < 1e-60, "k = {k}");
        }
    }

    #[test]
    fn discrete_moments_at_t0() {
        let p = WeightParams::new(2, 2.0, 0.5, 0.0).unwrap();
        let m = DiscreteMeasure::<f64>::for_weight(&p, 16).unwrap();
        assert!((m.moment(0) - 12.0).abs() < 1e-12);
        assert!((m.moment(2) - 360.0).abs() < 1e-10);
    }

    #[test]
    fn delta_small_n_at_t0() {
        let p = WeightParams::new(2, 2.0, 0.5, 0.0).unwrap();
        let d1: f64 = delta_by_quadrature(&p, 1).unwrap();
        let d2: f64 = delta_by_quadrature(&p, 2).unwrap();
        assert!((d1 - 12.0).abs() < 1e-11);
        assert!((d2 - 720.0).abs() < 1e-9);
    }

    #[test]
    fn dn_for_one_variable_expands() {
        let p = WeightParams::new(2, 2.0, 0.5, 0.0).unwrap();
        let (y1, y2) = (5.0, 7.0);
        let d: f64 = dn_by_quadrature(&p, 1, &y1, &y2).unwrap();
        let want = y1 * y2 * 12.0 - (y1 + y2) * 60.0 + 360.0;
        assert!((d - want).abs() < 1e-9);
    }

    #[test]
    fn finite_difference_of_square() {
        let d = finite_difference(|t: &f64| t * t, &3.0, &1e-3, 1);
        assert!((d.value - 6.0).abs() < 1e-10);
        let d2 = finite_difference(|t: &f64| t * t, &3.0, &1e-2, 2);
        assert!((d2.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn stieltjes_classical_laguerre() {
        // x^4 e^{-x}: a_n^2 = n (n + 4), b_n = 2n + 5
        let p = WeightParams::new(0, 4.0, 0.0, 0.0).unwrap();
        let m = DiscreteMeasure::<f64>::for_weight(&p, 20).unwrap();
        let (a2, b) = m.stieltjes(4);
        for n in 0..=4 {
            assert!((b[n] - (2 * n + 5) as f64).abs() < 1e-9);
            assert!((a2[n] - (n * (n + 4)) as f64).abs() < 1e-9);
        }
    }
}

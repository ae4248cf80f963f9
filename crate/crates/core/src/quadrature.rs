//! Adaptive composite Gauss-Legendre quadrature in any [`Real`] type.
//!
//! Panels are bisected until the coarse rule and the two-halves rule agree to a
//! share of the absolute target `tol * S`, where `S` estimates `int |f|`. The
//! accepted value is the two-halves sum, so the reported error bound is pessimistic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::weight::WeightParams;

#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// `m`-point rule on `[-1, 1]`, nodes by Newton iteration on `P_m` in `T`.
    pub fn new(m: usize) -> Self {
        assert!(m >= 2, "need at least two nodes");
        let tol = T::epsilon() * T::int(16);
        let mut nodes = Vec::with_capacity(m);
        let mut weights = Vec::with_capacity(m);
        for i in 0..m {
            let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
            let mut x = T::real(guess);
            let mut deriv = T::one();
            for _ in 0..100 {
                let (p, dp) = legendre(m, &x);
                let dx = p / dp.clone();
                x = x - dx.clone();
                deriv = dp;
                if dx.abs() <= tol {
                    let (_, dp) = legendre(m, &x);
                    deriv = dp;
                    break;
                }
            }
            let w = T::int(2) / ((T::one() - x.square()) * deriv.square());
            nodes.push(x);
            weights.push(w);
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: &T, b: &T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b.clone() - a.clone()) / T::int(2);
        let mid = (b.clone() + a.clone()) / T::int(2);
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .map(move |(x, w)| (mid.clone() + half.clone() * x.clone(), half.clone() * w.clone()))
    }

    /// Returns `(int f, int |f|)` over `[a, b]`.
    pub fn apply<F: Fn(&T) -> T>(&self, f: &F, a: &T, b: &T) -> (T, T) {
        let mut s = T::zero();
        let mut s_abs = T::zero();
        for (x, w) in self.mapped(a, b) {
            let v = f(&x) * w;
            s_abs = s_abs + v.abs();
            s = s + v;
        }
        (s, s_abs)
    }
}

fn legendre<T: Real>(m: usize, x: &T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x.clone();
    for k in 2..=m {
        let kk = T::int(k as i64);
        let p2 = ((T::int(2 * k as i64 - 1)) * x.clone() * p1.clone() - T::int(k as i64 - 1) * p0)
            / kk;
        p0 = p1;
        p1 = p2;
    }
    let dp = T::int(m as i64) * (x.clone() * p1.clone() - p0) / (x.square() - T::one());
    (p1, dp)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub nodes_per_panel: usize,
    pub tol: f64,
    pub max_depth: u32,
}

impl QuadratureSpec {
    pub fn new(tol: f64) -> Self {
        Self {
            nodes_per_panel: 24,
            tol,
            max_depth: 160,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Estimate<T> {
    pub value: T,
    /// Absolute error estimate, including any truncated tail.
    pub error: f64,
    pub panels: usize,
}

#[derive(Debug, Clone)]
pub struct Integrator<T> {
    rule: GaussLegendre<T>,
    spec: QuadratureSpec,
}

impl<T: Real> Integrator<T> {
    pub fn new(spec: QuadratureSpec) -> Self {
        Self {
            rule: GaussLegendre::new(spec.nodes_per_panel),
            spec,
        }
    }

    pub fn rule(&self) -> &GaussLegendre<T> {
        &self.rule
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.spec
    }

    /// Accepted leaf panels over `splits`, plus the composite value and error.
    pub fn adapt<F: Fn(&T) -> T>(&self, f: &F, splits: &[T]) -> Result<(Vec<(T, T)>, Estimate<T>)> {
        assert!(splits.len() >= 2, "need at least one interval");
        for w in splits.windows(2) {
            assert!(w[0] < w[1], "splits must be strictly increasing");
        }
        let total = (splits[splits.len() - 1].clone() - splits[0].clone()).to_f64_lossy();
        // coarse scale from eight sub-panels per interval
        let mut scale = 0.0f64;
        let mut initial = Vec::new();
        for w in splits.windows(2) {
            let (v, _) = self.rule.apply(f, &w[0], &w[1]);
            let h = (w[1].clone() - w[0].clone()) / T::int(8);
            for i in 0..8 {
                let a = w[0].clone() + h.clone() * T::int(i);
                let b = if i == 7 { w[1].clone() } else { a.clone() + h.clone() };
                scale += self.rule.apply(f, &a, &b).1.to_f64_lossy();
            }
            initial.push((w[0].clone(), w[1].clone(), v));
        }
        let target = self.spec.tol * scale.max(f64::MIN_POSITIVE);

        let mut leaves = Vec::new();
        let mut value = T::zero();
        let mut error = 0.0f64;
        let mut stack: Vec<(T, T, T, u32)> = initial
            .into_iter()
            .rev()
            .map(|(a, b, v)| (a, b, v, 0))
            .collect();
        while let Some((a, b, whole, depth)) = stack.pop() {
            let mid = (a.clone() + b.clone()) / T::int(2);
            let (l, _) = self.rule.apply(f, &a, &mid);
            let (r, _) = self.rule.apply(f, &mid, &b);
            let halves = l.clone() + r.clone();
            let err = (whole - halves.clone()).abs().to_f64_lossy();
            // the floor lets endpoint singularities terminate: only a bounded number of
            // panels per depth can sit next to one
            let floor = target / (8.0 * f64::from(self.spec.max_depth) * splits.len() as f64);
            let share = (target * (b.clone() - a.clone()).to_f64_lossy() / total).max(floor);
            if !err.is_finite() {
                return Err(Error::QuadratureFailure {
                    estimate: err,
                    tol: self.spec.tol,
                });
            }
            if err <= share {
                value = value + halves;
                error += err;
                leaves.push((a, mid.clone()));
                leaves.push((mid, b));
            } else if depth >= self.spec.max_depth {
                return Err(Error::QuadratureFailure {
                    estimate: err / scale.max(f64::MIN_POSITIVE),
                    tol: self.spec.tol,
                });
            } else {
                stack.push((mid.clone(), b, r, depth + 1));
                stack.push((a, mid, l, depth + 1));
            }
        }
        let panels = leaves.len();
        Ok((leaves, Estimate { value, error, panels }))
    }

    pub fn integrate<F: Fn(&T) -> T>(&self, f: &F, splits: &[T]) -> Result<Estimate<T>> {
        self.adapt(f, splits).map(|(_, e)| e)
    }
}

/// Breakpoints for integrating `x^extra_degree w(x)` over `[0, inf)` truncated at
/// `L = t + 50 + 20 d` (times `stretch`), `d` the total algebraic degree, together with
/// a bound on the discarded tail.
///
/// The split sits exactly at `x = t`; beyond it the points double in distance from `t`.
pub fn weight_splits<T: Real>(params: &WeightParams, extra_degree: f64, stretch: f64) -> (Vec<T>, f64) {
    let d = params.algebraic_degree() + extra_degree;
    let cutoff = (params.t + 50.0 + 20.0 * d) * stretch;
    let tail = tail_bound(d, cutoff) * (1.0 - params.zeta).abs();
    let mut splits = vec![T::zero()];
    if params.t > 0.0 {
        splits.push(T::real(params.t));
    }
    let mut step = 1.0;
    while params.t + step < cutoff {
        splits.push(T::real(params.t + step));
        step *= 2.0;
    }
    splits.push(T::real(cutoff));
    (splits, tail)
}

/// Integrates `f(x) w(x)` over `[0, inf)`, where `f` is a polynomial of degree at most
/// `extra_degree` or another factor bounded by such a polynomial on the tail.
/// The cutoff is stretched until the tail bound is below the tolerance.
pub fn integrate_weighted<T: Real, F: Fn(&T) -> T>(
    integrator: &Integrator<T>,
    params: &WeightParams,
    extra_degree: f64,
    f: &F,
) -> Result<Estimate<T>> {
    let mut stretch = 1.0;
    loop {
        let (splits, tail) = weight_splits::<T>(params, extra_degree, stretch);
        let mut est = integrator.integrate(f, &splits)?;
        let scale = est.value.abs().to_f64_lossy().max(est.error);
        if tail <= integrator.spec().tol * scale || stretch >= 16.0 {
            est.error += tail;
            return Ok(est);
        }
        stretch *= 2.0;
    }
}

/// `int_L^inf x^d e^{-x} dx <= L^d e^{-L} / (1 - d/L)` for `L > d`.
pub fn tail_bound(d: f64, cutoff: f64) -> f64 {
    if cutoff <= d {
        return f64::INFINITY;
    }
    (d * cutoff.ln() - cutoff).exp() / (1.0 - d / cutoff)
}

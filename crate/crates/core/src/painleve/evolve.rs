//! Adaptive embedded Runge-Kutta integration of the `(theta_n, kappa_n)` flow in `s = ln t`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::painleve::flow::{ode_rhs_log, FlowParams};
use crate::painleve::series::InitKind;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Fehlberg 7(8), propagating the eighth-order solution.
    #[default]
    Rkf78,
    /// Dormand-Prince 5(4), propagating the fifth-order solution.
    Dp54,
}

type Q = (i64, i64);

struct Tableau {
    c: &'static [Q],
    a: &'static [&'static [Q]],
    /// Propagated weights.
    b: &'static [Q],
    /// Propagated minus embedded weights.
    e: &'static [Q],
    /// Order of the embedded (lower) solution.
    order: i32,
}

const RKF78: Tableau = Tableau {
    c: &[(0, 1), (2, 27), (1, 9), (1, 6), (5, 12), (1, 2), (5, 6), (1, 6), (2, 3), (1, 3), (1, 1), (0, 1), (1, 1)],
    a: &[
        &[],
        &[(2, 27)],
        &[(1, 36), (1, 12)],
        &[(1, 24), (0, 1), (1, 8)],
        &[(5, 12), (0, 1), (-25, 16), (25, 16)],
        &[(1, 20), (0, 1), (0, 1), (1, 4), (1, 5)],
        &[(-25, 108), (0, 1), (0, 1), (125, 108), (-65, 27), (125, 54)],
        &[(31, 300), (0, 1), (0, 1), (0, 1), (61, 225), (-2, 9), (13, 900)],
        &[(2, 1), (0, 1), (0, 1), (-53, 6), (704, 45), (-107, 9), (67, 90), (3, 1)],
        &[(-91, 108), (0, 1), (0, 1), (23, 108), (-976, 135), (311, 54), (-19, 60), (17, 6), (-1, 12)],
        &[(2383, 4100), (0, 1), (0, 1), (-341, 164), (4496, 1025), (-301, 82), (2133, 4100), (45, 82), (45, 164), (18, 41)],
        &[(3, 205), (0, 1), (0, 1), (0, 1), (0, 1), (-6, 41), (-3, 205), (-3, 41), (3, 41), (6, 41), (0, 1)],
        &[(-1777, 4100), (0, 1), (0, 1), (-341, 164), (4496, 1025), (-289, 82), (2193, 4100), (51, 82), (33, 164), (12, 41), (0, 1), (1, 1)],
    ],
    b: &[(0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (34, 105), (9, 35), (9, 35), (9, 280), (9, 280), (0, 1), (41, 840), (41, 840)],
    e: &[(-41, 840), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (-41, 840), (41, 840), (41, 840)],
    order: 7,
};

const DP54: Tableau = Tableau {
    c: &[(0, 1), (1, 5), (3, 10), (4, 5), (8, 9), (1, 1), (1, 1)],
    a: &[
        &[],
        &[(1, 5)],
        &[(3, 40), (9, 40)],
        &[(44, 45), (-56, 15), (32, 9)],
        &[(19372, 6561), (-25360, 2187), (64448, 6561), (-212, 729)],
        &[(9017, 3168), (-355, 33), (46732, 5247), (49, 176), (-5103, 18656)],
        &[(35, 384), (0, 1), (500, 1113), (125, 192), (-2187, 6784), (11, 84)],
    ],
    b: &[(35, 384), (0, 1), (500, 1113), (125, 192), (-2187, 6784), (11, 84), (0, 1)],
    e: &[(71, 57600), (0, 1), (-71, 16695), (71, 1920), (-17253, 339200), (22, 525), (-1, 40)],
    order: 4,
};

impl Method {
    fn tableau(self) -> &'static Tableau {
        match self {
            Method::Rkf78 => &RKF78,
            Method::Dp54 => &DP54,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepControl {
    /// Local error bound per step, relative to `t + |y|`.
    pub tol: f64,
    /// Stop when `theta` comes within `guard * t` of `0` or `-t`.
    pub guard: f64,
    /// Initial step in `ln t`; chosen from `tol` when absent.
    pub h_init: Option<f64>,
    pub h_min: f64,
    pub max_steps: usize,
    pub method: Method,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            tol: 1e-20,
            guard: 1e-10,
            h_init: None,
            h_min: 1e-14,
            max_steps: 200_000,
            method: Method::Rkf78,
        }
    }
}

impl StepControl {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryNode<T> {
    pub t: T,
    pub theta: T,
    pub kappa: T,
    /// `t theta'` and `t kappa'` at the node, used for dense output.
    pub dtheta_s: T,
    pub dkappa_s: T,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct IntegratorStats {
    pub steps: usize,
    pub rejected: usize,
    /// Largest accepted local error, relative to the tolerance scale.
    pub max_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory<T> {
    pub flow: FlowParams,
    pub nodes: Vec<TrajectoryNode<T>>,
    pub stats: IntegratorStats,
    pub control: StepControl,
    pub init: InitKind,
}

fn q<T: Real>(v: Q) -> T {
    T::ratio(v.0, v.1)
}

fn rhs_s<T: Real>(s: &T, y: &[T; 2], fp: &FlowParams) -> Result<[T; 2]> {
    let t = s.exp();
    let (a, b) = ode_rhs_log(&y[0], &y[1], &t, fp)?;
    Ok([a, b])
}

/// One trial step; returns the propagated state and the error estimate.
fn trial<T: Real>(tab: &Tableau, s: &T, y: &[T; 2], h: &T, fp: &FlowParams) -> Result<([T; 2], [T; 2])> {
    let mut k: Vec<[T; 2]> = Vec::with_capacity(tab.c.len());
    for (i, row) in tab.a.iter().enumerate() {
        let mut yi = y.clone();
        for (j, aij) in row.iter().enumerate() {
            if aij.0 != 0 {
                let c: T = q(*aij);
                for d in 0..2 {
                    yi[d] = yi[d].clone() + h.clone() * c.clone() * k[j][d].clone();
                }
            }
        }
        let si = s.clone() + h.clone() * q::<T>(tab.c[i]);
        k.push(rhs_s(&si, &yi, fp)?);
    }
    let mut next = y.clone();
    let mut err = [T::zero(), T::zero()];
    for (i, ki) in k.iter().enumerate() {
        let (b, e): (T, T) = (q(tab.b[i]), q(tab.e[i]));
        for d in 0..2 {
            next[d] = next[d].clone() + h.clone() * b.clone() * ki[d].clone();
            err[d] = err[d].clone() + h.clone() * e.clone() * ki[d].clone();
        }
    }
    Ok((next, err))
}

fn near_singular<T: Real>(theta: &T, t: &T, guard: f64) -> bool {
    let g = (t.clone() * T::real(guard)).abs();
    theta.abs() <= g || (theta.clone() + t.clone()).abs() <= g
}

fn node<T: Real>(t: T, y: [T; 2], fp: &FlowParams) -> Result<TrajectoryNode<T>> {
    let (a, b) = ode_rhs_log(&y[0], &y[1], &t, fp)?;
    let [theta, kappa] = y;
    Ok(TrajectoryNode {
        t,
        theta,
        kappa,
        dtheta_s: a,
        dkappa_s: b,
    })
}

/// Integrates from `(t0, theta0, kappa0)` to `t1 >= t0`, recording every accepted step.
pub fn evolve_from<T: Real>(
    fp: FlowParams,
    t0: f64,
    t1: f64,
    theta0: T,
    kappa0: T,
    ctrl: &StepControl,
    init: InitKind,
) -> Result<Trajectory<T>> {
    if !(t0 > 0.0 && t1 >= t0 && t1.is_finite()) {
        return Err(Error::InvalidParameters(format!(
            "evolution needs 0 < t0 <= t1, got t0 = {t0}, t1 = {t1}"
        )));
    }
    integrate(fp, T::real(t0), t1, theta0, kappa0, ctrl, init)
}

/// The integration proper, from a start time held at full precision.
fn integrate<T: Real>(
    fp: FlowParams,
    t_start: T,
    t1: f64,
    theta0: T,
    kappa0: T,
    ctrl: &StepControl,
    init: InitKind,
) -> Result<Trajectory<T>> {
    let t0 = t_start.to_f64_lossy();
    if !(ctrl.tol > 0.0) {
        return Err(Error::InvalidParameters(format!("step tolerance must be positive, got {}", ctrl.tol)));
    }
    let tab = ctrl.method.tableau();
    if near_singular(&theta0, &t_start, ctrl.guard) {
        return Err(Error::SingularityEncountered { last_good_t: t0 });
    }
    let mut nodes = vec![node(t_start.clone(), [theta0.clone(), kappa0.clone()], &fp)
        .map_err(|_| Error::SingularityEncountered { last_good_t: t0 })?];
    let mut stats = IntegratorStats::default();
    let s_end = T::real(t1).ln();
    let mut s = t_start.ln();
    let mut y = [theta0, kappa0];
    let span = (s_end.clone() - s.clone()).to_f64_lossy();
    let mut h = ctrl
        .h_init
        .unwrap_or_else(|| (0.5 * ctrl.tol.powf(1.0 / (tab.order as f64 + 1.0))).max(1e-6))
        .min(span.max(0.0));
    let mut last_good_t = t0;
    while (s_end.clone() - s.clone()).to_f64_lossy() > 0.0 {
        if stats.steps + stats.rejected >= ctrl.max_steps {
            return Err(Error::NoConvergence {
                what: "step limit in the theta/kappa flow",
                limit: ctrl.max_steps,
            });
        }
        let remaining = (s_end.clone() - s.clone()).to_f64_lossy();
        let t_here = last_good_t;
        let last = h >= remaining;
        let hh = if last { s_end.clone() - s.clone() } else { T::real(h) };
        let attempt = trial(tab, &s, &y, &hh, &fp);
        let (next, err) = match attempt {
            Ok(v) => v,
            Err(_) => {
                stats.rejected += 1;
                h *= 0.25;
                if h < ctrl.h_min {
                    return Err(Error::SingularityEncountered { last_good_t });
                }
                continue;
            }
        };
        let ratio = (0..2)
            .map(|d| {
                // theta and kappa vanish like t at the origin, so the absolute floor scales with t
                let mag = y[d].abs().to_f64_lossy().max(next[d].abs().to_f64_lossy());
                let scale = ctrl.tol * (t_here + mag);
                err[d].abs().to_f64_lossy() / scale
            })
            .fold(0.0f64, f64::max);
        let factor = if ratio == 0.0 {
            5.0
        } else {
            (0.9 * ratio.powf(-1.0 / (tab.order as f64 + 1.0))).clamp(0.2, 5.0)
        };
        if ratio <= 1.0 && ratio.is_finite() {
            s = if last { s_end.clone() } else { s + hh };
            let t = if last { T::real(t1) } else { s.exp() };
            if near_singular(&next[0], &t, ctrl.guard) {
                return Err(Error::SingularityEncountered { last_good_t });
            }
            let nd = node(t, next.clone(), &fp).map_err(|_| Error::SingularityEncountered { last_good_t })?;
            last_good_t = nd.t.to_f64_lossy();
            nodes.push(nd);
            y = next;
            stats.steps += 1;
            stats.max_error = stats.max_error.max(ratio);
            h *= factor;
        } else {
            stats.rejected += 1;
            h *= factor.min(0.9);
            if h < ctrl.h_min {
                return Err(Error::NoConvergence {
                    what: "step size underflow in the theta/kappa flow",
                    limit: ctrl.max_steps,
                });
            }
        }
    }
    Ok(Trajectory {
        flow: fp,
        nodes,
        stats,
        control: *ctrl,
        init,
    })
}

impl<T: Real> Trajectory<T> {
    pub fn endpoint(&self) -> &TrajectoryNode<T> {
        self.nodes.last().expect("a trajectory has at least one node")
    }

    fn segment(&self, t: f64) -> Result<usize> {
        let first = self.nodes[0].t.to_f64_lossy();
        let last = self.endpoint().t.to_f64_lossy();
        if !(t >= first && t <= last) {
            return Err(Error::InvalidParameters(format!(
                "t = {t} lies outside the trajectory [{first}, {last}]"
            )));
        }
        Ok(self
            .nodes
            .windows(2)
            .position(|w| w[1].t.to_f64_lossy() >= t)
            .unwrap_or(0))
    }

    /// Cubic Hermite dense output in `ln t`.
    pub fn interpolate(&self, t: f64) -> Result<(T, T)> {
        let i = self.segment(t)?;
        if self.nodes.len() == 1 {
            let nd = &self.nodes[0];
            return Ok((nd.theta.clone(), nd.kappa.clone()));
        }
        let (a, b) = (&self.nodes[i], &self.nodes[i + 1]);
        let (sa, sb) = (a.t.ln(), b.t.ln());
        let h = sb - sa.clone();
        let u = (T::real(t).ln() - sa) / h.clone();
        let u2 = u.square();
        let u3 = u2.clone() * u.clone();
        let (two, three) = (T::int(2), T::int(3));
        let h00 = two.clone() * u3.clone() - three.clone() * u2.clone() + T::one();
        let h10 = u3.clone() - two.clone() * u2.clone() + u.clone();
        let h01 = three * u2.clone() - two * u3.clone();
        let h11 = u3 - u2;
        let f = |ya: &T, da: &T, yb: &T, db: &T| {
            h00.clone() * ya.clone()
                + h10.clone() * h.clone() * da.clone()
                + h01.clone() * yb.clone()
                + h11.clone() * h.clone() * db.clone()
        };
        Ok((
            f(&a.theta, &a.dtheta_s, &b.theta, &b.dtheta_s),
            f(&a.kappa, &a.dkappa_s, &b.kappa, &b.dkappa_s),
        ))
    }

    /// State at `t` to integrator accuracy, by integrating from the nearest node at or before `t`.
    pub fn state_at(&self, t: f64) -> Result<(T, T)> {
        let i = self.segment(t)?;
        let a = &self.nodes[i];
        let ta = a.t.to_f64_lossy();
        if t == ta {
            return Ok((a.theta.clone(), a.kappa.clone()));
        }
        let ctrl = StepControl {
            h_init: None,
            ..self.control
        };
        let sub = integrate(
            self.flow,
            a.t.clone(),
            t,
            a.theta.clone(),
            a.kappa.clone(),
            &ctrl,
            InitKind::Supplied,
        )?;
        let e = sub.endpoint();
        Ok((e.theta.clone(), e.kappa.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row_sums(tab: &Tableau) {
        for (i, row) in tab.a.iter().enumerate() {
            let sum: f64 = row.iter().map(|(p, q)| *p as f64 / *q as f64).sum();
            let c = tab.c[i].0 as f64 / tab.c[i].1 as f64;
            assert!((sum - c).abs() < 1e-14, "row {i}: {sum} vs {c}");
        }
        let b: f64 = tab.b.iter().map(|(p, q)| *p as f64 / *q as f64).sum();
        let e: f64 = tab.e.iter().map(|(p, q)| *p as f64 / *q as f64).sum();
        assert!((b - 1.0).abs() < 1e-14);
        assert!(e.abs() < 1e-14);
    }

    #[test]
    fn tableaux_are_consistent() {
        row_sums(&RKF78);
        row_sums(&DP54);
    }
}

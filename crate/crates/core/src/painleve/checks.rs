//! Consistency checks of the `t`-dependence: the Toda-type flows of `a_n`, `b_n`, the ladder
//! form of the same flows, the deformation equation and the zero-curvature condition, plus the
//! exact (series-propagated) equivalences between the three descriptions of the flow.

use num_traits::One;

use crate::error::Result;
use crate::hankel::{hankel_pipeline, HankelPipeline};
use crate::linalg::Mat2;
use crate::mp::Mp;
use crate::painleve::flow::{ladder_image_of_ode, ladder_rhs, ode_rhs, FlowParams};
use crate::painleve::hamiltonian::{hamilton_rhs, pv_rhs, qp_map, Convention, PvParams};
use crate::precision::PrecisionCtx;
use crate::report::{relative_residual, IdentityRecord, Report};
use crate::scalar::{Field, Real};
use crate::semiclassical::aux::{theta_kappa_from_recurrence, AuxPair};
use crate::semiclassical::lax::{build_lax, LaxData};
use crate::series::PowerSeries;
use crate::weight::WeightParams;

const OFFSETS: [i64; 4] = [-2, -1, 1, 2];

/// Fourth-order central difference from values at `-2h, -h, h, 2h`.
fn fd4<T: Real>(v: &[T], h: f64) -> T {
    (v[0].clone() - T::int(8) * v[1].clone() + T::int(8) * v[2].clone() - v[3].clone()) / (T::int(12) * T::real(h))
}

struct Stencil {
    center: HankelPipeline,
    around: Vec<HankelPipeline>,
}

fn stencil(params: &WeightParams, n_max: usize, h: f64, ctx: &PrecisionCtx) -> Result<Stencil> {
    let center = hankel_pipeline(params, n_max, ctx)?;
    let around = OFFSETS
        .iter()
        .map(|k| hankel_pipeline(&params.with_t(params.t + *k as f64 * h), n_max, &center.ctx))
        .collect::<Result<_>>()?;
    Ok(Stencil { center, around })
}

fn record(report: &mut Report, id: &str, tag: &str, n: usize, t: f64, points: Vec<f64>, threshold: f64, forms: Vec<(Option<&str>, Vec<Vec<Mp>>)>) {
    let evaluated: Vec<(Option<&str>, f64)> = forms
        .iter()
        .map(|(l, rows)| (*l, rows.iter().map(|r| relative_residual(r)).fold(0.0, f64::max)))
        .collect();
    let chosen = evaluated.iter().position(|(_, r)| *r <= threshold).unwrap_or(0);
    let note = (evaluated.len() > 1).then(|| {
        evaluated
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != chosen)
            .map(|(_, (l, r))| format!("{} form residual {r:.3e}", l.unwrap_or("other")))
            .collect::<Vec<_>>()
            .join("; ")
    });
    let (variant, residual) = evaluated[chosen];
    report.push(IdentityRecord {
        id: id.to_string(),
        tag: tag.to_string(),
        n,
        t,
        points,
        residual,
        threshold,
        passed: residual <= threshold,
        variant: variant.map(str::to_string),
        note,
    });
}

fn aux(p: &HankelPipeline, k: usize) -> Result<AuxPair<Mp>> {
    theta_kappa_from_recurrence(&p.table, k, &p.ctx)
}

fn lax_of(p: &HankelPipeline, n: usize) -> Result<LaxData<Mp>> {
    let ax = aux(p, n)?;
    build_lax(&p.table.params, n, &p.table.a(n), &ax.theta, &ax.kappa, p.ctx.tol)
}

/// Finite-difference checks of the recurrence-coefficient flows at each `t` in `t_grid`.
/// Sign- or normalization-ambiguous forms are reported with the form that passed.
pub fn ab_flow_check(
    params: &WeightParams,
    n: usize,
    t_grid: &[f64],
    h: f64,
    threshold: f64,
    ctx: &PrecisionCtx,
) -> Result<Report> {
    let mut report = Report::default();
    let n = n.max(1);
    for &t in t_grid {
        let st = stencil(&params.with_t(t), n, h, ctx)?;
        let _g = st.center.ctx.enter();
        let c = &st.center.table;
        let tt = Mp::real(t);
        let two = Mp::int(2);
        let da: Mp = fd4(&st.around.iter().map(|p| p.table.a(n)).collect::<Vec<_>>(), h);
        let db: Mp = fd4(&st.around.iter().map(|p| p.table.b[n].clone()).collect::<Vec<_>>(), h);
        let log_a = two.clone() * da / c.a(n);
        let (ax0, ax1, ax2) = (aux(&st.center, n - 1)?, aux(&st.center, n)?, aux(&st.center, n + 1)?);
        record(
            &mut report,
            "toda-a",
            "2t a_n'/a_n = 2 + b_{n-1} - b_n",
            n,
            t,
            vec![],
            threshold,
            vec![(None, vec![vec![tt.clone() * log_a.clone(), -two.clone(), -c.b[n - 1].clone(), c.b[n].clone()]])],
        );
        record(
            &mut report,
            "toda-b",
            "t b_n' = a_n^2 - a_{n+1}^2 + b_n",
            n,
            t,
            vec![],
            threshold,
            vec![(None, vec![vec![tt.clone() * db.clone(), -c.a2[n].clone(), c.a2[n + 1].clone(), -c.b[n].clone()]])],
        );
        record(
            &mut report,
            "ladder-a-flow",
            "2 a_n'/a_n = R_{n-1} - R_n",
            n,
            t,
            vec![],
            threshold,
            vec![
                (Some("no factor t"), vec![vec![log_a.clone(), -ax0.big_r.clone(), ax1.big_r.clone()]]),
                (Some("with factor t"), vec![vec![tt.clone() * log_a, -ax0.big_r.clone(), ax1.big_r.clone()]]),
            ],
        );
        record(
            &mut report,
            "ladder-b-flow",
            "b_n' = r_n - r_{n+1}",
            n,
            t,
            vec![],
            threshold,
            vec![
                (Some("no factor t"), vec![vec![db.clone(), -ax1.small_r.clone(), ax2.small_r.clone()]]),
                (Some("with factor t"), vec![vec![tt.clone() * db, -ax1.small_r.clone(), ax2.small_r.clone()]]),
            ],
        );
        let fp = FlowParams {
            n,
            alpha: params.alpha,
            mu: params.mu,
        };
        let (dth, dk) = ode_rhs(&ax1.theta, &ax1.kappa, &tt, &fp)?;
        let around: Vec<AuxPair<Mp>> = st.around.iter().map(|p| aux(p, n)).collect::<Result<_>>()?;
        let fd_th: Mp = fd4(&around.iter().map(|a| a.theta.clone()).collect::<Vec<_>>(), h);
        let fd_k: Mp = fd4(&around.iter().map(|a| a.kappa.clone()).collect::<Vec<_>>(), h);
        record(
            &mut report,
            "theta-kappa-flow",
            "finite-difference (theta_n', kappa_n') of the recurrence data equals the coupled flow",
            n,
            t,
            vec![],
            threshold,
            vec![(None, vec![vec![fd_th, -dth], vec![fd_k, -dk]])],
        );
    }
    Ok(report)
}

/// Deformation equation for `(p_n, p_{n-1})` at each `x`, and the zero-curvature condition
/// `dA/dt - dB/dx + AB - BA = 0`, with `t`-derivatives by central differences.
pub fn compatibility_check(
    params: &WeightParams,
    n: usize,
    xs: &[f64],
    h: f64,
    threshold: f64,
    ctx: &PrecisionCtx,
) -> Result<Report> {
    let mut report = Report::default();
    let st = stencil(params, n, h, ctx)?;
    let _g = st.center.ctx.enter();
    let t = params.t;
    let tt = Mp::real(t);
    let lax = lax_of(&st.center, n)?;
    let laxes: Vec<LaxData<Mp>> = st.around.iter().map(|p| lax_of(p, n)).collect::<Result<_>>()?;
    let mut deform = Vec::new();
    let mut curvature = Vec::new();
    for &xf in xs {
        let x = Mp::real(xf);
        let e = st.center.table.eval(n, &x);
        let evals: Vec<_> = st.around.iter().map(|p| p.table.eval(n, &x)).collect();
        let dpn: Mp = fd4(&evals.iter().map(|e| e.value_n.clone()).collect::<Vec<_>>(), h);
        let dpm: Mp = fd4(&evals.iter().map(|e| e.value_nm1.clone()).collect::<Vec<_>>(), h);
        let b = lax.b_matrix(&x).0;
        deform.push(vec![dpn, -(b[0][0].clone() * e.value_n.clone()), -(b[0][1].clone() * e.value_nm1.clone())]);
        deform.push(vec![dpm, -(b[1][0].clone() * e.value_n.clone()), -(b[1][1].clone() * e.value_nm1.clone())]);

        let a = lax.a_matrix(&x);
        let bm = lax.b_matrix(&x);
        let mats: Vec<Mat2<Mp>> = laxes.iter().map(|l| l.a_matrix(&x)).collect();
        let xt = x.clone() - tt.clone();
        let dxb = lax.at.scale(&(Mp::one() / (xt.clone() * xt)));
        let ab = a.clone() * bm.clone();
        let ba = bm * a;
        for i in 0..2 {
            for j in 0..2 {
                let da: Mp = fd4(&mats.iter().map(|m| m.0[i][j].clone()).collect::<Vec<_>>(), h);
                curvature.push(vec![da, -dxb.0[i][j].clone(), ab.0[i][j].clone(), -ba.0[i][j].clone()]);
            }
        }
    }
    record(
        &mut report,
        "lax-t",
        "d/dt (p_n, p_{n-1}) = (B - A_t/(x - t)) (p_n, p_{n-1})",
        n,
        t,
        xs.to_vec(),
        threshold,
        vec![(None, deform)],
    );
    record(
        &mut report,
        "zero-curvature",
        "dA/dt - dB/dx + AB - BA = 0",
        n,
        t,
        xs.to_vec(),
        threshold,
        vec![(None, curvature)],
    );
    Ok(report)
}

fn dual<T: Field>(v: T, dv: T) -> PowerSeries<T> {
    PowerSeries::new(vec![v, dv], 2)
}

/// Residual between `(q', p')` obtained by pushing the coupled flow through the map to `(q, p)`
/// and the Hamilton equations at the image point. Exact chain rule through first-order series.
pub fn hamiltonian_flow_residual<T: Real>(
    theta: &T,
    kappa: &T,
    n: usize,
    weight: &WeightParams,
    convention: Convention,
) -> Result<f64> {
    let t = T::real(weight.t);
    let fp = FlowParams {
        n,
        alpha: weight.alpha,
        mu: weight.mu,
    };
    let (dth, dk) = ode_rhs(theta, kappa, &t, &fp)?;
    let (qs, ps) = qp_map(
        &dual(theta.clone(), dth),
        &dual(kappa.clone(), dk),
        &dual(t.clone(), T::one()),
        n,
        weight,
        convention,
    );
    let pv = PvParams::<T>::for_weight(n, weight, convention);
    let (hq, hp) = hamilton_rhs(&qs.coeff(0), &ps.coeff(0), &t, &pv);
    Ok(relative_residual(&[qs.coeff(1), -hq]).max(relative_residual(&[ps.coeff(1), -hp])))
}

/// Residual between the ladder vector field and the image of the coupled `(theta, kappa)` field
/// under `R = (theta + t)/t`, `r = kappa/t - (n + mu/2)`.
pub fn two_theory_residual<T: Real>(theta: &T, kappa: &T, t: &T, fp: &FlowParams) -> Result<f64> {
    let (ir, is) = ladder_image_of_ode(theta, kappa, t, fp)?;
    let big_r = (theta.clone() + t.clone()) / t.clone();
    let small_r = kappa.clone() / t.clone() - (T::int(fp.n as i64) + T::real(fp.mu) / T::int(2));
    let (lr, ls) = ladder_rhs(&big_r, &small_r, t, fp)?;
    Ok(relative_residual(&[ir, -lr]).max(relative_residual(&[is, -ls])))
}

fn integrate_series<T: Field>(c0: &T, s: &PowerSeries<T>, order: usize) -> PowerSeries<T> {
    let mut coeffs = vec![c0.clone()];
    for k in 0..order - 1 {
        coeffs.push(s.coeff(k) / T::int(k as i64 + 1));
    }
    PowerSeries::new(coeffs, order)
}

/// Residual of the second-order Painleve V equation for `q` along the Hamilton flow through
/// `(q, p)` at `t`: the local Taylor expansion of the flow is built by Picard iteration in
/// series arithmetic, so `q'` and `q''` carry no discretization error.
pub fn hamilton_pv_residual<T: Real>(q: &T, p: &T, t: &T, pv: &PvParams<T>) -> f64 {
    const ORDER: usize = 3;
    let ts = dual(t.clone(), T::one());
    let mut qs = PowerSeries::constant(q.clone());
    let mut ps = PowerSeries::constant(p.clone());
    for _ in 0..ORDER {
        let pvs = PvParams::<PowerSeries<T>> {
            v: pv.v.clone().map(PowerSeries::constant),
            alphas: pv.alphas.clone().map(PowerSeries::constant),
            n: pv.n,
            alpha: pv.alpha,
            mu: pv.mu,
            convention: pv.convention,
        };
        let (f, g) = hamilton_rhs(&qs, &ps, &ts, &pvs);
        qs = integrate_series(q, &f, ORDER);
        ps = integrate_series(p, &g, ORDER);
    }
    let dy = qs.coeff(1);
    let d2y = T::int(2) * qs.coeff(2);
    let rhs = pv_rhs(q, &dy, t, &pv.alphas);
    relative_residual(&[d2y, -rhs])
}

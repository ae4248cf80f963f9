use dll_core::hankel::{hankel_pipeline, recurrence_coefficients};
use dll_core::moments::{build_moment_table, MomentSource};
use dll_core::painleve::*;
use dll_core::scalar::{rel_diff, Field, Scalar};
use dll_core::semiclassical::theta_kappa_from_recurrence;
use dll_core::{Error, Mp, PrecisionCtx, WeightParams};
use num_traits::{One, Signed};
use proptest::prelude::*;

fn ctx() -> PrecisionCtx {
    PrecisionCtx::new(256).unwrap()
}

fn grid_weight(t: f64) -> WeightParams {
    WeightParams::new(2, 2.0, 0.5, t).unwrap()
}

const BOTH: [Convention; 2] = [Convention::Direct, Convention::Reciprocal];

#[test]
fn round_trip_and_duality() {
    let ctx = ctx();
    let _g = ctx.enter();
    let w = grid_weight(0.3);
    let (theta, kappa) = (Mp::real(-0.15), Mp::real(0.28));
    let mut qs = vec![];
    for c in BOTH {
        let hp = to_hamiltonian(&theta, &kappa, 1, &w, c).unwrap();
        let (th, ka) = from_hamiltonian(&hp.q, &hp.p, 1, &w, c).unwrap();
        assert!(rel_diff(&th, &theta) < 1e-70);
        assert!(rel_diff(&ka, &kappa) < 1e-70);
        qs.push(hp.q);
    }
    assert!(rel_diff(&(qs[0].clone() * qs[1].clone()), &Mp::one()) < 1e-75);
}

#[test]
fn degenerate_theta_is_rejected() {
    let w = grid_weight(0.3);
    for theta in [0.0, -0.3] {
        assert!(matches!(
            to_hamiltonian(&theta, &0.1, 1, &w, Convention::Direct),
            Err(Error::DegenerateTheta { .. })
        ));
    }
}

#[test]
fn okamoto_parameters() {
    let w = grid_weight(0.3);
    let p = PvParams::<f64>::for_weight(1, &w, Convention::Direct);
    assert_eq!(p.alphas, [2.0, -2.0, -7.0, -0.5]);
    let c = PvParams::<f64>::for_weight(1, &w, Convention::Reciprocal);
    assert_eq!(c.alphas, [2.0, -2.0, 7.0, -0.5]);
    for n in 0..5 {
        for conv in BOTH {
            let p = PvParams::<f64>::for_weight(n, &w, conv);
            let sign = if conv == Convention::Direct { -1.0 } else { 1.0 };
            assert_eq!(p.alphas[2], sign * (2 * n + 5) as f64);
        }
    }
}

#[test]
fn hamiltonian_without_momentum() {
    let w = grid_weight(0.3);
    let pv = PvParams::<f64>::for_weight(2, &w, Convention::Direct);
    let v = pv.v;
    let (q, t) = (1.7, 0.3);
    let h = hamiltonian_eval(&q, &0.0, &t, &pv);
    assert!((t * h - (v[2] - v[0]) * (v[3] - v[0]) * (q - 1.0)).abs() < 1e-14);
}

#[test]
fn hamilton_equations_match_finite_differences() {
    let ctx = ctx();
    let _g = ctx.enter();
    let w = grid_weight(0.3);
    let pv = PvParams::<Mp>::for_weight(1, &w, Convention::Direct);
    let (q, p, t) = (Mp::int(2), Mp::real(0.1), Mp::real(0.3));
    let h = Mp::real(2f64.powi(-40));
    let two = Mp::int(2);
    let dhdp = (hamiltonian_eval(&q, &(p.clone() + h.clone()), &t, &pv)
        - hamiltonian_eval(&q, &(p.clone() - h.clone()), &t, &pv))
        / (two.clone() * h.clone());
    let dhdq = (hamiltonian_eval(&(q.clone() + h.clone()), &p, &t, &pv)
        - hamiltonian_eval(&(q.clone() - h.clone()), &p, &t, &pv))
        / (two * h);
    let (dq, dp) = hamilton_rhs(&q, &p, &t, &pv);
    assert!((dq - dhdp).abs() < Mp::real(1e-18));
    assert!((dp + dhdq).abs() < Mp::real(1e-18));
}

#[test]
fn pv_residual_of_a_constant() {
    let zero = [0.0f64; 4];
    let r = pv_residual(&mut |_t| Ok(2.0), &zero, &[0.2, 0.3], 1e-3).unwrap();
    assert_eq!(r, 0.0);
    assert!(matches!(
        pv_residual(&mut |_t| Ok(1.0), &zero, &[0.2], 1e-3),
        Err(Error::SingularPanel { .. })
    ));
}

#[test]
fn q_tends_to_minus_alpha_over_mu() {
    let ctx = ctx();
    let _g = ctx.enter();
    for (alpha, mu) in [(2u32, 2.0), (1, 2.0), (3, 1.0)] {
        let w = WeightParams::new(alpha, mu, 0.5, 1e-12).unwrap();
        let init = series_init::<Mp>(2, 1e-12, &w, 1e-30).unwrap();
        let hp = to_hamiltonian(&init.theta, &init.kappa, 2, &w, Convention::Direct).unwrap();
        let limit = -(alpha as f64) / mu;
        assert!((hp.q.to_f64_lossy() - limit).abs() < 1e-9, "alpha={alpha} mu={mu}");
    }
}

#[test]
fn flows_agree_on_the_grid() {
    let ctx = ctx();
    let _g = ctx.enter();
    for t in [0.1, 0.3, 0.5] {
        let w = grid_weight(t);
        let pipe = hankel_pipeline(&w, 4, &ctx).unwrap();
        let _g = pipe.ctx.enter();
        let fp = FlowParams { n: 0, alpha: 2, mu: 2.0 };
        for n in 1..=4 {
            let ax = theta_kappa_from_recurrence(&pipe.table, n, &pipe.ctx).unwrap();
            for c in BOTH {
                let r = hamiltonian_flow_residual(&ax.theta, &ax.kappa, n, &w, c).unwrap();
                assert!(r <= 1e-15, "hamilton flow n={n} t={t} {c:?}: {r:e}");
                let hp = to_hamiltonian(&ax.theta, &ax.kappa, n, &w, c).unwrap();
                let pv = PvParams::<Mp>::for_weight(n, &w, c);
                let r = hamilton_pv_residual(&hp.q, &hp.p, &hp.t, &pv);
                assert!(r <= 1e-15, "pv wiring n={n} t={t} {c:?}: {r:e}");
            }
            let r = two_theory_residual(&ax.theta, &ax.kappa, &Mp::real(t), &FlowParams { n, ..fp }).unwrap();
            assert!(r <= 1e-18, "two theories n={n} t={t}: {r:e}");
        }
    }
}

#[test]
fn recurrence_flows_by_finite_differences() {
    let ctx = ctx();
    let h = 2f64.powi(-20);
    let rep = ab_flow_check(&grid_weight(0.3), 2, &[0.1, 0.3, 0.5], h, 1e-8, &ctx).unwrap();
    for e in &rep.entries {
        assert!(e.passed, "{} t={} residual {:e}", e.id, e.t, e.residual);
    }
    for id in ["ladder-a-flow", "ladder-b-flow"] {
        let e = rep.entries.iter().find(|e| e.id == id).unwrap();
        assert_eq!(e.variant.as_deref(), Some("no factor t"));
    }
    let rep = compatibility_check(&grid_weight(0.3), 2, &[-1.0, -2.0, 0.15], h, 1e-8, &ctx).unwrap();
    assert!(rep.all_passed(), "{:?}", rep.entries.iter().filter(|e| !e.passed).collect::<Vec<_>>());
}

#[test]
fn non_analytic_terms_for_fractional_mu() {
    let ctx = PrecisionCtx::new(256).unwrap().with_tol(1e-40).unwrap();
    let _g = ctx.enter();
    for t in [1e-2, 2e-3] {
        let w = WeightParams::new(1, 0.5, 0.5, t).unwrap();
        let m = build_moment_table::<Mp>(&w, 5, &ctx, MomentSource::Quadrature).unwrap();
        let table = recurrence_coefficients(&m, 1).unwrap();
        let ax = theta_kappa_from_recurrence(&table, 1, &ctx).unwrap();
        let e = small_t_expansion::<Mp>(1, &w).unwrap();
        assert!(e.na_is_relevant());
        let tt = Mp::real(t);
        let err = |include: bool| {
            let (th, ka) = e.eval(&tt, include);
            (
                (th - ax.theta.clone()).abs().to_f64_lossy(),
                (ka - ax.kappa.clone()).abs().to_f64_lossy(),
            )
        };
        let (with_th, with_ka) = err(true);
        let (without_th, without_ka) = err(false);
        // the remainder drops from t^{2.5} to t^3
        assert!(with_th < 0.2 * without_th && with_ka < 0.2 * without_ka, "t={t}");
        assert!(with_th < 20.0 * t.powi(3) && with_ka < 20.0 * t.powi(3), "t={t}");
    }
}

#[test]
fn series_init_matches_hankel() {
    let ctx = ctx();
    let _g = ctx.enter();
    let w = grid_weight(1e-3);
    let pipe = hankel_pipeline(&w, 4, &ctx).unwrap();
    for n in 1..=4 {
        let init = series_init::<Mp>(n, 1e-3, &w, 1e-40).unwrap();
        assert!(matches!(init.kind, InitKind::Taylor { .. }));
        let ax = theta_kappa_from_recurrence(&pipe.table, n, &pipe.ctx).unwrap();
        assert!(rel_diff(&init.theta, &ax.theta) < 1e-35, "n={n}");
        assert!(rel_diff(&init.kappa, &ax.kappa) < 1e-35, "n={n}");
    }
    assert!(series_init::<Mp>(1, 0.1, &w, 1e-20).is_err());
}

#[test]
fn evolution_reaches_hankel_values() {
    let ctx = ctx();
    let _g = ctx.enter();
    let w = grid_weight(0.3);
    let pipe = hankel_pipeline(&w, 4, &ctx).unwrap();
    for n in [1, 4] {
        let tr = evolve::<Mp>(n, 1e-3, 0.3, &w, &StepControl::default()).unwrap();
        let ax = theta_kappa_from_recurrence(&pipe.table, n, &pipe.ctx).unwrap();
        let e = tr.endpoint();
        assert!(rel_diff(&e.theta, &ax.theta) < 1e-6, "theta n={n}");
        assert!(rel_diff(&e.kappa, &ax.kappa) < 1e-6, "kappa n={n}");
    }
}

#[test]
fn methods_agree() {
    let fp = FlowParams { n: 1, alpha: 2, mu: 2.0 };
    let w = grid_weight(0.05);
    let init = series_init::<f64>(1, 1e-2, &w, 1e-16).unwrap();
    let run = |m: Method| {
        let ctrl = StepControl::default().with_tol(1e-12).with_method(m);
        evolve_from(fp, 1e-2, 0.05, init.theta, init.kappa, &ctrl, init.kind).unwrap()
    };
    let (a, b) = (run(Method::Rkf78), run(Method::Dp54));
    assert!((a.endpoint().theta - b.endpoint().theta).abs() < 1e-8 * a.endpoint().theta.abs());
    assert!(a.stats.steps < b.stats.steps);
}

#[test]
fn degenerate_start_and_empty_span() {
    let fp = FlowParams { n: 1, alpha: 2, mu: 2.0 };
    let ctrl = StepControl::default();
    assert_eq!(
        evolve_from(fp, 0.1, 0.3, 0.0, 0.1, &ctrl, InitKind::Supplied).unwrap_err(),
        Error::SingularityEncountered { last_good_t: 0.1 }
    );
    let tr = evolve_from(fp, 0.3, 0.3, -0.1, 0.2, &ctrl, InitKind::Supplied).unwrap();
    assert_eq!(tr.nodes.len(), 1);
    assert!(evolve_from(fp, 0.3, 0.2, -0.1, 0.2, &ctrl, InitKind::Supplied).is_err());
}

#[test]
fn dense_output_tracks_reintegration() {
    let ctx = ctx();
    let _g = ctx.enter();
    let w = grid_weight(0.3);
    let tr = evolve::<Mp>(2, 1e-3, 0.3, &w, &StepControl::default().with_tol(1e-16)).unwrap();
    for t in [0.011, 0.1234, 0.29] {
        let (a, _) = tr.interpolate(t).unwrap();
        let (b, _) = tr.state_at(t).unwrap();
        assert!(rel_diff(&a, &b) < 1e-8, "t={t}");
    }
}

#[test]
fn painleve_v_along_the_trajectory() {
    let ctx = ctx();
    let _g = ctx.enter();
    let w = grid_weight(0.3);
    let n = 1;
    let tr = evolve::<Mp>(n, 1e-3, 0.52, &w, &StepControl::default()).unwrap();
    let panel = [0.1, 0.2, 0.3, 0.4, 0.5];
    for c in BOTH {
        let pv = PvParams::<Mp>::for_weight(n, &w, c);
        let mut q = |t: f64| {
            let (th, ka) = tr.state_at(t)?;
            Ok(to_hamiltonian(&th, &ka, n, &w.with_t(t), c)?.q)
        };
        let r = pv_residual(&mut q, &pv.alphas, &panel, 1e-3).unwrap();
        assert!(r <= 1e-8, "{c:?}: {r:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ladder_field_is_the_image_of_the_coupled_field(
        n in 0usize..6, alpha in 1u32..5, mu in 0.0f64..4.0,
        t in 0.05f64..2.0, theta in -3.0f64..3.0, kappa in -3.0f64..3.0,
    ) {
        prop_assume!(theta.abs() > 1e-3 && (theta + t).abs() > 1e-3);
        let ctx = ctx();
        let _g = ctx.enter();
        let fp = FlowParams { n, alpha, mu };
        let r = two_theory_residual(&Mp::real(theta), &Mp::real(kappa), &Mp::real(t), &fp).unwrap();
        prop_assert!(r <= 1e-18, "{r:e}");
    }

    #[test]
    fn hamiltonian_round_trip(
        n in 0usize..6, t in 0.05f64..2.0, theta in -3.0f64..3.0, kappa in -3.0f64..3.0, cor in any::<bool>(),
    ) {
        prop_assume!(theta.abs() > 1e-3 && (theta + t).abs() > 1e-3);
        let ctx = ctx();
        let _g = ctx.enter();
        let w = WeightParams::new(2, 1.5, 0.5, t).unwrap();
        let c = if cor { Convention::Reciprocal } else { Convention::Direct };
        let (th, ka) = (Mp::real(theta), Mp::real(kappa));
        let hp = to_hamiltonian(&th, &ka, n, &w, c).unwrap();
        let (th2, ka2) = from_hamiltonian(&hp.q, &hp.p, n, &w, c).unwrap();
        prop_assert!((th2 - th).abs() < Mp::real(1e-60));
        prop_assert!((ka2 - ka).abs() < Mp::real(1e-60));
        let r = hamiltonian_flow_residual(&Mp::real(theta), &Mp::real(kappa), n, &w, c).unwrap();
        prop_assert!(r <= 1e-60, "{r:e}");
    }
}

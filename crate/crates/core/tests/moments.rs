use dll_core::moments::{build_moment_table, moment_closed_form, moment_quadrature, moment_series, MomentSource};
use dll_core::oracle::DiscreteMeasure;
use dll_core::scalar::{rel_diff, Scalar};
use dll_core::{Error, Mp, PrecisionCtx, WeightParams};
use num_rational::BigRational;
use proptest::prelude::*;

#[test]
fn t0_rows() {
    let ctx = PrecisionCtx::new(256).unwrap();
    let _g = ctx.enter();
    let w = WeightParams::new(2, 2.0, 0.5, 0.0).unwrap();
    let got: Vec<f64> = (0..=2)
        .map(|k| moment_closed_form::<Mp>(k, &w, &ctx).unwrap().to_f64_lossy())
        .collect();
    assert_eq!(got, vec![12.0, 60.0, 360.0]);
}

#[test]
fn closed_form_against_quadrature_on_grid() {
    let ctx = PrecisionCtx::new(256).unwrap();
    let _g = ctx.enter();
    for t in [1e-3, 0.1, 0.3, 0.5] {
        let w = WeightParams::new(2, 2.0, 0.5, t).unwrap();
        for k in 0..=12 {
            let cf: Mp = moment_closed_form(k, &w, &ctx).unwrap();
            let q = moment_quadrature::<Mp>(k, &w, &ctx).unwrap();
            assert!(rel_diff(&cf, &q.value) < 1e-20, "k={k} t={t}");
        }
    }
}

#[test]
fn closed_form_against_discrete_measure() {
    let ctx = PrecisionCtx::new(256).unwrap();
    let _g = ctx.enter();
    let w = WeightParams::new(3, 1.0, 0.25, 0.4).unwrap();
    let m = DiscreteMeasure::<Mp>::for_weight(&w, 60).unwrap();
    for k in 0..=12 {
        let cf: Mp = moment_closed_form(k, &w, &ctx).unwrap();
        assert!(rel_diff(&cf, &m.moment(k)) < 1e-20, "k={k}");
    }
}

#[test]
fn closed_form_rejects_fractional_mu() {
    let ctx = PrecisionCtx::new(128).unwrap();
    let _g = ctx.enter();
    let w = WeightParams::new(1, 0.5, 0.5, 0.3).unwrap();
    assert!(matches!(
        moment_closed_form::<Mp>(0, &w, &ctx),
        Err(Error::UnsupportedParameters(_)) | Err(Error::InvalidParameters(_))
    ));
    let tab = build_moment_table::<Mp>(&w, 3, &ctx, MomentSource::Quadrature);
    assert!(tab.is_ok(), "{:?}", tab.err());
}

#[test]
fn series_at_t0_is_the_limit() {
    let w = WeightParams::new(2, 2.0, 0.5, 0.0).unwrap();
    let s = moment_series::<BigRational>(1, &w, 4).unwrap();
    assert_eq!(s.coeff(0), BigRational::from_integer(60.into()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closed_form_matches_quadrature(alpha in 0u32..4, mu in 0u32..4, zeta in -2.0f64..0.95, t in 0.0f64..2.0, k in 0usize..8) {
        let ctx = PrecisionCtx::new(128).unwrap();
        let _g = ctx.enter();
        let w = WeightParams::new(alpha, mu as f64, zeta, t).unwrap();
        let cf: Mp = moment_closed_form(k, &w, &ctx).unwrap();
        let q = moment_quadrature::<Mp>(k, &w, &ctx).unwrap();
        prop_assert!(rel_diff(&cf, &q.value) < 1e-20);
    }
}

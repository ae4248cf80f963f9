use dll_core::hankel::hankel_pipeline;
use dll_core::semiclassical::verify_identities;
use dll_core::{Error, PrecisionCtx, WeightParams};

fn run(alpha: u32, mu: f64, zeta: f64, t: f64) -> dll_core::report::Report {
    let ctx = PrecisionCtx::new(256).unwrap().with_tol(1e-30).unwrap();
    let params = WeightParams::new(alpha, mu, zeta, t).unwrap();
    let pipe = hankel_pipeline(&params, 4, &ctx).unwrap();
    let _g = pipe.ctx.enter();
    verify_identities(&pipe.table, 1..=4, &pipe.ctx).unwrap()
}

fn assert_clean(report: &dll_core::report::Report) {
    let bad: Vec<_> = report
        .entries
        .iter()
        .filter(|e| !e.passed)
        .map(|e| format!("{} n={} residual {:e}", e.id, e.n, e.residual))
        .collect();
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn suite_passes_on_default_grid() {
    for t in [0.1, 0.3, 0.5] {
        let report = run(2, 2.0, 0.5, t);
        assert_clean(&report);
        assert!(report.max_residual("") <= 1e-15);
    }
}

#[test]
fn suite_passes_off_the_symmetric_point() {
    assert_clean(&run(1, 3.0, 0.5, 0.3));
    assert_clean(&run(3, 1.0, -0.7, 0.8));
}

#[test]
fn corrected_forms_are_the_ones_that_pass() {
    let report = run(2, 2.0, 0.5, 0.3);
    let variant = |id: &str| {
        report
            .entries
            .iter()
            .find(|e| e.id == id)
            .and_then(|e| e.variant.clone())
    };
    assert!(variant("freud-2").is_some());
    assert!(report.entries.iter().any(|e| e.id == "ladder-coefficient-A"));
}

#[test]
fn degenerate_parameters_are_rejected() {
    let ctx = PrecisionCtx::new(128).unwrap();
    let params = WeightParams::new(2, 0.0, 0.5, 0.3).unwrap();
    let pipe = hankel_pipeline(&params, 2, &ctx).unwrap();
    let _g = pipe.ctx.enter();
    assert!(matches!(
        verify_identities(&pipe.table, 1..=2, &pipe.ctx),
        Err(Error::UnsupportedParameters(_))
    ));
    let params = WeightParams::new(2, 2.0, 0.5, 0.0).unwrap();
    let pipe = hankel_pipeline(&params, 2, &ctx).unwrap();
    assert!(verify_identities(&pipe.table, 1..=2, &pipe.ctx).is_err());
    let params = WeightParams::new(2, 2.0, 0.5, 0.3).unwrap();
    let pipe = hankel_pipeline(&params, 2, &ctx).unwrap();
    assert!(verify_identities(&pipe.table, 0..=2, &pipe.ctx).is_err());
}

//! Acceptance run on the desk-scale grid: alpha = 2, mu = 2, zeta = 0.5, n <= 4,
//! t in [1e-3, 0.5], 256-bit arithmetic. One line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use dll_core::hankel::{hankel_determinant, hankel_pipeline};
use dll_core::moments::{moment_closed_form, moment_quadrature};
use dll_core::oracle::{delta_by_quadrature, dn_by_quadrature};
use dll_core::painleve::*;
use dll_core::scalar::{factorial, rel_diff, Field, Scalar};
use dll_core::semiclassical::{theta_kappa_from_recurrence, verify_identities};
use dll_core::{Mp, PrecisionCtx, Result, WeightParams};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ALPHA: u32 = 2;
const MU: f64 = 2.0;
const ZETA: f64 = 0.5;
const N_MAX: usize = 4;

fn weight(t: f64) -> WeightParams {
    WeightParams::new(ALPHA, MU, ZETA, t).expect("grid parameters are valid")
}

fn ctx() -> PrecisionCtx {
    PrecisionCtx::new(256).expect("256 bits").with_tol(1e-30).expect("tolerance")
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(worst: f64, tol: f64, what: &str) -> Outcome {
    Outcome {
        passed: worst <= tol,
        detail: format!("{what} {worst:.3e} (tol {tol:e})"),
    }
}

fn moments() -> Result<Outcome> {
    let ctx = ctx();
    let _g = ctx.enter();
    let mut worst = 0.0f64;
    for t in [1e-3, 0.1, 0.3, 0.5] {
        let w = weight(t);
        for k in 0..=12 {
            let cf: Mp = moment_closed_form(k, &w, &ctx)?;
            let q = moment_quadrature::<Mp>(k, &w, &ctx)?;
            worst = worst.max(rel_diff(&cf, &q.value));
        }
    }
    Ok(outcome(worst, 1e-20, "max relative difference, k <= 12, t in {1e-3, 0.1, 0.3, 0.5}:"))
}

fn classical_limits() -> Result<Outcome> {
    let ctx = ctx();
    let _g = ctx.enter();
    let w = weight(0.0);
    let pipe = hankel_pipeline(&w, 5, &ctx)?;
    let s = (ALPHA as f64 + MU) as i64;
    let mut worst_ab = 0.0f64;
    for n in 1..=5i64 {
        worst_ab = worst_ab.max(rel_diff(&pipe.table.a2[n as usize], &Mp::int(n * (n + s))));
        worst_ab = worst_ab.max(rel_diff(&pipe.table.b[n as usize], &Mp::int(2 * n + s + 1)));
    }
    let mut worst_det = 0.0f64;
    let mut product = Mp::one();
    for n in 1..=5u32 {
        product = product
            * (Mp::one() - Mp::real(ZETA))
            * factorial::<Mp>(n - 1)
            * factorial::<Mp>(n - 1 + ALPHA + MU as u32);
        let det = hankel_determinant(&pipe.moments, n as usize)?;
        worst_det = worst_det.max(rel_diff(&det, &product));
    }
    Ok(Outcome {
        passed: worst_ab <= 1e-25 && worst_det <= 1e-20,
        detail: format!(
            "a_n^2(0), b_n(0) worst {worst_ab:.3e} (tol 1e-25); Delta_n(0) product worst {worst_det:.3e} (tol 1e-20), n <= 5"
        ),
    })
}

fn identities() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut failed = 0;
    for t in [1e-3, 0.1, 0.3, 0.5] {
        let pipe = hankel_pipeline(&weight(t), N_MAX, &ctx())?;
        let _g = pipe.ctx.enter();
        let report = verify_identities(&pipe.table, 1..=N_MAX, &pipe.ctx)?;
        count += report.entries.len();
        failed += report.failures();
        worst = worst.max(report.max_residual(""));
    }
    let mut o = outcome(worst, 1e-15, &format!("{count} identity checks, {failed} failed, worst residual"));
    o.passed &= failed == 0;
    Ok(o)
}

fn oracle_equivalence() -> Result<Outcome> {
    let ctx = ctx();
    let _g = ctx.enter();
    let w = weight(0.3);
    let pipe = hankel_pipeline(&w, N_MAX, &ctx)?;
    let mut worst = 0.0f64;
    for n in 1..=N_MAX {
        let tr = evolve::<Mp>(n, 1e-3, 0.3, &w, &StepControl::default())?;
        let ax = theta_kappa_from_recurrence(&pipe.table, n, &pipe.ctx)?;
        let e = tr.endpoint();
        worst = worst.max(rel_diff(&e.theta, &ax.theta)).max(rel_diff(&e.kappa, &ax.kappa));
    }
    Ok(outcome(worst, 1e-6, "evolved vs Hankel (theta_n, kappa_n) at t = 0.3 from t0 = 1e-3, n <= 4:"))
}

fn painleve_residual() -> Result<Outcome> {
    let ctx = ctx();
    let _g = ctx.enter();
    let w = weight(0.3);
    let panel = [0.1, 0.2, 0.3, 0.4, 0.5];
    let mut worst = 0.0f64;
    let mut wiring = true;
    let mut duality = 0.0f64;
    for n in 1..=N_MAX {
        let tr = evolve::<Mp>(n, 1e-3, 0.52, &w, &StepControl::default())?;
        let s = (2 * n as u32 + ALPHA + 1) as f64 + MU;
        for (c, a3) in [(Convention::Direct, -s), (Convention::Reciprocal, s)] {
            let pv = PvParams::<Mp>::for_weight(n, &w, c);
            let expected = [MU * MU / 2.0, -((ALPHA * ALPHA) as f64) / 2.0, a3, -0.5];
            wiring &= pv.alphas.iter().zip(expected).all(|(a, e)| a.to_f64_lossy() == e);
            let mut q = |t: f64| -> Result<Mp> {
                let (th, ka) = tr.state_at(t)?;
                Ok(to_hamiltonian(&th, &ka, n, &w.with_t(t), c)?.q)
            };
            worst = worst.max(pv_residual(&mut q, &pv.alphas, &panel, 1e-3)?);
        }
        for node in &tr.nodes {
            let wt = w.with_t(node.t.to_f64_lossy());
            let a = to_hamiltonian(&node.theta, &node.kappa, n, &wt, Convention::Direct)?;
            let b = to_hamiltonian(&node.theta, &node.kappa, n, &wt, Convention::Reciprocal)?;
            duality = duality.max(rel_diff(&(a.q * b.q), &Mp::one()));
        }
    }
    Ok(Outcome {
        passed: worst <= 1e-8 && wiring && duality <= 1e-70,
        detail: format!(
            "normalized residual on t in [0.1, 0.5], both maps, n <= 4: {worst:.3e} (tol 1e-8); parameters {}; |q q' - 1| {duality:.1e}",
            if wiring { "as stated" } else { "MISMATCH" }
        ),
    })
}

fn two_theories() -> Result<Outcome> {
    let ctx = ctx();
    let _g = ctx.enter();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    let mut drawn = 0;
    while drawn < 100 {
        let t: f64 = rng.gen_range(0.01..2.0);
        let theta: f64 = rng.gen_range(-3.0..3.0);
        let kappa: f64 = rng.gen_range(-3.0..3.0);
        if theta.abs() < 1e-3 || (theta + t).abs() < 1e-3 {
            continue;
        }
        let fp = FlowParams {
            n: rng.gen_range(0..=N_MAX),
            alpha: rng.gen_range(1..=4),
            mu: rng.gen_range(0.0..4.0),
        };
        worst = worst.max(two_theory_residual(&Mp::real(theta), &Mp::real(kappa), &Mp::real(t), &fp)?);
        drawn += 1;
    }
    Ok(outcome(worst, 1e-18, "ladder field vs image of the coupled field, 100 random states:"))
}

fn lax_consistency() -> Result<Outcome> {
    let mut worst_x = 0.0f64;
    let mut worst_t = 0.0f64;
    let mut all = true;
    let h = 2f64.powi(-20);
    for t in [0.1, 0.3, 0.5] {
        let w = weight(t);
        let pipe = hankel_pipeline(&w, N_MAX, &ctx())?;
        {
            let _g = pipe.ctx.enter();
            let report = verify_identities(&pipe.table, 1..=N_MAX, &pipe.ctx)?;
            for id in ["magnus-ode", "lax-x"] {
                worst_x = worst_x.max(report.max_residual(id));
            }
        }
        for n in 1..=N_MAX {
            let rep = compatibility_check(&w, n, &[-1.0, -2.0, -0.5, t / 2.0, 2.0 * t], h, 1e-8, &ctx())?;
            all &= rep.all_passed();
            worst_t = worst_t.max(rep.max_residual(""));
        }
    }
    Ok(Outcome {
        passed: all && worst_x <= 1e-18 && worst_t <= 1e-8,
        detail: format!(
            "x-equation {worst_x:.3e} (tol 1e-18); deformation and zero curvature {worst_t:.3e} (tol 1e-8)"
        ),
    })
}

fn brute_force() -> Result<Outcome> {
    let ctx = ctx();
    let _g = ctx.enter();
    let mut worst_delta = 0.0f64;
    let mut worst_d = 0.0f64;
    for t in [0.1, 0.3, 0.5] {
        let w = weight(t);
        let pipe = hankel_pipeline(&w, 3, &ctx)?;
        let _g = pipe.ctx.enter();
        for n in 1..=3 {
            let brute: Mp = delta_by_quadrature(&w, n)?;
            worst_delta = worst_delta.max(rel_diff(&brute, &pipe.table.delta[n]));
        }
        for n in 1..=2 {
            for (y1, y2) in [(-1.0, -2.0), (-0.5, -0.5), (0.7, 2.5), (t, 3.0)] {
                let (y1, y2) = (Mp::real(y1), Mp::real(y2));
                let brute: Mp = dn_by_quadrature(&w, n, &y1, &y2)?;
                worst_d = worst_d.max(rel_diff(&brute, &pipe.table.dn_kernel(n, &y1, &y2)));
            }
        }
    }
    Ok(Outcome {
        passed: worst_delta <= 1e-10 && worst_d <= 1e-10,
        detail: format!(
            "Delta_N, N <= 3: {worst_delta:.3e}; D_N Christoffel-Darboux, N <= 2: {worst_d:.3e} (tol 1e-10)"
        ),
    })
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 8] = [
        ("moment cross-validation", moments),
        ("classical limits", classical_limits),
        ("identity suite", identities),
        ("ODE vs determinant", oracle_equivalence),
        ("Painleve V residual", painleve_residual),
        ("two-theory equivalence", two_theories),
        ("Lax and deformation consistency", lax_consistency),
        ("brute-force determinants", brute_force),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (passed, detail) = match run() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failures += usize::from(!passed);
        println!(
            "[{}] {} {name}: {detail} [{:.1}s]",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} of 8 criteria failed");
        ExitCode::FAILURE
    }
}

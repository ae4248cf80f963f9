use dll_core::hankel::hankel_pipeline;
use dll_core::moments::{moment_closed_form, moment_quadrature};
use dll_core::painleve::{
    ab_flow_check, compatibility_check, evolve, evolve_from, hamiltonian_flow_residual, pv_residual,
    to_hamiltonian, Convention, FlowParams, InitKind, PvParams, StepControl, Trajectory,
};
use dll_core::report::{IdentityRecord, Report};
use dll_core::scalar::{rel_diff, Scalar};
use dll_core::semiclassical::{theta_kappa_from_recurrence, verify_identities, x_panel};
use dll_core::{Error, Mp, PrecisionCtx, WeightParams};
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::exit::Failure;
use crate::output::{csv_line, decimal, emit, to_json, SCHEMA_VERSION};

/// Spacing of the `t`-stencils in the flow checks.
const FLOW_H: f64 = 9.5367431640625e-7; // 2^-20
const FLOW_THRESHOLD: f64 = 1e-8;

#[derive(Serialize)]
struct Precision {
    bits: u32,
    digits: usize,
    tol: f64,
}

fn context(cfg: &RunConfig) -> Result<PrecisionCtx, Failure> {
    let ctx = PrecisionCtx::new(cfg.prec_bits)?;
    Ok(match cfg.tol {
        Some(tol) => ctx.with_tol(tol)?,
        None => ctx,
    })
}

fn precision(cfg: &RunConfig, ctx: &PrecisionCtx) -> Precision {
    Precision {
        bits: cfg.prec_bits,
        digits: cfg.digits(),
        tol: ctx.tol,
    }
}

#[derive(Serialize)]
struct MomentRow {
    k: usize,
    /// Absent when the closed form does not apply (non-integer `mu`).
    closed_form: Option<String>,
    quadrature: String,
    quadrature_error: f64,
    relative_difference: Option<f64>,
}

#[derive(Serialize)]
struct MomentProvenance {
    closed_form: &'static str,
    quadrature: &'static str,
}

#[derive(Serialize)]
struct MomentsDoc {
    schema_version: u32,
    command: &'static str,
    parameters: WeightParams,
    kmax: usize,
    precision: Precision,
    provenance: MomentProvenance,
    rows: Vec<MomentRow>,
}

pub fn moments(cfg: &RunConfig) -> Result<(), Failure> {
    let t = cfg.require(cfg.t, "t")?;
    let w = cfg.weight(t)?;
    let kmax = cfg.kmax.unwrap_or(12);
    let ctx = context(cfg)?;
    let _g = ctx.enter();
    let digits = cfg.digits();
    let mut rows = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let closed = match moment_closed_form::<Mp>(k, &w, &ctx) {
            Ok(v) => Some(v),
            Err(Error::UnsupportedParameters(_)) => None,
            Err(e) => return Err(e.into()),
        };
        let q = moment_quadrature::<Mp>(k, &w, &ctx)?;
        rows.push(MomentRow {
            k,
            relative_difference: closed.as_ref().map(|c| rel_diff(c, &q.value)),
            closed_form: closed.as_ref().map(|c| decimal(c, digits)),
            quadrature: decimal(&q.value, digits),
            quadrature_error: q.error,
        });
    }
    let text = match cfg.format {
        Format::Json => to_json(&MomentsDoc {
            schema_version: SCHEMA_VERSION,
            command: "moments",
            parameters: w,
            kmax,
            precision: precision(cfg, &ctx),
            provenance: MomentProvenance {
                closed_form: "terminating confluent hypergeometric closed form",
                quadrature: "adaptive Gauss-Legendre split at x = t, truncated tail bounded",
            },
            rows,
        })?,
        Format::Csv => {
            let mut s = csv_line(&["k", "closed_form", "quadrature", "relative_difference"].map(String::from));
            for r in rows {
                s += &csv_line(&[
                    r.k.to_string(),
                    r.closed_form.unwrap_or_default(),
                    r.quadrature,
                    r.relative_difference.map(|d| format!("{d:e}")).unwrap_or_default(),
                ]);
            }
            s
        }
    };
    emit(&text, cfg.out.as_deref())
}

#[derive(Serialize)]
struct Summary {
    checks: usize,
    failures: usize,
    max_residual: f64,
}

#[derive(Serialize)]
struct VerifyDoc<'a> {
    schema_version: u32,
    command: &'static str,
    parameters: WeightParams,
    n_range: [usize; 2],
    precision: Precision,
    summary: Summary,
    entries: &'a [IdentityRecord],
}

pub fn verify(cfg: &RunConfig) -> Result<(), Failure> {
    let t = cfg.require(cfg.t, "t")?;
    let w = cfg.weight(t)?;
    let (lo, hi) = match cfg.n {
        Some(n) => (n, n),
        None => (1, cfg.nmax.unwrap_or(4)),
    };
    if lo == 0 || hi < lo {
        return Err(Failure::validation(format!("degree range {lo}..={hi} is empty or starts at 0")));
    }
    if t <= 0.0 {
        return Err(Failure::validation("verify needs t > 0"));
    }
    let ctx = context(cfg)?;
    let pipe = hankel_pipeline(&w, hi, &ctx)?;
    let mut report = {
        let _g = pipe.ctx.enter();
        verify_identities(&pipe.table, lo..=hi, &pipe.ctx)?
    };
    let h = FLOW_H.min(t / 8.0);
    for n in lo..=hi {
        report.extend(ab_flow_check(&w, n, &[t], h, FLOW_THRESHOLD, &ctx)?);
        report.extend(compatibility_check(&w, n, &x_panel(t), h, FLOW_THRESHOLD, &ctx)?);
    }
    write_report(cfg, &ctx, w, [lo, hi], &report)?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::identities(report.failures(), report.entries.len()))
    }
}

fn write_report(cfg: &RunConfig, ctx: &PrecisionCtx, w: WeightParams, n_range: [usize; 2], report: &Report) -> Result<(), Failure> {
    let text = match cfg.format {
        Format::Json => to_json(&VerifyDoc {
            schema_version: SCHEMA_VERSION,
            command: "verify",
            parameters: w,
            n_range,
            precision: precision(cfg, ctx),
            summary: Summary {
                checks: report.entries.len(),
                failures: report.failures(),
                max_residual: report.max_residual(""),
            },
            entries: &report.entries,
        })?,
        Format::Csv => {
            let header = ["id", "n", "t", "residual", "threshold", "passed", "variant", "tag"];
            let mut s = csv_line(&header.map(String::from));
            for e in &report.entries {
                s += &csv_line(&[
                    e.id.clone(),
                    e.n.to_string(),
                    e.t.to_string(),
                    format!("{:e}", e.residual),
                    format!("{:e}", e.threshold),
                    e.passed.to_string(),
                    e.variant.clone().unwrap_or_default(),
                    e.tag.clone(),
                ]);
            }
            s
        }
    };
    emit(&text, cfg.out.as_deref())
}

#[derive(Serialize)]
struct Row {
    t: String,
    theta: String,
    kappa: String,
    q: String,
    p: String,
    h: String,
}

#[derive(Serialize)]
struct Endpoint {
    t: f64,
    theta: String,
    kappa: String,
    hankel_theta: String,
    hankel_kappa: String,
    theta_relative_difference: f64,
    kappa_relative_difference: f64,
}

#[derive(Serialize)]
struct PvCheck {
    panel: Vec<f64>,
    alphas: [f64; 4],
    residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct Integrator {
    method: dll_core::painleve::Method,
    tol: f64,
    steps: usize,
    rejected: usize,
    max_error_ratio: f64,
}

#[derive(Serialize)]
struct EvolveSummary {
    endpoint: Option<Endpoint>,
    painleve_residual: Option<PvCheck>,
    hamiltonian_flow_residual: f64,
}

#[derive(Serialize)]
struct EvolveDoc {
    schema_version: u32,
    command: &'static str,
    parameters: WeightParams,
    n: usize,
    t0: f64,
    t1: f64,
    convention: Convention,
    precision: Precision,
    init: InitKind,
    integrator: Integrator,
    summary: EvolveSummary,
    trajectory: Vec<Row>,
}

pub fn evolve_cmd(cfg: &RunConfig) -> Result<(), Failure> {
    let n = cfg.require(cfg.n, "n")?;
    let t1 = cfg.require(cfg.t1, "t1")?;
    let t0 = cfg.t0.unwrap_or(1e-3);
    if !(t0 > 0.0 && t1 >= t0) {
        return Err(Failure::validation(format!("evolve needs 0 < t0 <= t1, got t0 = {t0}, t1 = {t1}")));
    }
    let w = cfg.weight(t0)?;
    let ctx = PrecisionCtx::new(cfg.prec_bits)?;
    let _g = ctx.enter();
    let mut ctrl = StepControl::default();
    if let Some(tol) = cfg.tol {
        if !(tol > 0.0) {
            return Err(Failure::validation(format!("tolerance must be positive, got {tol}")));
        }
        ctrl = ctrl.with_tol(tol);
    }
    let tr = if t0 <= 1e-2 {
        evolve::<Mp>(n, t0, t1, &w, &ctrl)?
    } else {
        let pipe = hankel_pipeline(&w, n, &ctx)?;
        let ax = {
            let _g = pipe.ctx.enter();
            theta_kappa_from_recurrence(&pipe.table, n, &pipe.ctx)?
        };
        let fp = FlowParams {
            n,
            alpha: w.alpha,
            mu: w.mu,
        };
        evolve_from(fp, t0, t1, ax.theta, ax.kappa, &ctrl, InitKind::Determinants)?
    };
    let digits = cfg.digits();
    let conv = cfg.convention;
    let mut rows = Vec::with_capacity(tr.nodes.len());
    let mut flow_residual = 0.0f64;
    for nd in &tr.nodes {
        let wt = w.with_t(nd.t.to_f64_lossy());
        let hp = to_hamiltonian(&nd.theta, &nd.kappa, n, &wt, conv)?;
        flow_residual = flow_residual.max(hamiltonian_flow_residual(&nd.theta, &nd.kappa, n, &wt, conv)?);
        rows.push(Row {
            t: decimal(&nd.t, digits),
            theta: decimal(&nd.theta, digits),
            kappa: decimal(&nd.kappa, digits),
            q: decimal(&hp.q, digits),
            p: decimal(&hp.p, digits),
            h: decimal(&hp.h, digits),
        });
    }
    let summary = EvolveSummary {
        endpoint: endpoint(&tr, &w, t1, &ctx, digits)?,
        painleve_residual: painleve_check(&tr, &w, conv),
        hamiltonian_flow_residual: flow_residual,
    };
    let doc = EvolveDoc {
        schema_version: SCHEMA_VERSION,
        command: "evolve",
        parameters: w,
        n,
        t0,
        t1,
        convention: conv,
        precision: precision(cfg, &ctx),
        init: tr.init,
        integrator: Integrator {
            method: ctrl.method,
            tol: ctrl.tol,
            steps: tr.stats.steps,
            rejected: tr.stats.rejected,
            max_error_ratio: tr.stats.max_error,
        },
        summary,
        trajectory: rows,
    };
    let text = match cfg.format {
        Format::Json => to_json(&doc)?,
        Format::Csv => evolve_csv(&doc)?,
    };
    emit(&text, cfg.out.as_deref())
}

/// Summary as `#` comment lines (one compact JSON object), then the trajectory table.
fn evolve_csv(doc: &EvolveDoc) -> Result<String, Failure> {
    let meta = serde_json::json!({
        "schema_version": doc.schema_version,
        "command": doc.command,
        "parameters": doc.parameters,
        "n": doc.n,
        "t0": doc.t0,
        "t1": doc.t1,
        "convention": doc.convention,
        "precision": doc.precision,
        "init": doc.init,
        "integrator": doc.integrator,
        "summary": doc.summary,
    });
    let mut s = format!("# {}\n", serde_json::to_string(&meta).map_err(Failure::io)?);
    s += &csv_line(&["t", "theta", "kappa", "q", "p", "H"].map(String::from));
    for r in &doc.trajectory {
        s += &csv_line(&[
            r.t.clone(),
            r.theta.clone(),
            r.kappa.clone(),
            r.q.clone(),
            r.p.clone(),
            r.h.clone(),
        ]);
    }
    Ok(s)
}

/// Comparison with the determinant route at `t1`; needs integer `mu` for the closed-form moments.
fn endpoint(
    tr: &Trajectory<Mp>,
    w: &WeightParams,
    t1: f64,
    ctx: &PrecisionCtx,
    digits: usize,
) -> Result<Option<Endpoint>, Failure> {
    if w.mu_int().is_none() {
        return Ok(None);
    }
    let e = tr.endpoint();
    let pipe = hankel_pipeline(&w.with_t(t1), tr.flow.n, ctx)?;
    let _g = pipe.ctx.enter();
    let ax = theta_kappa_from_recurrence(&pipe.table, tr.flow.n, &pipe.ctx)?;
    Ok(Some(Endpoint {
        t: t1,
        theta: decimal(&e.theta, digits),
        kappa: decimal(&e.kappa, digits),
        hankel_theta: decimal(&ax.theta, digits),
        hankel_kappa: decimal(&ax.kappa, digits),
        theta_relative_difference: rel_diff(&e.theta, &ax.theta),
        kappa_relative_difference: rel_diff(&e.kappa, &ax.kappa),
    }))
}

/// Painleve V residual of `q` on five interior points, derivatives by differences of
/// re-integrated states.
fn painleve_check(tr: &Trajectory<Mp>, w: &WeightParams, conv: Convention) -> Option<PvCheck> {
    let t0 = tr.nodes[0].t.to_f64_lossy();
    let t1 = tr.endpoint().t.to_f64_lossy();
    let span = t1 - t0;
    if span <= 0.0 {
        return None;
    }
    let panel: Vec<f64> = [0.25, 0.4, 0.55, 0.7, 0.85].iter().map(|f| t0 + f * span).collect();
    let h = 1e-3 * span;
    let n = tr.flow.n;
    let pv = PvParams::<Mp>::for_weight(n, w, conv);
    let mut q = |t: f64| -> dll_core::Result<Mp> {
        let (theta, kappa) = tr.state_at(t)?;
        Ok(to_hamiltonian(&theta, &kappa, n, &w.with_t(t), conv)?.q)
    };
    let (residual, error) = match pv_residual(&mut q, &pv.alphas, &panel, h) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Some(PvCheck {
        panel,
        alphas: pv.alphas.clone().map(|a| a.to_f64_lossy()),
        residual,
        error,
    })
}

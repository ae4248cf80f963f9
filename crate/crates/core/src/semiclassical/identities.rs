//! The identity suite linking the recurrence data, the isomonodromy polynomials and the
//! ladder coefficients. Every identity is written as a vanishing sum of terms; the residual is
//! `|sum| / max |term|`, maximized over the evaluation points.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::hankel::RecurrenceTable;
use crate::precision::PrecisionCtx;
use crate::report::{relative_residual, IdentityRecord, Report};
use crate::scalar::Real;
use crate::semiclassical::aux::{ladder_integral_values, theta_kappa_from_recurrence, AuxPair};
use crate::semiclassical::lax::{build_lax, omega_poly, theta_poly, v_poly, w_poly};

/// Evaluation points in `x`, away from the zeros `0` and `t` of `W`.
pub fn x_panel(t: f64) -> [f64; 5] {
    [-2.0, -1.0, -0.5, 0.5 * t, 2.0 * t]
}

struct Suite<'a, T> {
    table: &'a RecurrenceTable<T>,
    aux: Vec<AuxPair<T>>,
    report: Report,
    exact_tol: f64,
    quad_tol: f64,
}

/// One identity evaluated over a set of points; `forms` holds the candidate forms of a
/// sign-ambiguous identity, the first being the one expected to hold.
struct Check<'s> {
    id: &'s str,
    tag: &'s str,
    n: usize,
    points: Vec<f64>,
    quadrature: bool,
}

impl<'a, T: Real> Suite<'a, T> {
    fn t(&self) -> T {
        T::real(self.table.params.t)
    }

    fn theta(&self, k: usize) -> &T {
        &self.aux[k].theta
    }

    fn kappa(&self, k: usize) -> &T {
        &self.aux[k].kappa
    }

    fn big_r(&self, k: usize) -> &T {
        &self.aux[k].big_r
    }

    fn small_r(&self, k: usize) -> &T {
        &self.aux[k].small_r
    }

    fn a2(&self, k: usize) -> &T {
        &self.table.a2[k]
    }

    fn b(&self, k: usize) -> &T {
        &self.table.b[k]
    }

    fn int(v: i64) -> T {
        T::int(v)
    }

    fn alpha(&self) -> T {
        T::int(self.table.params.alpha as i64)
    }

    fn mu(&self) -> T {
        T::real(self.table.params.mu)
    }

    /// `Theta_k(x)`, `Omega_k(x)`.
    fn th(&self, k: usize, x: &T) -> T {
        theta_poly(self.theta(k)).eval(x)
    }

    fn om(&self, k: usize, x: &T) -> T {
        omega_poly(k, &self.table.params, self.kappa(k)).eval(x)
    }

    fn wv(&self, x: &T) -> (T, T) {
        (w_poly(&self.table.params).eval(x), v_poly(&self.table.params).eval(x))
    }

    /// Ladder coefficients in partial-fraction form.
    fn big_a(&self, k: usize, x: &T) -> T {
        let r = self.big_r(k).clone();
        r.clone() / (x.clone() - self.t()) + (T::one() - r) / x.clone()
    }

    fn big_b(&self, k: usize, x: &T) -> T {
        let r = self.small_r(k).clone();
        r.clone() / (x.clone() - self.t()) - (Self::int(k as i64) + r) / x.clone()
    }

    fn log_derivative(&self, x: &T) -> T {
        self.table.params.log_derivative(x)
    }

    /// Records the first passing form, or the first form if none passes.
    fn record(&mut self, check: Check<'_>, forms: Vec<(Option<&str>, Vec<Vec<T>>)>) {
        let threshold = if check.quadrature { self.quad_tol } else { self.exact_tol };
        let evaluated: Vec<(Option<&str>, f64)> = forms
            .iter()
            .map(|(label, rows)| {
                let r = rows.iter().map(|terms| relative_residual(terms)).fold(0.0, f64::max);
                (*label, r)
            })
            .collect();
        let chosen = evaluated.iter().position(|(_, r)| *r <= threshold).unwrap_or(0);
        let (variant, residual) = evaluated[chosen];
        let note = (evaluated.len() > 1).then(|| {
            evaluated
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != chosen)
                .map(|(_, (l, r))| format!("{} form residual {r:.3e}", l.unwrap_or("other")))
                .collect::<Vec<_>>()
                .join("; ")
        });
        self.report.push(IdentityRecord {
            id: check.id.to_string(),
            tag: check.tag.to_string(),
            n: check.n,
            t: self.table.params.t,
            points: check.points,
            residual,
            threshold,
            passed: residual <= threshold,
            variant: variant.map(str::to_string),
            note,
        });
    }
}

/// Runs every identity for `n` in `n_range` (with `n >= 1`) at the table's `t > 0`.
/// Failures are report entries; errors are reserved for degenerate input.
pub fn verify_identities<T: Real>(
    table: &RecurrenceTable<T>,
    n_range: RangeInclusive<usize>,
    ctx: &PrecisionCtx,
) -> Result<Report> {
    let p = table.params;
    if p.t <= 0.0 {
        return Err(Error::InvalidParameters("the identity suite needs t > 0".into()));
    }
    p.require_alpha_at_least_one()?;
    if p.mu <= 0.0 {
        return Err(Error::UnsupportedParameters(
            "mu > 0 is required for the residue integrals at x = 0".into(),
        ));
    }
    let (lo, hi) = (*n_range.start(), *n_range.end());
    if lo == 0 || hi > table.n_max {
        return Err(Error::InvalidParameters(format!(
            "identity range must lie in 1..={}, got {lo}..={hi}",
            table.n_max
        )));
    }
    let aux = (0..=hi + 1)
        .map(|k| theta_kappa_from_recurrence(table, k, ctx))
        .collect::<Result<Vec<_>>>()?;
    let quad_tol = (1e3 * ctx.tol_for::<T>()).max(ctx.tol);
    let mut s = Suite {
        table,
        aux,
        report: Report::default(),
        exact_tol: ctx.tol,
        quad_tol,
    };
    omega_zero(&mut s);
    for n in lo..=hi {
        scalar_identities(&mut s, n);
        polynomial_identities(&mut s, n);
        ladder_identities(&mut s, n);
        ode_identities(&mut s, n, ctx)?;
        if p.alpha >= 1 {
            ladder_integral_identities(&mut s, n, ctx)?;
        }
        associated_function_identities(&mut s, n, ctx)?;
    }
    Ok(s.report)
}

fn pts(t: f64) -> Vec<f64> {
    x_panel(t).to_vec()
}

fn neg_pts(t: f64) -> Vec<f64> {
    x_panel(t).into_iter().filter(|x| *x < 0.0).collect()
}

fn exact<'s>(id: &'s str, tag: &'s str, n: usize, points: Vec<f64>) -> Check<'s> {
    Check {
        id,
        tag,
        n,
        points,
        quadrature: false,
    }
}

fn quad<'s>(id: &'s str, tag: &'s str, n: usize, points: Vec<f64>) -> Check<'s> {
    Check {
        id,
        tag,
        n,
        points,
        quadrature: true,
    }
}

fn omega_zero<T: Real>(s: &mut Suite<'_, T>) {
    let p = s.table.params;
    let om = omega_poly(0, &p, s.kappa(0));
    let v = v_poly::<T>(&p);
    let rows = (0..3).map(|i| vec![om.coeff(i), -v.coeff(i)]).collect();
    s.record(exact("omega-zero", "Omega_0 = V", 0, vec![]), vec![(None, rows)]);
}

fn scalar_identities<T: Real>(s: &mut Suite<'_, T>, n: usize) {
    let p = s.table.params;
    let t = s.t();
    let ni = n as i64;
    let (th, th1, k, k1) = (s.theta(n).clone(), s.theta(n - 1).clone(), s.kappa(n).clone(), s.kappa(n + 1).clone());
    let (al, mu) = (s.alpha(), s.mu());
    let mu_t2 = (mu.clone() * t.clone()).square() / T::int(4);
    let nh = T::int(ni) + mu.clone() / T::int(2);
    let lower = k.clone() - nh.clone() * t.clone();
    let upper = k.clone() - (nh.clone() + al.clone()) * t.clone();
    let a2 = s.a2(n).clone();

    let c = th.clone() + t.clone() + T::int(2 * ni + 1) + al.clone() + mu.clone();
    s.record(
        exact("kappa-theta-recurrence", "kappa_{n+1} + kappa_n = -theta_n (theta_n + t + 2n + alpha + 1 + mu)", n, vec![]),
        vec![(None, vec![vec![k1, k.clone(), th.clone() * c]])],
    );
    s.record(
        exact("kappa-theta-ratio", "theta_n theta_{n-1} / ((theta_n + t)(theta_{n-1} + t)) = (kappa_n^2 - mu^2 t^2/4) / ((kappa_n - (n + alpha + mu/2) t)(kappa_n - (n + mu/2) t))", n, vec![]),
        vec![(None, vec![vec![
            th.clone() * th1.clone() * upper.clone() * lower.clone(),
            -((th.clone() + t.clone()) * (th1.clone() + t.clone()) * (k.square() - mu_t2.clone())),
        ]])],
    );
    s.record(
        exact("theta-prev-at-zero", "a_n^2 theta_n theta_{n-1} = kappa_n^2 - mu^2 t^2/4", n, vec![]),
        vec![(None, vec![vec![a2.clone() * th.clone() * th1.clone(), -k.square(), mu_t2]])],
    );
    s.record(
        exact("theta-prev-at-t", "a_n^2 (t + theta_n)(t + theta_{n-1}) = (kappa_n - (n + alpha + mu/2) t)(kappa_n - (n + mu/2) t)", n, vec![]),
        vec![(None, vec![vec![
            a2.clone() * (t.clone() + th.clone()) * (t.clone() + th1),
            -(upper * lower),
        ]])],
    );

    let (r, r1, rp) = (s.big_r(n).clone(), s.big_r(n - 1).clone(), s.small_r(n).clone());
    let rn1 = s.small_r(n + 1).clone();
    let bracket = mu.clone() + al.clone() + T::int(2 * ni + 1) + t.clone() * r.clone() - t.clone();
    s.record(
        exact("ladder-r-recurrence", "r_{n+1} + r_n - alpha = R_n (t - b_n)", n, vec![]),
        vec![
            (
                Some("R_n (t - b_n) = -R_n (mu + alpha + 2n + 1 + t R_n - t)"),
                vec![vec![rn1.clone(), rp.clone(), -al.clone(), r.clone() * bracket.clone()]],
            ),
            (
                Some("+R_n (mu + alpha + 2n + 1 + t R_n - t)"),
                vec![vec![rn1.clone(), rp.clone(), -al.clone(), -(r.clone() * bracket)]],
            ),
        ],
    );
    s.record(
        exact("ladder-r-residue", "r_{n+1} + r_n - alpha = R_n (t - b_n) with b_n from the table", n, vec![]),
        vec![(None, vec![vec![rn1, rp.clone(), -al.clone(), -(r.clone() * (t.clone() - s.b(n).clone()))]])],
    );
    let one = T::one();
    let nn = T::int(ni);
    s.record(
        exact("ladder-ratio", "R_n R_{n-1} / ((R_n - 1)(R_{n-1} - 1)) = r_n (r_n - alpha) / ((r_n + n)(r_n + n + mu))", n, vec![]),
        vec![(None, vec![vec![
            r.clone() * r1.clone() * (rp.clone() + nn.clone()) * (rp.clone() + nn.clone() + mu.clone()),
            -(rp.clone() * (rp.clone() - al.clone()) * (r.clone() - one.clone()) * (r1.clone() - one.clone())),
        ]])],
    );
    s.record(
        exact("b-from-ladder", "b_n = 2n + 1 + alpha + mu + t R_n", n, vec![]),
        vec![(None, vec![vec![
            s.b(n).clone(),
            -(T::int(2 * ni + 1) + al.clone() + mu.clone()),
            -(t.clone() * r.clone()),
        ]])],
    );
    s.record(
        exact("r-from-ladder-at-t", "r_n (r_n - alpha) = a_n^2 R_{n-1} R_n", n, vec![]),
        vec![(None, vec![vec![
            rp.clone() * (rp.clone() - al.clone()),
            -(a2.clone() * r1.clone() * r.clone()),
        ]])],
    );
    s.record(
        exact("r-from-ladder-at-zero", "(n + r_n)(n + mu + r_n) = a_n^2 (R_n - 1)(R_{n-1} - 1)", n, vec![]),
        vec![(None, vec![vec![
            (nn.clone() + rp.clone()) * (nn.clone() + mu.clone() + rp.clone()),
            -(a2.clone() * (r.clone() - one.clone()) * (r1 - one.clone())),
        ]])],
    );
    s.record(
        exact("a-from-ladder", "a_n^2 = (r_n - alpha) r_n / R_n - (n + r_n)(n + mu + r_n) / (R_n - 1)", n, vec![]),
        vec![(None, vec![vec![
            a2,
            -((rp.clone() - al) * rp.clone() / r.clone()),
            (nn.clone() + rp.clone()) * (nn + mu + rp) / (r - one),
        ]])],
    );
    let _ = p;
}

fn polynomial_identities<T: Real>(s: &mut Suite<'_, T>, n: usize) {
    let t = s.table.params.t;
    let xs: Vec<T> = pts(t).into_iter().map(T::real).collect();
    let rows = |f: &dyn Fn(&T) -> Vec<T>| xs.iter().map(f).collect::<Vec<_>>();
    let bn = s.b(n).clone();
    let bn1 = s.b(n - 1).clone();
    let (a2, a2n1) = (s.a2(n).clone(), s.a2(n + 1).clone());

    let f1 = rows(&|x| {
        let (w, _) = s.wv(x);
        vec![
            w,
            a2n1.clone() * s.th(n + 1, x),
            -(a2.clone() * s.th(n - 1, x)),
            -((x.clone() - bn.clone()) * s.om(n + 1, x)),
            (x.clone() - bn.clone()) * s.om(n, x),
        ]
    });
    let f2 = |prev: bool| {
        rows(&|x| {
            vec![
                (x.clone() - bn1.clone()) * s.th(n - 1, x),
                -((x.clone() - bn.clone()) * s.th(n, x)),
                -s.om(if prev { n - 1 } else { n }, x),
                s.om(n + 1, x),
            ]
        })
    };
    let f3 = rows(&|x| vec![(x.clone() - bn.clone()) * s.th(n, x), -s.om(n + 1, x), -s.om(n, x)]);
    let prod = rows(&|x| {
        let (w, _) = s.wv(x);
        let th = s.th(n, x);
        vec![
            w * th.clone(),
            a2n1.clone() * s.th(n + 1, x) * th.clone(),
            -(a2.clone() * th * s.th(n - 1, x)),
            -s.om(n + 1, x).square(),
            s.om(n, x).square(),
        ]
    });
    let sum = rows(&|x| {
        let (w, v) = s.wv(x);
        let mut terms = vec![s.om(n, x).square(), -(a2.clone() * s.th(n, x) * s.th(n - 1, x)), -v.square()];
        terms.extend((0..n).map(|i| -(w.clone() * s.th(i, x))));
        terms
    });
    let f2_forms = vec![
        (Some("Omega_{n-1} - Omega_{n+1}"), f2(true)),
        (Some("Omega_n - Omega_{n+1}"), f2(false)),
    ];
    s.record(exact("freud-1", "W + a_{n+1}^2 Theta_{n+1} - a_n^2 Theta_{n-1} = (x - b_n)(Omega_{n+1} - Omega_n)", n, pts(t)), vec![(None, f1)]);
    s.record(
        exact("freud-2", "(x - b_{n-1}) Theta_{n-1} - (x - b_n) Theta_n = Omega_{n-1} - Omega_{n+1}", n, pts(t)),
        f2_forms,
    );
    s.record(exact("freud-3", "(x - b_n) Theta_n = Omega_{n+1} + Omega_n", n, pts(t)), vec![(None, f3)]);
    s.record(exact("freud-product", "W Theta_n + a_{n+1}^2 Theta_{n+1} Theta_n - a_n^2 Theta_n Theta_{n-1} = Omega_{n+1}^2 - Omega_n^2", n, pts(t)), vec![(None, prod)]);
    s.record(exact("theta-sum", "Omega_n^2 - a_n^2 Theta_n Theta_{n-1} = V^2 + W sum_{i<n} Theta_i", n, pts(t)), vec![(None, sum)]);

    let bpt = vec![bn.to_f64_lossy()];
    let at_b = vec![vec![s.om(n + 1, &bn), s.om(n, &bn)]];
    s.record(exact("freud-3-at-b", "Omega_{n+1}(b_n) + Omega_n(b_n) = 0", n, bpt), vec![(None, at_b)]);
}

fn ladder_identities<T: Real>(s: &mut Suite<'_, T>, n: usize) {
    let t = s.table.params.t;
    let xs: Vec<T> = pts(t).into_iter().map(T::real).collect();
    let bn = s.b(n).clone();
    let (a2, a2n1) = (s.a2(n).clone(), s.a2(n + 1).clone());
    let form = |sign: i64, f: &dyn Fn(&T, T) -> Vec<T>| -> Vec<Vec<T>> {
        xs.iter().map(|x| f(x, T::int(sign))).collect()
    };
    let l1 = |x: &T, sg: T| {
        let u = s.log_derivative(x);
        vec![s.big_b(n + 1, x), s.big_b(n, x), -((x.clone() - bn.clone()) * s.big_a(n, x)), sg * u]
    };
    s.record(
        exact("ladder-1", "B_{n+1} + B_n = (x - b_n) A_n + 2V/W", n, pts(t)),
        vec![(Some("+2V/W"), form(-1, &l1)), (Some("-2V/W"), form(1, &l1))],
    );
    let l2 = |x: &T, sg: T| {
        vec![
            (s.big_b(n + 1, x) - s.big_b(n, x)) * (x.clone() - bn.clone()),
            -(a2n1.clone() * s.big_a(n + 1, x)),
            a2.clone() * s.big_a(n - 1, x),
            sg,
        ]
    };
    s.record(
        exact("ladder-2", "(B_{n+1} - B_n)(x - b_n) = a_{n+1}^2 A_{n+1} - a_n^2 A_{n-1} - 1", n, pts(t)),
        vec![(Some("-1"), form(1, &l2)), (Some("+1"), form(-1, &l2))],
    );
    let lp = |x: &T, sg: T| {
        let u = s.log_derivative(x);
        let (b1, b0, an) = (s.big_b(n + 1, x), s.big_b(n, x), s.big_a(n, x));
        vec![
            b1.square(),
            -b0.square(),
            -(u * (b1 - b0)),
            -(a2n1.clone() * s.big_a(n + 1, x) * an.clone()),
            a2.clone() * s.big_a(n - 1, x) * an.clone(),
            sg * an,
        ]
    };
    s.record(
        exact("ladder-product", "B_{n+1}^2 - B_n^2 - (2V/W)(B_{n+1} - B_n) = a_{n+1}^2 A_{n+1} A_n - a_n^2 A_{n-1} A_n - A_n", n, pts(t)),
        vec![(Some("-A_n"), form(1, &lp)), (Some("+A_n"), form(-1, &lp))],
    );
    let ls = |x: &T, _sg: T| {
        let u = s.log_derivative(x);
        let b0 = s.big_b(n, x);
        let mut terms = vec![b0.square(), -(u * b0), -(a2.clone() * s.big_a(n, x) * s.big_a(n - 1, x))];
        terms.extend((0..n).map(|i| s.big_a(i, x)));
        terms
    };
    s.record(
        exact("ladder-sum", "B_n^2 - (2V/W) B_n - a_n^2 A_n A_{n-1} = -sum_{i<n} A_i", n, pts(t)),
        vec![(None, form(1, &ls))],
    );
}

fn ode_identities<T: Real>(s: &mut Suite<'_, T>, n: usize, ctx: &PrecisionCtx) -> Result<()> {
    let p = s.table.params;
    let t = p.t;
    let a_n = s.table.a(n);
    let lax = build_lax(&p, n, &a_n, s.theta(n), s.kappa(n), ctx.tol)?;
    let xs: Vec<T> = pts(t).into_iter().map(T::real).collect();
    let mut ladder = Vec::new();
    let mut magnus = Vec::new();
    let mut linear = Vec::new();
    let mut forms = Vec::new();
    for x in &xs {
        let [pn, pm, dn, dm] = s.table.eval_with_derivative(n, x);
        let (w, v) = s.wv(x);
        ladder.push(vec![
            dn.clone(),
            s.big_b(n, x) * pn.clone(),
            -(a_n.clone() * s.big_a(n, x) * pm.clone()),
        ]);
        magnus.push(vec![
            w * dn.clone(),
            -((s.om(n, x) - v) * pn.clone()),
            a_n.clone() * s.th(n, x) * pm.clone(),
        ]);
        let a = lax.a_matrix(x).0;
        linear.push(vec![dn.clone(), -(a[0][0].clone() * pn.clone()), -(a[0][1].clone() * pm.clone())]);
        linear.push(vec![dm, -(a[1][0].clone() * pn), -(a[1][1].clone() * pm)]);
        let m = lax.magnus_matrix(x).0;
        for i in 0..2 {
            for j in 0..2 {
                forms.push(vec![m[i][j].clone(), -a[i][j].clone()]);
            }
        }
    }
    s.record(exact("ladder-relation", "p_n' = -B_n p_n + a_n A_n p_{n-1}", n, pts(t)), vec![(None, ladder)]);
    s.record(exact("magnus-ode", "W p_n' = (Omega_n - V) p_n - a_n Theta_n p_{n-1}", n, pts(t)), vec![(None, magnus)]);
    s.record(
        exact("lax-x", "d/dx (p_n, p_{n-1}) = (A_inf + A_0/x + A_t/(x - t)) (p_n, p_{n-1})", n, pts(t)),
        vec![(None, linear)],
    );
    s.record(
        exact("lax-partial-fractions", "(1/W)[[Omega_n - V, -a_n Theta_n], [a_n Theta_{n-1}, -Omega_n - V]] = A_inf + A_0/x + A_t/(x - t)", n, pts(t)),
        vec![(None, forms)],
    );
    let traces = vec![
        vec![lax.a0.trace(), T::real(p.mu)],
        vec![lax.at.trace(), T::int(p.alpha as i64)],
    ];
    s.record(exact("lax-traces", "tr A_0 = -mu, tr A_t = -alpha", n, vec![]), vec![(None, traces)]);
    Ok(())
}

fn ladder_integral_identities<T: Real>(s: &mut Suite<'_, T>, n: usize, ctx: &PrecisionCtx) -> Result<()> {
    let p = s.table.params;
    let li = ladder_integral_values(s.table, n, ctx)?;
    let mu = s.mu();
    let nn = T::int(n as i64);
    s.record(
        quad("ladder-integral-R", "alpha int w p_n^2 / (y - t) = (theta_n + t)/t", n, vec![]),
        vec![(None, vec![vec![li.big_r.clone(), -s.big_r(n).clone()]])],
    );
    s.record(
        quad("ladder-integral-r", "alpha a_n int w p_n p_{n-1} / (y - t) = kappa_n/t - (n + mu/2)", n, vec![]),
        vec![(None, vec![vec![li.small_r.clone(), -s.small_r(n).clone()]])],
    );
    if p.mu > 0.0 {
        s.record(
            quad("ladder-integral-zero-diag", "mu int w p_n^2 / y = 1 - R_n", n, vec![]),
            vec![(None, vec![vec![mu.clone() * li.inv_x_diag.clone(), s.big_r(n).clone(), -T::one()]])],
        );
        s.record(
            quad("ladder-integral-zero-off", "mu a_n int w p_n p_{n-1} / y = -(n + r_n)", n, vec![]),
            vec![(None, vec![vec![mu.clone() * li.inv_x_off.clone(), nn, s.small_r(n).clone()]])],
        );
    }
    // The defining integrals evaluate to the negatives of the partial-fraction forms.
    let t = p.t;
    let xs: Vec<T> = pts(t).into_iter().map(T::real).collect();
    let tt = s.t();
    let mut a_rows = Vec::new();
    let mut b_rows = Vec::new();
    for x in &xs {
        let xt = x.clone() - tt.clone();
        a_rows.push(vec![
            -(li.big_r.clone() / xt.clone()),
            -(mu.clone() * li.inv_x_diag.clone() / x.clone()),
            s.big_a(n, x),
        ]);
        b_rows.push(vec![
            -(li.small_r.clone() / xt),
            -(mu.clone() * li.inv_x_off.clone() / x.clone()),
            s.big_b(n, x),
        ]);
    }
    let variant = Some("integral definition equals minus the partial-fraction form");
    s.record(
        quad("ladder-coefficient-A", "A_n = R_n/(x - t) + (1 - R_n)/x", n, pts(t)),
        vec![(variant, a_rows)],
    );
    s.record(
        quad("ladder-coefficient-B", "B_n = r_n/(x - t) - (n + r_n)/x", n, pts(t)),
        vec![(variant, b_rows)],
    );
    Ok(())
}

fn associated_function_identities<T: Real>(s: &mut Suite<'_, T>, n: usize, ctx: &PrecisionCtx) -> Result<()> {
    let p = s.table.params;
    let t = p.t;
    let a_n = s.table.a(n);
    let mut cas = Vec::new();
    let mut trace = Vec::new();
    let mut eps_ode = Vec::new();
    let mut theta_def = Vec::new();
    let mut omega_def = Vec::new();
    for xf in neg_pts(t) {
        let x = T::real(xf);
        let [pn, pm, dn, dm] = s.table.eval_with_derivative(n, &x);
        let en = s.table.epsilon(n, &x, ctx)?;
        let em = s.table.epsilon(n - 1, &x, ctx)?;
        let den = s.table.epsilon_derivative(n, &x, 1, ctx)?;
        let dem = s.table.epsilon_derivative(n - 1, &x, 1, ctx)?;
        let (w, v) = s.wv(&x);
        let weight = p.eval(&x);
        let u = s.log_derivative(&x);
        cas.push(vec![pn.clone() * em.clone(), -(pm.clone() * en.clone()), -(T::one() / a_n.clone())]);
        trace.push(vec![
            dn.clone() * em.clone(),
            pn.clone() * dem,
            -(dm * en.clone()),
            -(pm.clone() * den.clone()),
        ]);
        eps_ode.push(vec![
            w.clone() * (den.clone() - u * en.clone()) / weight.clone(),
            -((s.om(n, &x) - v.clone()) * en.clone() / weight.clone()),
            a_n.clone() * s.th(n, &x) * em.clone() / weight,
        ]);
        theta_def.push(vec![
            w.clone() * en.clone() * dn.clone(),
            -(w.clone() * pn.clone() * den.clone()),
            T::int(2) * v.clone() * en.clone() * pn.clone(),
            -s.th(n, &x),
        ]);
        omega_def.push(vec![
            a_n.clone() * w.clone() * em.clone() * dn,
            -(a_n.clone() * w * pm.clone() * den),
            a_n.clone() * v.clone() * em * pn,
            a_n.clone() * v * en * pm,
            -s.om(n, &x),
        ]);
    }
    let np = neg_pts(t);
    s.record(quad("casoratian", "p_n eps_{n-1} - p_{n-1} eps_n = 1/a_n", n, np.clone()), vec![(None, cas)]);
    s.record(
        quad("det-y-trace", "(det Y_n)' = tr(A_n) det Y_n, i.e. (p_n eps_{n-1} - p_{n-1} eps_n)' = 0", n, np.clone()),
        vec![(None, trace)],
    );
    s.record(
        quad("associated-magnus-ode", "W (eps_n/w)' = (Omega_n - V)(eps_n/w) - a_n Theta_n (eps_{n-1}/w)", n, np.clone()),
        vec![(None, eps_ode)],
    );
    s.record(
        quad("theta-definition", "Theta_n = W (eps_n p_n' - p_n eps_n') + 2V eps_n p_n", n, np.clone()),
        vec![(None, theta_def)],
    );
    s.record(
        quad("omega-definition", "Omega_n = a_n W (eps_{n-1} p_n' - p_{n-1} eps_n') + a_n V (eps_{n-1} p_n + eps_n p_{n-1})", n, np),
        vec![(None, omega_def)],
    );
    Ok(())
}

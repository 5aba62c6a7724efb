//! `check`: a deterministic sample of every module's invariants, one line per
//! suite.

use std::fmt::Write as _;

use lwreg_core::association::testfn::{LineFn, LineTest};
use lwreg_core::association::{charge_density_pairings, weak_limit, Verdict};
use lwreg_core::distalg::{numeric_pairing, pair_expr, solve_euler_delta, upsilon, Algebra, Atom, DistExpr};
use lwreg_core::fields::{default_fd_step, relative_deviation};
use lwreg_core::minkowski::{minkowski_inner, validate_worldline, CatalogWorldline};
use lwreg_core::regularization::family_check;
use lwreg_core::retarded::{divergence_k_check, dtau_xi_check, grad_tau_check, kinematics};
use lwreg_core::sampling::{box_cloud, null_ray_cloud};
use lwreg_core::selfenergy::{divergence_bound_check, energy_inequality, self_energy_report};

use crate::commands::{model, suite_config, Outcome};
use crate::config::RunConfig;
use crate::CliError;

type SuiteFn = fn(&RunConfig, &mut Suite);

#[derive(Default)]
struct Suite {
    checks: usize,
    failures: Vec<String>,
}

impl Suite {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn worldlines(cfg: &RunConfig) -> Vec<CatalogWorldline> {
    let mut out = vec![
        CatalogWorldline::Rest,
        CatalogWorldline::boost(0.6).expect("subluminal"),
        CatalogWorldline::hyperbolic(1.0).expect("positive"),
        CatalogWorldline::circular(1.0, 0.5).expect("subluminal"),
    ];
    if !out.contains(&cfg.worldline) {
        out.push(cfg.worldline);
    }
    out
}

fn minkowski(cfg: &RunConfig, s: &mut Suite) {
    let taus: Vec<f64> = (0..=60).map(|i| -3.0 + 0.1 * i as f64).collect();
    for w in worldlines(cfg) {
        let r = validate_worldline(&w, &taus);
        s.expect(r.passed(), || format!("{w}: {:?}", r.violations));
    }
    let pts = box_cloud(20, (-5.0, 5.0), 5.0, 1);
    for (a, b) in pts.iter().zip(pts.iter().skip(1)) {
        s.expect(minkowski_inner(a, b) == minkowski_inner(b, a), || {
            "inner product not symmetric".into()
        });
    }
}

fn retarded(cfg: &RunConfig, s: &mut Suite) {
    let h = 1e-4;
    for w in worldlines(cfg) {
        for o in null_ray_cloud(&w, 50, (-2.0, 2.0), (0.2, 4.0), 2) {
            let x = o.x;
            let k = match kinematics(&w, &x, cfg.retarded_tol) {
                Ok(k) => k,
                Err(e) => {
                    s.expect(false, || format!("{w} at {x}: {e}"));
                    continue;
                }
            };
            let scale = x.euclidean_norm().max(1.0).powi(2);
            s.expect(k.residual.abs() <= 1e-9 * scale, || {
                format!("{w} at {x}: residual {:e}", k.residual)
            });
            s.expect(k.xi > 0.0, || format!("{w} at {x}: xi {}", k.xi));
            s.expect((k.k.inner(&k.velocity) - 1.0).abs() <= 1e-9, || {
                format!("{w} at {x}: K.Zdot != 1")
            });
            s.expect(k.k.square().abs() <= 1e-9, || format!("{w} at {x}: K not null"));
            let grad = grad_tau_check(&w, &x, h).map(|d| d / k.k.max_abs());
            s.expect(matches!(grad, Ok(d) if d <= 1e-4), || {
                format!("{w} at {x}: grad tau {grad:?}")
            });
            let dt = dtau_xi_check(&w, &x, h);
            s.expect(
                matches!(dt, Ok((f, e)) if (f - e).abs() <= 1e-4 * e.abs().max(1.0)),
                || format!("{w} at {x}: d_tau xi {dt:?}"),
            );
            let div = divergence_k_check(&w, &x, h);
            s.expect(matches!(div, Ok((f, e)) if (f - e).abs() <= 1e-4 * e.abs()), || {
                format!("{w} at {x}: div K {div:?}")
            });
        }
    }
}

fn regularization(cfg: &RunConfig, s: &mut Suite) {
    let r_grid: Vec<f64> = (0..=300).map(|i| 0.01 * i as f64).collect();
    let r = family_check(&cfg.mollifier.family(), &cfg.eps_grid, &r_grid);
    s.expect(r.passed(), || format!("{:?}", r.violations));
}

fn fields(cfg: &RunConfig, s: &mut Suite) {
    let m = model(cfg);
    let eps = 0.05;
    for r in [0.01, 0.3, 1.0, 4.0] {
        let f = m.static_field([0.0, r, 0.0], eps);
        let expected = if r >= 2.0 * eps {
            m.charge / r
        } else if r <= eps {
            0.0
        } else {
            f.phi
        };
        s.expect((f.phi - expected).abs() <= 1e-12 * expected.abs().max(1.0), || {
            format!("static phi at r = {r}")
        });
    }
    if !m.family.is_smooth() {
        return;
    }
    for w in worldlines(cfg) {
        let shell = null_ray_cloud(&w, 10, (-1.0, 1.0), (eps * (1.0 + 1e-9), eps * (2.0 - 1e-9)), 3);
        let off = null_ray_cloud(&w, 10, (-1.0, 1.0), (2.02 * eps, 20.0 * eps), 4);
        for (cloud, tol) in [(shell, 1e-3), (off, 1e-4)] {
            for o in cloud {
                let dev = m.box_phi_analytic(&w, &o.x, eps).and_then(|a| {
                    let fd = m.box_phi_fd_extrapolated(&w, &o.x, eps, default_fd_step(&o.x, o.xi, eps))?;
                    Ok(relative_deviation(&a.total, &fd))
                });
                s.expect(matches!(dev, Ok(d) if d <= tol), || {
                    format!("{w} at {}: box phi {dev:?}", o.x)
                });
            }
        }
    }
}

fn association(cfg: &RunConfig, s: &mut Suite) {
    let grid = [0.1, 0.05, 0.025, 0.0125];
    let e = cfg.charge;
    let net: Vec<f64> = grid.iter().map(|x| e * (1.0 + 0.3 * x)).collect();
    let r = weak_limit("synthetic", &grid, &net, e, 1e-6 * e.abs().max(1.0));
    s.expect(matches!(&r, Ok(r) if r.passed()), || format!("synthetic net: {r:?}"));
    let flat = weak_limit("constant", &grid, &[2.0; 4], 1.0, 1e-3);
    s.expect(matches!(&flat, Ok(r) if r.verdict == Verdict::NoTrend), || {
        format!("constant net: {flat:?}")
    });
    let m = model(cfg);
    if m.family.is_smooth() && cfg.eps_grid.len() >= 4 {
        let sc = suite_config(cfg);
        let res = charge_density_pairings(&m, &sc.space_test, &cfg.eps_grid, &sc.quad).and_then(|v| {
            let target = m.charge * sc.space_test.value(&[0.0; 3]);
            weak_limit("rho", &cfg.eps_grid, &v, target, cfg.rel_tol * target.abs())
        });
        s.expect(matches!(&res, Ok(r) if r.passed()), || format!("rho: {res:?}"));
    }
}

fn selfenergy(cfg: &RunConfig, s: &mut Suite) {
    let m = model(cfg);
    let grid = if cfg.eps_grid.len() >= 3 {
        cfg.eps_grid.clone()
    } else {
        vec![0.1, 0.05, 0.025]
    };
    match self_energy_report(&m, &grid) {
        Ok(r) => {
            s.expect(r.pass.iter().all(|p| *p), || "divergence bound violated".into());
            for series in [&r.eps_u_ele, &r.eps3_u_mag] {
                let first = series[0];
                let spread = series.iter().map(|v| (v - first).abs()).fold(0.0, f64::max);
                s.expect(spread <= 1e-8 * first.abs().max(1e-300), || {
                    format!("scaling spread {spread:e}")
                });
            }
        }
        Err(e) => s.expect(false, || e.to_string()),
    }
    let b = divergence_bound_check(&m.family, &grid);
    s.expect(matches!(&b, Ok(b) if b.passed()), || "a_eps >= c0/eps violated".into());
    for &eps in grid.iter().filter(|e| **e < 0.5) {
        let (lhs, rhs) = energy_inequality(&m.family, eps);
        s.expect(lhs <= rhs, || format!("energy inequality at eps = {eps}"));
    }
}

fn distalg(cfg: &RunConfig, s: &mut Suite) {
    let alg = Algebra::new(cfg.max_order.max(1));
    match solve_euler_delta(cfg.max_order) {
        Ok(sol) => {
            s.expect(sol.particular == DistExpr::atom(Atom::FpPlus(1)), || {
                format!("particular {}", sol.particular)
            });
            s.expect(sol.homogeneous.len() == 2, || {
                format!("{} homogeneous solutions", sol.homogeneous.len())
            });
            for h in &sol.homogeneous {
                s.expect(matches!(alg.euler_apply(h), Ok(z) if z.is_zero()), || {
                    format!("{h} is not homogeneous")
                });
            }
        }
        Err(e) => s.expect(false, || e.to_string()),
    }
    let ups = upsilon(true);
    s.expect(
        matches!(&ups, Ok(f) if f.base == DistExpr::atom(Atom::ThetaPlus)),
        || format!("upsilon {ups:?}"),
    );

    let top = cfg.max_order.saturating_sub(1);
    let mut atoms = vec![Atom::ThetaPlus, Atom::Mono(0), Atom::Mono(1)];
    atoms.extend((1..=top).flat_map(|k| [Atom::FpPlus(k), Atom::FpMinus(k)]));
    atoms.extend((0..=top).map(Atom::Delta));
    for &a in &atoms {
        let u = DistExpr::atom(a);
        let Ok(tu) = alg.mul_by_t(&u) else { continue };
        let lhs = alg.differentiate(&tu);
        let rhs = alg
            .differentiate(&u)
            .and_then(|du| alg.mul_by_t(&du))
            .map(|x| x + u.clone());
        s.expect(lhs.is_ok() && lhs == rhs, || format!("Leibniz fails for {a}"));
    }
    let phis = [
        LineFn::Base(LineTest::new(vec![1.0, 0.3, -0.2], 0.1, 1.0)),
        LineFn::Base(LineTest::new(vec![0.5, -0.4, 0.1], -0.2, 0.9)),
    ];
    for phi in &phis {
        for &a in atoms.iter().filter(|a| a.order() <= 4) {
            let lhs = alg
                .differentiate(&DistExpr::atom(a))
                .map_err(|e| e.to_string())
                .and_then(|d| pair_expr(&d, phi).map_err(|e| e.to_string()));
            let rhs = numeric_pairing(a, &phi.clone().derivative()).map(|v| -v);
            let ok = matches!((&lhs, &rhs), (Ok(l), Ok(r)) if (l - r).abs() <= 1e-6 * r.abs().max(1.0));
            s.expect(ok, || format!("derivative of {a}: {lhs:?} vs {rhs:?}"));
        }
    }
    s.expect(
        alg.mul_by_t(&DistExpr::atom(Atom::Delta(0)))
            .map(|z| z.is_zero())
            .unwrap_or(false),
        || "t*delta != 0".into(),
    );
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let suites: [(&str, SuiteFn); 7] = [
        ("minkowski", minkowski),
        ("retarded", retarded),
        ("regularization", regularization),
        ("fields", fields),
        ("association", association),
        ("selfenergy", selfenergy),
        ("distalg", distalg),
    ];
    let mut text = String::new();
    let mut failures = Vec::new();
    for (name, f) in suites {
        let mut s = Suite::default();
        f(cfg, &mut s);
        if s.failures.is_empty() {
            writeln!(text, "suite {name}: green ({} checks)", s.checks).unwrap();
        } else {
            writeln!(
                text,
                "suite {name}: red ({} of {} checks failed; first: {})",
                s.failures.len(),
                s.checks,
                s.failures[0]
            )
            .unwrap();
            failures.push(name.to_string());
        }
    }
    writeln!(
        text,
        "summary: {}/{} suites green",
        suites.len() - failures.len(),
        suites.len()
    )
    .unwrap();
    Ok(Outcome { text, failures })
}

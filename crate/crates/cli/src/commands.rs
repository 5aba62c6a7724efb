//! Subcommands. Each renders its whole output to a string so the caller can
//! send it to stdout or a file in one piece.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use lwreg_core::association::testfn::BumpBall;
use lwreg_core::association::{association_suite, SuiteConfig};
use lwreg_core::distalg::{parse, solve_euler_delta, upsilon, Algebra};
use lwreg_core::fields::FieldModel;
use lwreg_core::retarded::kinematics;
use lwreg_core::selfenergy::{mass_renormalize, self_energy_report};

use crate::config::RunConfig;
use crate::CliError;

/// Rendered output plus the failed verdicts, if any.
pub struct Outcome {
    pub text: String,
    pub failures: Vec<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            failures: Vec::new(),
        }
    }
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn model(cfg: &RunConfig) -> FieldModel {
    FieldModel::new(cfg.mollifier.family())
        .with_charge(cfg.charge)
        .with_magnetic_moment(cfg.magnetic_moment)
        .with_psi_form(cfg.psi_form)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KinematicsRecord {
    #[serde(rename = "X")]
    pub x: [f64; 4],
    pub tau_r: f64,
    pub xi: f64,
    #[serde(rename = "K")]
    pub k: [f64; 4],
    pub kappa: f64,
    pub residual: f64,
}

pub fn kinematics_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut text = String::new();
    for x in cfg.observers() {
        let k = kinematics(&cfg.worldline, &x, cfg.retarded_tol).map_err(|e| input(format!("at X = {x}: {e}")))?;
        let rec = KinematicsRecord {
            x: x.0,
            tau_r: k.tau_r,
            xi: k.xi,
            k: k.k.0,
            kappa: k.kappa,
            residual: k.residual,
        };
        text.push_str(&serde_json::to_string(&rec).expect("plain numbers serialize"));
        text.push('\n');
    }
    Ok(Outcome::ok(text))
}

pub fn fields_eval(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let m = model(cfg);
    m.family
        .require_smooth()
        .map_err(|e| input(format!("fields eval: {e}")))?;
    let mut text = String::from("X0,X1,X2,X3,eps");
    for name in ["Phi", "Lambda", "Psi", "BoxPhi"] {
        for mu in 0..4 {
            write!(text, ",{name}{mu}").unwrap();
        }
    }
    text.push('\n');
    for x in cfg.observers() {
        for &eps in &cfg.eps_grid {
            let p = m
                .field_point(&cfg.worldline, &x, eps)
                .map_err(|e| input(format!("at X = {x}: {e}")))?;
            let mut cells: Vec<String> = x.0.iter().map(|v| num(*v)).collect();
            cells.push(num(eps));
            for v in [p.phi, p.lambda, p.psi, p.box_phi] {
                cells.extend(v.0.iter().map(|c| num(*c)));
            }
            text.push_str(&cells.join(","));
            text.push('\n');
        }
    }
    Ok(Outcome::ok(text))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociationRecord {
    pub claim: String,
    pub eps: Vec<f64>,
    pub pairing: Vec<f64>,
    /// Null when no limit could be extrapolated.
    pub limit: Option<f64>,
    /// Null when the tail does not fit L + A·ε^p.
    pub order: Option<f64>,
    pub target: f64,
    pub pass: bool,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn ball(spec: &crate::config::BallSpec, modulation: Option<&Vec<f64>>) -> BumpBall {
    let b = BumpBall::new(spec.center.clone(), spec.radius);
    match modulation {
        Some(a) => b.with_modulation(a.clone()),
        None => b,
    }
}

pub fn suite_config(cfg: &RunConfig) -> SuiteConfig {
    let mut s = SuiteConfig::for_worldline(&cfg.worldline, cfg.eps_grid.clone());
    s.rel_tol = cfg.rel_tol;
    if let Some(b) = &cfg.space_test {
        s.space_test = ball(b, s.space_test.modulation.as_ref());
    }
    if let Some(b) = &cfg.spacetime_test {
        s.spacetime_test = ball(b, s.spacetime_test.modulation.as_ref());
    }
    s
}

pub fn associate(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let report = association_suite(&model(cfg), &cfg.worldline, &suite_config(cfg)).map_err(input)?;
    let mut text = String::new();
    let mut failures = Vec::new();
    for c in &report.claims {
        let rec = AssociationRecord {
            claim: c.claim.clone(),
            eps: c.eps.clone(),
            pairing: c.pairing.clone(),
            limit: finite(c.limit),
            order: finite(c.order),
            target: c.target,
            pass: c.passed(),
        };
        if !rec.pass {
            failures.push(format!("{} {:?}", c.claim, c.verdict));
        }
        text.push_str(&serde_json::to_string(&rec).expect("plain numbers serialize"));
        text.push('\n');
    }
    for s in &report.skipped {
        eprintln!("skipped: {s}");
    }
    Ok(Outcome { text, failures })
}

pub fn selfenergy(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let r = self_energy_report(&model(cfg), &cfg.eps_grid).map_err(input)?;
    let mut text = String::from("eps,U_ele,U_mag,eps_Uele,eps3_Umag,c_eps,bound,pass\n");
    let mut failures = Vec::new();
    for (i, &eps) in r.u_ele.eps().iter().enumerate() {
        let row = [
            r.u_ele.values()[i],
            r.u_mag.values()[i],
            r.eps_u_ele[i],
            r.eps3_u_mag[i],
            r.c_eps[i],
            r.bound[i],
        ];
        let cells: Vec<String> = std::iter::once(eps).chain(row).map(num).collect();
        writeln!(text, "{},{}", cells.join(","), r.pass[i]).unwrap();
        if !r.pass[i] {
            failures.push(format!("bound at eps = {eps}"));
        }
    }
    Ok(Outcome { text, failures })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenormalizeRecord {
    pub eps0: f64,
    pub residual: f64,
}

pub fn renormalize(cfg: &RunConfig, mc2: f64) -> Result<Outcome, CliError> {
    let m = model(cfg);
    let r = mass_renormalize(&m.family, m.charge, m.magnetic_moment, mc2).map_err(input)?;
    let rec = RenormalizeRecord {
        eps0: r.eps0,
        residual: r.residual,
    };
    Ok(Outcome::ok(
        serde_json::to_string(&rec).expect("plain numbers serialize") + "\n",
    ))
}

pub fn distalg_solve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let s = solve_euler_delta(cfg.max_order).map_err(input)?;
    let mut text = String::new();
    let ansatz: Vec<String> = s.ansatz.iter().map(|a| a.to_string()).collect();
    writeln!(text, "ansatz: {}", ansatz.join(", ")).unwrap();
    writeln!(text, "particular: {}", s.particular).unwrap();
    for h in &s.homogeneous {
        writeln!(text, "homogeneous: {h}").unwrap();
    }
    writeln!(
        text,
        "delta-only solution: {}",
        if s.pure_delta_solvable { "exists" } else { "none" }
    )
    .unwrap();
    writeln!(text, "upsilon: {}", upsilon(true).map_err(input)?.base).unwrap();
    Ok(Outcome::ok(text))
}

pub fn distalg_verify(cfg: &RunConfig, expr: &str) -> Result<Outcome, CliError> {
    let u = parse(expr).map_err(|e| input(format!("expression: {e}")))?;
    let image = Algebra::new(cfg.max_order).euler_apply(&u).map_err(input)?;
    Ok(Outcome::ok(format!("{image}\n")))
}

//! Field energy of a regularized charge at rest and mass renormalization.

use serde::Serialize;

use crate::fields::FieldModel;
use crate::quad;
use crate::regularization::{validate_grid, GeneralizedNet, HeavisideFamily, RegularizationError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SelfEnergyError {
    #[error("target {target} is below the infimum {infimum} of U_ele + U_mag on (0, 1]")]
    OutOfRange { target: f64, infimum: f64 },
    #[error("the bound check needs at least 3 grid points, got {0}")]
    InsufficientGrid(usize),
    #[error(transparent)]
    Regularization(#[from] RegularizationError),
}

fn shell_integral<F: Fn(f64) -> f64>(f: F, eps: f64, scale: f64) -> f64 {
    quad::adaptive(f, eps, 2.0 * eps, 1e-15 * scale).value
}

/// U_ele = (e²/2) ∫_ε^{2ε} H′_ε(r)² dr.
pub fn u_ele(family: &HeavisideFamily, e: f64, eps: f64) -> f64 {
    if e == 0.0 {
        return 0.0;
    }
    let h1 = |r: f64| family.h1(r, eps).powi(2);
    0.5 * e * e * shell_integral(h1, eps, 1.0 / eps)
}

/// U_mag = (μ²/3) ∫_ε^{2ε} H′_ε(r)²/r² dr.
pub fn u_mag(family: &HeavisideFamily, mu: f64, eps: f64) -> f64 {
    if mu == 0.0 {
        return 0.0;
    }
    let f = |r: f64| (family.h1(r, eps) / r).powi(2);
    mu * mu / 3.0 * shell_integral(f, eps, eps.powi(-3))
}

/// c_ε = sup H′_ε over 2049 equally spaced points of [ε, 2ε].
pub fn sup_h1(family: &HeavisideFamily, eps: f64) -> f64 {
    (0..=2048)
        .map(|k| family.h1(eps * (1.0 + k as f64 / 2048.0), eps))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundRow {
    pub eps: f64,
    /// a_ε = (2/e²)·U_ele = ∫H′².
    pub a_eps: f64,
    pub c_eps: f64,
    /// 1/(8ε²c_ε)
    pub pointwise_bound: f64,
    /// c₀/ε
    pub uniform_bound: f64,
    pub pass: bool,
}

/// Checks the lower bounds behind the divergence of U_ele as ε → 0:
/// c_ε ≥ 1/ε, a_ε ≥ 1/(8ε²c_ε) and a_ε ≥ c₀/ε with c₀ = 1/(8·sup ε c_ε).
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub c0: f64,
    pub rows: Vec<BoundRow>,
    pub violations: Vec<String>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn divergence_bound_check(family: &HeavisideFamily, eps_grid: &[f64]) -> Result<BoundReport, SelfEnergyError> {
    if eps_grid.len() < 3 {
        return Err(SelfEnergyError::InsufficientGrid(eps_grid.len()));
    }
    validate_grid(eps_grid)?;
    let c: Vec<f64> = eps_grid.iter().map(|&e| sup_h1(family, e)).collect();
    let c0 = 1.0 / (8.0 * eps_grid.iter().zip(&c).map(|(e, c)| e * c).fold(0.0, f64::max));
    let slack = 1.0 - 1e-12;
    let mut violations = Vec::new();
    let rows = eps_grid
        .iter()
        .zip(&c)
        .map(|(&eps, &c_eps)| {
            let a_eps = 2.0 * u_ele(family, 1.0, eps);
            let pointwise_bound = 1.0 / (8.0 * eps * eps * c_eps);
            let uniform_bound = c0 / eps;
            let mut pass = true;
            if c_eps < slack / eps {
                violations.push(format!("c_eps = {c_eps} < 1/eps at eps = {eps}"));
                pass = false;
            }
            if a_eps < slack * pointwise_bound {
                violations.push(format!("a_eps = {a_eps} < 1/(8 eps^2 c_eps) at eps = {eps}"));
                pass = false;
            }
            if a_eps < slack * uniform_bound {
                violations.push(format!("a_eps = {a_eps} < c0/eps at eps = {eps}"));
                pass = false;
            }
            BoundRow {
                eps,
                a_eps,
                c_eps,
                pointwise_bound,
                uniform_bound,
                pass,
            }
        })
        .collect();
    Ok(BoundReport { c0, rows, violations })
}

/// (2/e²)·U_ele and (3/μ²)·U_mag, i.e. ∫H′² and ∫H′²/r². The first never
/// exceeds the second once 2ε ≤ 1.
pub fn energy_inequality(family: &HeavisideFamily, eps: f64) -> (f64, f64) {
    (2.0 * u_ele(family, 1.0, eps), 3.0 * u_mag(family, 1.0, eps))
}

/// Self-energy nets over an ε grid.
#[derive(Debug, Clone, Serialize)]
pub struct SelfEnergyReport {
    pub u_ele: GeneralizedNet<f64>,
    pub u_mag: GeneralizedNet<f64>,
    pub eps_u_ele: Vec<f64>,
    pub eps3_u_mag: Vec<f64>,
    pub c_eps: Vec<f64>,
    /// c₀/ε
    pub bound: Vec<f64>,
    pub pass: Vec<bool>,
}

pub fn self_energy_report(model: &FieldModel, eps_grid: &[f64]) -> Result<SelfEnergyReport, SelfEnergyError> {
    let f = &model.family;
    let u_e = GeneralizedNet::from_fn(eps_grid, |e| u_ele(f, model.charge, e))?;
    let u_m = GeneralizedNet::from_fn(eps_grid, |e| u_mag(f, model.magnetic_moment, e))?;
    let bounds = divergence_bound_check(f, eps_grid)?;
    let e2 = model.charge * model.charge;
    let pass = bounds
        .rows
        .iter()
        .zip(u_e.values())
        .map(|(row, u)| row.pass && *u >= 0.5 * e2 * row.uniform_bound * (1.0 - 1e-12))
        .collect();
    Ok(SelfEnergyReport {
        eps_u_ele: u_e.iter().map(|(e, u)| e * u).collect(),
        eps3_u_mag: u_m.iter().map(|(e, u)| e.powi(3) * u).collect(),
        c_eps: bounds.rows.iter().map(|r| r.c_eps).collect(),
        bound: bounds.rows.iter().map(|r| r.uniform_bound).collect(),
        pass,
        u_ele: u_e,
        u_mag: u_m,
    })
}

/// U_ele from the field energy (1/8π)∫|E|², using the static field on a ray
/// out to 2ε and the Coulomb tail e²/(4ε) beyond.
pub fn u_ele_from_field(model: &FieldModel, eps: f64) -> f64 {
    let density = |r: f64| {
        let e = model.static_field([r, 0.0, 0.0], eps).e_field[0];
        0.5 * r * r * e * e
    };
    let e2 = model.charge * model.charge;
    quad::adaptive(density, eps, 2.0 * eps, 1e-15 * e2 / eps).value + e2 / (4.0 * eps)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Renormalization {
    pub eps0: f64,
    /// U_ele + U_mag − mc² at ε₀.
    pub residual: f64,
}

/// Finds ε₀ ∈ (0, 1] with U_ele + U_mag = mc² by bisection; the sum is
/// decreasing in ε, so the infimum on (0, 1] is its value at ε = 1.
pub fn mass_renormalize(
    family: &HeavisideFamily,
    e: f64,
    mu: f64,
    target_mc2: f64,
) -> Result<Renormalization, SelfEnergyError> {
    let total = |eps: f64| u_ele(family, e, eps) + u_mag(family, mu, eps);
    let infimum = total(1.0);
    if !(target_mc2 >= infimum) {
        return Err(SelfEnergyError::OutOfRange {
            target: target_mc2,
            infimum,
        });
    }
    let mut hi = 1.0;
    let mut lo = 0.5;
    while total(lo) < target_mc2 {
        hi = lo;
        lo *= 0.5;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f = total(mid) - target_mc2;
        if f.abs() <= 1e-13 * target_mc2 || hi - lo <= f64::EPSILON * mid {
            return Ok(Renormalization { eps0: mid, residual: f });
        }
        if f > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let eps0 = 0.5 * (lo + hi);
    Ok(Renormalization {
        eps0,
        residual: total(eps0) - target_mc2,
    })
}

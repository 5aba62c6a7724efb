//! Quadrature for ⟨u_ε, φ⟩ over the support of a test function.
//!
//! Spacetime pairings use, on every time slice t, spherical coordinates around
//! the particle's lab position z(τ(t)). Along each ray the radial integral is
//! split where ξ̃ = ε and ξ̃ = 2ε, so the transition shell gets its own panels.

use rayon::prelude::*;
use serde::Serialize;

use super::testfn::{BumpBall, SpacetimeTest};
use super::AssociationError;
use crate::fields::FieldModel;
use crate::minkowski::{FourVector, Worldline};
use crate::quad::GaussLegendre;
use crate::retarded::{kinematics, RetardedError, DEFAULT_TOL};

/// Node counts for the product rules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadSpec {
    pub time_panels: usize,
    pub time_nodes: usize,
    /// Gauss–Legendre nodes in cos θ.
    pub polar_nodes: usize,
    /// Trapezoid nodes in the azimuth.
    pub azimuth_nodes: usize,
    /// Gauss–Legendre nodes per radial panel.
    pub radial_nodes: usize,
    /// Panels across the shell ε ≤ ξ̃ ≤ 2ε.
    pub shell_panels: usize,
    /// Panels beyond the shell.
    pub outer_panels: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            time_panels: 2,
            time_nodes: 16,
            polar_nodes: 20,
            azimuth_nodes: 24,
            radial_nodes: 12,
            shell_panels: 8,
            outer_panels: 12,
        }
    }
}

impl QuadSpec {
    /// Node spacing across the shell, in units of ε.
    pub fn shell_spacing(&self) -> f64 {
        1.0 / (self.shell_panels * self.radial_nodes) as f64
    }

    fn check(&self, eps: f64) -> Result<(), AssociationError> {
        let spacing = self.shell_spacing() * eps;
        if spacing > eps / 8.0 {
            return Err(AssociationError::ResolutionTooCoarse { spacing, eps });
        }
        Ok(())
    }
}

/// ⟨ρ, φ⟩ for a radial density ρ supported in `support` and a test function
/// on ℝ³, in spherical coordinates around the origin.
pub fn pair_radial<F>(
    density: F,
    support: (f64, f64),
    phi: &BumpBall,
    eps: f64,
    spec: &QuadSpec,
) -> Result<f64, AssociationError>
where
    F: Fn(f64) -> f64,
{
    assert_eq!(phi.dim(), 3, "radial pairing needs a test function on space");
    spec.check(eps)?;
    let radial = GaussLegendre::new(spec.radial_nodes);
    let polar = GaussLegendre::new(spec.polar_nodes);
    let dphi = std::f64::consts::TAU / spec.azimuth_nodes as f64;
    let (a, b) = support;
    let h = (b - a) / spec.shell_panels as f64;
    let mut total = 0.0;
    for panel in 0..spec.shell_panels {
        let lo = a + h * panel as f64;
        for (r, wr) in radial.mapped(lo, lo + h) {
            let rho = density(r);
            if rho == 0.0 {
                continue;
            }
            let mut sphere = 0.0;
            for (c, wc) in polar.mapped(-1.0, 1.0) {
                let s = (1.0 - c * c).sqrt();
                for k in 0..spec.azimuth_nodes {
                    let az = dphi * k as f64;
                    sphere += wc * dphi * phi.value(&[r * s * az.cos(), r * s * az.sin(), r * c]);
                }
            }
            total += wr * r * r * rho * sphere;
        }
    }
    Ok(total)
}

/// Pairings of the ε-dependent spacetime nets with one test function φ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpacetimePairing {
    pub eps: f64,
    /// ⟨H_ε(ξ̃), φ⟩
    pub h: f64,
    /// ⟨Ψ_ε, φ⟩
    pub psi: FourVector,
    /// ⟨Φ_ε, □φ⟩ = ⟨□Φ_ε, φ⟩
    pub phi_box: FourVector,
    /// ⟨Λ·H_ε(ξ̃), φ⟩
    pub lambda_h: FourVector,
    /// ⟨Λ, φ⟩
    pub lambda: FourVector,
}

impl SpacetimePairing {
    /// ⟨□Φ_ε − Λ·H_ε(ξ̃), φ⟩.
    pub fn box_minus_lambda(&self) -> FourVector {
        self.phi_box - self.lambda_h
    }
}

const SLOTS: usize = 17;

fn sample(
    model: &FieldModel,
    w: &dyn Worldline,
    test: &dyn SpacetimeTest,
    x: &FourVector,
    eps: f64,
) -> Result<[f64; SLOTS], AssociationError> {
    let phi = test.value(x);
    let box_phi = test.box_value(x);
    let mut out = [0.0; SLOTS];
    if phi == 0.0 && box_phi == 0.0 {
        return Ok(out);
    }
    let kin = kinematics(w, x, DEFAULT_TOL).map_err(crate::fields::FieldError::from)?;
    let b = model.box_phi_from(&kin, eps)?;
    let h = model.family.h(kin.xi, eps);
    let field = model.phi_from(&kin, eps);
    out[0] = h * phi;
    for mu in 0..4 {
        out[1 + mu] = b.psi[mu] * phi;
        out[5 + mu] = field[mu] * box_phi;
        out[9 + mu] = b.lambda[mu] * h * phi;
        out[13 + mu] = b.lambda[mu] * phi;
    }
    Ok(out)
}

/// ξ̃ along the ray, with ξ̃ = 0 on the worldline itself.
fn xi_on_ray(w: &dyn Worldline, origin: &FourVector, n: [f64; 3], rho: f64) -> Result<f64, AssociationError> {
    if rho == 0.0 {
        return Ok(0.0);
    }
    let x = *origin + FourVector::from_parts(0.0, n) * rho;
    match kinematics(w, &x, DEFAULT_TOL) {
        Ok(k) => Ok(k.xi),
        Err(RetardedError::OnWorldline { .. }) => Ok(0.0),
        Err(e) => Err(crate::fields::FieldError::from(e).into()),
    }
}

/// Smallest ρ in (0, hi) with ξ̃ = target, by Illinois regula falsi; None if
/// ξ̃ stays below the target on the whole ray segment.
fn shell_crossing(
    w: &dyn Worldline,
    origin: &FourVector,
    n: [f64; 3],
    target: f64,
    hi: f64,
) -> Result<Option<f64>, AssociationError> {
    let mut b = hi;
    let mut fb = xi_on_ray(w, origin, n, b)? - target;
    if fb <= 0.0 {
        return Ok(None);
    }
    let mut a = 0.0;
    let mut fa = -target;
    let mut side = 0i8;
    for _ in 0..200 {
        let c = (a * fb - b * fa) / (fb - fa);
        let fc = xi_on_ray(w, origin, n, c)? - target;
        if fc.abs() <= 1e-15 * target || (b - a).abs() <= 1e-15 * hi {
            return Ok(Some(c));
        }
        if fc > 0.0 {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Ok(Some(0.5 * (a + b)))
}

/// All five spacetime pairings at one ε, computed on a shared grid.
pub fn pair_spacetime(
    model: &FieldModel,
    w: &dyn Worldline,
    test: &dyn SpacetimeTest,
    eps: f64,
    spec: &QuadSpec,
) -> Result<SpacetimePairing, AssociationError> {
    spec.check(eps)?;
    let (center, radius) = test.support();
    let time_rule = GaussLegendre::new(spec.time_nodes);
    let polar = GaussLegendre::new(spec.polar_nodes);
    let radial = GaussLegendre::new(spec.radial_nodes);
    let dphi = std::f64::consts::TAU / spec.azimuth_nodes as f64;

    let t_lo = center.time() - radius;
    let t_step = 2.0 * radius / spec.time_panels as f64;
    let slices: Vec<(f64, f64)> = (0..spec.time_panels)
        .flat_map(|p| {
            let a = t_lo + t_step * p as f64;
            time_rule.mapped(a, a + t_step).collect::<Vec<_>>()
        })
        .collect();
    let directions: Vec<([f64; 3], f64)> = polar
        .mapped(-1.0, 1.0)
        .flat_map(|(c, wc)| {
            let s = (1.0 - c * c).sqrt();
            (0..spec.azimuth_nodes).map(move |k| {
                let az = dphi * k as f64;
                ([s * az.cos(), s * az.sin(), c], wc * dphi)
            })
        })
        .collect();

    let per_slice: Vec<Result<[f64; SLOTS], AssociationError>> = slices
        .par_iter()
        .map(|&(t, wt)| {
            let mut acc = [0.0; SLOTS];
            let half_sq = radius * radius - (t - center.time()).powi(2);
            if half_sq <= 0.0 {
                return Ok(acc);
            }
            let origin = FourVector::from_parts(t, w.position(w.tau_at_lab_time(t)).spatial());
            let d = origin - center;
            let d_sq = d.spatial_norm().powi(2);
            for (n, wn) in &directions {
                let bdot = n[0] * d[1] + n[1] * d[2] + n[2] * d[3];
                let disc = bdot * bdot - (d_sq - half_sq);
                if disc <= 0.0 {
                    continue;
                }
                let root = disc.sqrt();
                let (ra, rb) = ((-bdot - root).max(0.0), -bdot + root);
                if rb <= 0.0 {
                    continue;
                }
                let inner = shell_crossing(w, &origin, *n, eps, rb)?;
                let outer = match inner {
                    Some(_) => shell_crossing(w, &origin, *n, 2.0 * eps, rb)?,
                    None => None,
                };
                let mut breaks = vec![(ra, 1usize)];
                for (cut, panels_after) in [(inner, spec.shell_panels), (outer, spec.outer_panels)] {
                    if let Some(c) = cut {
                        if c > ra && c < rb {
                            breaks.push((c, panels_after));
                        } else if c <= ra {
                            breaks[0].1 = panels_after;
                        }
                    }
                }
                breaks.push((rb, 0));
                for pair in breaks.windows(2) {
                    let ((a, panels), (b, _)) = (pair[0], pair[1]);
                    let h = (b - a) / panels as f64;
                    for p in 0..panels {
                        let lo = a + h * p as f64;
                        for (rho, wr) in radial.mapped(lo, lo + h) {
                            let x = origin + FourVector::from_parts(0.0, *n) * rho;
                            let v = sample(model, w, test, &x, eps)?;
                            let weight = wt * wn * wr * rho * rho;
                            for (slot, vi) in acc.iter_mut().zip(v) {
                                *slot += weight * vi;
                            }
                        }
                    }
                }
            }
            Ok(acc)
        })
        .collect();

    let mut total = [0.0; SLOTS];
    for slice in per_slice {
        for (t, v) in total.iter_mut().zip(slice?) {
            *t += v;
        }
    }
    let vec_at = |i: usize| FourVector::new(total[i], total[i + 1], total[i + 2], total[i + 3]);
    Ok(SpacetimePairing {
        eps,
        h: total[0],
        psi: vec_at(1),
        phi_box: vec_at(5),
        lambda_h: vec_at(9),
        lambda: vec_at(13),
    })
}

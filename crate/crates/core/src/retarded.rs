//! Retarded proper time and the kinematic quantities built on it.
//!
//! All vectors are contravariant. With R = X - Z(τ_r), the retarded distance
//! is ξ = Ż·R, the null vector K = R/ξ and the acceleration invariant
//! κ = Z̈·K. Differentiating R·R = 0 gives ∂τ_r/∂X^μ = K_μ (the covariant
//! components), which is the same statement as ∂τ_r/∂X_μ = K^μ.

use serde::Serialize;

use crate::minkowski::{FourVector, Worldline};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 100;
/// Spatial distance (relative to max(1, |X|)) below which an observer counts as sitting on the worldline.
pub const ON_WORLDLINE_DISTANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RetardedError {
    #[error("retarded-time solve did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("observer lies on the worldline (spatial distance {distance:e})")]
    OnWorldline { distance: f64 },
    #[error("the backward light cone of the observer never meets the worldline")]
    NoRetardedPoint,
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
}

/// Everything evaluated at (X, τ_r(X)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RetardedKinematics {
    pub tau_r: f64,
    /// R̃ = X - Z(τ_r), future-directed null.
    pub r: FourVector,
    /// ξ̃ = Ż·R̃ > 0.
    pub xi: f64,
    /// K̃ = R̃/ξ̃.
    pub k: FourVector,
    /// κ̃ = Z̈·K̃.
    pub kappa: f64,
    /// R̃·R̃ at the returned root.
    pub residual: f64,
    /// Ż(τ_r).
    pub velocity: FourVector,
    /// Z̈(τ_r).
    pub acceleration: FourVector,
}

/// Signed light-cone distance X0 - Z0(τ) - |x - z(τ)|; strictly decreasing in τ.
fn cone_gap(w: &dyn Worldline, x: &FourVector, tau: f64) -> f64 {
    let r = *x - w.position(tau);
    r.time() - r.spatial_norm()
}

/// Solves R(X, τ)·R(X, τ) = 0 with X0 > Z0(τ).
///
/// Newton steps use d(R·R)/dτ = -2ξ; whenever a step leaves the current
/// bracket (maintained from the sign of the light-cone gap) it is replaced by
/// bisection.
pub fn retarded_time(w: &dyn Worldline, x: &FourVector, tol: f64) -> Result<f64, RetardedError> {
    if !(tol > 0.0) {
        return Err(RetardedError::InvalidTolerance(tol));
    }
    if !w.has_retarded_point(x) {
        return Err(RetardedError::NoRetardedPoint);
    }
    let scale = x.euclidean_norm().powi(2).max(1.0);
    let here = *x - w.position(w.tau_at_lab_time(x.time()));
    if here.spatial_norm() < ON_WORLDLINE_DISTANCE * scale.sqrt() {
        return Err(RetardedError::OnWorldline {
            distance: here.spatial_norm(),
        });
    }

    // lab time x0 − |x − z(x0)|, converted to eigentime
    let seed = w.tau_at_lab_time(x.time() - here.spatial_norm());
    let (mut lo, mut hi) = bracket(w, x, seed)?;
    let mut tau = seed.clamp(lo, hi);

    for it in 0..MAX_ITERATIONS {
        let r = *x - w.position(tau);
        let g = r.square();
        let xi = w.velocity(tau).inner(&r);
        if r.time() - r.spatial_norm() > 0.0 {
            lo = lo.max(tau);
        } else {
            hi = hi.min(tau);
        }
        let newton = if xi > 0.0 && r.time() > 0.0 {
            tau + g / (2.0 * xi)
        } else {
            f64::NAN
        };
        let next = if newton >= lo && newton <= hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - tau).abs();
        let converged = g.abs() <= tol * scale && step <= tol * tau.abs().max(1.0) && r.time() > 0.0;
        if converged || hi - lo <= f64::EPSILON * tau.abs().max(1.0) {
            let tau_final = if converged { next } else { tau };
            let r = *x - w.position(tau_final);
            if r.spatial_norm() < ON_WORLDLINE_DISTANCE {
                return Err(RetardedError::OnWorldline {
                    distance: r.spatial_norm(),
                });
            }
            if !converged && r.square().abs() > tol * scale {
                return Err(RetardedError::NoConvergence {
                    iterations: it + 1,
                    residual: r.square(),
                });
            }
            return Ok(tau_final);
        }
        tau = next;
    }
    let r = *x - w.position(tau);
    Err(RetardedError::NoConvergence {
        iterations: MAX_ITERATIONS,
        residual: r.square(),
    })
}

fn bracket(w: &dyn Worldline, x: &FourVector, seed: f64) -> Result<(f64, f64), RetardedError> {
    let mut step = 1.0f64.max(1e-3 * seed.abs());
    let mut lo = seed;
    let mut hi = seed;
    if cone_gap(w, x, seed) > 0.0 {
        hi = seed + step;
        let mut n = 0;
        loop {
            let gap = cone_gap(w, x, hi);
            if !gap.is_finite() {
                return Err(RetardedError::NoConvergence {
                    iterations: n,
                    residual: f64::NAN,
                });
            }
            if gap <= 0.0 {
                break;
            }
            lo = hi;
            step *= 2.0;
            hi += step;
            n += 1;
            if n > 200 {
                return Err(RetardedError::NoRetardedPoint);
            }
        }
    } else {
        lo = seed - step;
        let mut n = 0;
        loop {
            let gap = cone_gap(w, x, lo);
            if !gap.is_finite() {
                return Err(RetardedError::NoConvergence {
                    iterations: n,
                    residual: f64::NAN,
                });
            }
            if gap > 0.0 {
                break;
            }
            hi = lo;
            step *= 2.0;
            lo -= step;
            n += 1;
            if n > 200 {
                return Err(RetardedError::NoRetardedPoint);
            }
        }
    }
    Ok((lo, hi))
}

/// Retarded time and the derived quantities R̃, ξ̃, K̃, κ̃.
pub fn kinematics(w: &dyn Worldline, x: &FourVector, tol: f64) -> Result<RetardedKinematics, RetardedError> {
    let tau_r = retarded_time(w, x, tol)?;
    Ok(kinematics_at(w, x, tau_r))
}

/// Kinematics at a given parameter value, without solving for τ_r.
pub fn kinematics_at(w: &dyn Worldline, x: &FourVector, tau: f64) -> RetardedKinematics {
    let p = w.eval(tau);
    let r = *x - p.position;
    let xi = p.velocity.inner(&r);
    let k = r * (1.0 / xi);
    RetardedKinematics {
        tau_r: tau,
        r,
        xi,
        k,
        kappa: p.acceleration.inner(&k),
        residual: r.square(),
        velocity: p.velocity,
        acceleration: p.acceleration,
    }
}

/// ξ(X, τ) = Ż(τ)·(X - Z(τ)) at an arbitrary τ.
pub fn xi_at(w: &dyn Worldline, x: &FourVector, tau: f64) -> f64 {
    w.velocity(tau).inner(&(*x - w.position(tau)))
}

/// Largest deviation between the central-difference gradient of τ_r and K̃.
///
/// Differences are taken in the stored (contravariant) coordinates, giving the
/// covariant components ∂τ_r/∂X^μ; these are raised before comparing to K̃^μ.
pub fn grad_tau_check(w: &dyn Worldline, x: &FourVector, h: f64) -> Result<f64, RetardedError> {
    let kin = kinematics(w, x, DEFAULT_TOL)?;
    let mut covariant = [0.0; 4];
    for (mu, slot) in covariant.iter_mut().enumerate() {
        let e = FourVector::basis(mu) * h;
        let plus = retarded_time(w, &(*x + e), DEFAULT_TOL)?;
        let minus = retarded_time(w, &(*x - e), DEFAULT_TOL)?;
        *slot = (plus - minus) / (2.0 * h);
    }
    let raised = FourVector(covariant).lower();
    Ok((raised - kin.k).max_abs())
}

/// Analytic gradient of ξ̃ as a contravariant vector: Ż + (ξκ - 1)K.
///
/// Its covariant components `.lower()` are the partials ∂ξ̃/∂X^μ. The vector is
/// never zero: Ż is timelike while K is null.
pub fn grad_xi(w: &dyn Worldline, x: &FourVector) -> Result<FourVector, RetardedError> {
    let kin = kinematics(w, x, DEFAULT_TOL)?;
    Ok(grad_xi_from(&kin))
}

pub fn grad_xi_from(kin: &RetardedKinematics) -> FourVector {
    kin.velocity + kin.k * (kin.xi * kin.kappa - 1.0)
}

/// (central difference of τ ↦ ξ(X, τ) at τ_r, ξκ - 1).
pub fn dtau_xi_check(w: &dyn Worldline, x: &FourVector, h: f64) -> Result<(f64, f64), RetardedError> {
    let kin = kinematics(w, x, DEFAULT_TOL)?;
    let fd = (xi_at(w, x, kin.tau_r + h) - xi_at(w, x, kin.tau_r - h)) / (2.0 * h);
    Ok((fd, kin.xi * kin.kappa - 1.0))
}

/// (central-difference divergence ∂_μ K̃^μ, 2/ξ̃).
pub fn divergence_k_check(w: &dyn Worldline, x: &FourVector, h: f64) -> Result<(f64, f64), RetardedError> {
    let kin = kinematics(w, x, DEFAULT_TOL)?;
    let mut div = 0.0;
    for mu in 0..4 {
        let e = FourVector::basis(mu) * h;
        let plus = kinematics(w, &(*x + e), DEFAULT_TOL)?;
        let minus = kinematics(w, &(*x - e), DEFAULT_TOL)?;
        div += (plus.k[mu] - minus.k[mu]) / (2.0 * h);
    }
    Ok((div, 2.0 / kin.xi))
}

//! Floating-point pairings ⟨u, φ⟩ used to check the rewrite tables.
//!
//! ⟨t_+^{−k}, φ⟩ = ∫₀¹ (φ − Σ_{j<k} φⱼ t^j)/t^k dt − Σ_{j<k−1} φⱼ/(k−1−j) + ∫₁^∞ φ/t^k dt,
//! with φⱼ the Taylor coefficients of φ at 0; minus-side atoms follow from
//! ⟨t_−^{−k}, φ⟩ = (−1)^k ⟨t_+^{−k}, φ(−·)⟩.

use num_traits::ToPrimitive;

use super::{Atom, DistError, DistExpr};
use crate::association::testfn::LineFn;
use crate::quad::{self, GaussLegendre};

fn checked(v: f64, what: &str) -> Result<f64, DistError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(DistError::Quadrature(format!("non-finite result for {what}")))
    }
}

/// ∫ f over the part of [a, b] inside the support.
fn integrate_on<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, support: (f64, f64)) -> f64 {
    let (lo, hi) = (a.max(support.0), b.min(support.1));
    if lo >= hi {
        return 0.0;
    }
    quad::adaptive(f, lo, hi, 1e-14).value
}

fn fp_plus(k: u32, phi: &LineFn) -> Result<f64, DistError> {
    let k = k as usize;
    let taylor = phi.jet(0.0).0;
    let support = phi.support();
    let poly = |t: f64| taylor[..k].iter().rev().fold(0.0, |acc, c| acc * t + c);
    // On [0, t0] the remainder (φ − Σ_{j<k} φⱼ t^j)/t^k is integrated from
    // its Taylor tail, well inside the radius of convergence; beyond t0 the
    // subtraction no longer cancels badly and fixed Gauss–Legendre panels
    // take over.
    let edge = support.0.abs().min(support.1.abs());
    let t0 = if support.0 < 0.0 && support.1 > 0.0 {
        (0.1 * edge).min(0.05)
    } else {
        0.0
    };
    let head: f64 = (k..taylor.len())
        .map(|j| taylor[j] * t0.powi((j - k + 1) as i32) / (j - k + 1) as f64)
        .sum();
    let gl = GaussLegendre::new(20);
    let mut breaks = vec![t0, 1.0];
    for s in [support.0, support.1] {
        if s > t0 && s < 1.0 {
            breaks.push(s);
        }
    }
    breaks.sort_by(f64::total_cmp);
    let mut near = head;
    for w in breaks.windows(2) {
        near += gl.composite(w[0], w[1], 16, |t| (phi.value(t) - poly(t)) / t.powi(k as i32));
    }
    let subtracted: f64 = (0..k.saturating_sub(1)).map(|j| taylor[j] / (k - 1 - j) as f64).sum();
    let far = integrate_on(|t| phi.value(t) / t.powi(k as i32), 1.0, f64::INFINITY, support);
    checked(near - subtracted + far, "finite part")
}

/// ⟨a, φ⟩ for a single atom.
pub fn numeric_pairing(atom: Atom, phi: &LineFn) -> Result<f64, DistError> {
    let support = phi.support();
    let v = match atom {
        Atom::Mono(n) => integrate_on(
            |t| t.powi(n as i32) * phi.value(t),
            f64::NEG_INFINITY,
            f64::INFINITY,
            support,
        ),
        Atom::ThetaPlus => integrate_on(|t| phi.value(t), 0.0, f64::INFINITY, support),
        Atom::ThetaMinus => integrate_on(|t| phi.value(t), f64::NEG_INFINITY, 0.0, support),
        Atom::Delta(k) => {
            let d = phi.derivative_at(k as usize, 0.0);
            if k % 2 == 0 {
                d
            } else {
                -d
            }
        }
        Atom::FpPlus(k) => fp_plus(k, phi)?,
        Atom::FpMinus(k) => {
            let v = fp_plus(k, &phi.clone().mirror())?;
            if k % 2 == 0 {
                v
            } else {
                -v
            }
        }
    };
    checked(v, &atom.to_string())
}

/// ⟨u, φ⟩ by linearity.
pub fn pair_expr(u: &DistExpr, phi: &LineFn) -> Result<f64, DistError> {
    u.iter().try_fold(0.0, |acc, (c, a)| {
        let c = c.to_f64().unwrap_or(f64::NAN);
        Ok(acc + c * numeric_pairing(a, phi)?)
    })
}

//! Reproducible observer clouds.
//!
//! Observers are placed on future null rays X = Z(τ) + s·(1, n̂), so their
//! retarded time is τ and their retarded distance s·Ż(τ)·(1, n̂) is known in
//! advance. This makes it easy to target the transition shell ε < ξ̃ < 2ε.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::minkowski::{FourVector, Worldline};

/// An observer together with its known retarded data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observer {
    pub x: FourVector,
    pub tau_r: f64,
    pub xi: f64,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly distributed direction on the unit sphere.
pub fn unit_vector<R: Rng>(rng: &mut R) -> [f64; 3] {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).sqrt();
    [s * phi.cos(), s * phi.sin(), z]
}

/// The observer at retarded distance `xi` along direction `n` from Z(τ).
pub fn on_null_ray(w: &dyn Worldline, tau: f64, n: [f64; 3], xi: f64) -> Observer {
    let ray = FourVector::from_parts(1.0, n);
    let s = xi / w.velocity(tau).inner(&ray);
    Observer {
        x: w.position(tau) + ray * s,
        tau_r: tau,
        xi,
    }
}

/// `count` observers with τ_r uniform in `tau_range` and ξ̃ uniform in `xi_range`.
pub fn null_ray_cloud(
    w: &dyn Worldline,
    count: usize,
    tau_range: (f64, f64),
    xi_range: (f64, f64),
    seed: u64,
) -> Vec<Observer> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let tau = r.gen_range(tau_range.0..=tau_range.1);
            let xi = r.gen_range(xi_range.0..=xi_range.1);
            on_null_ray(w, tau, unit_vector(&mut r), xi)
        })
        .collect()
}

/// `count` points uniform in the box [t_lo, t_hi] × [−half, half]³.
pub fn box_cloud(count: usize, t_range: (f64, f64), half: f64, seed: u64) -> Vec<FourVector> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            FourVector::new(
                r.gen_range(t_range.0..=t_range.1),
                r.gen_range(-half..=half),
                r.gen_range(-half..=half),
                r.gen_range(-half..=half),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minkowski::CatalogWorldline;
    use crate::retarded::{kinematics, DEFAULT_TOL};

    #[test]
    fn null_ray_observers_have_the_requested_kinematics() {
        for w in [
            CatalogWorldline::Rest,
            CatalogWorldline::boost(0.6).unwrap(),
            CatalogWorldline::circular(1.0, 0.5).unwrap(),
        ] {
            for o in null_ray_cloud(&w, 50, (-1.0, 1.0), (0.1, 2.0), 7) {
                let k = kinematics(&w, &o.x, DEFAULT_TOL).unwrap();
                assert!((k.tau_r - o.tau_r).abs() < 1e-10);
                assert!((k.xi - o.xi).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn clouds_are_reproducible() {
        assert_eq!(box_cloud(5, (0.0, 1.0), 1.0, 3), box_cloud(5, (0.0, 1.0), 1.0, 3));
        assert_ne!(box_cloud(5, (0.0, 1.0), 1.0, 3), box_cloud(5, (0.0, 1.0), 1.0, 4));
    }
}

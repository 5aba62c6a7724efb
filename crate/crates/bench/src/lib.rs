//! Fixtures shared by the benchmarks in `benches/`.

use lwreg_core::minkowski::CatalogWorldline;
use lwreg_core::sampling::{null_ray_cloud, Observer};

pub fn catalog() -> Vec<CatalogWorldline> {
    vec![
        CatalogWorldline::Rest,
        CatalogWorldline::boost(0.6).expect("subluminal"),
        CatalogWorldline::hyperbolic(1.0).expect("positive acceleration"),
        CatalogWorldline::circular(1.0, 0.5).expect("subluminal"),
    ]
}

/// Observers on null rays with ξ̃ ∈ [lo, hi], fixed seed.
pub fn observers(w: &CatalogWorldline, count: usize, xi: (f64, f64)) -> Vec<Observer> {
    null_ray_cloud(w, count, (-2.0, 2.0), xi, 7)
}

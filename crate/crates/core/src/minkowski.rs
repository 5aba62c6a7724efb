//! Minkowski space with signature (+,-,-,-) in units where c = 1, and a
//! catalog of worldlines parametrized by eigentime.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Contravariant components (x0, x1, x2, x3) of a point or vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FourVector(pub [f64; 4]);

impl FourVector {
    pub const ZERO: FourVector = FourVector([0.0; 4]);

    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        FourVector([x0, x1, x2, x3])
    }

    /// Unit vector along coordinate axis `mu`.
    pub fn basis(mu: usize) -> Self {
        let mut c = [0.0; 4];
        c[mu] = 1.0;
        FourVector(c)
    }

    pub fn time(&self) -> f64 {
        self.0[0]
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }

    pub fn from_parts(t: f64, x: [f64; 3]) -> Self {
        FourVector([t, x[0], x[1], x[2]])
    }

    /// Minkowski inner product a0 b0 - a1 b1 - a2 b2 - a3 b3.
    pub fn inner(&self, other: &FourVector) -> f64 {
        minkowski_inner(self, other)
    }

    pub fn square(&self) -> f64 {
        self.inner(self)
    }

    /// Applies the metric: the covariant components of this vector.
    /// The metric is its own inverse, so this also raises an index.
    pub fn lower(&self) -> FourVector {
        let [a, b, c, d] = self.0;
        FourVector([a, -b, -c, -d])
    }

    /// Euclidean norm of all four components (used for scale-aware tolerances).
    pub fn euclidean_norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn spatial_norm(&self) -> f64 {
        norm3(&self.spatial())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Minkowski inner product with signature (+,-,-,-).
pub fn minkowski_inner(a: &FourVector, b: &FourVector) -> f64 {
    a.0[0] * b.0[0] - a.0[1] * b.0[1] - a.0[2] * b.0[2] - a.0[3] * b.0[3]
}

pub(crate) fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

impl Index<usize> for FourVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, o: FourVector) -> FourVector {
        FourVector(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl AddAssign for FourVector {
    fn add_assign(&mut self, o: FourVector) {
        for i in 0..4 {
            self.0[i] += o.0[i];
        }
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, o: FourVector) -> FourVector {
        FourVector(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Mul<f64> for FourVector {
    type Output = FourVector;
    fn mul(self, s: f64) -> FourVector {
        FourVector(self.0.map(|v| v * s))
    }
}

impl Mul<FourVector> for f64 {
    type Output = FourVector;
    fn mul(self, v: FourVector) -> FourVector {
        v * self
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector(self.0.map(|v| -v))
    }
}

impl fmt::Display for FourVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// Position, velocity and acceleration of a worldline at one eigentime.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WorldlinePoint {
    pub position: FourVector,
    pub velocity: FourVector,
    pub acceleration: FourVector,
}

/// A timelike curve Z(τ) parametrized by eigentime, with exact derivatives.
///
/// Implementors must keep Ż·Ż = 1 and Ż₀ > 0; [`validate_worldline`] checks
/// this on a grid.
pub trait Worldline: Send + Sync {
    fn label(&self) -> String;

    fn position(&self, tau: f64) -> FourVector;

    fn velocity(&self, tau: f64) -> FourVector;

    fn acceleration(&self, tau: f64) -> FourVector;

    fn eval(&self, tau: f64) -> WorldlinePoint {
        WorldlinePoint {
            position: self.position(tau),
            velocity: self.velocity(tau),
            acceleration: self.acceleration(tau),
        }
    }

    /// Eigentime at which the worldline reaches lab time `t`.
    ///
    /// The default inverts the strictly increasing Z₀ by safeguarded Newton.
    fn tau_at_lab_time(&self, t: f64) -> f64 {
        let mut lo = t - 1.0;
        let mut step = 1.0;
        while self.position(lo).time() > t {
            step *= 2.0;
            lo = t - step;
        }
        let mut hi = t + 1.0;
        step = 1.0;
        while self.position(hi).time() < t {
            step *= 2.0;
            hi = t + step;
        }
        let mut tau = 0.5 * (lo + hi);
        for _ in 0..200 {
            let g = self.position(tau).time() - t;
            if g > 0.0 {
                hi = tau;
            } else {
                lo = tau;
            }
            let mut next = tau - g / self.velocity(tau).time();
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - tau).abs() <= 1e-15 * (1.0 + tau.abs()) {
                return next;
            }
            tau = next;
        }
        tau
    }

    /// Whether the backward light cone of `x` meets the worldline at all.
    fn has_retarded_point(&self, _x: &FourVector) -> bool {
        true
    }
}

/// The analytic worldlines used throughout the crate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CatalogWorldline {
    /// Charge at rest at the spatial origin.
    Rest,
    /// Uniform motion with speed `v` along x1 through the origin.
    Boost { v: f64 },
    /// Uniform proper acceleration `a` along x1, Z(0) = (0, 1/a, 0, 0).
    Hyperbolic { a: f64 },
    /// Circle of radius `r` in the x1-x2 plane with lab angular frequency `omega`.
    Circular { r: f64, omega: f64 },
}

impl CatalogWorldline {
    pub fn rest() -> Self {
        CatalogWorldline::Rest
    }

    pub fn boost(v: f64) -> Result<Self, WorldlineError> {
        if !(v.abs() < 1.0) {
            return Err(WorldlineError::Superluminal { speed: v.abs() });
        }
        Ok(CatalogWorldline::Boost { v })
    }

    pub fn hyperbolic(a: f64) -> Result<Self, WorldlineError> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(WorldlineError::InvalidParameter(format!(
                "hyperbolic acceleration must be > 0, got {a}"
            )));
        }
        Ok(CatalogWorldline::Hyperbolic { a })
    }

    pub fn circular(r: f64, omega: f64) -> Result<Self, WorldlineError> {
        if !(r > 0.0 && omega.is_finite()) {
            return Err(WorldlineError::InvalidParameter(format!(
                "circular radius must be > 0, got {r}"
            )));
        }
        if !((r * omega).abs() < 1.0) {
            return Err(WorldlineError::Superluminal {
                speed: (r * omega).abs(),
            });
        }
        Ok(CatalogWorldline::Circular { r, omega })
    }

    fn gamma(v: f64) -> f64 {
        1.0 / (1.0 - v * v).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WorldlineError {
    #[error("worldline speed {speed} is not below the speed of light")]
    Superluminal { speed: f64 },
    #[error("{0}")]
    InvalidParameter(String),
    #[error("cannot parse worldline spec `{0}`; expected rest | boost(v) | hyperbolic(a) | circular(r, omega)")]
    Parse(String),
}

impl std::str::FromStr for CatalogWorldline {
    type Err = WorldlineError;

    /// Parses `rest`, `boost(v)`, `hyperbolic(a)` or `circular(r, omega)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let err = || WorldlineError::Parse(s.to_string());
        let (name, args) = match s.find('(') {
            Some(open) => {
                let close = s.rfind(')').filter(|c| *c == s.len() - 1).ok_or_else(err)?;
                let args = s[open + 1..close]
                    .split(',')
                    .map(|a| a.trim().parse::<f64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| err())?;
                (s[..open].trim(), args)
            }
            None => (s, Vec::new()),
        };
        match (name, args.as_slice()) {
            ("rest", []) => Ok(CatalogWorldline::Rest),
            ("boost", [v]) => CatalogWorldline::boost(*v),
            ("hyperbolic", [a]) => CatalogWorldline::hyperbolic(*a),
            ("circular", [r, w]) => CatalogWorldline::circular(*r, *w),
            _ => Err(err()),
        }
    }
}

impl fmt::Display for CatalogWorldline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogWorldline::Rest => write!(f, "rest"),
            CatalogWorldline::Boost { v } => write!(f, "boost({v})"),
            CatalogWorldline::Hyperbolic { a } => write!(f, "hyperbolic({a})"),
            CatalogWorldline::Circular { r, omega } => write!(f, "circular({r}, {omega})"),
        }
    }
}

impl Worldline for CatalogWorldline {
    fn label(&self) -> String {
        self.to_string()
    }

    fn position(&self, tau: f64) -> FourVector {
        match *self {
            CatalogWorldline::Rest => FourVector::new(tau, 0.0, 0.0, 0.0),
            CatalogWorldline::Boost { v } => {
                let g = Self::gamma(v);
                FourVector::new(g * tau, g * v * tau, 0.0, 0.0)
            }
            CatalogWorldline::Hyperbolic { a } => FourVector::new((a * tau).sinh() / a, (a * tau).cosh() / a, 0.0, 0.0),
            CatalogWorldline::Circular { r, omega } => {
                let g = Self::gamma(r * omega);
                let phase = omega * g * tau;
                FourVector::new(g * tau, r * phase.cos(), r * phase.sin(), 0.0)
            }
        }
    }

    fn velocity(&self, tau: f64) -> FourVector {
        match *self {
            CatalogWorldline::Rest => FourVector::new(1.0, 0.0, 0.0, 0.0),
            CatalogWorldline::Boost { v } => {
                let g = Self::gamma(v);
                FourVector::new(g, g * v, 0.0, 0.0)
            }
            CatalogWorldline::Hyperbolic { a } => FourVector::new((a * tau).cosh(), (a * tau).sinh(), 0.0, 0.0),
            CatalogWorldline::Circular { r, omega } => {
                let g = Self::gamma(r * omega);
                let phase = omega * g * tau;
                let s = g * r * omega;
                FourVector::new(g, -s * phase.sin(), s * phase.cos(), 0.0)
            }
        }
    }

    fn acceleration(&self, tau: f64) -> FourVector {
        match *self {
            CatalogWorldline::Rest | CatalogWorldline::Boost { .. } => FourVector::ZERO,
            CatalogWorldline::Hyperbolic { a } => FourVector::new(a * (a * tau).sinh(), a * (a * tau).cosh(), 0.0, 0.0),
            CatalogWorldline::Circular { r, omega } => {
                let g = Self::gamma(r * omega);
                let phase = omega * g * tau;
                let s = g * g * r * omega * omega;
                FourVector::new(0.0, -s * phase.cos(), -s * phase.sin(), 0.0)
            }
        }
    }

    fn tau_at_lab_time(&self, t: f64) -> f64 {
        match *self {
            CatalogWorldline::Rest => t,
            CatalogWorldline::Boost { v } => t / Self::gamma(v),
            CatalogWorldline::Hyperbolic { a } => (a * t).asinh() / a,
            CatalogWorldline::Circular { r, omega } => t / Self::gamma(r * omega),
        }
    }

    fn has_retarded_point(&self, x: &FourVector) -> bool {
        match *self {
            // the past light cone only reaches the worldline in front of the horizon x0 + x1 = 0
            CatalogWorldline::Hyperbolic { .. } => x.0[0] + x.0[1] > 0.0,
            _ => true,
        }
    }
}

pub const EIGENTIME_TOLERANCE: f64 = 1e-10;

/// Which worldline invariant failed, and where.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum WorldlineViolation {
    NotUnitSpeed { tau: f64, residual: f64 },
    NotOrthogonal { tau: f64, residual: f64 },
    PastDirected { tau: f64, velocity_time: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorldlineReport {
    pub label: String,
    pub max_unit_residual: f64,
    pub max_orthogonality_residual: f64,
    pub min_velocity_time: f64,
    pub violations: Vec<WorldlineViolation>,
}

impl WorldlineReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks Ż·Ż = 1, Ż·Z̈ = 0 and Ż₀ > 0 on `taus`. Only the worst offender of
/// each kind is recorded.
pub fn validate_worldline(w: &dyn Worldline, taus: &[f64]) -> WorldlineReport {
    assert!(!taus.is_empty(), "validate_worldline needs a nonempty grid");
    let mut unit = (0.0f64, taus[0]);
    let mut orth = (0.0f64, taus[0]);
    let mut vt = (f64::INFINITY, taus[0]);
    for &tau in taus {
        let p = w.eval(tau);
        let r1 = (p.velocity.square() - 1.0).abs();
        let r2 = p.velocity.inner(&p.acceleration).abs();
        if r1 > unit.0 {
            unit = (r1, tau);
        }
        if r2 > orth.0 {
            orth = (r2, tau);
        }
        if p.velocity.time() < vt.0 {
            vt = (p.velocity.time(), tau);
        }
    }
    let mut violations = Vec::new();
    if unit.0 > EIGENTIME_TOLERANCE {
        violations.push(WorldlineViolation::NotUnitSpeed {
            tau: unit.1,
            residual: unit.0,
        });
    }
    if orth.0 > EIGENTIME_TOLERANCE {
        violations.push(WorldlineViolation::NotOrthogonal {
            tau: orth.1,
            residual: orth.0,
        });
    }
    if !(vt.0 > 0.0) {
        violations.push(WorldlineViolation::PastDirected {
            tau: vt.1,
            velocity_time: vt.0,
        });
    }
    WorldlineReport {
        label: w.label(),
        max_unit_residual: unit.0,
        max_orthogonality_residual: orth.0,
        min_velocity_time: vt.0,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog() -> Vec<CatalogWorldline> {
        vec![
            CatalogWorldline::Rest,
            CatalogWorldline::boost(0.6).unwrap(),
            CatalogWorldline::hyperbolic(1.0).unwrap(),
            CatalogWorldline::circular(1.0, 0.5).unwrap(),
        ]
    }

    #[test]
    fn inner_product_examples() {
        let t = FourVector::new(1.0, 0.0, 0.0, 0.0);
        let n = FourVector::new(1.0, 1.0, 0.0, 0.0);
        let s = FourVector::new(0.0, 1.0, 0.0, 0.0);
        assert_eq!(minkowski_inner(&t, &t), 1.0);
        assert_eq!(minkowski_inner(&n, &n), 0.0);
        assert_eq!(minkowski_inner(&s, &s), -1.0);
    }

    #[test]
    fn rest_worldline_at_two() {
        let p = CatalogWorldline::Rest.eval(2.0);
        assert_eq!(p.position, FourVector::new(2.0, 0.0, 0.0, 0.0));
        assert_eq!(p.velocity, FourVector::new(1.0, 0.0, 0.0, 0.0));
        assert_eq!(p.acceleration, FourVector::ZERO);
    }

    #[test]
    fn hyperbolic_at_origin() {
        let p = CatalogWorldline::hyperbolic(1.0).unwrap().eval(0.0);
        assert_eq!(p.position, FourVector::new(0.0, 1.0, 0.0, 0.0));
        assert_eq!(p.velocity, FourVector::new(1.0, 0.0, 0.0, 0.0));
        assert_eq!(p.acceleration, FourVector::new(0.0, 1.0, 0.0, 0.0));
    }

    #[test]
    fn boost_velocity() {
        let u = CatalogWorldline::boost(0.6).unwrap().velocity(1.0);
        for (a, b) in u.0.iter().zip([1.25, 0.75, 0.0, 0.0]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn validation_passes_for_catalog() {
        let grid: Vec<f64> = (-50..=50).map(|k| k as f64 * 0.1).collect();
        let rest = validate_worldline(&CatalogWorldline::Rest, &grid);
        assert!(rest.passed());
        assert_eq!(rest.max_unit_residual, 0.0);
        assert_eq!(rest.max_orthogonality_residual, 0.0);
        let hyp_grid: Vec<f64> = (-20..=20).map(|k| k as f64 * 0.1).collect();
        let hyp = validate_worldline(&CatalogWorldline::hyperbolic(1.0).unwrap(), &hyp_grid);
        assert!(hyp.passed(), "{hyp:?}");
        for w in catalog() {
            assert!(validate_worldline(&w, &hyp_grid).passed(), "{w}");
        }
    }

    struct Stretched;
    impl Worldline for Stretched {
        fn label(&self) -> String {
            "stretched".into()
        }
        fn position(&self, tau: f64) -> FourVector {
            FourVector::new(2.0 * tau, 0.0, 0.0, 0.0)
        }
        fn velocity(&self, _: f64) -> FourVector {
            FourVector::new(2.0, 0.0, 0.0, 0.0)
        }
        fn acceleration(&self, _: f64) -> FourVector {
            FourVector::ZERO
        }
    }

    #[test]
    fn non_eigentime_curve_is_reported() {
        let r = validate_worldline(&Stretched, &[0.0, 1.0]);
        assert!(!r.passed());
        assert_eq!(r.max_unit_residual, 3.0);
        assert!(matches!(r.violations[0], WorldlineViolation::NotUnitSpeed { residual, .. } if residual == 3.0));
    }

    #[test]
    fn lab_time_inversion() {
        for w in catalog() {
            for t in [-3.0, -0.5, 0.0, 1.7] {
                let tau = w.tau_at_lab_time(t);
                assert!((w.position(tau).time() - t).abs() < 1e-12);
                // the generic default agrees with the closed forms
                assert!((Stretched.tau_at_lab_time(t) - t / 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn parse_specs() {
        assert_eq!("rest".parse::<CatalogWorldline>().unwrap(), CatalogWorldline::Rest);
        assert_eq!(
            "boost(0.6)".parse::<CatalogWorldline>().unwrap(),
            CatalogWorldline::Boost { v: 0.6 }
        );
        assert_eq!(
            " circular( 1.0 , 0.5 )".parse::<CatalogWorldline>().unwrap(),
            CatalogWorldline::Circular { r: 1.0, omega: 0.5 }
        );
        assert!("boost(1.2)".parse::<CatalogWorldline>().is_err());
        assert!("warp(2)".parse::<CatalogWorldline>().is_err());
        assert!("boost(0.1".parse::<CatalogWorldline>().is_err());
        for w in catalog() {
            assert_eq!(w.to_string().parse::<CatalogWorldline>().unwrap(), w);
        }
    }
}

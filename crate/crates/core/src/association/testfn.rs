//! Smooth compactly supported test functions.

use std::f64::consts::PI;

use crate::jet::{Jet, ORDER};
use crate::minkowski::FourVector;
use crate::quad;

/// b(s) = exp(−1/(1−s)) for s < 1, with s the squared scaled radius.
fn profile(s: f64) -> [f64; 3] {
    if s >= 1.0 {
        return [0.0; 3];
    }
    let q = 1.0 - s;
    let b = (-1.0 / q).exp();
    let b1 = -b / (q * q);
    let b2 = b * (1.0 / q.powi(4) - 2.0 / q.powi(3));
    [b, b1, b2]
}

/// ∫_{|y|<1} exp(−1/(1−|y|²)) dy in `dim` dimensions, by radial quadrature.
pub fn unit_ball_bump_integral(dim: usize) -> f64 {
    let sphere = match dim {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        4 => 2.0 * PI * PI,
        _ => panic!("unsupported dimension {dim}"),
    };
    sphere * quad::adaptive(|r| profile(r * r)[0] * r.powi(dim as i32 - 1), 0.0, 1.0, 1e-15).value
}

/// φ(x) = (1 + a·y)·exp(−1/(1−|y|²)) with y = (x − c)/r, zero outside the ball.
///
/// The modulation `a` is optional; the factor is affine, so □ of the product
/// stays in closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpBall {
    pub center: Vec<f64>,
    pub radius: f64,
    pub modulation: Option<Vec<f64>>,
}

impl BumpBall {
    pub fn new(center: Vec<f64>, radius: f64) -> Self {
        assert!(radius > 0.0, "test function radius must be positive");
        BumpBall {
            center,
            radius,
            modulation: None,
        }
    }

    pub fn with_modulation(mut self, a: Vec<f64>) -> Self {
        assert_eq!(a.len(), self.center.len(), "modulation dimension");
        self.modulation = Some(a);
        self
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    fn scaled(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.center)
            .map(|(xi, ci)| (xi - ci) / self.radius)
            .collect()
    }

    fn factor(&self, y: &[f64]) -> f64 {
        match &self.modulation {
            Some(a) => 1.0 + a.iter().zip(y).map(|(a, y)| a * y).sum::<f64>(),
            None => 1.0,
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let y = self.scaled(x);
        let s: f64 = y.iter().map(|v| v * v).sum();
        if s >= 1.0 {
            return 0.0;
        }
        self.factor(&y) * profile(s)[0]
    }

    /// □φ = ∂₀²φ − ∂₁²φ − ∂₂²φ − ∂₃²φ for a four-dimensional ball.
    pub fn box_value(&self, x: &FourVector) -> f64 {
        assert_eq!(self.dim(), 4, "d'Alembertian needs a spacetime test function");
        let y = self.scaled(&x.0);
        let s: f64 = y.iter().map(|v| v * v).sum();
        if s >= 1.0 {
            return 0.0;
        }
        let [_, b1, b2] = profile(s);
        let yy = y[0] * y[0] - y[1] * y[1] - y[2] * y[2] - y[3] * y[3];
        let r2 = self.radius * self.radius;
        let plain = 4.0 * b2 * yy / r2 - 4.0 * b1 / r2;
        match &self.modulation {
            None => plain,
            Some(a) => {
                let ay = a[0] * y[0] - a[1] * y[1] - a[2] * y[2] - a[3] * y[3];
                self.factor(&y) * plain + 4.0 * b1 * ay / r2
            }
        }
    }

    /// ∫φ; the affine modulation integrates to zero by symmetry.
    pub fn integral(&self) -> f64 {
        unit_ball_bump_integral(self.dim()) * self.radius.powi(self.dim() as i32)
    }
}

/// A test function on spacetime with a known d'Alembertian and support ball.
pub trait SpacetimeTest: Sync {
    fn value(&self, x: &FourVector) -> f64;
    fn box_value(&self, x: &FourVector) -> f64;
    /// Center and radius of a Euclidean ball containing the support.
    fn support(&self) -> (FourVector, f64);
}

impl SpacetimeTest for BumpBall {
    fn value(&self, x: &FourVector) -> f64 {
        BumpBall::value(self, &x.0)
    }

    fn box_value(&self, x: &FourVector) -> f64 {
        BumpBall::box_value(self, x)
    }

    fn support(&self) -> (FourVector, f64) {
        let c = &self.center;
        (FourVector::new(c[0], c[1], c[2], c[3]), self.radius)
    }
}

/// Σ aₖ φₖ; the support is the smallest ball around the first center that
/// contains every term.
#[derive(Debug, Clone)]
pub struct Combination(pub Vec<(f64, BumpBall)>);

impl SpacetimeTest for Combination {
    fn value(&self, x: &FourVector) -> f64 {
        self.0.iter().map(|(a, f)| a * f.value(&x.0)).sum()
    }

    fn box_value(&self, x: &FourVector) -> f64 {
        self.0.iter().map(|(a, f)| a * f.box_value(x)).sum()
    }

    fn support(&self) -> (FourVector, f64) {
        let (c0, _) = self.0[0].1.support();
        let r = self
            .0
            .iter()
            .map(|(_, f)| {
                let (c, r) = f.support();
                (c - c0).euclidean_norm() + r
            })
            .fold(0.0, f64::max);
        (c0, r)
    }
}

/// One-dimensional test function P(t)·exp(−1/(1−y²)), y = (t − c)/r, with
/// exact derivatives from Taylor jets.
#[derive(Debug, Clone, PartialEq)]
pub struct LineTest {
    /// Polynomial coefficients, lowest degree first.
    pub poly: Vec<f64>,
    pub center: f64,
    pub radius: f64,
}

impl LineTest {
    pub fn new(poly: Vec<f64>, center: f64, radius: f64) -> Self {
        assert!(radius > 0.0, "test function radius must be positive");
        LineTest { poly, center, radius }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.radius, self.center + self.radius)
    }

    /// Taylor jet of the function at `t`.
    pub fn jet(&self, t: f64) -> Jet {
        let y = (t - self.center) / self.radius;
        if y.abs() >= 1.0 {
            return Jet::constant(0.0);
        }
        let yj = (Jet::variable(t) + (-self.center)).scale(1.0 / self.radius);
        let q = (yj * yj).scale(-1.0) + 1.0;
        let bump = (-q.recip()).exp();
        let x = Jet::variable(t);
        let p = self.poly.iter().rev().fold(Jet::constant(0.0), |acc, c| acc * x + *c);
        p * bump
    }

    pub fn value(&self, t: f64) -> f64 {
        let y = (t - self.center) / self.radius;
        if y.abs() >= 1.0 {
            return 0.0;
        }
        let p = self.poly.iter().rev().fold(0.0, |acc, c| acc * t + c);
        p * (-1.0 / (1.0 - y * y)).exp()
    }
}

/// Operations on one-dimensional test functions that keep exact jets.
#[derive(Debug, Clone, PartialEq)]
pub enum LineFn {
    Base(LineTest),
    /// φ′
    Derivative(Box<LineFn>),
    /// t·φ
    TimesT(Box<LineFn>),
    /// φ(−t)
    Mirror(Box<LineFn>),
}

impl LineFn {
    pub fn derivative(self) -> Self {
        LineFn::Derivative(Box::new(self))
    }

    pub fn times_t(self) -> Self {
        LineFn::TimesT(Box::new(self))
    }

    pub fn mirror(self) -> Self {
        LineFn::Mirror(Box::new(self))
    }

    /// Support interval.
    pub fn support(&self) -> (f64, f64) {
        match self {
            LineFn::Base(b) => b.support(),
            LineFn::Derivative(f) | LineFn::TimesT(f) => f.support(),
            LineFn::Mirror(f) => {
                let (a, b) = f.support();
                (-b, -a)
            }
        }
    }

    /// Jet at `t`; every `Derivative` layer costs one order of accuracy.
    pub fn jet(&self, t: f64) -> Jet {
        match self {
            LineFn::Base(b) => b.jet(t),
            LineFn::Derivative(f) => {
                let c = f.jet(t).0;
                let mut out = [0.0; ORDER + 1];
                for k in 0..ORDER {
                    out[k] = (k + 1) as f64 * c[k + 1];
                }
                Jet(out)
            }
            LineFn::TimesT(f) => f.jet(t) * Jet::variable(t),
            LineFn::Mirror(f) => {
                let mut c = f.jet(-t).0;
                for (k, v) in c.iter_mut().enumerate() {
                    if k % 2 == 1 {
                        *v = -*v;
                    }
                }
                Jet(c)
            }
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            LineFn::Base(b) => b.value(t),
            LineFn::TimesT(f) => t * f.value(t),
            LineFn::Mirror(f) => f.value(-t),
            LineFn::Derivative(_) => self.jet(t).value(),
        }
    }

    /// k-th derivative at t.
    pub fn derivative_at(&self, k: usize, t: f64) -> f64 {
        self.jet(t).derivative(k)
    }
}

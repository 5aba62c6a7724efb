//! Truncated Taylor series in one variable, used to get exact derivatives of
//! smooth test functions.

use std::ops::{Add, Mul, Neg, Sub};

/// Number of retained coefficients minus one.
pub const ORDER: usize = 14;

/// Taylor coefficients c_k = f^{(k)}(x₀)/k! for k ≤ [`ORDER`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet(pub [f64; ORDER + 1]);

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; ORDER + 1];
        c[0] = v;
        Jet(c)
    }

    /// The identity function expanded at `x0`.
    pub fn variable(x0: f64) -> Self {
        let mut c = [0.0; ORDER + 1];
        c[0] = x0;
        c[1] = 1.0;
        Jet(c)
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// k-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> f64 {
        if k > ORDER {
            return f64::NAN;
        }
        self.0[k] * factorial(k)
    }

    pub fn scale(self, s: f64) -> Self {
        Jet(self.0.map(|c| c * s))
    }

    pub fn recip(self) -> Self {
        let a = self.0;
        assert!(a[0] != 0.0, "reciprocal of a jet with zero constant term");
        let mut b = [0.0; ORDER + 1];
        b[0] = 1.0 / a[0];
        for k in 1..=ORDER {
            let s: f64 = (1..=k).map(|j| a[j] * b[k - j]).sum();
            b[k] = -s / a[0];
        }
        Jet(b)
    }

    pub fn exp(self) -> Self {
        let a = self.0;
        let mut b = [0.0; ORDER + 1];
        b[0] = a[0].exp();
        // b' = a' b  ⇒  k b_k = Σ j a_j b_{k-j}
        for k in 1..=ORDER {
            let s: f64 = (1..=k).map(|j| j as f64 * a[j] * b[k - j]).sum();
            b[k] = s / k as f64;
        }
        Jet(b)
    }

    pub fn powi(self, n: u32) -> Self {
        (0..n).fold(Jet::constant(1.0), |acc, _| acc * self)
    }
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * j as f64)
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut c = self.0;
        for (x, y) in c.iter_mut().zip(o.0) {
            *x += y;
        }
        Jet(c)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, v: f64) -> Jet {
        self.0[0] += v;
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut c = [0.0; ORDER + 1];
        for (i, a) in self.0.iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            for j in 0..=ORDER - i {
                c[i + j] += a * o.0[j];
            }
        }
        Jet(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_derivatives() {
        // d^k/dx^k e^{2x} = 2^k e^{2x}
        let j = Jet::variable(0.3).scale(2.0).exp();
        for k in 0..=8 {
            let expect = 2f64.powi(k as i32) * 0.6f64.exp();
            assert!((j.derivative(k) - expect).abs() < 1e-12 * expect);
        }
    }

    #[test]
    fn reciprocal() {
        // 1/(1-x) at x=0.5: k-th derivative k!/(0.5)^{k+1}
        let j = (Jet::variable(0.5).scale(-1.0) + 1.0).recip();
        for k in 0..=10 {
            let expect = factorial(k) / 0.5f64.powi(k as i32 + 1);
            assert!((j.derivative(k) - expect).abs() < 1e-11 * expect);
        }
    }

    #[test]
    fn product_rule() {
        let x = Jet::variable(1.2);
        let p = x.powi(3) * x.scale(3.0).exp();
        // (x³ e^{3x})' = (3x² + 3x³) e^{3x}
        let expect = (3.0 * 1.44 + 3.0 * 1.728) * 3.6f64.exp();
        assert!((p.derivative(1) - expect).abs() < 1e-12 * expect);
    }
}

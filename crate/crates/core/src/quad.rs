//! One-dimensional quadrature: Gauss–Legendre rules, composite panels and an
//! adaptive Gauss–Kronrod (7/15) integrator.

use std::f64::consts::PI;

/// A Gauss–Legendre rule on the reference interval [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the `n`-point rule by Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// Composite rule: `panels` equal sub-intervals of `[a, b]`.
    pub fn composite<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, panels: usize, mut f: F) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = a + h * k as f64;
                self.integrate(lo, lo + h, &mut f)
            })
            .sum()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { p0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

/// Adaptive Gauss–Kronrod integration to absolute tolerance `tol`.
///
/// Panels are bisected depth-first; the sum is accumulated in a fixed order so
/// repeated runs are bit-identical.
pub fn adaptive<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Estimate {
    adaptive_mixed(f, a, b, tol, 1e-15)
}

/// Adaptive integration to relative tolerance `rel`, for integrands whose
/// magnitude can be far below any sensible absolute tolerance.
pub fn adaptive_relative<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, rel: f64) -> Estimate {
    adaptive_mixed(f, a, b, 1e-290, rel)
}

fn adaptive_mixed<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64, rel: f64) -> Estimate {
    if a == b {
        return Estimate {
            value: 0.0,
            error: 0.0,
            converged: true,
        };
    }
    let mut value = 0.0;
    let mut error = 0.0;
    let mut converged = true;
    let mut stack = vec![(a, b, tol, 0u32)];
    while let Some((lo, hi, t, depth)) = stack.pop() {
        let (v, e) = gk15(&mut f, lo, hi);
        if e <= t.max(rel * v.abs()) || depth >= 40 {
            if depth >= 40 && e > t {
                converged = false;
            }
            value += v;
            error += e;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, 0.5 * t, depth + 1));
            stack.push((lo, mid, 0.5 * t, depth + 1));
        }
    }
    Estimate {
        value,
        error,
        converged,
    }
}

/// Adaptive integration over consecutive break points.
pub fn adaptive_breaks<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], tol: f64) -> Estimate {
    let mut out = Estimate {
        value: 0.0,
        error: 0.0,
        converged: true,
    };
    let pieces = breaks.len().saturating_sub(1).max(1);
    for w in breaks.windows(2) {
        let e = adaptive(&mut f, w[0], w[1], tol / pieces as f64);
        out.value += e.value;
        out.error += e.error;
        out.converged &= e.converged;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let rule = GaussLegendre::new(6);
        // degree 11 is the highest exact degree for 6 nodes
        let v = rule.integrate(-1.0, 2.0, |x| x.powi(11) - 3.0 * x.powi(4) + 1.0);
        let exact = (2f64.powi(12) - 1.0) / 12.0 - 3.0 * (32.0 + 1.0) / 5.0 + 3.0;
        assert!((v - exact).abs() < 1e-11, "{v} vs {exact}");
        let wsum: f64 = rule.mapped(-1.0, 1.0).map(|(_, w)| w).sum();
        assert!((wsum - 2.0).abs() < 1e-14);
    }

    #[test]
    fn large_rules_stay_accurate() {
        let rule = GaussLegendre::new(64);
        let v = rule.integrate(0.0, PI, f64::sin);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_bump() {
        let bump = |u: f64| {
            if u.abs() < 1.0 {
                (-1.0 / (1.0 - u * u)).exp()
            } else {
                0.0
            }
        };
        let e = adaptive(bump, -1.0, 1.0, 1e-14);
        assert!(e.converged);
        assert!((e.value - 0.443_993_816_168_079_437_8).abs() < 1e-13);
    }

    #[test]
    fn adaptive_log_singularity() {
        let e = adaptive(|x: f64| x.ln(), 0.0, 1.0, 1e-10);
        assert!((e.value + 1.0).abs() < 1e-9);
    }
}

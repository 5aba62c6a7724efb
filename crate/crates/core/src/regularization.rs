//! Heaviside regularizations H_ε(r) = ∫₀^{r/ε} χ(t) dt built from a mollifier χ
//! supported in [1, 2], and ε-indexed nets with moderateness estimates.

use std::sync::Arc;

use serde::Serialize;

use crate::quad;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RegularizationError {
    #[error("invalid mollifier: {0}")]
    InvalidMollifier(String),
    #[error("operation needs H'' but the family is only piecewise smooth")]
    SmoothnessRequired,
    #[error("invalid epsilon grid: {0}")]
    InvalidGrid(String),
    #[error("net is negligible at machine precision: seminorm vanishes at eps = {eps}")]
    DegenerateNet { eps: f64 },
    #[error("slope estimation needs at least {needed} grid points, got {got}")]
    InsufficientGrid { needed: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothness {
    Smooth,
    Piecewise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// exp(-1/(1-u²)) on the support, rescaled.
    Bump,
    /// Constant on the support.
    Boxcar,
}

/// Nonnegative mollifier with compact support `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mollifier {
    profile: Profile,
    lo: f64,
    hi: f64,
    scale: f64,
}

/// ∫_{-1}^{1} exp(-1/(1-u²)) du, computed once.
fn bump_mass() -> f64 {
    use std::sync::OnceLock;
    static MASS: OnceLock<f64> = OnceLock::new();
    *MASS.get_or_init(|| quad::adaptive(raw_bump, -1.0, 1.0, 1e-15).value)
}

fn raw_bump(u: f64) -> f64 {
    if u.abs() < 1.0 {
        (-1.0 / (1.0 - u * u)).exp()
    } else {
        0.0
    }
}

impl Mollifier {
    /// Normalized smooth bump on [1, 2].
    pub fn bump() -> Self {
        Self::bump_on(1.0, 2.0)
    }

    /// Normalized smooth bump on an arbitrary interval.
    pub fn bump_on(lo: f64, hi: f64) -> Self {
        assert!(hi > lo, "empty support");
        Mollifier {
            profile: Profile::Bump,
            lo,
            hi,
            scale: 2.0 / ((hi - lo) * bump_mass()),
        }
    }

    /// Indicator of [1, 2].
    pub fn boxcar() -> Self {
        Mollifier {
            profile: Profile::Boxcar,
            lo: 1.0,
            hi: 2.0,
            scale: 1.0,
        }
    }

    /// The same profile multiplied by `factor` (breaks normalization unless `factor == 1`).
    pub fn scaled(self, factor: f64) -> Self {
        Mollifier {
            scale: self.scale * factor,
            ..self
        }
    }

    pub fn profile(&self) -> Profile {
        self.profile
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn smoothness(&self) -> Smoothness {
        match self.profile {
            Profile::Bump => Smoothness::Smooth,
            Profile::Boxcar => Smoothness::Piecewise,
        }
    }

    fn unit(&self, s: f64) -> f64 {
        (2.0 * s - (self.lo + self.hi)) / (self.hi - self.lo)
    }

    pub fn value(&self, s: f64) -> f64 {
        match self.profile {
            Profile::Bump => self.scale * raw_bump(self.unit(s)),
            Profile::Boxcar => {
                if s >= self.lo && s <= self.hi {
                    self.scale
                } else {
                    0.0
                }
            }
        }
    }

    /// χ'(s). The boxcar returns its almost-everywhere derivative, 0.
    pub fn derivative(&self, s: f64) -> f64 {
        match self.profile {
            Profile::Bump => {
                let u = self.unit(s);
                if u.abs() >= 1.0 {
                    return 0.0;
                }
                let q = 1.0 - u * u;
                let du = 2.0 / (self.hi - self.lo);
                self.scale * (-1.0 / q).exp() * (-2.0 * u / (q * q)) * du
            }
            Profile::Boxcar => 0.0,
        }
    }

    /// sup χ.
    pub fn max_value(&self) -> f64 {
        match self.profile {
            Profile::Bump => self.scale * (-1.0f64).exp(),
            Profile::Boxcar => self.scale,
        }
    }

    /// ∫χ by adaptive quadrature.
    pub fn integral(&self) -> f64 {
        match self.profile {
            Profile::Boxcar => self.scale * (self.hi - self.lo),
            Profile::Bump => quad::adaptive(|s| self.value(s), self.lo, self.hi, 1e-14).value,
        }
    }

    /// Checks χ ≥ 0, ∫χ = 1 (to 1e-10) and supp χ ⊆ [1, 2].
    pub fn validate(&self) -> Result<(), RegularizationError> {
        if self.lo < 1.0 || self.hi > 2.0 {
            return Err(RegularizationError::InvalidMollifier(format!(
                "support [{}, {}] is not contained in [1, 2]",
                self.lo, self.hi
            )));
        }
        if !(self.scale >= 0.0) {
            return Err(RegularizationError::InvalidMollifier(
                "mollifier must be nonnegative".into(),
            ));
        }
        let mass = self.integral();
        if (mass - 1.0).abs() > 1e-10 {
            return Err(RegularizationError::InvalidMollifier(format!(
                "integral is {mass}, expected 1"
            )));
        }
        Ok(())
    }
}

/// Cumulative integral of χ on a graded grid of its support.
///
/// Cells are at most 1/1024 of the support wide and never wider than half the
/// local variation scale of the bump, (1 − u²)²/2 in the unit variable u. Near
/// the edges, where χ is exponentially small, this keeps a fixed Gauss rule on
/// any partial cell accurate in the relative sense.
#[derive(Debug)]
struct CumulativeTable {
    nodes: Vec<f64>,
    partial: Vec<f64>,
    rule: quad::GaussLegendre,
}

impl CumulativeTable {
    fn new(m: &Mollifier) -> Self {
        let (lo, hi) = m.support();
        let half = 0.5 * (hi - lo);
        let mid = lo + half;
        let step_at = |s: f64| {
            let u = (s - mid) / half;
            let q = (1.0 - u * u).max(0.0);
            (half / 512.0).min(0.25 * q * q * half)
        };
        // walk outward from the middle until χ underflows
        let mut upper = vec![mid];
        let mut s = mid;
        while s < hi && m.value(s) > 0.0 {
            s += step_at(s);
            upper.push(s.min(hi));
        }
        let mut lower = Vec::new();
        let mut s = mid;
        while s > lo && m.value(s) > 0.0 {
            s -= step_at(s);
            lower.push(s.max(lo));
        }
        let mut nodes: Vec<f64> = lower.into_iter().rev().collect();
        if nodes.first() != Some(&lo) {
            nodes.insert(0, lo);
        }
        nodes.extend(upper);
        if nodes.last() != Some(&hi) {
            nodes.push(hi);
        }
        let mut partial = Vec::with_capacity(nodes.len());
        let mut acc = 0.0;
        partial.push(0.0);
        for w in nodes.windows(2) {
            acc += quad::adaptive_relative(|t| m.value(t), w[0], w[1], 1e-9).value;
            partial.push(acc);
        }
        CumulativeTable {
            nodes,
            partial,
            rule: quad::GaussLegendre::new(10),
        }
    }

    fn total(&self) -> f64 {
        *self.partial.last().expect("table has nodes")
    }

    fn eval(&self, m: &Mollifier, s: f64) -> f64 {
        let i = self.nodes.partition_point(|n| *n <= s).clamp(1, self.nodes.len() - 1) - 1;
        let a = self.nodes[i];
        self.partial[i] + self.rule.integrate(a, s, |t| m.value(t))
    }
}

/// The family ε ↦ H_ε with H_ε(r) = H₁(r/ε).
#[derive(Debug, Clone)]
pub struct HeavisideFamily {
    mollifier: Mollifier,
    table: Option<Arc<CumulativeTable>>,
    total: f64,
}

/// Builds H_ε from a validated mollifier.
pub fn make_family(chi: Mollifier) -> Result<HeavisideFamily, RegularizationError> {
    chi.validate()?;
    Ok(HeavisideFamily::new_unchecked(chi))
}

impl HeavisideFamily {
    pub fn bump() -> Self {
        make_family(Mollifier::bump()).expect("built-in bump is a valid mollifier")
    }

    pub fn boxcar() -> Self {
        make_family(Mollifier::boxcar()).expect("built-in boxcar is a valid mollifier")
    }

    /// Builds the family without checking the mollifier; used to exhibit
    /// violations in [`family_check`].
    pub fn new_unchecked(chi: Mollifier) -> Self {
        let table = match chi.profile {
            Profile::Bump => Some(Arc::new(CumulativeTable::new(&chi))),
            Profile::Boxcar => None,
        };
        let total = match &table {
            Some(t) => t.total(),
            None => chi.integral(),
        };
        HeavisideFamily {
            mollifier: chi,
            table,
            total,
        }
    }

    pub fn mollifier(&self) -> &Mollifier {
        &self.mollifier
    }

    pub fn is_smooth(&self) -> bool {
        self.mollifier.smoothness() == Smoothness::Smooth
    }

    pub fn require_smooth(&self) -> Result<(), RegularizationError> {
        if self.is_smooth() {
            Ok(())
        } else {
            Err(RegularizationError::SmoothnessRequired)
        }
    }

    /// H₁(s) = ∫₀^s χ.
    pub fn unit_step(&self, s: f64) -> f64 {
        let (lo, hi) = self.mollifier.support();
        if s <= lo {
            0.0
        } else if s >= hi {
            self.total
        } else {
            match &self.table {
                Some(t) => t.eval(&self.mollifier, s),
                None => self.mollifier.scale * (s - lo),
            }
        }
    }

    pub fn h(&self, r: f64, eps: f64) -> f64 {
        self.unit_step(r / eps)
    }

    /// H'_ε(r) = χ(r/ε)/ε.
    pub fn h1(&self, r: f64, eps: f64) -> f64 {
        self.mollifier.value(r / eps) / eps
    }

    /// H''_ε(r) = χ'(r/ε)/ε². Zero almost everywhere for a piecewise family.
    pub fn h2(&self, r: f64, eps: f64) -> f64 {
        self.mollifier.derivative(r / eps) / (eps * eps)
    }

    /// c_ε = sup H'_ε = sup χ / ε.
    pub fn sup_h1(&self, eps: f64) -> f64 {
        self.mollifier.max_value() / eps
    }
}

/// Outcome of [`family_check`].
#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    /// (i) H_ε ≥ 0 and H'_ε ≥ 0.
    pub nonnegative: bool,
    /// (ii) H_ε(r) = 0 for r ≤ ε.
    pub vanishes_below: bool,
    /// (iii) H_ε(r) = 1 for r ≥ 2ε.
    pub equals_one_above: bool,
    /// (iv) ε H'_ε bounded uniformly in ε.
    pub uniformly_bounded: bool,
    /// sup over the grids of ε H'_ε(r), with the (ε, r) where it is attained.
    pub sup_eps_h1: f64,
    pub sup_location: (f64, f64),
    /// Per-ε supremum of ε H'_ε, in grid order.
    pub sup_per_eps: Vec<f64>,
    pub violations: Vec<String>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Numerically verifies properties (i)-(iv) of a Heaviside family.
///
/// Besides `r_grid`, every ε is probed at 257 equally spaced points of
/// [ε, 2ε] and at r = ε, 2ε exactly. Property (iv) is judged by requiring the
/// per-ε suprema not to grow as ε decreases.
pub fn family_check(family: &HeavisideFamily, eps_grid: &[f64], r_grid: &[f64]) -> FamilyReport {
    assert!(
        !eps_grid.is_empty() && !r_grid.is_empty(),
        "family_check needs nonempty grids"
    );
    const TOL: f64 = 1e-12;
    let mut violations = Vec::new();
    let mut nonneg = true;
    let mut below = true;
    let mut above = true;
    let mut sup = f64::NEG_INFINITY;
    let mut sup_at = (eps_grid[0], f64::NAN);
    let mut sup_per_eps = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let shell = (0..=256).map(|k| eps * (1.0 + k as f64 / 256.0));
        let probes: Vec<f64> = r_grid.iter().copied().chain(shell).collect();
        let mut local = f64::NEG_INFINITY;
        for r in probes {
            let h = family.h(r, eps);
            let h1 = family.h1(r, eps);
            if (h < 0.0 || h1 < 0.0) && nonneg {
                nonneg = false;
                violations.push(format!("(i) negative value at eps={eps}, r={r}"));
            }
            if r <= eps && h != 0.0 && below {
                below = false;
                violations.push(format!("(ii) H_eps({r}) = {h} != 0 for eps={eps}"));
            }
            if r >= 2.0 * eps && (h - 1.0).abs() > TOL && above {
                above = false;
                violations.push(format!("(iii) H_eps({r}) = {h} != 1 for eps={eps}"));
            }
            let v = eps * h1;
            if v > local {
                local = v;
            }
            if v > sup {
                sup = v;
                sup_at = (eps, r);
            }
        }
        sup_per_eps.push(local);
    }
    let reference = sup_per_eps[0];
    let bounded = sup.is_finite() && sup_per_eps.iter().all(|s| *s <= reference * (1.0 + 1e-9) + TOL);
    if !bounded {
        violations.push(format!("(iv) eps*H'_eps grows as eps decreases: {sup_per_eps:?}"));
    }
    FamilyReport {
        nonnegative: nonneg,
        vanishes_below: below,
        equals_one_above: above,
        uniformly_bounded: bounded,
        sup_eps_h1: sup,
        sup_location: sup_at,
        sup_per_eps,
        violations,
    }
}

/// Geometric grid start·ratio^k, k = 0..count.
pub fn geometric_grid(start: f64, ratio: f64, count: usize) -> Result<Vec<f64>, RegularizationError> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(RegularizationError::InvalidGrid(format!(
            "ratio {ratio} must lie in (0,1)"
        )));
    }
    if count == 0 {
        return Err(RegularizationError::InvalidGrid("grid is empty".into()));
    }
    let grid: Vec<f64> = (0..count).map(|k| start * ratio.powi(k as i32)).collect();
    validate_grid(&grid)?;
    Ok(grid)
}

/// Grids must be strictly decreasing and inside (0, 1].
pub fn validate_grid(eps: &[f64]) -> Result<(), RegularizationError> {
    if eps.is_empty() {
        return Err(RegularizationError::InvalidGrid("grid is empty".into()));
    }
    if eps.iter().any(|e| !(*e > 0.0 && *e <= 1.0)) {
        return Err(RegularizationError::InvalidGrid("epsilon_grid out of (0,1]".into()));
    }
    if eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(RegularizationError::InvalidGrid(
            "epsilon_grid must be strictly decreasing".into(),
        ));
    }
    Ok(())
}

/// An ε-indexed net (u_ε) stored on a finite decreasing grid.
#[derive(Debug, Clone, Serialize)]
pub struct GeneralizedNet<T> {
    eps: Vec<f64>,
    values: Vec<T>,
}

impl<T> GeneralizedNet<T> {
    pub fn new(eps: Vec<f64>, values: Vec<T>) -> Result<Self, RegularizationError> {
        validate_grid(&eps)?;
        if eps.len() != values.len() {
            return Err(RegularizationError::InvalidGrid(format!(
                "{} grid points but {} payloads",
                eps.len(),
                values.len()
            )));
        }
        Ok(GeneralizedNet { eps, values })
    }

    pub fn from_fn(eps: &[f64], f: impl FnMut(f64) -> T) -> Result<Self, RegularizationError> {
        let values = eps.iter().copied().map(f).collect();
        Self::new(eps.to_vec(), values)
    }

    pub fn eps(&self) -> &[f64] {
        &self.eps
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &T)> {
        self.eps.iter().copied().zip(&self.values)
    }

    pub fn map<U>(&self, mut f: impl FnMut(f64, &T) -> U) -> GeneralizedNet<U> {
        GeneralizedNet {
            eps: self.eps.clone(),
            values: self.iter().map(|(e, v)| f(e, v)).collect(),
        }
    }
}

/// A function sampled on an increasing grid.
#[derive(Debug, Clone, Serialize)]
pub struct SampledFunction {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl SampledFunction {
    pub fn sample(xs: Vec<f64>, f: impl Fn(f64) -> f64) -> Self {
        let ys = xs.iter().map(|x| f(*x)).collect();
        SampledFunction { xs, ys }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seminorm {
    /// max |u|
    Sup,
    /// (∫ u²)^{1/2} by the trapezoid rule
    L2,
}

impl Seminorm {
    pub fn eval(&self, u: &SampledFunction) -> f64 {
        match self {
            Seminorm::Sup => u.ys.iter().fold(0.0f64, |m, y| m.max(y.abs())),
            Seminorm::L2 => {
                let s: f64 =
                    u.xs.windows(2)
                        .zip(u.ys.windows(2))
                        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] * y[0] + y[1] * y[1]))
                        .sum();
                s.sqrt()
            }
        }
    }
}

/// Least-squares slope of log p(u_ε) against log ε. A slope of -N means
/// p(u_ε) = O(ε^{-N}).
pub fn moderateness_slope<T>(
    net: &GeneralizedNet<T>,
    seminorm: impl Fn(&T) -> f64,
) -> Result<f64, RegularizationError> {
    if net.eps.len() < 4 {
        return Err(RegularizationError::InsufficientGrid {
            needed: 4,
            got: net.eps.len(),
        });
    }
    let mut pts = Vec::with_capacity(net.eps.len());
    for (eps, v) in net.iter() {
        let p = seminorm(v);
        if !(p > 0.0) {
            return Err(RegularizationError::DegenerateNet { eps });
        }
        pts.push((eps.ln(), p.ln()));
    }
    Ok(least_squares_slope(&pts))
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    /// ∫_{-1}^{1} exp(-1/(1-u²)) du to 21 digits (mpmath).
    const BUMP_MASS: f64 = 0.443_993_816_168_079_437_823;

    #[test]
    fn bump_is_normalized() {
        let m = Mollifier::bump();
        assert!((bump_mass() - BUMP_MASS).abs() < 1e-14);
        assert!((m.integral() - 1.0).abs() < 1e-12);
        assert!(m.validate().is_ok());
        assert!(Mollifier::boxcar().validate().is_ok());
    }

    #[test]
    fn boxcar_half_step() {
        let h = HeavisideFamily::boxcar();
        for eps in [1.0, 0.1, 0.003] {
            assert!((h.h(1.5 * eps, eps) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn endpoints_are_exact() {
        for h in [HeavisideFamily::bump(), HeavisideFamily::boxcar()] {
            for eps in [1.0, 0.25, 0.01] {
                assert_eq!(h.h(eps, eps), 0.0);
                assert_eq!(h.h(0.5 * eps, eps), 0.0);
                assert!((h.h(2.0 * eps, eps) - 1.0).abs() < 1e-14);
                assert!((h.h(5.0 * eps, eps) - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn table_matches_direct_quadrature() {
        let h = HeavisideFamily::bump();
        let m = Mollifier::bump();
        for s in [1.05, 1.2, 1.333, 1.5, 1.77, 1.99] {
            let direct = quad::adaptive(|t| m.value(t), 1.0, s, 1e-15).value;
            assert!((h.unit_step(s) - direct).abs() < 1e-14, "s={s}");
        }
        assert!((h.unit_step(1.5) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn table_is_relatively_accurate_near_the_lower_edge() {
        let h = HeavisideFamily::bump();
        let m = Mollifier::bump();
        for s in [1.0004, 1.0007, 1.002, 1.01] {
            let direct = quad::adaptive_relative(|t| m.value(t), 1.0, s, 1e-9).value;
            assert!(direct > 0.0);
            assert!((h.unit_step(s) / direct - 1.0).abs() < 1e-8, "s={s}");
        }
    }

    #[test]
    fn derivative_matches_difference() {
        let h = HeavisideFamily::bump();
        let eps = 0.1;
        let dh = 1e-6;
        for r in [0.11, 0.13, 0.15, 0.18, 0.195] {
            let d1 = (h.h(r + dh, eps) - h.h(r - dh, eps)) / (2.0 * dh);
            assert!((d1 - h.h1(r, eps)).abs() < 1e-6 * h.sup_h1(eps), "H' at {r}");
            let d2 = (h.h1(r + dh, eps) - h.h1(r - dh, eps)) / (2.0 * dh);
            assert!((d2 - h.h2(r, eps)).abs() < 1e-5 * h.sup_h1(eps) / eps, "H'' at {r}");
        }
    }

    #[test]
    fn family_checks() {
        let eps = geometric_grid(0.5, 0.5, 6).unwrap();
        let r: Vec<f64> = (0..200).map(|k| k as f64 * 0.01).collect();
        let boxcar = family_check(&HeavisideFamily::boxcar(), &eps, &r);
        assert!(boxcar.passed(), "{:?}", boxcar.violations);
        assert!((boxcar.sup_eps_h1 - 1.0).abs() < 1e-12);
        let bump = family_check(&HeavisideFamily::bump(), &eps, &r);
        assert!(bump.passed(), "{:?}", bump.violations);
        assert!((bump.sup_eps_h1 - Mollifier::bump().max_value()).abs() < 1e-12);
        assert!((bump.sup_location.1 / bump.sup_location.0 - 1.5).abs() < 1e-12);

        let light = HeavisideFamily::new_unchecked(Mollifier::bump().scaled(0.9));
        let report = family_check(&light, &eps, &r);
        assert!(!report.equals_one_above);
        assert!(report.nonnegative && report.vanishes_below);
        assert!((light.h(2.0 * 0.1, 0.1) - 0.9).abs() < 1e-12);
    }

    #[test]
    fn invalid_mollifiers_are_rejected() {
        assert!(matches!(
            make_family(Mollifier::bump().scaled(0.9)),
            Err(RegularizationError::InvalidMollifier(_))
        ));
        assert!(matches!(
            make_family(Mollifier::bump_on(0.5, 2.0)),
            Err(RegularizationError::InvalidMollifier(_))
        ));
        assert!(make_family(Mollifier::bump_on(1.2, 1.8)).is_ok());
    }

    #[test]
    fn slope_examples() {
        let eps = geometric_grid(0.1, 0.5, 6).unwrap();
        let chi = Mollifier::bump();
        let family = HeavisideFamily::bump();
        // u_ε = (1/ε) χ(x/ε), sampled finely enough to resolve the support [ε, 2ε]
        let spikes = GeneralizedNet::from_fn(&eps, |e| {
            let xs = (0..=4000).map(|k| e * (1.0 + k as f64 / 4000.0)).collect();
            SampledFunction::sample(xs, |x| chi.value(x / e) / e)
        })
        .unwrap();
        let s = moderateness_slope(&spikes, |u| Seminorm::L2.eval(u)).unwrap();
        assert!((s + 0.5).abs() < 0.05, "{s}");

        let xs: Vec<f64> = (0..=4000).map(|k| k as f64 * 5e-5).collect();
        let steps = GeneralizedNet::from_fn(&eps, |e| SampledFunction::sample(xs.clone(), |x| family.h(x, e))).unwrap();
        let s = moderateness_slope(&steps, |u| Seminorm::Sup.eval(u)).unwrap();
        assert!(s.abs() < 0.05, "{s}");

        let derivs = GeneralizedNet::from_fn(&eps, |e| {
            let xs = (0..=4000).map(|k| e * (1.0 + k as f64 / 4000.0)).collect();
            SampledFunction::sample(xs, |x| family.h1(x, e))
        })
        .unwrap();
        let s = moderateness_slope(&derivs, |u| Seminorm::Sup.eval(u)).unwrap();
        assert!((s + 1.0).abs() < 0.05, "{s}");
    }

    #[test]
    fn degenerate_and_short_nets() {
        let eps = geometric_grid(0.1, 0.5, 5).unwrap();
        let zero = GeneralizedNet::from_fn(&eps, |_| 0.0).unwrap();
        assert!(matches!(
            moderateness_slope(&zero, |v| *v),
            Err(RegularizationError::DegenerateNet { .. })
        ));
        let short = GeneralizedNet::from_fn(&eps[..3], |e| e).unwrap();
        assert!(matches!(
            moderateness_slope(&short, |v| *v),
            Err(RegularizationError::InsufficientGrid { .. })
        ));
    }

    #[test]
    fn grid_validation() {
        assert!(validate_grid(&[1.5, 0.5]).is_err());
        assert!(validate_grid(&[0.1, 0.2]).is_err());
        assert!(validate_grid(&[0.1, 0.05]).is_ok());
        assert_eq!(
            GeneralizedNet::new(vec![0.5, 0.25], vec![1.0]).unwrap_err(),
            RegularizationError::InvalidGrid("2 grid points but 1 payloads".into())
        );
    }
}

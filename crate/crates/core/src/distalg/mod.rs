//! Exact algebra of one-dimensional distributions built from t^n, θ, the
//! finite parts t_±^{−k} and δ^{(k)}, closed under d/dt and multiplication
//! by t where the product stays in the alphabet.
//!
//! Finite parts use the Hadamard convention with cutoff at |t| = 1, and
//! t_−^{−k} equals t^{−k} (not |t|^{−k}) on t < 0.

mod oracle;
mod parse;
#[cfg(test)]
mod props;
mod solve;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub use oracle::{numeric_pairing, pair_expr};
pub use parse::parse;
pub use solve::{general_solution, solve_euler_delta, upsilon, EulerSolution, Family};

/// Default cap on the order k of t_±^{−k} and δ^{(k)}.
pub const DEFAULT_MAX_ORDER: u32 = 8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DistError {
    #[error("atom {atom} exceeds the maximum order {max}")]
    UnsupportedAtom { atom: Atom, max: u32 },
    #[error("t * {0} leaves the alphabet")]
    ClosureViolation(Atom),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("quadrature failed: {0}")]
    Quadrature(String),
}

/// Basis elements, in display order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Atom {
    /// t_+^{−k}, k ≥ 1
    FpPlus(u32),
    /// t_−^{−k}, k ≥ 1
    FpMinus(u32),
    /// θ(t)
    ThetaPlus,
    /// θ(−t); never present in canonical form
    ThetaMinus,
    /// δ^{(k)}
    Delta(u32),
    /// t^n
    Mono(u32),
}

impl Atom {
    /// The order that counts against the cap; zero for θ and monomials.
    pub fn order(&self) -> u32 {
        match *self {
            Atom::FpPlus(k) | Atom::FpMinus(k) | Atom::Delta(k) => k,
            _ => 0,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Atom::FpPlus(k) => write!(f, "tplus^-{k}"),
            Atom::FpMinus(k) => write!(f, "tminus^-{k}"),
            Atom::ThetaPlus => write!(f, "theta"),
            Atom::ThetaMinus => write!(f, "theta(-t)"),
            Atom::Delta(0) => write!(f, "delta"),
            Atom::Delta(k) => write!(f, "delta^({k})"),
            Atom::Mono(0) => write!(f, "1"),
            Atom::Mono(1) => write!(f, "t"),
            Atom::Mono(n) => write!(f, "t^{n}"),
        }
    }
}

/// A finite rational combination of atoms, always kept canonical: no θ(−t)
/// and no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DistExpr {
    terms: BTreeMap<Atom, Rational64>,
}

fn rat(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

fn factorial(k: u32) -> i64 {
    (1..=k as i64).product()
}

impl DistExpr {
    pub fn zero() -> Self {
        DistExpr::default()
    }

    pub fn atom(a: Atom) -> Self {
        DistExpr::term(Rational64::one(), a)
    }

    pub fn term(c: Rational64, a: Atom) -> Self {
        let mut e = DistExpr::zero();
        e.push(c, a);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (Rational64, Atom)>>(terms: I) -> Self {
        let mut e = DistExpr::zero();
        for (c, a) in terms {
            e.push(c, a);
        }
        e
    }

    fn push(&mut self, c: Rational64, a: Atom) {
        if a == Atom::ThetaMinus {
            self.push(c, Atom::Mono(0));
            self.push(-c, Atom::ThetaPlus);
            return;
        }
        let slot = self.terms.entry(a).or_insert_with(Rational64::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&a);
        }
    }

    /// Rebuilds the coefficient map; a no-op on values built through this API.
    pub fn canonical(&self) -> Self {
        DistExpr::from_terms(self.iter())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, a: Atom) -> Rational64 {
        self.terms.get(&a).copied().unwrap_or_else(Rational64::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Rational64, Atom)> + '_ {
        self.terms.iter().map(|(a, c)| (*c, *a))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_order(&self) -> u32 {
        self.terms.keys().map(Atom::order).max().unwrap_or(0)
    }

    fn check_order(&self, max: u32) -> Result<(), DistError> {
        match self.terms.keys().find(|a| a.order() > max) {
            Some(a) => Err(DistError::UnsupportedAtom { atom: *a, max }),
            None => Ok(()),
        }
    }
}

impl Add for DistExpr {
    type Output = DistExpr;
    fn add(mut self, rhs: DistExpr) -> DistExpr {
        for (c, a) in rhs.iter() {
            self.push(c, a);
        }
        self
    }
}

impl Neg for DistExpr {
    type Output = DistExpr;
    fn neg(self) -> DistExpr {
        self * -Rational64::one()
    }
}

impl Sub for DistExpr {
    type Output = DistExpr;
    fn sub(self, rhs: DistExpr) -> DistExpr {
        self + (-rhs)
    }
}

impl Mul<Rational64> for DistExpr {
    type Output = DistExpr;
    fn mul(self, c: Rational64) -> DistExpr {
        DistExpr::from_terms(self.iter().map(|(k, a)| (k * c, a)))
    }
}

impl fmt::Display for DistExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (c, a)) in self.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if a == Atom::Mono(0) {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{a}")?;
            } else {
                write!(f, "{mag}*{a}")?;
            }
        }
        Ok(())
    }
}

fn atom_derivative(a: Atom) -> DistExpr {
    match a {
        Atom::Mono(0) => DistExpr::zero(),
        Atom::Mono(n) => DistExpr::term(rat(n as i64), Atom::Mono(n - 1)),
        Atom::ThetaPlus => DistExpr::atom(Atom::Delta(0)),
        Atom::ThetaMinus => -DistExpr::atom(Atom::Delta(0)),
        Atom::Delta(k) => DistExpr::atom(Atom::Delta(k + 1)),
        Atom::FpPlus(k) => {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            DistExpr::from_terms([
                (rat(-(k as i64)), Atom::FpPlus(k + 1)),
                (Rational64::new(sign, factorial(k)), Atom::Delta(k)),
            ])
        }
        Atom::FpMinus(k) => {
            let sign = if k % 2 == 0 { -1 } else { 1 };
            DistExpr::from_terms([
                (rat(-(k as i64)), Atom::FpMinus(k + 1)),
                (Rational64::new(sign, factorial(k)), Atom::Delta(k)),
            ])
        }
    }
}

fn atom_times_t(a: Atom) -> Result<DistExpr, DistError> {
    Ok(match a {
        Atom::Mono(n) => DistExpr::atom(Atom::Mono(n + 1)),
        Atom::ThetaPlus | Atom::ThetaMinus => return Err(DistError::ClosureViolation(a)),
        Atom::Delta(0) => DistExpr::zero(),
        Atom::Delta(k) => DistExpr::term(rat(-(k as i64)), Atom::Delta(k - 1)),
        Atom::FpPlus(1) => DistExpr::atom(Atom::ThetaPlus),
        Atom::FpMinus(1) => DistExpr::atom(Atom::ThetaMinus),
        Atom::FpPlus(k) => DistExpr::atom(Atom::FpPlus(k - 1)),
        Atom::FpMinus(k) => DistExpr::atom(Atom::FpMinus(k - 1)),
    })
}

/// Rewrite tables with an order cap on inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Algebra {
    pub max_order: u32,
}

impl Default for Algebra {
    fn default() -> Self {
        Algebra {
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

impl Algebra {
    pub fn new(max_order: u32) -> Self {
        Algebra { max_order }
    }

    pub fn differentiate(&self, u: &DistExpr) -> Result<DistExpr, DistError> {
        u.check_order(self.max_order)?;
        Ok(differentiate_unchecked(u))
    }

    pub fn mul_by_t(&self, u: &DistExpr) -> Result<DistExpr, DistError> {
        u.check_order(self.max_order)?;
        mul_by_t_unchecked(u)
    }

    /// t·u′ + u.
    pub fn euler_apply(&self, u: &DistExpr) -> Result<DistExpr, DistError> {
        u.check_order(self.max_order)?;
        euler_unchecked(u)
    }
}

fn differentiate_unchecked(u: &DistExpr) -> DistExpr {
    u.iter()
        .fold(DistExpr::zero(), |acc, (c, a)| acc + atom_derivative(a) * c)
}

fn mul_by_t_unchecked(u: &DistExpr) -> Result<DistExpr, DistError> {
    u.iter()
        .try_fold(DistExpr::zero(), |acc, (c, a)| Ok(acc + atom_times_t(a)? * c))
}

fn euler_unchecked(u: &DistExpr) -> Result<DistExpr, DistError> {
    Ok(mul_by_t_unchecked(&differentiate_unchecked(u))? + u.clone())
}

/// [`Algebra::differentiate`] with the default order cap.
pub fn differentiate(u: &DistExpr) -> Result<DistExpr, DistError> {
    Algebra::default().differentiate(u)
}

/// [`Algebra::mul_by_t`] with the default order cap.
pub fn mul_by_t(u: &DistExpr) -> Result<DistExpr, DistError> {
    Algebra::default().mul_by_t(u)
}

/// [`Algebra::euler_apply`] with the default order cap.
pub fn euler_apply(u: &DistExpr) -> Result<DistExpr, DistError> {
    Algebra::default().euler_apply(u)
}

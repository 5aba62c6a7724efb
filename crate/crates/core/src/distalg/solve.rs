//! Solutions of t·u′ + u = δ₀ by exact linear algebra over an ansatz.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::{One, Zero};

use super::{mul_by_t_unchecked, Algebra, Atom, DistError, DistExpr};

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row.
fn rref(m: &mut [Vec<Rational64>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v *= inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col];
                let pivot_row = m[row].clone();
                for (v, pv) in m[r].iter_mut().zip(pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

/// Solves Σ xᵢ·L(bᵢ) = target over the given basis: a particular solution
/// (free variables zero) and a kernel basis, or None for the particular
/// solution if the system is inconsistent.
fn solve_linear(images: &[DistExpr], target: &DistExpr) -> (Option<Vec<Rational64>>, Vec<Vec<Rational64>>) {
    let mut rows: BTreeMap<Atom, usize> = BTreeMap::new();
    for e in images.iter().chain([target]) {
        for (_, a) in e.iter() {
            let n = rows.len();
            rows.entry(a).or_insert(n);
        }
    }
    let n = images.len();
    let mut m = vec![vec![Rational64::zero(); n + 1]; rows.len()];
    for (j, e) in images.iter().enumerate() {
        for (c, a) in e.iter() {
            m[rows[&a]][j] = c;
        }
    }
    for (c, a) in target.iter() {
        m[rows[&a]][n] = c;
    }
    let pivots = rref(&mut m, n + 1);
    let particular = if pivots.last() == Some(&n) {
        None
    } else {
        let mut x = vec![Rational64::zero(); n];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = m[r][n];
        }
        Some(x)
    };
    let kernel = (0..n)
        .filter(|j| !pivots.contains(j))
        .map(|free| {
            let mut x = vec![Rational64::zero(); n];
            x[free] = Rational64::one();
            for (r, &p) in pivots.iter().enumerate() {
                if p < n {
                    x[p] = -m[r][free];
                }
            }
            x
        })
        .collect();
    (particular, kernel)
}

fn combine(coeffs: &[Rational64], basis: &[Atom]) -> DistExpr {
    DistExpr::from_terms(coeffs.iter().copied().zip(basis.iter().copied()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EulerSolution {
    pub max_delta_order: u32,
    pub ansatz: Vec<Atom>,
    pub particular: DistExpr,
    pub homogeneous: Vec<DistExpr>,
    /// Whether t·u′ + u = δ₀ has a solution in span{δ^{(0..N)}} alone.
    pub pure_delta_solvable: bool,
    /// Images L(δ^{(k)}), k = 0..N.
    pub delta_images: Vec<DistExpr>,
}

/// Solves t·u′ + u = δ₀ over span{t_+^{−1}, t_−^{−1}, δ^{(0..N)}}.
pub fn solve_euler_delta(max_delta_order: u32) -> Result<EulerSolution, DistError> {
    let alg = Algebra::new(max_delta_order.max(1));
    let mut ansatz = vec![Atom::FpPlus(1), Atom::FpMinus(1)];
    ansatz.extend((0..=max_delta_order).map(Atom::Delta));
    let images = ansatz
        .iter()
        .map(|&a| alg.euler_apply(&DistExpr::atom(a)))
        .collect::<Result<Vec<_>, _>>()?;
    let target = DistExpr::atom(Atom::Delta(0));
    let (particular, kernel) = solve_linear(&images, &target);
    let particular = particular.expect("t_+^{-1} solves the equation, so the system is consistent");
    let delta_images = images[2..].to_vec();
    let (pure, _) = solve_linear(&delta_images, &target);
    Ok(EulerSolution {
        max_delta_order,
        particular: combine(&particular, &ansatz),
        homogeneous: kernel.iter().map(|x| combine(x, &ansatz)).collect(),
        pure_delta_solvable: pure.is_some(),
        delta_images,
        ansatz,
    })
}

/// base + c·c_dir + a₀·a0_dir, affine in the two free constants.
#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    pub base: DistExpr,
    pub c_dir: DistExpr,
    pub a0_dir: DistExpr,
}

impl Family {
    pub fn at(&self, c: Rational64, a0: Rational64) -> DistExpr {
        self.base.clone() + self.c_dir.clone() * c + self.a0_dir.clone() * a0
    }

    pub fn mul_by_t(&self) -> Result<Family, DistError> {
        Ok(Family {
            base: mul_by_t_unchecked(&self.base)?,
            c_dir: mul_by_t_unchecked(&self.c_dir)?,
            a0_dir: mul_by_t_unchecked(&self.a0_dir)?,
        })
    }

    /// Whether the member does not depend on c or a₀.
    pub fn is_fixed(&self) -> bool {
        self.c_dir.is_zero() && self.a0_dir.is_zero()
    }
}

/// u = c·t_+^{−1} + (c − 1)·t_−^{−1} + a₀·δ₀, every solution of the
/// equation in the ansatz.
pub fn general_solution() -> Family {
    Family {
        base: -DistExpr::atom(Atom::FpMinus(1)),
        c_dir: DistExpr::atom(Atom::FpPlus(1)) + DistExpr::atom(Atom::FpMinus(1)),
        a0_dir: DistExpr::atom(Atom::Delta(0)),
    }
}

/// Restriction to t > 0 as a map from power of t to coefficient.
fn on_positive_axis(u: &DistExpr) -> BTreeMap<i64, Rational64> {
    let mut out = BTreeMap::new();
    for (c, a) in u.iter() {
        let power = match a {
            Atom::Mono(n) => n as i64,
            Atom::ThetaPlus => 0,
            Atom::FpPlus(k) => -(k as i64),
            Atom::FpMinus(_) | Atom::Delta(_) | Atom::ThetaMinus => continue,
        };
        *out.entry(power).or_insert_with(Rational64::zero) += c;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Υ = t·u for the general solution u, i.e. θ + (c − 1). With
/// `normalize_positive` the constants are fixed by Υ = 1 on t > 0, which
/// leaves θ; a₀ drops out because t·δ₀ = 0.
pub fn upsilon(normalize_positive: bool) -> Result<Family, DistError> {
    let fam = general_solution().mul_by_t()?;
    if !normalize_positive {
        return Ok(fam);
    }
    // Σ over powers: base + c·c_dir + a₀·a0_dir = t^0 on t > 0
    let (b, c, a) = (
        on_positive_axis(&fam.base),
        on_positive_axis(&fam.c_dir),
        on_positive_axis(&fam.a0_dir),
    );
    let mut powers: Vec<i64> = b.keys().chain(c.keys()).chain(a.keys()).copied().collect();
    powers.push(0);
    powers.sort_unstable();
    powers.dedup();
    let get = |m: &BTreeMap<i64, Rational64>, p: i64| m.get(&p).copied().unwrap_or_else(Rational64::zero);
    let one = |p: i64| if p == 0 { Rational64::one() } else { Rational64::zero() };
    let mut m: Vec<Vec<Rational64>> = powers
        .iter()
        .map(|&p| vec![get(&c, p), get(&a, p), one(p) - get(&b, p)])
        .collect();
    let pivots = rref(&mut m, 3);
    assert!(pivots.last() != Some(&2), "Υ = 1 on t > 0 is always attainable");
    let mut x = [Rational64::zero(); 2];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = m[r][2];
    }
    Ok(Family {
        base: fam.at(x[0], x[1]),
        c_dir: DistExpr::zero(),
        a0_dir: DistExpr::zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    #[test]
    fn solution_is_independent_of_the_delta_order() {
        for n in [0, 1, 3, 4, 8] {
            let s = solve_euler_delta(n).unwrap();
            assert_eq!(s.particular, parse("tplus^-1").unwrap());
            assert_eq!(
                s.homogeneous,
                vec![parse("tplus^-1 + tminus^-1").unwrap(), parse("delta").unwrap()]
            );
            assert!(!s.pure_delta_solvable);
            for (k, img) in s.delta_images.iter().enumerate() {
                assert_eq!(
                    *img,
                    DistExpr::term(Rational64::from_integer(-(k as i64)), Atom::Delta(k as u32))
                );
            }
        }
    }

    #[test]
    fn general_solution_solves() {
        let fam = general_solution();
        for (c, a0) in [(0, 0), (1, 5), (-3, 2)] {
            let u = fam.at(Rational64::from_integer(c), Rational64::from_integer(a0));
            assert_eq!(super::super::euler_apply(&u).unwrap(), parse("delta").unwrap());
        }
    }

    #[test]
    fn upsilon_forms() {
        let fam = upsilon(false).unwrap();
        assert_eq!(fam.base, parse("theta - 1").unwrap());
        assert_eq!(fam.c_dir, parse("1").unwrap());
        assert!(fam.a0_dir.is_zero());
        let fixed = upsilon(true).unwrap();
        assert!(fixed.is_fixed());
        assert_eq!(fixed.base, parse("theta").unwrap());
        assert_eq!(
            fam.at(Rational64::one(), Rational64::from_integer(7)),
            parse("theta").unwrap()
        );
    }
}

use super::{differentiate, mul_by_t, numeric_pairing, pair_expr, parse, Atom, DistError, DistExpr};
use crate::association::testfn::{LineFn, LineTest};
use num_rational::Rational64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn atoms() -> Vec<Atom> {
    let mut v = vec![Atom::ThetaPlus, Atom::ThetaMinus];
    v.extend((0..4).map(Atom::Mono));
    v.extend((1..5).map(Atom::FpPlus));
    v.extend((1..5).map(Atom::FpMinus));
    v.extend((0..5).map(Atom::Delta));
    v
}

fn atom_strategy() -> impl Strategy<Value = Atom> {
    prop_oneof![
        Just(Atom::ThetaPlus),
        Just(Atom::ThetaMinus),
        (0u32..6).prop_map(Atom::Mono),
        (1u32..7).prop_map(Atom::FpPlus),
        (1u32..7).prop_map(Atom::FpMinus),
        (0u32..7).prop_map(Atom::Delta),
    ]
}

fn expr_strategy() -> impl Strategy<Value = DistExpr> {
    prop::collection::vec((-20i64..20, 1i64..6, atom_strategy()), 0..6)
        .prop_map(|terms| DistExpr::from_terms(terms.into_iter().map(|(n, d, a)| (Rational64::new(n, d), a))))
}

fn random_tests(count: usize, seed: u64) -> Vec<LineFn> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let poly = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            LineFn::Base(LineTest::new(poly, rng.gen_range(-0.5..0.5), rng.gen_range(0.7..1.5)))
        })
        .collect()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-6 * b.abs().max(1.0)
}

#[test]
fn derivative_table_matches_the_oracle() {
    for phi in random_tests(20, 11) {
        for a in atoms() {
            let lhs = pair_expr(&differentiate(&DistExpr::atom(a)).unwrap(), &phi).unwrap();
            let rhs = -numeric_pairing(a, &phi.clone().derivative()).unwrap();
            assert!(close(lhs, rhs), "d/dt {a}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn multiplication_table_matches_the_oracle() {
    for phi in random_tests(20, 12) {
        for a in atoms() {
            let Ok(product) = mul_by_t(&DistExpr::atom(a)) else {
                continue;
            };
            let lhs = pair_expr(&product, &phi).unwrap();
            let rhs = numeric_pairing(a, &phi.clone().times_t()).unwrap();
            assert!(close(lhs, rhs), "t * {a}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn theta_is_the_only_closure_violation() {
    for a in atoms() {
        let r = mul_by_t(&DistExpr::atom(a));
        assert_eq!(r.is_err(), matches!(a, Atom::ThetaPlus | Atom::ThetaMinus), "{a}");
    }
    assert!(matches!(
        mul_by_t(&parse("theta").unwrap()),
        Err(DistError::ClosureViolation(_))
    ));
}

proptest! {
    #[test]
    fn leibniz_rule(a in atom_strategy()) {
        let u = DistExpr::atom(a);
        if let Ok(tu) = mul_by_t(&u) {
            let lhs = differentiate(&tu).unwrap();
            let rhs = u.clone() + mul_by_t(&differentiate(&u).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn canonicalization_is_idempotent(u in expr_strategy()) {
        prop_assert_eq!(u.canonical(), u.clone());
        prop_assert_eq!(u.canonical().canonical(), u.canonical());
        prop_assert_eq!(u.coefficient(Atom::ThetaMinus), Rational64::from_integer(0));
        prop_assert!(u.iter().all(|(c, _)| c != Rational64::from_integer(0)));
    }

    #[test]
    fn operations_are_linear(u in expr_strategy(), v in expr_strategy(), n in -9i64..9, d in 1i64..5) {
        let c = Rational64::new(n, d);
        let combo = u.clone() * c + v.clone();
        prop_assert_eq!(
            differentiate(&combo).unwrap(),
            differentiate(&u).unwrap() * c + differentiate(&v).unwrap()
        );
        if let (Ok(tu), Ok(tv)) = (mul_by_t(&u), mul_by_t(&v)) {
            prop_assert_eq!(mul_by_t(&combo).unwrap(), tu * c + tv);
        }
    }

    #[test]
    fn display_parses_back(u in expr_strategy()) {
        prop_assert_eq!(parse(&u.to_string()).unwrap(), u);
    }
}

use std::collections::HashMap;

use lie_algebroid::poly::{ratio, Monomial, Poly, Var};
use proptest::prelude::*;

const VARS: [Var; 5] = [Var::T, Var::X(0), Var::X(1), Var::Xi(0), Var::Xi(1)];

fn poly() -> impl Strategy<Value = Poly> {
    let term = (prop::collection::vec(0u32..3, VARS.len()), -5i64..=5, 1i64..=4);
    prop::collection::vec(term, 0..5).prop_map(|terms| {
        let mut p = Poly::zero();
        for (exps, num, den) in terms {
            let m = Monomial::from_pairs(VARS.iter().copied().zip(exps));
            p.add_term(m, ratio(num, den));
        }
        p
    })
}

fn var() -> impl Strategy<Value = Var> {
    prop::sample::select(VARS.to_vec())
}

fn p(s: &str) -> Poly {
    s.parse().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &Poly::one(), a.clone());
    }

    #[test]
    fn negation_cancels_to_the_empty_term_map(a in poly()) {
        let z = &a + &(-&a);
        prop_assert!(z.is_zero());
        prop_assert_eq!(z.terms().count(), 0);
        prop_assert_eq!(z, Poly::zero());
    }

    #[test]
    fn partials_commute(a in poly(), u in var(), v in var()) {
        prop_assert_eq!(a.partial(u).partial(v), a.partial(v).partial(u));
    }

    #[test]
    fn partial_is_a_derivation(a in poly(), b in poly(), u in var()) {
        let lhs = (&a * &b).partial(u);
        let rhs = &(&a.partial(u) * &b) + &(&a * &b.partial(u));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn identity_substitution(a in poly()) {
        let bindings: HashMap<Var, Poly> = VARS.iter().map(|&v| (v, Poly::var(v))).collect();
        prop_assert_eq!(a.substitute(&bindings), a);
    }

    #[test]
    fn substitution_is_a_ring_map(a in poly(), b in poly(), img in poly()) {
        let s = |q: &Poly| q.subs(Var::X(0), &img);
        prop_assert_eq!(s(&(&a * &b)), &s(&a) * &s(&b));
        prop_assert_eq!(s(&(&a + &b)), &s(&a) + &s(&b));
    }

    #[test]
    fn display_round_trips(a in poly()) {
        let back: Poly = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }
}

#[test]
fn partial_examples() {
    assert_eq!(p("x1^2*x2").partial(Var::X(0)), p("2*x1*x2"));
    assert!(p("x1^3").partial(Var::X(1)).is_zero());
}

#[test]
fn substitution_examples() {
    let f = p("x1^2 + t*x1");
    assert_eq!(f.subs(Var::T, &Poly::zero()), p("x1^2"));
    assert_eq!(p("t*x1").subs(Var::T, &Poly::one()), p("x1"));
}

#[test]
fn t_slices() {
    let f = p("xi1 + t*xi2 + 3*t^2*x1");
    assert_eq!(f.t_coefficient(0), p("xi1"));
    assert_eq!(f.t_coefficient(1), p("xi2"));
    assert_eq!(f.t_coefficient(2), p("3*x1"));
    assert!(f.t_coefficient(3).is_zero());
}

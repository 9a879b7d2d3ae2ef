use super::*;
use crate::poly::ratio;

fn p(s: &str) -> Poly {
    s.parse().unwrap()
}

fn so3() -> Algebroid {
    Algebroid::new(
        0,
        3,
        vec![vec![]; 3],
        [
            (0, 1, 2, Poly::one()),
            (1, 2, 0, Poly::one()),
            (0, 2, 1, Poly::int(-1)),
        ],
    )
    .unwrap()
}

fn line() -> Algebroid {
    Algebroid::new(1, 1, vec![vec![Poly::one()]], []).unwrap()
}

fn elem(env: &Enveloping, terms: &[(&[u32], Poly)]) -> UeaElement {
    env.from_terms(terms.iter().map(|(a, c)| (a.to_vec(), c.clone())))
        .unwrap()
}

#[test]
fn commuting_a_function_past_a_generator() {
    let env = Enveloping::new(line());
    let w = FreeWord::new(Poly::one(), vec![Letter::Gen(0), Letter::Func(p("x1"))]);
    let expected = elem(&env, &[(&[1], p("x1")), (&[0], Poly::one())]);
    assert_eq!(env.normal_form(&w).unwrap(), expected);
    assert_eq!(normal_form(&w, &line(), false).unwrap(), expected);
}

#[test]
fn so3_reorderings() {
    let env = Enveloping::new(so3());
    let nf = env.normal_form(&FreeWord::generators(&[1, 0])).unwrap();
    assert_eq!(nf, elem(&env, &[(&[1, 1, 0], Poly::one()), (&[0, 0, 1], Poly::int(-1))]));
    // e2 e1 e1 = e1^2 e2 - 2 e1 e3 - e2
    let nf = env.normal_form(&FreeWord::generators(&[1, 0, 0])).unwrap();
    let expected = elem(
        &env,
        &[
            (&[2, 1, 0], Poly::one()),
            (&[1, 0, 1], Poly::int(-2)),
            (&[0, 1, 0], Poly::int(-1)),
        ],
    );
    assert_eq!(nf, expected);
    let (slow, steps) = env
        .normal_form_with(vec![FreeWord::generators(&[1, 0, 0])], &mut LeftmostInnermost, 1000)
        .unwrap();
    assert_eq!(slow, expected);
    assert!(steps > 0);
}

#[test]
fn adiabatic_flag_scales_rewrites() {
    let w = FreeWord::generators(&[1, 0]);
    let nf = normal_form(&w, &so3(), true).unwrap();
    let env = Enveloping::adiabatic(&so3()).unwrap();
    assert_eq!(nf, elem(&env, &[(&[1, 1, 0], Poly::one()), (&[0, 0, 1], p("-t"))]));
}

#[test]
fn step_limit_is_enforced() {
    let env = Enveloping::new(so3());
    let err = env
        .normal_form_with(vec![FreeWord::generators(&[2, 1, 0, 2, 1])], &mut LeftmostInnermost, 2)
        .unwrap_err();
    assert_eq!(err, Error::RewriteLimit(2));
}

#[test]
fn injections() {
    let env = Enveloping::new(line());
    assert_eq!(env.inject_function(&Poly::one()).unwrap(), env.one());
    let (f, g) = (p("x1^2 + 1"), p("3*x1"));
    let lhs = env.inject_function(&(&f * &g)).unwrap();
    let rhs = env
        .multiply(&env.inject_function(&f).unwrap(), &env.inject_function(&g).unwrap())
        .unwrap();
    assert_eq!(lhs, rhs);
    let x = Section(vec![p("x1 - 2")]);
    let fx = env.inject_section(&x.scale(&f)).unwrap();
    let prod = env
        .multiply(&env.inject_function(&f).unwrap(), &env.inject_section(&x).unwrap())
        .unwrap();
    assert_eq!(fx, prod);
    assert!(matches!(env.inject_function(&p("xi1")), Err(Error::Universe { .. })));
}

#[test]
fn commutator_of_sections_is_bracket() {
    let alg = line();
    let env = Enveloping::new(alg.clone());
    let x = Section(vec![p("x1^2")]);
    let y = Section(vec![p("x1 + 1")]);
    let (ix, iy) = (env.inject_section(&x).unwrap(), env.inject_section(&y).unwrap());
    let c = env.commutator(&ix, &iy).unwrap();
    assert_eq!(c, env.inject_section(&alg.bracket(&x, &y).unwrap()).unwrap());
}

#[test]
fn quantization_examples() {
    let env = Enveloping::new(so3());
    assert_eq!(env.quantize(&p("x1")).is_err(), true);
    assert_eq!(env.quantize(&p("3")).unwrap(), env.inject_function(&p("3")).unwrap());
    assert_eq!(env.quantize(&p("xi2")).unwrap(), env.generator(1).unwrap());
    let q = env.quantize(&p("xi1*xi2")).unwrap();
    let expected = elem(
        &env,
        &[(&[1, 1, 0], Poly::one()), (&[0, 0, 1], Poly::constant(ratio(-1, 2)))],
    );
    assert_eq!(q, expected);
    assert_eq!(env.symbol(&expected).unwrap(), p("xi1*xi2"));

    let env = Enveloping::new(line());
    assert_eq!(env.quantize(&p("x1*xi1")).unwrap(), elem(&env, &[(&[1], p("x1"))]));
    assert_eq!(env.symbol(&env.inject_function(&p("x1^3")).unwrap()).unwrap(), p("x1^3"));
}

#[test]
fn principal_symbols() {
    let alg = Algebroid::new(
        1,
        3,
        vec![vec![Poly::zero()]; 3],
        [
            (0, 1, 2, Poly::one()),
            (1, 2, 0, Poly::one()),
            (0, 2, 1, Poly::int(-1)),
        ],
    )
    .unwrap();
    let env = Enveloping::new(alg);
    let a = elem(&env, &[(&[1, 1, 0], p("x1")), (&[0, 0, 1], Poly::one())]);
    assert_eq!(env.principal_symbol(&a, 2).unwrap(), p("x1*xi1*xi2"));
    assert_eq!(env.principal_symbol(&a, 3).unwrap(), Poly::zero());
    assert_eq!(
        env.principal_symbol(&a, 1),
        Err(Error::OrderTooHigh { order: 2, requested: 1 })
    );
}

#[test]
fn star_examples() {
    let sp = StarProduct::new(&so3()).unwrap();
    let s = sp.star(&p("xi1"), &p("xi2")).unwrap();
    assert_eq!(s, p("xi1*xi2 + 1/2*t*xi3"));
    assert_eq!(s.to_string(), "xi1*xi2 + (1/2)*t*xi3");
    let f = p("xi1^2 + xi3");
    let g = p("xi2*xi3");
    assert_eq!(sp.star(&f, &g).unwrap().subs(Var::T, &Poly::zero()), &f * &g);
    assert!(matches!(
        star(&so3().adiabatic().unwrap(), &f, &g),
        Err(Error::AlreadyAdiabatic)
    ));
    let direct = StarProduct::from_adiabatic(&so3().adiabatic().unwrap()).unwrap();
    assert_eq!(direct.star(&f, &g).unwrap(), sp.star(&f, &g).unwrap());
    assert_eq!(direct.base(), &so3());
    assert!(StarProduct::from_adiabatic(&so3()).is_err());
}

#[test]
fn anchor_action() {
    let env = Enveloping::new(line());
    let d2 = elem(&env, &[(&[2], p("x1"))]);
    assert_eq!(env.act(&d2, &p("x1^3")).unwrap(), p("6*x1^2"));
}

#[test]
fn mismatched_algebras_are_rejected() {
    let a = Enveloping::new(so3());
    let b = Enveloping::new(line());
    assert_eq!(a.multiply(&a.one(), &b.one()), Err(Error::AlgebroidMismatch));
    // equal algebroids built separately are compatible
    let c = Enveloping::new(so3());
    assert!(a.multiply(&a.one(), &c.one()).is_ok());
}

#[test]
fn display_format() {
    let alg = Algebroid::new(
        1,
        3,
        vec![vec![Poly::zero()]; 3],
        [(0, 1, 2, Poly::one())],
    )
    .unwrap();
    let env = Enveloping::new(alg);
    let a = elem(
        &env,
        &[(&[1, 1, 0], p("x1")), (&[0, 0, 1], Poly::constant(ratio(-1, 2)))],
    );
    assert_eq!(a.to_string(), "(x1)·e1·e2 + (-1/2)·e3");
    let b = elem(&env, &[(&[0, 0, 0], p("2")), (&[2, 0, 1], Poly::one())]);
    assert_eq!(b.to_string(), "(1)·e1^2·e3 + (2)");
    assert_eq!(env.zero().to_string(), "0");
    assert_eq!(env.parse_element(&a.to_string()).unwrap(), a);
    assert_eq!(env.parse_element(&b.to_string()).unwrap(), b);
}

#[test]
fn parsed_words_distribute() {
    let env = Enveloping::new(so3());
    let a = env.parse_element("(e1 + e2)^2").unwrap();
    let e1 = env.generator(0).unwrap();
    let e2 = env.generator(1).unwrap();
    let s = e1.add(&e2).unwrap();
    assert_eq!(a, env.multiply(&s, &s).unwrap());
}

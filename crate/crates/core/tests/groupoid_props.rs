mod common;

use lie_algebroid::catalog;
use lie_algebroid::groupoid::{FiniteGroup, FiniteGroupoid, ReducedKernel};
use lie_algebroid::schema;
use rand::Rng;

/// The symmetric group on three letters, as permutations composed left to right.
fn s3() -> FiniteGroup {
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [1, 0, 2],
        [0, 2, 1],
        [2, 1, 0],
        [1, 2, 0],
        [2, 0, 1],
    ];
    let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    let table = perms
        .iter()
        .map(|a| {
            perms
                .iter()
                .map(|b| index([b[a[0]], b[a[1]], b[a[2]]]))
                .collect()
        })
        .collect();
    let names = perms.iter().map(|p| format!("{}{}{}", p[0] + 1, p[1] + 1, p[2] + 1)).collect();
    FiniteGroup::new(names, table).unwrap()
}

/// `S3` acting on `{1,2,3}` from the right: `x.p = p(x)`.
fn s3_on_three() -> FiniteGroupoid {
    let g = s3();
    let perms: Vec<Vec<usize>> = (0..g.order())
        .map(|a| g.name(a).bytes().map(|c| (c - b'1') as usize).collect())
        .collect();
    let act = (0..3).map(|x| perms.iter().map(|p| p[x]).collect()).collect::<Vec<Vec<usize>>>();
    FiniteGroupoid::transformation(vec!["a".into(), "b".into(), "c".into()], &g, &act).unwrap()
}

fn fixtures() -> Vec<(String, FiniteGroupoid)> {
    let mut out = catalog::groupoids();
    out.push(("s3".into(), FiniteGroupoid::group(&s3())));
    out.push(("s3-on-3".into(), s3_on_three()));
    out
}

#[test]
fn fixtures_are_groupoids() {
    for (name, g) in fixtures() {
        let rep = g.check();
        assert!(rep.passed(), "{name}: {}", g.describe(&rep));
    }
}

#[test]
fn convolution_is_associative_with_unit() {
    let mut r = common::rng(41);
    for (name, g) in fixtures() {
        if g.arrow_count() > 36 {
            continue;
        }
        for _ in 0..10 {
            let dims: Vec<usize> = (0..g.unit_count()).map(|_| r.gen_range(1..=2)).collect();
            let a = common::random_kernel(&mut r, &g, &dims);
            let b = common::random_kernel(&mut r, &g, &dims);
            let c = common::random_kernel(&mut r, &g, &dims);
            let ab_c = g.convolve(&g.convolve(&a, &b).unwrap(), &c).unwrap();
            let a_bc = g.convolve(&a, &g.convolve(&b, &c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc, "{name}");
            let unit = ReducedKernel::unit(&g, dims.clone()).unwrap();
            assert_eq!(g.convolve(&unit, &a).unwrap(), a, "{name}");
            assert_eq!(g.convolve(&a, &unit).unwrap(), a, "{name}");
        }
    }
}

#[test]
fn support_of_a_product_lies_in_the_support_product() {
    let mut r = common::rng(42);
    for (name, g) in fixtures() {
        for _ in 0..10 {
            let dims = vec![1; g.unit_count()];
            let a = common::random_kernel(&mut r, &g, &dims);
            let b = common::random_kernel(&mut r, &g, &dims);
            let allowed = g.support_product(&a.support(), &b.support());
            for arrow in g.convolve(&a, &b).unwrap().support() {
                assert!(allowed.contains(&arrow), "{name}: {}", g.arrow_name(arrow));
            }
        }
    }
}

#[test]
fn group_convolution_is_not_commutative_for_s3() {
    let g = FiniteGroupoid::group(&s3());
    let delta = |a: usize| {
        let mut v = vec![lie_algebroid::poly::rat(0); g.arrow_count()];
        v[a] = lie_algebroid::poly::rat(1);
        ReducedKernel::scalar(&g, v).unwrap()
    };
    let (a, b) = (g.arrow_index("213").unwrap(), g.arrow_index("132").unwrap());
    let ab = g.convolve(&delta(a), &delta(b)).unwrap();
    let ba = g.convolve(&delta(b), &delta(a)).unwrap();
    assert_ne!(ab, ba);
    assert_eq!(ab.support(), vec![g.product(a, b).unwrap()]);
}

#[test]
fn transformation_groupoid_structure() {
    let g = catalog::z3_on_six();
    assert_eq!(g.unit_count(), 6);
    assert_eq!(g.arrow_count(), 18);
    let a = g.arrow_index("(1,1)").unwrap();
    assert_eq!(g.unit_name(g.range(a)), "1");
    assert_eq!(g.unit_name(g.source(a)), "2");
    for x in 0..g.unit_count() {
        assert_eq!(g.source_fiber(x).len(), 3);
    }
    let bad = FiniteGroupoid::transformation(
        vec!["p".into(), "q".into()],
        &FiniteGroup::cyclic(2),
        &[vec![0, 0], vec![1, 0]],
    );
    assert!(bad.is_err());
}

#[test]
fn schema_round_trips_every_catalog_groupoid() {
    let mut r = common::rng(43);
    for (name, g) in fixtures() {
        let text = schema::groupoid_to_json(&g);
        let back = schema::groupoid_from_json(&text).unwrap();
        assert_eq!(back, g, "{name}");
        let dims: Vec<usize> = (0..g.unit_count()).map(|_| r.gen_range(1..=2)).collect();
        let k = common::random_kernel(&mut r, &g, &dims);
        let k_text = schema::kernel_to_json(&g, &k);
        assert_eq!(schema::kernel_from_json(&g, &k_text).unwrap(), k, "{name}");
    }
}

//! Named example algebroids and groupoids used as fixtures throughout.

use crate::algebroid::Algebroid;
use crate::groupoid::{FiniteGroup, FiniteGroupoid};
use crate::poly::Poly;

#[derive(Clone, Debug)]
pub enum Payload {
    Algebroid(Algebroid),
    Groupoid(FiniteGroupoid),
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub payload: Payload,
}

impl CatalogEntry {
    pub fn kind(&self) -> &'static str {
        match self.payload {
            Payload::Algebroid(_) => "algebroid",
            Payload::Groupoid(_) => "finite-groupoid",
        }
    }

    pub fn algebroid(&self) -> Option<&Algebroid> {
        match &self.payload {
            Payload::Algebroid(a) => Some(a),
            Payload::Groupoid(_) => None,
        }
    }

    pub fn groupoid(&self) -> Option<&FiniteGroupoid> {
        match &self.payload {
            Payload::Groupoid(g) => Some(g),
            Payload::Algebroid(_) => None,
        }
    }
}

/// The tangent algebroid of `R^k`: `rho = id`, abelian bracket.
pub fn tangent(k: usize) -> Algebroid {
    let anchor = (0..k)
        .map(|i| (0..k).map(|a| if a == i { Poly::one() } else { Poly::zero() }).collect())
        .collect();
    Algebroid::new(k, k, anchor, []).expect("tangent algebroid")
}

/// `so(3)` over a point: `[e1,e2] = e3` and cyclic.
pub fn so3() -> Algebroid {
    lie_algebra(3, [(0, 1, 2, 1), (1, 2, 0, 1), (0, 2, 1, -1)])
}

/// The Heisenberg algebra: `[e1,e2] = e3`.
pub fn heisenberg() -> Algebroid {
    lie_algebra(3, [(0, 1, 2, 1)])
}

/// The nonabelian two-dimensional Lie algebra: `[e1,e2] = e2`.
pub fn affine2() -> Algebroid {
    lie_algebra(2, [(0, 1, 1, 1)])
}

/// The action algebroid of the vector field `x d/dx` on `R`.
pub fn euler_line() -> Algebroid {
    Algebroid::new(1, 1, vec![vec![Poly::x(0)]], []).expect("euler algebroid")
}

fn lie_algebra<const N: usize>(rank: usize, entries: [(usize, usize, usize, i64); N]) -> Algebroid {
    let anchor = vec![Vec::new(); rank];
    let upper = entries.map(|(i, j, k, c)| (i, j, k, Poly::int(c)));
    Algebroid::new(0, rank, anchor, upper).expect("Lie algebra")
}

/// `Z/3` acting freely on six points `1..6` with orbits `{1,2,3}`, `{4,5,6}`.
pub fn z3_on_six() -> FiniteGroupoid {
    let group = FiniteGroup::cyclic(3);
    let points = (1..=6).map(|p| p.to_string()).collect();
    let act: Vec<Vec<usize>> = (0..6)
        .map(|x| (0..3).map(|g| (x / 3) * 3 + (x % 3 + g) % 3).collect())
        .collect();
    FiniteGroupoid::transformation(points, &group, &act).expect("free action")
}

fn base_algebroids() -> Vec<(&'static str, &'static str, Algebroid)> {
    vec![
        ("tangent-r1", "tangent algebroid of R^1", tangent(1)),
        ("tangent-r2", "tangent algebroid of R^2", tangent(2)),
        ("so3", "Lie algebra so(3) over a point", so3()),
        ("heisenberg", "Heisenberg algebra h3 over a point", heisenberg()),
        ("aff2", "nonabelian 2-dimensional Lie algebra", affine2()),
        ("euler-r1", "action algebroid of x d/dx on R", euler_line()),
    ]
}

/// Every algebroid entry, base versions first, then their adiabatic forms.
pub fn algebroids() -> Vec<(String, Algebroid)> {
    catalog()
        .into_iter()
        .filter_map(|e| match e.payload {
            Payload::Algebroid(a) => Some((e.name, a)),
            Payload::Groupoid(_) => None,
        })
        .collect()
}

pub fn groupoids() -> Vec<(String, FiniteGroupoid)> {
    catalog()
        .into_iter()
        .filter_map(|e| match e.payload {
            Payload::Groupoid(g) => Some((e.name, g)),
            Payload::Algebroid(_) => None,
        })
        .collect()
}

pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    let base = base_algebroids();
    for (name, desc, alg) in &base {
        out.push(CatalogEntry {
            name: name.to_string(),
            description: desc.to_string(),
            payload: Payload::Algebroid(alg.clone()),
        });
    }
    for (name, desc, alg) in &base {
        out.push(CatalogEntry {
            name: format!("{name}-adiabatic"),
            description: format!("adiabatic form of the {desc}"),
            payload: Payload::Algebroid(alg.adiabatic().expect("base entries are not adiabatic")),
        });
    }
    for n in 3..=6 {
        out.push(CatalogEntry {
            name: format!("pair{n}"),
            description: format!("pair groupoid on {n} points"),
            payload: Payload::Groupoid(FiniteGroupoid::pair(n)),
        });
    }
    for n in [3, 4] {
        out.push(CatalogEntry {
            name: format!("z{n}"),
            description: format!("cyclic group Z/{n} as a one-unit groupoid"),
            payload: Payload::Groupoid(FiniteGroupoid::group(&FiniteGroup::cyclic(n))),
        });
    }
    out.push(CatalogEntry {
        name: "z3-on-6".into(),
        description: "transformation groupoid of Z/3 acting on 6 points".into(),
        payload: Payload::Groupoid(z3_on_six()),
    });
    out
}

pub fn lookup(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

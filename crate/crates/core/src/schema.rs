//! JSON file formats for algebroids, groupoids, kernels, bundles and sections.
//!
//! Indices in algebroid files are one-based. Polynomials are strings in the
//! literal grammar of [`crate::poly`]; rationals may be JSON integers or
//! strings such as `"-3/2"`.

use std::collections::HashSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::algebroid::Algebroid;
use crate::error::Error;
use crate::groupoid::{EquivariantBundle, FiniteGroupoid, QMatrix, ReducedKernel};
use crate::poly::{parse_rational, Poly, Rational};

fn schema_err(e: impl std::fmt::Display) -> Error {
    Error::Schema(e.to_string())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebroidFile {
    base_dim: usize,
    rank: usize,
    anchor: Vec<Vec<Value>>,
    #[serde(default)]
    structure: Vec<StructureEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    adiabatic: Option<bool>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureEntry {
    i: usize,
    j: usize,
    k: usize,
    c: Value,
}

fn poly_value(v: &Value) -> Result<Poly, Error> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(n) if n.is_i64() => Ok(Poly::int(n.as_i64().unwrap_or_default())),
        other => Err(Error::Schema(format!("expected a polynomial string, found {other}"))),
    }
}

pub fn algebroid_from_json(src: &str) -> Result<Algebroid, Error> {
    let file: AlgebroidFile = serde_json::from_str(src).map_err(schema_err)?;
    if file.anchor.len() != file.rank {
        return Err(Error::Schema(format!(
            "anchor has {} rows, rank is {}",
            file.anchor.len(),
            file.rank
        )));
    }
    let anchor = file
        .anchor
        .iter()
        .map(|row| row.iter().map(poly_value).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let mut seen = HashSet::new();
    let mut upper = Vec::with_capacity(file.structure.len());
    for e in &file.structure {
        if e.i == 0 || e.j == 0 || e.k == 0 {
            return Err(Error::Schema("structure indices are 1-based".into()));
        }
        if e.i >= e.j {
            return Err(Error::Schema(format!(
                "structure entry ({},{},{}) must have i < j",
                e.i, e.j, e.k
            )));
        }
        if !seen.insert((e.i, e.j, e.k)) {
            return Err(Error::Schema(format!(
                "duplicate structure entry ({},{},{})",
                e.i, e.j, e.k
            )));
        }
        upper.push((e.i - 1, e.j - 1, e.k - 1, poly_value(&e.c)?));
    }
    let alg = Algebroid::new(file.base_dim, file.rank, anchor, upper)?;
    match file.adiabatic {
        Some(flag) => alg.with_adiabatic_flag(flag),
        None => Ok(alg),
    }
}

pub fn algebroid_to_value(alg: &Algebroid) -> Value {
    let file = AlgebroidFile {
        base_dim: alg.base_dim(),
        rank: alg.rank(),
        anchor: alg
            .anchor_matrix()
            .iter()
            .map(|row| row.iter().map(|p| Value::String(p.to_string())).collect())
            .collect(),
        structure: alg
            .upper_structure()
            .into_iter()
            .map(|(i, j, k, c)| StructureEntry {
                i: i + 1,
                j: j + 1,
                k: k + 1,
                c: Value::String(c.to_string()),
            })
            .collect(),
        adiabatic: alg.is_adiabatic().then_some(true),
    };
    serde_json::to_value(file).expect("algebroid serializes")
}

pub fn algebroid_to_json(alg: &Algebroid) -> String {
    pretty(&algebroid_to_value(alg))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupoidFile {
    units: Vec<String>,
    arrows: Vec<ArrowEntry>,
    mul: Vec<[String; 3]>,
    inv: Map<String, Value>,
    unit_arrows: Map<String, Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowEntry {
    id: String,
    d: String,
    r: String,
}

fn name_value(v: &Value) -> Result<&str, Error> {
    v.as_str()
        .ok_or_else(|| Error::Schema(format!("expected a name string, found {v}")))
}

pub fn groupoid_from_json(src: &str) -> Result<FiniteGroupoid, Error> {
    let file: GroupoidFile = serde_json::from_str(src).map_err(schema_err)?;
    let unit_idx = |name: &str| {
        file.units
            .iter()
            .position(|u| u == name)
            .ok_or_else(|| Error::Schema(format!("unknown unit {name}")))
    };
    let arrow_idx = |name: &str| {
        file.arrows
            .iter()
            .position(|a| a.id == name)
            .ok_or_else(|| Error::Schema(format!("unknown arrow {name}")))
    };
    let arrows = file
        .arrows
        .iter()
        .map(|a| Ok((a.id.clone(), unit_idx(&a.d)?, unit_idx(&a.r)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    let mul = file
        .mul
        .iter()
        .map(|[g, h, gh]| Ok((arrow_idx(g)?, arrow_idx(h)?, arrow_idx(gh)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    let mut inv = vec![None; arrows.len()];
    for (g, gi) in &file.inv {
        inv[arrow_idx(g)?] = Some(arrow_idx(name_value(gi)?)?);
    }
    let inv = inv
        .into_iter()
        .enumerate()
        .map(|(g, i)| i.ok_or_else(|| Error::Schema(format!("no inverse for {}", file.arrows[g].id))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut units = vec![None; file.units.len()];
    for (x, a) in &file.unit_arrows {
        units[unit_idx(x)?] = Some(arrow_idx(name_value(a)?)?);
    }
    let unit_arrows = units
        .into_iter()
        .enumerate()
        .map(|(x, a)| a.ok_or_else(|| Error::Schema(format!("no unit arrow for {}", file.units[x]))))
        .collect::<Result<Vec<_>, _>>()?;
    FiniteGroupoid::from_tables(file.units.clone(), arrows, mul, inv, unit_arrows)
}

pub fn groupoid_to_value(g: &FiniteGroupoid) -> Value {
    let a = |i: usize| g.arrow_name(i).to_string();
    let file = GroupoidFile {
        units: (0..g.unit_count()).map(|x| g.unit_name(x).to_string()).collect(),
        arrows: (0..g.arrow_count())
            .map(|i| ArrowEntry {
                id: a(i),
                d: g.unit_name(g.source(i)).to_string(),
                r: g.unit_name(g.range(i)).to_string(),
            })
            .collect(),
        mul: g
            .product_triples()
            .into_iter()
            .map(|(x, y, xy)| [a(x), a(y), a(xy)])
            .collect(),
        inv: (0..g.arrow_count())
            .map(|i| (a(i), Value::String(a(g.inverse(i)))))
            .collect(),
        unit_arrows: (0..g.unit_count())
            .map(|x| (g.unit_name(x).to_string(), Value::String(a(g.unit_arrow(x)))))
            .collect(),
    };
    serde_json::to_value(file).expect("groupoid serializes")
}

pub fn groupoid_to_json(g: &FiniteGroupoid) -> String {
    pretty(&groupoid_to_value(g))
}

fn rational_value(v: &Value) -> Result<Rational, Error> {
    match v {
        Value::String(s) => parse_rational(s.trim()),
        Value::Number(n) => n
            .as_i64()
            .map(crate::poly::rat)
            .ok_or_else(|| Error::Schema(format!("{n} is not an exact rational; quote fractions"))),
        other => Err(Error::Schema(format!("expected a rational, found {other}"))),
    }
}

fn rational_to_value(q: &Rational) -> Value {
    if q.is_integer() {
        if let Ok(n) = q.to_integer().to_string().parse::<i64>() {
            return Value::from(n);
        }
    }
    Value::String(q.to_string())
}

fn matrix_value(v: &Value) -> Result<QMatrix, Error> {
    match v {
        Value::Array(rows) => {
            let rows = rows
                .iter()
                .map(|row| match row {
                    Value::Array(xs) => xs.iter().map(rational_value).collect(),
                    // a bare rational is a 1x1 matrix row
                    other => Ok(vec![rational_value(other)?]),
                })
                .collect::<Result<Vec<Vec<Rational>>, Error>>()?;
            QMatrix::from_rows(rows)
        }
        other => Ok(QMatrix::scalar(rational_value(other)?)),
    }
}

fn matrix_to_value(m: &QMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(rational_to_value).collect()))
            .collect(),
    )
}

fn object<'a>(src: &'a Value, what: &str) -> Result<&'a Map<String, Value>, Error> {
    src.as_object()
        .ok_or_else(|| Error::Schema(format!("{what} must be a JSON object")))
}

fn parse_value(src: &str) -> Result<Value, Error> {
    serde_json::from_str(src).map_err(schema_err)
}

/// Reads a kernel file. Arrows that are not listed are zero; fiber
/// dimensions are inferred from the listed blocks and default to 1.
pub fn kernel_from_json(g: &FiniteGroupoid, src: &str) -> Result<ReducedKernel, Error> {
    let value = parse_value(src)?;
    let map = object(&value, "kernel")?;
    let mut blocks = vec![None; g.arrow_count()];
    let mut dims: Vec<Option<usize>> = vec![None; g.unit_count()];
    for (id, v) in map {
        let a = g
            .arrow_index(id)
            .ok_or_else(|| Error::Schema(format!("unknown arrow {id}")))?;
        let m = matrix_value(v)?;
        for (unit, size) in [(g.range(a), m.rows()), (g.source(a), m.cols())] {
            match dims[unit] {
                Some(d) if d != size => {
                    return Err(Error::Dimension(format!(
                        "inconsistent fiber dimension at unit {}",
                        g.unit_name(unit)
                    )))
                }
                _ => dims[unit] = Some(size),
            }
        }
        blocks[a] = Some(m);
    }
    let dims: Vec<usize> = dims.into_iter().map(|d| d.unwrap_or(1)).collect();
    let values = blocks
        .into_iter()
        .enumerate()
        .map(|(a, b)| b.unwrap_or_else(|| QMatrix::zeros(dims[g.range(a)], dims[g.source(a)])))
        .collect();
    ReducedKernel::new(g, dims, values)
}

/// Every arrow is listed, in arrow order.
pub fn kernel_to_value(g: &FiniteGroupoid, k: &ReducedKernel) -> Value {
    Value::Object(
        (0..g.arrow_count())
            .map(|a| (g.arrow_name(a).to_string(), matrix_to_value(k.value(a))))
            .collect(),
    )
}

pub fn kernel_to_json(g: &FiniteGroupoid, k: &ReducedKernel) -> String {
    pretty(&kernel_to_value(g, k))
}

/// `{"dims": {unit: n}, "rho": {arrow: matrix}}`. Omitted dimensions are 1;
/// omitted arrows are only allowed when the bundle is a line bundle, where
/// they default to the identity.
pub fn bundle_from_json(g: &FiniteGroupoid, src: &str) -> Result<EquivariantBundle, Error> {
    let value = parse_value(src)?;
    let map = object(&value, "bundle")?;
    if let Some(key) = map.keys().find(|k| *k != "dims" && *k != "rho") {
        return Err(Error::Schema(format!("unknown bundle field {key}")));
    }
    let mut dims = vec![1; g.unit_count()];
    if let Some(d) = map.get("dims") {
        for (u, n) in object(d, "dims")? {
            let x = g
                .unit_index(u)
                .ok_or_else(|| Error::Schema(format!("unknown unit {u}")))?;
            dims[x] = n
                .as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| Error::Schema(format!("dimension of {u} must be a positive integer")))?;
        }
    }
    let mut rho = vec![None; g.arrow_count()];
    if let Some(r) = map.get("rho") {
        for (id, m) in object(r, "rho")? {
            let a = g
                .arrow_index(id)
                .ok_or_else(|| Error::Schema(format!("unknown arrow {id}")))?;
            rho[a] = Some(matrix_value(m)?);
        }
    }
    let rho = rho
        .into_iter()
        .enumerate()
        .map(|(a, m)| match m {
            Some(m) => Ok(m),
            None if dims[g.range(a)] == 1 && dims[g.source(a)] == 1 => {
                Ok(QMatrix::scalar(Rational::one()))
            }
            None => Err(Error::Schema(format!("missing rho for {}", g.arrow_name(a)))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    EquivariantBundle::new(g, dims, rho)
}

pub fn bundle_to_value(g: &FiniteGroupoid, b: &EquivariantBundle) -> Value {
    let mut out = Map::new();
    out.insert(
        "dims".into(),
        Value::Object(
            (0..g.unit_count())
                .map(|x| (g.unit_name(x).to_string(), Value::from(b.dims()[x])))
                .collect(),
        ),
    );
    out.insert(
        "rho".into(),
        Value::Object(
            (0..g.arrow_count())
                .map(|a| (g.arrow_name(a).to_string(), matrix_to_value(b.rho(a))))
                .collect(),
        ),
    );
    Value::Object(out)
}

/// `{unit: [rational, ...]}`; omitted units are zero vectors of length
/// `sizes[x]`.
pub fn section_from_json(
    g: &FiniteGroupoid,
    sizes: &[usize],
    src: &str,
) -> Result<Vec<Vec<Rational>>, Error> {
    let value = parse_value(src)?;
    let map = object(&value, "section")?;
    let mut out: Vec<Vec<Rational>> = sizes.iter().map(|&n| vec![Rational::zero(); n]).collect();
    for (u, v) in map {
        let x = g
            .unit_index(u)
            .ok_or_else(|| Error::Schema(format!("unknown unit {u}")))?;
        out[x] = match v {
            Value::Array(xs) => xs.iter().map(rational_value).collect::<Result<_, _>>()?,
            other => vec![rational_value(other)?],
        };
    }
    Ok(out)
}

pub fn section_to_value(g: &FiniteGroupoid, phi: &[Vec<Rational>]) -> Value {
    Value::Object(
        phi.iter()
            .enumerate()
            .map(|(x, v)| {
                (
                    g.unit_name(x).to_string(),
                    Value::Array(v.iter().map(rational_to_value).collect()),
                )
            })
            .collect(),
    )
}

/// Two-space indented JSON with a trailing newline.
pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::poly::rat;

    #[test]
    fn algebroids_round_trip() {
        for (name, alg) in catalog::algebroids() {
            let back = algebroid_from_json(&algebroid_to_json(&alg)).unwrap();
            assert_eq!(back, alg, "{name}");
        }
    }

    #[test]
    fn groupoids_round_trip() {
        for (name, g) in catalog::groupoids() {
            let back = groupoid_from_json(&groupoid_to_json(&g)).unwrap();
            assert_eq!(back, g, "{name}");
        }
    }

    #[test]
    fn algebroid_file_errors() {
        let bad_order = r#"{"base_dim":0,"rank":2,"anchor":[[],[]],
            "structure":[{"i":2,"j":1,"k":1,"c":"1"}]}"#;
        assert!(matches!(algebroid_from_json(bad_order), Err(Error::Schema(_))));
        let bad_poly = r#"{"base_dim":1,"rank":1,"anchor":[["x1+"]]}"#;
        assert!(algebroid_from_json(bad_poly).is_err());
        let wrong_var = r#"{"base_dim":1,"rank":1,"anchor":[["x2"]]}"#;
        assert!(algebroid_from_json(wrong_var).is_err());
        let ok = r#"{"base_dim":1,"rank":1,"anchor":[[1]]}"#;
        assert_eq!(algebroid_from_json(ok).unwrap(), catalog::tangent(1));
    }

    #[test]
    fn kernels_and_sections() {
        let g = FiniteGroupoid::pair(2);
        let k = kernel_from_json(&g, r#"{"(1,2)": [["1/2"]], "(2,2)": 3}"#).unwrap();
        assert_eq!(k.value(1)[(0, 0)], crate::poly::ratio(1, 2));
        assert_eq!(k.value(3)[(0, 0)], rat(3));
        assert!(k.value(0).is_zero());
        let back = kernel_from_json(&g, &kernel_to_json(&g, &k)).unwrap();
        assert_eq!(back, k);
        assert!(kernel_from_json(&g, r#"{"(9,9)": 1}"#).is_err());
        assert!(kernel_from_json(&g, r#"{"(1,1)": 0.5}"#).is_err());
        let phi = section_from_json(&g, &[1, 1], r#"{"2": [4]}"#).unwrap();
        assert_eq!(phi, vec![vec![rat(0)], vec![rat(4)]]);
    }

    #[test]
    fn bundle_defaults_to_trivial_lines() {
        let g = FiniteGroupoid::pair(3);
        let b = bundle_from_json(&g, "{}").unwrap();
        assert_eq!(b, EquivariantBundle::trivial(&g));
        let v = bundle_to_value(&g, &b);
        assert_eq!(bundle_from_json(&g, &pretty(&v)).unwrap(), b);
    }
}

//! Finite groupoids and their convolution algebras.
//!
//! Arrows go from their source `d(g)` to their range `r(g)`; a pair `(g, h)`
//! is composable when `d(g) = r(h)`. Densities are counting measure, so every
//! integral over a fiber is a finite sum.

mod kernel;
mod matrix;
mod represent;

use std::collections::HashMap;
use std::fmt;

use crate::error::Error;

pub use kernel::{InvariantFamily, ReducedKernel};
pub use matrix::QMatrix;
pub use represent::EquivariantBundle;

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, Error> {
        let n = names.len();
        let bad = |msg: String| Err(Error::InvalidGroupoid(format!("not a group: {msg}")));
        if n == 0 || table.len() != n || table.iter().any(|row| row.len() != n) {
            return bad("table must be square and nonempty".into());
        }
        if table.iter().flatten().any(|&c| c >= n) {
            return bad("table entry out of range".into());
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad(format!("associativity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
        else {
            return bad("no identity".into());
        };
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == identity && table[b][a] == identity) {
                Some(b) => inverse.push(b),
                None => return bad(format!("element {} has no inverse", names[a])),
            }
        }
        Ok(FiniteGroup {
            names,
            table,
            identity,
            inverse,
        })
    }

    /// The cyclic group `Z/n`, elements named `0..n-1`.
    pub fn cyclic(n: usize) -> Self {
        let names = (0..n).map(|k| k.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::new(names, table).expect("cyclic group")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    units: Vec<String>,
    arrows: Vec<String>,
    d: Vec<usize>,
    r: Vec<usize>,
    /// `arrows.len()^2` table; entry `g * n + h` is the product `gh`.
    mul: Vec<Option<usize>>,
    inv: Vec<usize>,
    unit_arrows: Vec<usize>,
}

/// A single axiom violation, with arrow and unit indices as witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupoidDefect {
    /// A product is recorded for a pair with `d(g) != r(h)`.
    NotComposable { g: usize, h: usize },
    /// A composable pair has no recorded product.
    MissingProduct { g: usize, h: usize },
    Range { g: usize, h: usize },
    Source { g: usize, h: usize },
    Associativity { g: usize, h: usize, k: usize },
    UnitEndpoints { unit: usize },
    UnitNotInjective { x: usize, y: usize },
    LeftUnit { g: usize },
    RightUnit { g: usize },
    InverseEndpoints { g: usize },
    /// `g g^-1 != u(r(g))`
    RightInverse { g: usize },
    /// `g^-1 g != u(d(g))`
    LeftInverse { g: usize },
}

/// Outcome of [`FiniteGroupoid::check`]: defects grouped by axiom.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupoidReport {
    /// Multiplication defined exactly on composable pairs.
    pub composition: Vec<GroupoidDefect>,
    /// Range/source of products and associativity.
    pub axiom_i: Vec<GroupoidDefect>,
    /// Unit laws and injectivity of the unit embedding.
    pub axiom_ii: Vec<GroupoidDefect>,
    /// Inverse laws.
    pub axiom_iii: Vec<GroupoidDefect>,
}

impl GroupoidReport {
    pub fn passed(&self) -> bool {
        self.composition.is_empty()
            && self.axiom_i.is_empty()
            && self.axiom_ii.is_empty()
            && self.axiom_iii.is_empty()
    }
}

impl FiniteGroupoid {
    /// Assembles a groupoid from index tables. Only structural consistency is
    /// checked here (indices in range, no conflicting products); the
    /// groupoid axioms are checked by [`FiniteGroupoid::check`].
    pub fn from_tables(
        units: Vec<String>,
        arrows: Vec<(String, usize, usize)>,
        mul: impl IntoIterator<Item = (usize, usize, usize)>,
        inv: Vec<usize>,
        unit_arrows: Vec<usize>,
    ) -> Result<Self, Error> {
        let nu = units.len();
        let na = arrows.len();
        let bad = |m: String| Err(Error::InvalidGroupoid(m));
        if nu == 0 {
            return bad("no units".into());
        }
        if has_duplicates(&units) {
            return bad("duplicate unit names".into());
        }
        let names: Vec<String> = arrows.iter().map(|(n, _, _)| n.clone()).collect();
        if has_duplicates(&names) {
            return bad("duplicate arrow ids".into());
        }
        if arrows.iter().any(|&(_, d, r)| d >= nu || r >= nu) {
            return bad("arrow endpoint out of range".into());
        }
        if inv.len() != na || inv.iter().any(|&i| i >= na) {
            return bad("inverse table must map every arrow to an arrow".into());
        }
        if unit_arrows.len() != nu || unit_arrows.iter().any(|&a| a >= na) {
            return bad("unit table must map every unit to an arrow".into());
        }
        let mut table = vec![None; na * na];
        for (g, h, gh) in mul {
            if g >= na || h >= na || gh >= na {
                return bad("product entry out of range".into());
            }
            match table[g * na + h] {
                Some(prev) if prev != gh => {
                    return bad(format!("conflicting products for ({}, {})", names[g], names[h]))
                }
                _ => table[g * na + h] = Some(gh),
            }
        }
        Ok(FiniteGroupoid {
            units,
            d: arrows.iter().map(|a| a.1).collect(),
            r: arrows.iter().map(|a| a.2).collect(),
            arrows: names,
            mul: table,
            inv,
            unit_arrows,
        })
    }

    /// The pair groupoid on points `1..=n`: arrow `(x,y)` goes from `y` to
    /// `x` and `(x,y)(y,z) = (x,z)`.
    pub fn pair(n: usize) -> Self {
        let units: Vec<String> = (1..=n).map(|x| x.to_string()).collect();
        let idx = |x: usize, y: usize| x * n + y;
        let mut arrows = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                arrows.push((format!("({},{})", x + 1, y + 1), y, x));
            }
        }
        let mut mul = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    mul.push((idx(x, y), idx(y, z), idx(x, z)));
                }
            }
        }
        let inv = (0..n * n).map(|a| idx(a % n, a / n)).collect();
        let unit_arrows = (0..n).map(|x| idx(x, x)).collect();
        FiniteGroupoid::from_tables(units, arrows, mul, inv, unit_arrows).expect("pair groupoid")
    }

    /// A group as a groupoid with the single unit `*`.
    pub fn group(g: &FiniteGroup) -> Self {
        let n = g.order();
        let arrows = (0..n).map(|a| (g.name(a).to_string(), 0, 0)).collect();
        let mul = (0..n).flat_map(|a| (0..n).map(move |b| (a, b, g.mul(a, b))));
        let inv = (0..n).map(|a| g.inv(a)).collect();
        FiniteGroupoid::from_tables(vec!["*".into()], arrows, mul, inv, vec![g.identity()])
            .expect("group groupoid")
    }

    /// The transformation groupoid of a right action `act[x][g] = x.g`:
    /// arrows `(x,g)` with `d(x,g) = x.g`, `r(x,g) = x` and
    /// `(x,g)(x.g,g') = (x,gg')`.
    pub fn transformation(
        points: Vec<String>,
        group: &FiniteGroup,
        act: &[Vec<usize>],
    ) -> Result<Self, Error> {
        let np = points.len();
        let ng = group.order();
        if act.len() != np || act.iter().any(|row| row.len() != ng) {
            return Err(Error::InvalidAction(format!(
                "action table must be {np} x {ng}"
            )));
        }
        if act.iter().flatten().any(|&y| y >= np) {
            return Err(Error::InvalidAction("action sends a point out of range".into()));
        }
        for x in 0..np {
            if act[x][group.identity()] != x {
                return Err(Error::InvalidAction(format!(
                    "identity moves point {}",
                    points[x]
                )));
            }
            for a in 0..ng {
                for b in 0..ng {
                    if act[act[x][a]][b] != act[x][group.mul(a, b)] {
                        return Err(Error::InvalidAction(format!(
                            "not a right action at ({}, {}, {})",
                            points[x],
                            group.name(a),
                            group.name(b)
                        )));
                    }
                }
            }
        }
        let idx = |x: usize, a: usize| x * ng + a;
        let mut arrows = Vec::with_capacity(np * ng);
        for x in 0..np {
            for a in 0..ng {
                arrows.push((format!("({},{})", points[x], group.name(a)), act[x][a], x));
            }
        }
        let mut mul = Vec::new();
        for x in 0..np {
            for a in 0..ng {
                for b in 0..ng {
                    mul.push((idx(x, a), idx(act[x][a], b), idx(x, group.mul(a, b))));
                }
            }
        }
        let mut inv = vec![0; np * ng];
        for x in 0..np {
            for a in 0..ng {
                inv[idx(x, a)] = idx(act[x][a], group.inv(a));
            }
        }
        let unit_arrows = (0..np).map(|x| idx(x, group.identity())).collect();
        FiniteGroupoid::from_tables(points, arrows, mul, inv, unit_arrows)
    }

    pub fn unit_count(&self) -> usize {
        self.units.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn unit_name(&self, x: usize) -> &str {
        &self.units[x]
    }

    pub fn arrow_name(&self, g: usize) -> &str {
        &self.arrows[g]
    }

    pub fn unit_index(&self, name: &str) -> Option<usize> {
        self.units.iter().position(|u| u == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a == name)
    }

    pub fn source(&self, g: usize) -> usize {
        self.d[g]
    }

    pub fn range(&self, g: usize) -> usize {
        self.r[g]
    }

    pub fn product(&self, g: usize, h: usize) -> Option<usize> {
        self.mul[g * self.arrows.len() + h]
    }

    /// The product of a pair known to be composable in a valid groupoid.
    fn compose(&self, g: usize, h: usize) -> usize {
        self.product(g, h)
            .unwrap_or_else(|| panic!("({}, {}) is not composable", self.arrows[g], self.arrows[h]))
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn unit_arrow(&self, x: usize) -> usize {
        self.unit_arrows[x]
    }

    pub fn is_unit_arrow(&self, g: usize) -> bool {
        self.unit_arrows.contains(&g)
    }

    /// `G_x = d^{-1}(x)`, in arrow order.
    pub fn source_fiber(&self, x: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&g| self.d[g] == x).collect()
    }

    /// All pairs with `d(g) = r(h)`.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.arrows.len();
        (0..n).flat_map(move |g| (0..n).filter(move |&h| self.d[g] == self.r[h]).map(move |h| (g, h)))
    }

    /// Exhaustively verifies the groupoid axioms.
    pub fn check(&self) -> GroupoidReport {
        use GroupoidDefect::*;
        let n = self.arrows.len();
        let mut rep = GroupoidReport::default();
        for g in 0..n {
            for h in 0..n {
                let composable = self.d[g] == self.r[h];
                match (composable, self.product(g, h)) {
                    (false, Some(_)) => rep.composition.push(NotComposable { g, h }),
                    (true, None) => rep.composition.push(MissingProduct { g, h }),
                    (true, Some(gh)) => {
                        if self.r[gh] != self.r[g] {
                            rep.axiom_i.push(Range { g, h });
                        }
                        if self.d[gh] != self.d[h] {
                            rep.axiom_i.push(Source { g, h });
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        for (g, h) in self.composable_pairs() {
            let Some(gh) = self.product(g, h) else { continue };
            for k in (0..n).filter(|&k| self.d[h] == self.r[k]) {
                let left = self.product(gh, k);
                let right = self.product(h, k).and_then(|hk| self.product(g, hk));
                if left.is_none() || left != right {
                    rep.axiom_i.push(Associativity { g, h, k });
                }
            }
        }
        for (x, &u) in self.unit_arrows.iter().enumerate() {
            if self.d[u] != x || self.r[u] != x {
                rep.axiom_ii.push(UnitEndpoints { unit: x });
            }
            for y in (x + 1)..self.units.len() {
                if self.unit_arrows[y] == u {
                    rep.axiom_ii.push(UnitNotInjective { x, y });
                }
            }
        }
        for g in 0..n {
            if self.product(self.unit_arrows[self.r[g]], g) != Some(g) {
                rep.axiom_ii.push(LeftUnit { g });
            }
            if self.product(g, self.unit_arrows[self.d[g]]) != Some(g) {
                rep.axiom_ii.push(RightUnit { g });
            }
        }
        for g in 0..n {
            let gi = self.inv[g];
            if self.d[gi] != self.r[g] || self.r[gi] != self.d[g] {
                rep.axiom_iii.push(InverseEndpoints { g });
            }
            if self.product(g, gi) != Some(self.unit_arrows[self.r[g]]) {
                rep.axiom_iii.push(RightInverse { g });
            }
            if self.product(gi, g) != Some(self.unit_arrows[self.d[g]]) {
                rep.axiom_iii.push(LeftInverse { g });
            }
        }
        rep
    }

    /// A defect with arrow and unit names, e.g. `right-inverse[(1,2)]`.
    pub fn defect_label(&self, d: &GroupoidDefect) -> String {
        let a = |g: &usize| self.arrows[*g].as_str();
        let u = |x: &usize| self.units[*x].as_str();
        use GroupoidDefect::*;
        match d {
            NotComposable { g, h } => format!("not-composable[{},{}]", a(g), a(h)),
            MissingProduct { g, h } => format!("missing-product[{},{}]", a(g), a(h)),
            Range { g, h } => format!("range[{},{}]", a(g), a(h)),
            Source { g, h } => format!("source[{},{}]", a(g), a(h)),
            Associativity { g, h, k } => format!("assoc[{},{},{}]", a(g), a(h), a(k)),
            UnitEndpoints { unit } => format!("unit-endpoints[{}]", u(unit)),
            UnitNotInjective { x, y } => format!("unit-injective[{},{}]", u(x), u(y)),
            LeftUnit { g } => format!("left-unit[{}]", a(g)),
            RightUnit { g } => format!("right-unit[{}]", a(g)),
            InverseEndpoints { g } => format!("inverse-endpoints[{}]", a(g)),
            RightInverse { g } => format!("right-inverse[{}]", a(g)),
            LeftInverse { g } => format!("left-inverse[{}]", a(g)),
        }
    }

    /// Renders a report with arrow and unit names.
    pub fn describe(&self, rep: &GroupoidReport) -> String {
        let item = |d: &GroupoidDefect| self.defect_label(d);
        let line = |label: &str, ds: &[GroupoidDefect]| -> String {
            if ds.is_empty() {
                format!("{label}: PASS")
            } else {
                let items: Vec<String> = ds.iter().map(item).collect();
                format!("{label}: FAIL {}", items.join(" "))
            }
        };
        [
            line("composition", &rep.composition),
            line("axiom (i)", &rep.axiom_i),
            line("axiom (ii)", &rep.axiom_ii),
            line("axiom (iii)", &rep.axiom_iii),
        ]
        .join("\n")
    }

    /// Returns a copy with `inv[g]` replaced; used to plant defects.
    pub fn with_inverse(&self, g: usize, inv_g: usize) -> Self {
        let mut out = self.clone();
        out.inv[g] = inv_g;
        out
    }

    /// Product table as `(g, h, gh)` triples in arrow order.
    pub fn product_triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.arrows.len();
        (0..n * n)
            .filter_map(|i| self.mul[i].map(|gh| (i / n, i % n, gh)))
            .collect()
    }

    /// Map from unit name to index, handy for decoding named data.
    pub fn unit_lookup(&self) -> HashMap<&str, usize> {
        self.units.iter().enumerate().map(|(i, u)| (u.as_str(), i)).collect()
    }
}

impl fmt::Display for FiniteGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "groupoid with {} units and {} arrows",
            self.units.len(),
            self.arrows.len()
        )
    }
}

fn has_duplicates(names: &[String]) -> bool {
    let mut seen = std::collections::HashSet::new();
    names.iter().any(|n| !seen.insert(n))
}

//! Finite groupoids stored as explicit tables.
//!
//! Objects and arrows are string identifiers kept in lexicographic order;
//! every matrix built downstream indexes rows and columns by that order.
//! `compose(a, b)` is "a after b" and is defined when `src(a) == tgt(b)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::ValidationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Object(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow(pub usize);

/// One row of the arrow list in the groupoid document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowSpec {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// The groupoid JSON document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    /// `[a, b, c]` means `compose(a, b) = c`.
    pub compose: Vec<[String; 3]>,
    pub identity: BTreeMap<String, String>,
    pub inverse: BTreeMap<String, String>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    name: String,
    objects: Vec<String>,
    arrows: Vec<String>,
    src: Vec<Object>,
    tgt: Vec<Object>,
    /// Row-major `|arrows|²` table; entries may be missing or extraneous
    /// until the groupoid is validated.
    compose: Vec<Option<Arrow>>,
    identity: Vec<Arrow>,
    inverse: Vec<Arrow>,
    object_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
}

/// `G(x, y)`: the arrows from `source` to `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSet {
    pub source: Object,
    pub target: Object,
    pub arrows: Vec<Arrow>,
}

fn index_of(names: &[String]) -> Result<HashMap<String, usize>> {
    let mut map = HashMap::with_capacity(names.len());
    for (k, n) in names.iter().enumerate() {
        if map.insert(n.clone(), k).is_some() {
            return Err(Error::Duplicate(n.clone()));
        }
    }
    Ok(map)
}

impl FiniteGroupoid {
    /// Resolves identifiers and builds the tables. Referential problems
    /// (unknown or duplicate ids, missing identity or inverse entries,
    /// conflicting compose entries) are errors; axiom failures are left
    /// to [`FiniteGroupoid::validate`].
    pub fn from_spec(spec: &GroupoidSpec) -> Result<Self> {
        let mut objects = spec.objects.clone();
        objects.sort();
        let object_index = index_of(&objects)?;
        let mut arrow_rows: Vec<&ArrowSpec> = spec.arrows.iter().collect();
        arrow_rows.sort_by(|a, b| a.id.cmp(&b.id));
        let arrows: Vec<String> = arrow_rows.iter().map(|a| a.id.clone()).collect();
        let arrow_index = index_of(&arrows)?;
        let obj = |n: &str| {
            object_index
                .get(n)
                .map(|&k| Object(k))
                .ok_or_else(|| Error::UnknownObject(n.to_string()))
        };
        let arr = |n: &str| {
            arrow_index
                .get(n)
                .map(|&k| Arrow(k))
                .ok_or_else(|| Error::UnknownArrow(n.to_string()))
        };
        let src = arrow_rows.iter().map(|a| obj(&a.src)).collect::<Result<Vec<_>>>()?;
        let tgt = arrow_rows.iter().map(|a| obj(&a.tgt)).collect::<Result<Vec<_>>>()?;
        let n = arrows.len();
        let mut compose = vec![None; n * n];
        for [a, b, c] in &spec.compose {
            let (a, b, c) = (arr(a)?, arr(b)?, arr(c)?);
            let slot = &mut compose[a.0 * n + b.0];
            if slot.is_some_and(|old| old != c) {
                return Err(Error::Table(format!(
                    "conflicting entries for ({}, {})",
                    arrows[a.0], arrows[b.0]
                )));
            }
            *slot = Some(c);
        }
        for k in spec.identity.keys() {
            obj(k)?;
        }
        let identity = objects
            .iter()
            .map(|x| {
                let id = spec
                    .identity
                    .get(x)
                    .ok_or_else(|| Error::Table(format!("no identity arrow for object {x:?}")))?;
                arr(id)
            })
            .collect::<Result<Vec<_>>>()?;
        for k in spec.inverse.keys() {
            arr(k)?;
        }
        let inverse = arrows
            .iter()
            .map(|g| {
                let inv = spec
                    .inverse
                    .get(g)
                    .ok_or_else(|| Error::Table(format!("no inverse for arrow {g:?}")))?;
                arr(inv)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteGroupoid {
            name: spec.name.clone().unwrap_or_default(),
            objects,
            arrows,
            src,
            tgt,
            compose,
            identity,
            inverse,
            object_index,
            arrow_index,
        })
    }

    /// Builds and validates in one step.
    pub fn from_spec_validated(spec: &GroupoidSpec) -> Result<Self> {
        let g = FiniteGroupoid::from_spec(spec)?;
        g.validate().into_result("groupoid")?;
        Ok(g)
    }

    pub fn to_spec(&self) -> GroupoidSpec {
        let mut compose = Vec::new();
        for a in self.arrows() {
            for b in self.arrows() {
                if let Some(c) = self.compose(a, b) {
                    compose.push([
                        self.arrow_name(a).to_string(),
                        self.arrow_name(b).to_string(),
                        self.arrow_name(c).to_string(),
                    ]);
                }
            }
        }
        GroupoidSpec {
            name: (!self.name.is_empty()).then(|| self.name.clone()),
            objects: self.objects.clone(),
            arrows: self
                .arrows()
                .map(|a| ArrowSpec {
                    id: self.arrow_name(a).to_string(),
                    src: self.object_name(self.src(a)).to_string(),
                    tgt: self.object_name(self.tgt(a)).to_string(),
                })
                .collect(),
            compose,
            identity: self
                .objects()
                .map(|x| (self.object_name(x).to_string(), self.arrow_name(self.identity(x)).to_string()))
                .collect(),
            inverse: self
                .arrows()
                .map(|a| (self.arrow_name(a).to_string(), self.arrow_name(self.inverse(a)).to_string()))
                .collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = Object> + Clone {
        (0..self.objects.len()).map(Object)
    }

    pub fn arrows(&self) -> impl Iterator<Item = Arrow> + Clone {
        (0..self.arrows.len()).map(Arrow)
    }

    pub fn object_name(&self, x: Object) -> &str {
        &self.objects[x.0]
    }

    pub fn arrow_name(&self, a: Arrow) -> &str {
        &self.arrows[a.0]
    }

    pub fn object(&self, name: &str) -> Result<Object> {
        self.object_index
            .get(name)
            .map(|&k| Object(k))
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn arrow(&self, name: &str) -> Result<Arrow> {
        self.arrow_index
            .get(name)
            .map(|&k| Arrow(k))
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    pub fn src(&self, a: Arrow) -> Object {
        self.src[a.0]
    }

    pub fn tgt(&self, a: Arrow) -> Object {
        self.tgt[a.0]
    }

    pub fn composable(&self, a: Arrow, b: Arrow) -> bool {
        self.src(a) == self.tgt(b)
    }

    /// `a ∘ b` as recorded in the table, `None` when not composable.
    pub fn compose(&self, a: Arrow, b: Arrow) -> Option<Arrow> {
        if !self.composable(a, b) {
            return None;
        }
        self.compose[a.0 * self.arrows.len() + b.0]
    }

    pub fn identity(&self, x: Object) -> Arrow {
        self.identity[x.0]
    }

    pub fn inverse(&self, a: Arrow) -> Arrow {
        self.inverse[a.0]
    }

    pub fn is_identity(&self, a: Arrow) -> bool {
        self.identity(self.src(a)) == a
    }

    /// Checks every groupoid axiom, recording each failure with a witness.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.arrows.len();
        let an = |a: Arrow| self.arrow_name(a);
        for a in self.arrows() {
            for b in self.arrows() {
                let entry = self.compose[a.0 * n + b.0];
                match (self.composable(a, b), entry) {
                    (true, None) => report.push(
                        "composition not total",
                        format!("({}, {})", an(a), an(b)),
                    ),
                    (false, Some(_)) => report.push(
                        "composition defined on non-composable pair",
                        format!("({}, {})", an(a), an(b)),
                    ),
                    (true, Some(c)) => {
                        if self.src(c) != self.src(b) || self.tgt(c) != self.tgt(a) {
                            report.push(
                                "composition endpoints",
                                format!("({}, {}) -> {}", an(a), an(b), an(c)),
                            );
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        if !report.is_valid() {
            // Associativity and unit checks need a total table.
            self.check_identity_endpoints(&mut report);
            return report;
        }
        for a in self.arrows() {
            for b in self.arrows().filter(|&b| self.composable(a, b)) {
                let ab = self.compose(a, b).expect("total");
                for c in self.arrows().filter(|&c| self.composable(b, c)) {
                    let bc = self.compose(b, c).expect("total");
                    if self.compose(ab, c) != self.compose(a, bc) {
                        report.push(
                            "associativity",
                            format!("({}, {}, {})", an(a), an(b), an(c)),
                        );
                    }
                }
            }
        }
        self.check_identity_endpoints(&mut report);
        for a in self.arrows() {
            let (s, t) = (self.identity(self.src(a)), self.identity(self.tgt(a)));
            if self.compose(a, s) != Some(a) || self.compose(t, a) != Some(a) {
                report.push("unit law", an(a).to_string());
            }
            let inv = self.inverse(a);
            if self.compose(a, inv) != Some(t) || self.compose(inv, a) != Some(s) {
                report.push("inverse axiom", an(a).to_string());
            }
        }
        report
    }

    fn check_identity_endpoints(&self, report: &mut ValidationReport) {
        for x in self.objects() {
            let e = self.identity(x);
            if self.src(e) != x || self.tgt(e) != x {
                report.push(
                    "identity endpoints",
                    format!("{} -> {}", self.object_name(x), self.arrow_name(e)),
                );
            }
        }
    }

    pub fn hom_set(&self, x: Object, y: Object) -> HomSet {
        HomSet {
            source: x,
            target: y,
            arrows: self
                .arrows()
                .filter(|&a| self.src(a) == x && self.tgt(a) == y)
                .collect(),
        }
    }

    /// The isotropy group `G(x, x)`, checked to be closed under
    /// composition and inverses.
    pub fn isotropy(&self, x: Object) -> Result<HomSet> {
        if x.0 >= self.objects.len() {
            return Err(Error::UnknownObject(format!("#{}", x.0)));
        }
        let hom = self.hom_set(x, x);
        if !hom.arrows.contains(&self.identity(x)) {
            return Err(Error::Table(format!(
                "isotropy of {} lacks its identity",
                self.object_name(x)
            )));
        }
        for &a in &hom.arrows {
            if !hom.arrows.contains(&self.inverse(a)) {
                return Err(Error::Table(format!("isotropy not closed under inverse at {}", self.arrow_name(a))));
            }
            for &b in &hom.arrows {
                if !self.compose(a, b).is_some_and(|c| hom.arrows.contains(&c)) {
                    return Err(Error::Table(format!(
                        "isotropy not closed at ({}, {})",
                        self.arrow_name(a),
                        self.arrow_name(b)
                    )));
                }
            }
        }
        Ok(hom)
    }

    /// Connected components: objects joined by some arrow.
    pub fn orbit_partition(&self) -> Vec<Vec<Object>> {
        let mut parent: Vec<usize> = (0..self.objects.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for a in self.arrows() {
            let (s, t) = (find(&mut parent, self.src(a).0), find(&mut parent, self.tgt(a).0));
            if s != t {
                parent[s.max(t)] = s.min(t);
            }
        }
        let mut classes: BTreeMap<usize, Vec<Object>> = BTreeMap::new();
        for x in self.objects() {
            let r = find(&mut parent, x.0);
            classes.entry(r).or_default().push(x);
        }
        classes.into_values().collect()
    }

    /// Some arrow `from -> to`, the least one in canonical order.
    pub fn transporter(&self, from: Object, to: Object) -> Option<Arrow> {
        self.arrows().find(|&a| self.src(a) == from && self.tgt(a) == to)
    }

    /// True when every arrow is an endomorphism.
    pub fn is_bundle_of_groups(&self) -> bool {
        self.arrows().all(|a| self.src(a) == self.tgt(a))
    }

    pub fn unit(objects: &[&str]) -> Self {
        let mut spec = GroupoidSpec {
            name: None,
            objects: objects.iter().map(|s| s.to_string()).collect(),
            arrows: vec![],
            compose: vec![],
            identity: BTreeMap::new(),
            inverse: BTreeMap::new(),
        };
        for x in objects {
            let id = format!("1_{x}");
            spec.arrows.push(ArrowSpec {
                id: id.clone(),
                src: x.to_string(),
                tgt: x.to_string(),
            });
            spec.compose.push([id.clone(), id.clone(), id.clone()]);
            spec.identity.insert(x.to_string(), id.clone());
            spec.inverse.insert(id.clone(), id);
        }
        FiniteGroupoid::from_spec(&spec).expect("unit groupoid tables")
    }

    /// Pair groupoid: one arrow `(i,j)` from `j` to `i` for every ordered
    /// pair, so `(i,j)(j,k) = (i,k)`.
    pub fn pair(objects: &[&str]) -> Self {
        let name = |i: &str, j: &str| format!("({i},{j})");
        let mut spec = GroupoidSpec {
            name: None,
            objects: objects.iter().map(|s| s.to_string()).collect(),
            arrows: vec![],
            compose: vec![],
            identity: BTreeMap::new(),
            inverse: BTreeMap::new(),
        };
        for i in objects {
            spec.identity.insert(i.to_string(), name(i, i));
            for j in objects {
                spec.arrows.push(ArrowSpec {
                    id: name(i, j),
                    src: j.to_string(),
                    tgt: i.to_string(),
                });
                spec.inverse.insert(name(i, j), name(j, i));
                for k in objects {
                    spec.compose.push([name(i, j), name(j, k), name(i, k)]);
                }
            }
        }
        FiniteGroupoid::from_spec(&spec).expect("pair groupoid tables")
    }

    /// The one-object groupoid of a group; the object is named `*`.
    pub fn point(group: &GroupTable) -> Self {
        let mut spec = GroupoidSpec {
            name: None,
            objects: vec!["*".into()],
            arrows: vec![],
            compose: vec![],
            identity: BTreeMap::new(),
            inverse: BTreeMap::new(),
        };
        let el = &group.elements;
        spec.identity.insert("*".into(), el[group.unit].clone());
        for (a, name) in el.iter().enumerate() {
            spec.arrows.push(ArrowSpec {
                id: name.clone(),
                src: "*".into(),
                tgt: "*".into(),
            });
            spec.inverse.insert(name.clone(), el[group.inverse(a)].clone());
            for (b, other) in el.iter().enumerate() {
                spec.compose.push([name.clone(), other.clone(), el[group.mul(a, b)].clone()]);
            }
        }
        FiniteGroupoid::from_spec(&spec).expect("point groupoid tables")
    }

    /// Translation groupoid of a group acting on `objects`. `action[γ][x]`
    /// is the index of `γ·x`. Arrows are `(γ,x)` from `x` to `γ·x`.
    pub fn action(group: &GroupTable, objects: &[&str], action: &[Vec<usize>]) -> Result<Self> {
        let n = objects.len();
        if action.len() != group.order() {
            return Err(Error::BadAction(format!(
                "{} permutations for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        for (g, perm) in action.iter().enumerate() {
            let mut seen = vec![false; n];
            if perm.len() != n {
                return Err(Error::BadAction(format!("{} acts on {} points", group.elements[g], perm.len())));
            }
            for &y in perm {
                if y >= n || std::mem::replace(&mut seen[y], true) {
                    return Err(Error::BadAction(format!("{} is not a bijection", group.elements[g])));
                }
            }
        }
        for x in 0..n {
            if action[group.unit][x] != x {
                return Err(Error::BadAction("unit does not act trivially".into()));
            }
            for g in 0..group.order() {
                for h in 0..group.order() {
                    if action[group.mul(g, h)][x] != action[g][action[h][x]] {
                        return Err(Error::BadAction(format!(
                            "({}{})·{} differs from {}·({}·{})",
                            group.elements[g], group.elements[h], objects[x], group.elements[g], group.elements[h], objects[x]
                        )));
                    }
                }
            }
        }
        let name = |g: usize, x: usize| format!("({},{})", group.elements[g], objects[x]);
        let mut spec = GroupoidSpec {
            name: None,
            objects: objects.iter().map(|s| s.to_string()).collect(),
            arrows: vec![],
            compose: vec![],
            identity: BTreeMap::new(),
            inverse: BTreeMap::new(),
        };
        for x in 0..n {
            spec.identity.insert(objects[x].to_string(), name(group.unit, x));
            for g in 0..group.order() {
                let gx = action[g][x];
                spec.arrows.push(ArrowSpec {
                    id: name(g, x),
                    src: objects[x].to_string(),
                    tgt: objects[gx].to_string(),
                });
                spec.inverse.insert(name(g, x), name(group.inverse(g), gx));
                for h in 0..group.order() {
                    // (h, γx)(γ, x) = (hγ, x)
                    spec.compose.push([name(h, gx), name(g, x), name(group.mul(h, g), x)]);
                }
            }
        }
        FiniteGroupoid::from_spec(&spec)
    }
}

impl fmt::Debug for FiniteGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroupoid")
            .field("name", &self.name)
            .field("objects", &self.objects)
            .field("arrows", &self.arrows)
            .finish()
    }
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    pub elements: Vec<String>,
    /// `table[a][b]` is the index of `a·b`.
    pub table: Vec<Vec<usize>>,
    unit: usize,
    inverses: Vec<usize>,
}

impl GroupTable {
    /// Validates closure, associativity, a two-sided unit and inverses.
    pub fn new(elements: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty".into()));
        }
        if index_of(&elements).is_err() {
            return Err(Error::NotAGroup("duplicate element names".into()));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&c| c >= n)) {
            return Err(Error::NotAGroup("table is not closed".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails at ({}, {}, {})",
                            elements[a], elements[b], elements[c]
                        )));
                    }
                }
            }
        }
        let unit = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::NotAGroup("no unit".into()))?;
        let inverses = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| table[a][b] == unit && table[b][a] == unit)
                    .ok_or_else(|| Error::NotAGroup(format!("{} has no inverse", elements[a])))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupTable {
            elements,
            table,
            unit,
            inverses,
        })
    }

    /// Builds from a table of product names.
    pub fn from_named(elements: Vec<String>, products: &[Vec<String>]) -> Result<Self> {
        let idx = index_of(&elements).map_err(|_| Error::NotAGroup("duplicate element names".into()))?;
        let table = products
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| idx.get(p).copied().ok_or_else(|| Error::NotAGroup(format!("unknown product {p:?}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GroupTable::new(elements, table)
    }

    /// `ℤ/2 = {e, s}`.
    pub fn z2() -> Self {
        GroupTable::new(vec!["e".into(), "s".into()], vec![vec![0, 1], vec![1, 0]]).expect("Z/2")
    }

    /// `ℤ/n` with elements `e, r1, …, r(n-1)`.
    pub fn cyclic(n: usize) -> Self {
        let elements = (0..n)
            .map(|k| if k == 0 { "e".to_string() } else { format!("r{k}") })
            .collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        GroupTable::new(elements, table).expect("cyclic group")
    }

    /// The symmetric group on `n` letters, elements named in cycle
    /// notation (`e`, `(01)`, `(012)`, …); `a·b` means apply `b` first.
    pub fn symmetric(n: usize) -> Self {
        // Lexicographic enumeration of all permutations.
        let mut all = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            all.push(cur.clone());
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("successor");
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        let names: Vec<String> = all.iter().map(|p| cycle_notation(p)).collect();
        let index: HashMap<Vec<usize>, usize> = all.iter().cloned().enumerate().map(|(k, p)| (p, k)).collect();
        let table = all
            .iter()
            .map(|a| {
                all.iter()
                    .map(|b| index[&b.iter().map(|&x| a[x]).collect::<Vec<_>>()])
                    .collect()
            })
            .collect();
        GroupTable::new(names, table).expect("symmetric group")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            out.push_str(&x.to_string());
            x = p[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

/// Parameters for the standard constructors, as accepted by the CLI and
/// the Python bindings.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StandardSpec {
    Unit { objects: Vec<String> },
    Pair { objects: Vec<String> },
    Group { elements: Vec<String>, table: Vec<Vec<String>> },
    Action {
        elements: Vec<String>,
        table: Vec<Vec<String>>,
        objects: Vec<String>,
        /// `action[γ][x] = γ·x`
        action: BTreeMap<String, BTreeMap<String, String>>,
    },
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

pub fn build_standard(spec: &StandardSpec) -> Result<FiniteGroupoid> {
    match spec {
        StandardSpec::Unit { objects } => Ok(FiniteGroupoid::unit(&strs(objects))),
        StandardSpec::Pair { objects } => Ok(FiniteGroupoid::pair(&strs(objects))),
        StandardSpec::Group { elements, table } => {
            Ok(FiniteGroupoid::point(&GroupTable::from_named(elements.clone(), table)?))
        }
        StandardSpec::Action {
            elements,
            table,
            objects,
            action,
        } => {
            let group = GroupTable::from_named(elements.clone(), table)?;
            let objs = index_of(objects)?;
            let perms = group
                .elements
                .iter()
                .map(|g| {
                    let row = action
                        .get(g)
                        .ok_or_else(|| Error::BadAction(format!("no action given for {g}")))?;
                    objects
                        .iter()
                        .map(|x| {
                            row.get(x)
                                .and_then(|y| objs.get(y).copied())
                                .ok_or_else(|| Error::BadAction(format!("{g}·{x} undefined")))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            FiniteGroupoid::action(&group, &strs(objects), &perms)
        }
    }
}

/// A functor between finite groupoids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    pub on_objects: Vec<Object>,
    pub on_arrows: Vec<Arrow>,
}

/// The functor JSON document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub src: String,
    pub tgt: String,
    pub on_objects: BTreeMap<String, String>,
    pub on_arrows: BTreeMap<String, String>,
}

impl Functor {
    pub fn from_maps(
        src: &FiniteGroupoid,
        tgt: &FiniteGroupoid,
        on_objects: &BTreeMap<String, String>,
        on_arrows: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let f = Functor::from_maps_unchecked(src, tgt, on_objects, on_arrows)?;
        f.check(src, tgt)?;
        Ok(f)
    }

    /// Resolves the maps by name without checking functoriality.
    pub fn from_maps_unchecked(
        src: &FiniteGroupoid,
        tgt: &FiniteGroupoid,
        on_objects: &BTreeMap<String, String>,
        on_arrows: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let objs = src
            .objects()
            .map(|x| {
                let image = on_objects
                    .get(src.object_name(x))
                    .ok_or_else(|| Error::NotAFunctor(format!("object {} unmapped", src.object_name(x))))?;
                tgt.object(image)
            })
            .collect::<Result<Vec<_>>>()?;
        let arrs = src
            .arrows()
            .map(|a| {
                let image = on_arrows
                    .get(src.arrow_name(a))
                    .ok_or_else(|| Error::NotAFunctor(format!("arrow {} unmapped", src.arrow_name(a))))?;
                tgt.arrow(image)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Functor {
            on_objects: objs,
            on_arrows: arrs,
        })
    }

    pub fn identity(g: &FiniteGroupoid) -> Self {
        Functor {
            on_objects: g.objects().collect(),
            on_arrows: g.arrows().collect(),
        }
    }

    pub fn object(&self, x: Object) -> Object {
        self.on_objects[x.0]
    }

    pub fn arrow(&self, a: Arrow) -> Arrow {
        self.on_arrows[a.0]
    }

    /// Preservation of source, target, identities and composition.
    pub fn check(&self, src: &FiniteGroupoid, tgt: &FiniteGroupoid) -> Result<()> {
        if self.on_objects.len() != src.num_objects() || self.on_arrows.len() != src.num_arrows() {
            return Err(Error::NotAFunctor("maps are not total".into()));
        }
        for a in src.arrows() {
            let fa = self.arrow(a);
            if tgt.src(fa) != self.object(src.src(a)) || tgt.tgt(fa) != self.object(src.tgt(a)) {
                return Err(Error::NotAFunctor(format!("endpoints of {}", src.arrow_name(a))));
            }
            for b in src.arrows().filter(|&b| src.composable(a, b)) {
                let ab = src.compose(a, b).expect("valid source");
                if tgt.compose(fa, self.arrow(b)) != Some(self.arrow(ab)) {
                    return Err(Error::NotAFunctor(format!(
                        "composition at ({}, {})",
                        src.arrow_name(a),
                        src.arrow_name(b)
                    )));
                }
            }
        }
        for x in src.objects() {
            if self.arrow(src.identity(x)) != tgt.identity(self.object(x)) {
                return Err(Error::NotAFunctor(format!("identity of {}", src.object_name(x))));
            }
        }
        Ok(())
    }

    pub fn to_spec(&self, src: &FiniteGroupoid, tgt: &FiniteGroupoid) -> FunctorSpec {
        FunctorSpec {
            name: None,
            src: src.name().to_string(),
            tgt: tgt.name().to_string(),
            on_objects: src
                .objects()
                .map(|x| (src.object_name(x).to_string(), tgt.object_name(self.object(x)).to_string()))
                .collect(),
            on_arrows: src
                .arrows()
                .map(|a| (src.arrow_name(a).to_string(), tgt.arrow_name(self.arrow(a)).to_string()))
                .collect(),
        }
    }
}

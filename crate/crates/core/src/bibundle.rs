//! Principal bibundles between finite groupoids.
//!
//! A `G`–`H` bibundle is a finite set `P` with a left `G`-action along
//! `pi: P → M` and a commuting right `H`-action along `phi: P → N`, such
//! that `H` acts freely and transitively on every `pi`-fiber. Points are
//! kept in lexicographic order of their identifiers.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::same_groupoid;
use crate::error::{Error, Result};
use crate::groupoid::{Arrow, FiniteGroupoid, Functor, Object};
use crate::rep::{RepMorphism, Representation};
use crate::report::{Report, ValidationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub usize);

#[derive(Clone, Debug)]
pub struct PrincipalBibundle {
    name: String,
    left: Arc<FiniteGroupoid>,
    right: Arc<FiniteGroupoid>,
    points: Vec<String>,
    pi: Vec<Object>,
    phi: Vec<Object>,
    /// `[g · |P| + p]`
    lact: Vec<Option<Point>>,
    /// `[p · |H| + h]`
    ract: Vec<Option<Point>>,
    point_index: HashMap<String, usize>,
}

impl PartialEq for PrincipalBibundle {
    fn eq(&self, other: &Self) -> bool {
        same_groupoid(&self.left, &other.left)
            && same_groupoid(&self.right, &other.right)
            && self.points == other.points
            && self.pi == other.pi
            && self.phi == other.phi
            && self.lact == other.lact
            && self.ract == other.ract
    }
}

impl Eq for PrincipalBibundle {}

/// The bibundle JSON document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BibundleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub left: String,
    pub right: String,
    pub points: Vec<String>,
    pub pi: BTreeMap<String, String>,
    pub phi: BTreeMap<String, String>,
    /// `[g, p, g·p]`
    pub lact: Vec<[String; 3]>,
    /// `[p, h, p·h]`
    pub ract: Vec<[String; 3]>,
}

impl PrincipalBibundle {
    /// Resolves a document against its two groupoids. Unknown
    /// identifiers are errors; axioms are checked by `validate`.
    pub fn from_doc(left: Arc<FiniteGroupoid>, right: Arc<FiniteGroupoid>, doc: &BibundleDoc) -> Result<Self> {
        let mut points = doc.points.clone();
        points.sort();
        let mut point_index = HashMap::new();
        for (k, p) in points.iter().enumerate() {
            if point_index.insert(p.clone(), k).is_some() {
                return Err(Error::Duplicate(p.clone()));
            }
        }
        let pt = |n: &str| {
            point_index
                .get(n)
                .map(|&k| Point(k))
                .ok_or_else(|| Error::UnknownPoint(n.to_string()))
        };
        let leg = |map: &BTreeMap<String, String>, g: &FiniteGroupoid, what: &str| -> Result<Vec<Object>> {
            for k in map.keys() {
                pt(k)?;
            }
            points
                .iter()
                .map(|p| {
                    let x = map
                        .get(p)
                        .ok_or_else(|| Error::Table(format!("{what} undefined at point {p:?}")))?;
                    g.object(x)
                })
                .collect()
        };
        let pi = leg(&doc.pi, &left, "pi")?;
        let phi = leg(&doc.phi, &right, "phi")?;
        let n = points.len();
        let mut lact = vec![None; left.num_arrows() * n];
        for [g, p, q] in &doc.lact {
            let (g, p, q) = (left.arrow(g)?, pt(p)?, pt(q)?);
            lact[g.0 * n + p.0] = Some(q);
        }
        let mut ract = vec![None; n * right.num_arrows()];
        for [p, h, q] in &doc.ract {
            let (p, h, q) = (pt(p)?, right.arrow(h)?, pt(q)?);
            ract[p.0 * right.num_arrows() + h.0] = Some(q);
        }
        Ok(PrincipalBibundle {
            name: doc.name.clone().unwrap_or_default(),
            left,
            right,
            points,
            pi,
            phi,
            lact,
            ract,
            point_index,
        })
    }

    pub fn to_doc(&self) -> BibundleDoc {
        let mut lact = Vec::new();
        for g in self.left.arrows() {
            for p in self.points() {
                if let Some(q) = self.lact[g.0 * self.points.len() + p.0] {
                    lact.push([
                        self.left.arrow_name(g).to_string(),
                        self.point_name(p).to_string(),
                        self.point_name(q).to_string(),
                    ]);
                }
            }
        }
        let mut ract = Vec::new();
        for p in self.points() {
            for h in self.right.arrows() {
                if let Some(q) = self.ract[p.0 * self.right.num_arrows() + h.0] {
                    ract.push([
                        self.point_name(p).to_string(),
                        self.right.arrow_name(h).to_string(),
                        self.point_name(q).to_string(),
                    ]);
                }
            }
        }
        BibundleDoc {
            name: (!self.name.is_empty()).then(|| self.name.clone()),
            left: self.left.name().to_string(),
            right: self.right.name().to_string(),
            points: self.points.clone(),
            pi: self
                .points()
                .map(|p| (self.point_name(p).to_string(), self.left.object_name(self.pi(p)).to_string()))
                .collect(),
            phi: self
                .points()
                .map(|p| (self.point_name(p).to_string(), self.right.object_name(self.phi(p)).to_string()))
                .collect(),
            lact,
            ract,
        }
    }

    /// Assembles a bibundle from closures over `(name, pi, phi)` point
    /// data; actions are looked up by point name.
    fn assemble(
        left: Arc<FiniteGroupoid>,
        right: Arc<FiniteGroupoid>,
        points: Vec<(String, Object, Object)>,
        lact: impl Fn(Arrow, usize) -> Option<String>,
        ract: impl Fn(usize, Arrow) -> Option<String>,
    ) -> Result<Self> {
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| points[a].0.cmp(&points[b].0));
        let names: Vec<String> = order.iter().map(|&k| points[k].0.clone()).collect();
        let mut point_index = HashMap::new();
        for (k, n) in names.iter().enumerate() {
            if point_index.insert(n.clone(), k).is_some() {
                return Err(Error::Duplicate(n.clone()));
            }
        }
        let n = names.len();
        let mut la = vec![None; left.num_arrows() * n];
        let mut ra = vec![None; n * right.num_arrows()];
        for (new, &old) in order.iter().enumerate() {
            for g in left.arrows() {
                if let Some(q) = lact(g, old) {
                    la[g.0 * n + new] = Some(Point(point_index[&q]));
                }
            }
            for h in right.arrows() {
                if let Some(q) = ract(old, h) {
                    ra[new * right.num_arrows() + h.0] = Some(Point(point_index[&q]));
                }
            }
        }
        Ok(PrincipalBibundle {
            name: String::new(),
            pi: order.iter().map(|&k| points[k].1).collect(),
            phi: order.iter().map(|&k| points[k].2).collect(),
            left,
            right,
            points: names,
            lact: la,
            ract: ra,
            point_index,
        })
    }

    /// `G` as a `G`–`G` bibundle by left and right translation.
    pub fn identity(g: Arc<FiniteGroupoid>) -> Self {
        let pts = g
            .arrows()
            .map(|a| (g.arrow_name(a).to_string(), g.tgt(a), g.src(a)))
            .collect();
        let (gl, gr) = (g.clone(), g.clone());
        PrincipalBibundle::assemble(
            g.clone(),
            g.clone(),
            pts,
            move |h, p| gl.compose(h, Arrow(p)).map(|c| gl.arrow_name(c).to_string()),
            move |p, h| gr.compose(Arrow(p), h).map(|c| gr.arrow_name(c).to_string()),
        )
        .expect("arrow names are unique")
    }

    /// The same set with the roles of the groupoids swapped:
    /// `h · p̄ = (p · h⁻¹)‾` and `p̄ · g = (g⁻¹ · p)‾`.
    pub fn opposite(&self) -> Self {
        PrincipalBibundle {
            name: if self.name.is_empty() { String::new() } else { format!("{}_op", self.name) },
            left: self.right.clone(),
            right: self.left.clone(),
            points: self.points.clone(),
            pi: self.phi.clone(),
            phi: self.pi.clone(),
            lact: self
                .right
                .arrows()
                .flat_map(|h| self.points().map(move |p| (h, p)))
                .map(|(h, p)| self.right_act(p, self.right.inverse(h)))
                .collect(),
            ract: self
                .points()
                .flat_map(|p| self.left.arrows().map(move |g| (p, g)))
                .map(|(p, g)| self.left_act(self.left.inverse(g), p))
                .collect(),
            point_index: self.point_index.clone(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn left(&self) -> &Arc<FiniteGroupoid> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FiniteGroupoid> {
        &self.right
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + Clone {
        (0..self.points.len()).map(Point)
    }

    pub fn point_name(&self, p: Point) -> &str {
        &self.points[p.0]
    }

    pub fn point(&self, name: &str) -> Result<Point> {
        self.point_index
            .get(name)
            .map(|&k| Point(k))
            .ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    pub fn pi(&self, p: Point) -> Object {
        self.pi[p.0]
    }

    pub fn phi(&self, p: Point) -> Object {
        self.phi[p.0]
    }

    /// `g · p`, defined when `src g = pi(p)`.
    pub fn left_act(&self, g: Arrow, p: Point) -> Option<Point> {
        if self.left.src(g) != self.pi(p) {
            return None;
        }
        self.lact[g.0 * self.points.len() + p.0]
    }

    /// `p · h`, defined when `phi(p) = tgt h`.
    pub fn right_act(&self, p: Point, h: Arrow) -> Option<Point> {
        if self.phi(p) != self.right.tgt(h) {
            return None;
        }
        self.ract[p.0 * self.right.num_arrows() + h.0]
    }

    pub fn pi_fiber(&self, x: Object) -> Vec<Point> {
        self.points().filter(|&p| self.pi(p) == x).collect()
    }

    pub fn phi_fiber(&self, y: Object) -> Vec<Point> {
        self.points().filter(|&p| self.phi(p) == y).collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let (g, h) = (&*self.left, &*self.right);
        let mut report = ValidationReport::default();
        let pn = |p: Point| self.point_name(p).to_string();
        for x in g.objects() {
            if self.pi_fiber(x).is_empty() {
                report.push("pi surjective", g.object_name(x).to_string());
            }
        }
        // Left action.
        for a in g.arrows() {
            for p in self.points() {
                let raw = self.lact[a.0 * self.points.len() + p.0];
                if g.src(a) != self.pi(p) {
                    if raw.is_some() {
                        report.push("left action domain", format!("{}·{}", g.arrow_name(a), pn(p)));
                    }
                    continue;
                }
                let Some(q) = raw else {
                    report.push("left action not total", format!("{}·{}", g.arrow_name(a), pn(p)));
                    continue;
                };
                if self.pi(q) != g.tgt(a) {
                    report.push("left action endpoints", format!("{}·{}", g.arrow_name(a), pn(p)));
                }
                if self.phi(q) != self.phi(p) {
                    report.push("phi invariance", format!("{}·{}", g.arrow_name(a), pn(p)));
                }
            }
        }
        // Right action. Missing entries break principality directly.
        for p in self.points() {
            for b in h.arrows() {
                let raw = self.ract[p.0 * h.num_arrows() + b.0];
                if self.phi(p) != h.tgt(b) {
                    if raw.is_some() {
                        report.push("right action domain", format!("{}·{}", pn(p), h.arrow_name(b)));
                    }
                    continue;
                }
                let Some(q) = raw else {
                    report.push("principality", format!("{}·{} undefined", pn(p), h.arrow_name(b)));
                    continue;
                };
                if self.phi(q) != h.src(b) {
                    report.push("right action endpoints", format!("{}·{}", pn(p), h.arrow_name(b)));
                }
                if self.pi(q) != self.pi(p) {
                    report.push("pi invariance", format!("{}·{}", pn(p), h.arrow_name(b)));
                }
            }
        }
        if !report.is_valid() {
            return report;
        }
        for p in self.points() {
            if self.left_act(g.identity(self.pi(p)), p) != Some(p) {
                report.push("left unit", pn(p));
            }
            if self.right_act(p, h.identity(self.phi(p))) != Some(p) {
                report.push("right unit", pn(p));
            }
            for a in g.arrows() {
                let Some(ap) = self.left_act(a, p) else { continue };
                for b in g.arrows().filter(|&b| g.composable(b, a)) {
                    let ba = g.compose(b, a).expect("valid groupoid");
                    if self.left_act(b, ap) != self.left_act(ba, p) {
                        report.push(
                            "left associativity",
                            format!("({}, {}, {})", g.arrow_name(b), g.arrow_name(a), pn(p)),
                        );
                    }
                }
                for c in h.arrows() {
                    let Some(pc) = self.right_act(p, c) else { continue };
                    if self.left_act(a, pc) != self.right_act(ap, c) {
                        report.push(
                            "commutation",
                            format!("({}, {}, {})", g.arrow_name(a), pn(p), h.arrow_name(c)),
                        );
                    }
                }
            }
            for c in h.arrows() {
                let Some(pc) = self.right_act(p, c) else { continue };
                for d in h.arrows().filter(|&d| h.composable(c, d)) {
                    let cd = h.compose(c, d).expect("valid groupoid");
                    if self.right_act(pc, d) != self.right_act(p, cd) {
                        report.push(
                            "right associativity",
                            format!("({}, {}, {})", pn(p), h.arrow_name(c), h.arrow_name(d)),
                        );
                    }
                }
            }
        }
        // H acts freely and transitively on each pi-fiber.
        for p in self.points() {
            let fiber = self.pi_fiber(self.pi(p));
            let mut hit: HashMap<Point, Arrow> = HashMap::new();
            for c in h.arrows().filter(|&c| h.tgt(c) == self.phi(p)) {
                let q = self.right_act(p, c).expect("checked total");
                if let Some(prev) = hit.insert(q, c) {
                    report.push(
                        "principality",
                        format!(
                            "not free: {}·{} = {}·{}",
                            pn(p),
                            h.arrow_name(prev),
                            pn(p),
                            h.arrow_name(c)
                        ),
                    );
                }
            }
            if let Some(&q) = fiber.iter().find(|q| !hit.contains_key(q)) {
                report.push(
                    "principality",
                    format!(
                        "not transitive on the fiber over {}: no h with {}·h = {}",
                        g.object_name(self.pi(p)),
                        pn(p),
                        pn(q)
                    ),
                );
            }
        }
        report
    }

    /// The unique `h` with `p · h = q`.
    pub fn division(&self, p: Point, q: Point) -> Result<Arrow> {
        if self.pi(p) != self.pi(q) {
            return Err(Error::DifferentFibers(self.point_name(p).into(), self.point_name(q).into()));
        }
        self.right
            .arrows()
            .find(|&h| self.right_act(p, h) == Some(q))
            .ok_or_else(|| Error::Invalid {
                what: "bibundle",
                violations: vec![format!(
                    "principality: no transporter from {} to {}",
                    self.point_name(p),
                    self.point_name(q)
                )],
            })
    }

    /// The unique `g` with `g · q = p`, for points in the same `phi`-fiber
    /// of a biprincipal bundle.
    pub fn left_division(&self, p: Point, q: Point) -> Result<Arrow> {
        if self.phi(p) != self.phi(q) {
            return Err(Error::DifferentFibers(self.point_name(p).into(), self.point_name(q).into()));
        }
        self.left
            .arrows()
            .find(|&g| self.left_act(g, q) == Some(p))
            .ok_or_else(|| Error::Invalid {
                what: "bibundle",
                violations: vec![format!(
                    "left principality: no transporter from {} to {}",
                    self.point_name(q),
                    self.point_name(p)
                )],
            })
    }

    /// The least point of each `pi`-fiber.
    pub fn canonical_section(&self) -> Result<Vec<Point>> {
        self.left
            .objects()
            .map(|x| {
                self.points()
                    .find(|&p| self.pi(p) == x)
                    .ok_or_else(|| Error::Invalid {
                        what: "bibundle",
                        violations: vec![format!("pi surjective: {}", self.left.object_name(x))],
                    })
            })
            .collect()
    }
}

/// A composite `P ⊗_H Q` together with the orbit bookkeeping needed to
/// build maps out of and into it.
#[derive(Clone, Debug)]
pub struct Composite {
    pub left: PrincipalBibundle,
    pub right: PrincipalBibundle,
    pub bundle: PrincipalBibundle,
    /// Least fibered pair of each orbit.
    pub representative: Vec<(Point, Point)>,
    class_of: HashMap<(Point, Point), Point>,
}

impl Composite {
    /// The class `[p, q]` of a fibered pair.
    pub fn class(&self, p: Point, q: Point) -> Option<Point> {
        self.class_of.get(&(p, q)).copied()
    }
}

/// `P ⊗_H Q`: fibered pairs `(p, q)` with `phi(p) = pi(q)` modulo
/// `(p·h, q) ~ (p, h·q)`.
pub fn compose_bibundles(p: &PrincipalBibundle, q: &PrincipalBibundle) -> Result<Composite> {
    if !same_groupoid(&p.right, &q.left) {
        return Err(Error::ParentMismatch(format!(
            "right groupoid {:?} vs left groupoid {:?}",
            p.right.name(),
            q.left.name()
        )));
    }
    p.validate().into_result("bibundle")?;
    q.validate().into_result("bibundle")?;
    let h = &*p.right;
    let pairs: Vec<(Point, Point)> = p
        .points()
        .flat_map(|a| q.points().map(move |b| (a, b)))
        .filter(|&(a, b)| p.phi(a) == q.pi(b))
        .collect();
    let index: HashMap<(Point, Point), usize> = pairs.iter().enumerate().map(|(k, &pr)| (pr, k)).collect();
    let mut parent: Vec<usize> = (0..pairs.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for (k, &(a, b)) in pairs.iter().enumerate() {
        for c in h.arrows().filter(|&c| h.tgt(c) == p.phi(a)) {
            let a2 = p.right_act(a, c).expect("validated");
            let b2 = q.left_act(h.inverse(c), b).expect("validated");
            let (r1, r2) = (find(&mut parent, k), find(&mut parent, index[&(a2, b2)]));
            if r1 != r2 {
                parent[r1.max(r2)] = r1.min(r2);
            }
        }
    }
    // Roots are the least pair in each orbit since unions keep the minimum.
    let roots: Vec<usize> = (0..pairs.len()).map(|k| find(&mut parent, k)).collect();
    let mut reps: Vec<usize> = roots.clone();
    reps.sort_unstable();
    reps.dedup();
    let name_of = |k: usize| format!("[{}|{}]", p.point_name(pairs[k].0), q.point_name(pairs[k].1));
    let pts: Vec<(String, Object, Object)> = reps
        .iter()
        .map(|&k| (name_of(k), p.pi(pairs[k].0), q.phi(pairs[k].1)))
        .collect();
    let pair_class_name = |a: Point, b: Point| index.get(&(a, b)).map(|&k| name_of(roots[k]));
    let bundle = PrincipalBibundle::assemble(
        p.left.clone(),
        q.right.clone(),
        pts,
        |g, k| {
            let (a, b) = pairs[reps[k]];
            p.left_act(g, a).and_then(|a2| pair_class_name(a2, b))
        },
        |k, c| {
            let (a, b) = pairs[reps[k]];
            q.right_act(b, c).and_then(|b2| pair_class_name(a, b2))
        },
    )?;
    let representative: Vec<(Point, Point)> = bundle
        .points()
        .map(|pt| {
            let k = reps
                .iter()
                .copied()
                .find(|&k| name_of(k) == bundle.point_name(pt))
                .expect("every class has a representative");
            pairs[k]
        })
        .collect();
    let class_of = pairs
        .iter()
        .enumerate()
        .map(|(k, &pr)| (pr, bundle.point(&name_of(roots[k])).expect("class point")))
        .collect();
    bundle.validate().into_result("composite bibundle")?;
    Ok(Composite {
        left: p.clone(),
        right: q.clone(),
        bundle,
        representative,
        class_of,
    })
}

/// `P(ψ) = M ×_N H`, points `(x, h)` with `ψ(x) = tgt h`;
/// `g·(x, h) = (tgt g, ψ(g) h)` and `(x, h)·h' = (x, h h')`.
pub fn bundle_from_functor(
    psi: &Functor,
    src: Arc<FiniteGroupoid>,
    tgt: Arc<FiniteGroupoid>,
) -> Result<PrincipalBibundle> {
    psi.check(&src, &tgt)?;
    let name = |x: Object, h: Arrow| format!("({}|{})", src.object_name(x), tgt.arrow_name(h));
    let mut data = Vec::new();
    for x in src.objects() {
        for h in tgt.arrows().filter(|&h| tgt.tgt(h) == psi.object(x)) {
            data.push((x, h));
        }
    }
    let pts = data.iter().map(|&(x, h)| (name(x, h), x, tgt.src(h))).collect();
    let bundle = PrincipalBibundle::assemble(
        src.clone(),
        tgt.clone(),
        pts,
        |g, k| {
            let (x, h) = data[k];
            (src.src(g) == x)
                .then(|| tgt.compose(psi.arrow(g), h))
                .flatten()
                .map(|gh| name(src.tgt(g), gh))
        },
        |k, c| {
            let (x, h) = data[k];
            tgt.compose(h, c).map(|hc| name(x, hc))
        },
    )?;
    bundle.validate().into_result("bibundle")?;
    Ok(bundle)
}

/// A map of bibundles over the same pair of groupoids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantMap {
    pub source: PrincipalBibundle,
    pub target: PrincipalBibundle,
    pub map: Vec<Point>,
}

impl EquivariantMap {
    pub fn new(source: PrincipalBibundle, target: PrincipalBibundle, map: Vec<Point>) -> Result<Self> {
        if !same_groupoid(&source.left, &target.left) || !same_groupoid(&source.right, &target.right) {
            return Err(Error::ParentMismatch("bibundles over different groupoids".into()));
        }
        if map.len() != source.num_points() || map.iter().any(|q| q.0 >= target.num_points()) {
            return Err(Error::DimensionMismatch("point map is not total".into()));
        }
        Ok(EquivariantMap { source, target, map })
    }

    pub fn identity(p: &PrincipalBibundle) -> Self {
        EquivariantMap {
            source: p.clone(),
            target: p.clone(),
            map: p.points().collect(),
        }
    }

    pub fn apply(&self, p: Point) -> Point {
        self.map[p.0]
    }

    /// Leg preservation, two-sided equivariance and bijectivity.
    pub fn validate(&self) -> ValidationReport {
        let (s, t) = (&self.source, &self.target);
        let mut report = ValidationReport::default();
        for p in s.points() {
            let fp = self.apply(p);
            if t.pi(fp) != s.pi(p) || t.phi(fp) != s.phi(p) {
                report.push("legs", s.point_name(p).to_string());
            }
            for g in s.left.arrows() {
                if let Some(gp) = s.left_act(g, p) {
                    if t.left_act(g, fp) != Some(self.apply(gp)) {
                        report.push("left equivariance", format!("{}·{}", s.left.arrow_name(g), s.point_name(p)));
                    }
                }
            }
            for h in s.right.arrows() {
                if let Some(ph) = s.right_act(p, h) {
                    if t.right_act(fp, h) != Some(self.apply(ph)) {
                        report.push("right equivariance", format!("{}·{}", s.point_name(p), s.right.arrow_name(h)));
                    }
                }
            }
        }
        let mut seen = vec![false; t.num_points()];
        for &q in &self.map {
            seen[q.0] = true;
        }
        if self.map.len() != t.num_points() || seen.iter().any(|b| !b) {
            report.push("bijectivity", format!("{} points onto {}", s.num_points(), t.num_points()));
        }
        report
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &EquivariantMap) -> Result<EquivariantMap> {
        if other.target != self.source {
            return Err(Error::DimensionMismatch("bibundle maps are not composable".into()));
        }
        EquivariantMap::new(
            other.source.clone(),
            self.target.clone(),
            other.map.iter().map(|&p| self.apply(p)).collect(),
        )
    }
}

/// `r_P: P ⊗_H H → P`, `[p, h] ↦ p·h`.
pub fn right_unitor(c: &Composite) -> Result<EquivariantMap> {
    let p = &c.left;
    let map = c
        .representative
        .iter()
        .map(|&(a, h)| {
            let arrow = c.right.left.arrow(c.right.point_name(h))?;
            p.right_act(a, arrow)
                .ok_or_else(|| Error::Table("right factor is not an identity bibundle".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    EquivariantMap::new(c.bundle.clone(), p.clone(), map)
}

/// `l_P: G ⊗_G P → P`, `[g, p] ↦ g·p`.
pub fn left_unitor(c: &Composite) -> Result<EquivariantMap> {
    let p = &c.right;
    let map = c
        .representative
        .iter()
        .map(|&(g, a)| {
            let arrow = c.left.left.arrow(c.left.point_name(g))?;
            p.left_act(arrow, a)
                .ok_or_else(|| Error::Table("left factor is not an identity bibundle".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    EquivariantMap::new(c.bundle.clone(), p.clone(), map)
}

/// `a: (X⊗Y)⊗Z → X⊗(Y⊗Z)`, `[[x, y], z] ↦ [x, [y, z]]`.
pub fn associator(xy: &Composite, xy_z: &Composite, yz: &Composite, x_yz: &Composite) -> Result<EquivariantMap> {
    if xy_z.left != xy.bundle
        || x_yz.right != yz.bundle
        || xy.right != yz.left
        || xy.left != x_yz.left
        || xy_z.right != yz.right
    {
        return Err(Error::ParentMismatch("composites do not form a rebracketing square".into()));
    }
    let map = xy_z
        .representative
        .iter()
        .map(|&(u, z)| {
            let (x, y) = xy.representative[u.0];
            let d = yz.class(y, z).ok_or_else(|| Error::Table("(y, z) not fibered".into()))?;
            x_yz.class(x, d).ok_or_else(|| Error::Table("(x, [y, z]) not fibered".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    EquivariantMap::new(xy_z.bundle.clone(), x_yz.bundle.clone(), map)
}

/// `f ⊗ g: X⊗Y → X'⊗Y'`, `[x, y] ↦ [f x, g y]`.
pub fn tensor_maps(f: &EquivariantMap, g: &EquivariantMap, src: &Composite, tgt: &Composite) -> Result<EquivariantMap> {
    let map = src
        .representative
        .iter()
        .map(|&(x, y)| {
            tgt.class(f.apply(x), g.apply(y))
                .ok_or_else(|| Error::Table("image pair is not fibered".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    EquivariantMap::new(src.bundle.clone(), tgt.bundle.clone(), map)
}

/// Associator of a chain, building all four composites.
pub fn associator_of(p: &PrincipalBibundle, q: &PrincipalBibundle, r: &PrincipalBibundle) -> Result<EquivariantMap> {
    let pq = compose_bibundles(p, q)?;
    let pq_r = compose_bibundles(&pq.bundle, r)?;
    let qr = compose_bibundles(q, r)?;
    let p_qr = compose_bibundles(p, &qr.bundle)?;
    associator(&pq, &pq_r, &qr, &p_qr)
}

fn map_check(report: &mut Report, name: &str, m: &Result<EquivariantMap>) {
    match m {
        Ok(m) => {
            let v = m.validate();
            report.record(name, v.is_valid(), (!v.is_valid()).then(|| format!("{:?}", v.violations)));
        }
        Err(e) => report.fail(name, e.to_string()),
    }
}

/// `a_{P,Q,RS} ∘ a_{PQ,R,S} = (id_P ⊗ a_{Q,R,S}) ∘ a_{P,QR,S} ∘ (a_{P,Q,R} ⊗ id_S)`
/// as point maps `((PQ)R)S → P(Q(RS))`.
pub fn check_pentagon(
    p: &PrincipalBibundle,
    q: &PrincipalBibundle,
    r: &PrincipalBibundle,
    s: &PrincipalBibundle,
) -> Report {
    let mut report = Report::new();
    let result = (|| -> Result<(EquivariantMap, EquivariantMap)> {
        let pq = compose_bibundles(p, q)?;
        let pq_r = compose_bibundles(&pq.bundle, r)?;
        let pq_r_s = compose_bibundles(&pq_r.bundle, s)?;
        let rs = compose_bibundles(r, s)?;
        let pq_rs = compose_bibundles(&pq.bundle, &rs.bundle)?;
        let q_rs = compose_bibundles(q, &rs.bundle)?;
        let p_q_rs = compose_bibundles(p, &q_rs.bundle)?;
        let qr = compose_bibundles(q, r)?;
        let p_qr = compose_bibundles(p, &qr.bundle)?;
        let p_qr_s = compose_bibundles(&p_qr.bundle, s)?;
        let qr_s = compose_bibundles(&qr.bundle, s)?;
        let p_qr_s2 = compose_bibundles(p, &qr_s.bundle)?;

        let a1 = associator(&pq_r, &pq_r_s, &rs, &pq_rs)?;
        let a2 = associator(&pq, &pq_rs, &q_rs, &p_q_rs)?;
        let path_a = a2.compose(&a1)?;

        let a_pqr = associator(&pq, &pq_r, &qr, &p_qr)?;
        let b1 = tensor_maps(&a_pqr, &EquivariantMap::identity(s), &pq_r_s, &p_qr_s)?;
        let b2 = associator(&p_qr, &p_qr_s, &qr_s, &p_qr_s2)?;
        let a_qrs = associator(&qr, &qr_s, &rs, &q_rs)?;
        let b3 = tensor_maps(&EquivariantMap::identity(p), &a_qrs, &p_qr_s2, &p_q_rs)?;
        let path_b = b3.compose(&b2)?.compose(&b1)?;
        Ok((path_a, path_b))
    })();
    match result {
        Ok((a, b)) => {
            map_check(&mut report, "pentagon: path via (PQ)(RS) is an iso", &Ok(a.clone()));
            map_check(&mut report, "pentagon: path via (P(QR))S is an iso", &Ok(b.clone()));
            report.record(
                "pentagon: paths agree",
                a.map == b.map,
                (a.map != b.map).then(|| format!("{:?} vs {:?}", a.map, b.map)),
            );
        }
        Err(e) => report.fail("pentagon", e.to_string()),
    }
    report
}

/// `r_P ⊗ id_Q = (id_P ⊗ l_Q) ∘ a_{P,H,Q}` as maps `(P⊗H)⊗Q → P⊗Q`.
pub fn check_triangle(p: &PrincipalBibundle, q: &PrincipalBibundle) -> Report {
    let mut report = Report::new();
    let result = (|| -> Result<(EquivariantMap, EquivariantMap)> {
        let id_h = PrincipalBibundle::identity(p.right.clone());
        let ph = compose_bibundles(p, &id_h)?;
        let ph_q = compose_bibundles(&ph.bundle, q)?;
        let hq = compose_bibundles(&id_h, q)?;
        let p_hq = compose_bibundles(p, &hq.bundle)?;
        let pq = compose_bibundles(p, q)?;
        let lhs = tensor_maps(&right_unitor(&ph)?, &EquivariantMap::identity(q), &ph_q, &pq)?;
        let a = associator(&ph, &ph_q, &hq, &p_hq)?;
        let rhs = tensor_maps(&EquivariantMap::identity(p), &left_unitor(&hq)?, &p_hq, &pq)?.compose(&a)?;
        Ok((lhs, rhs))
    })();
    match result {
        Ok((l, r)) => {
            map_check(&mut report, "triangle: r_P ⊗ id_Q is an iso", &Ok(l.clone()));
            report.record(
                "triangle: sides agree",
                l.map == r.map,
                (l.map != r.map).then(|| format!("{:?} vs {:?}", l.map, r.map)),
            );
        }
        Err(e) => report.fail("triangle", e.to_string()),
    }
    report
}

/// Opposite bundle plus the unit isomorphisms `P ⊗_H P̄ ≅ G` and
/// `P̄ ⊗_G P ≅ H`.
#[derive(Clone, Debug)]
pub struct MoritaCertificate {
    pub opposite: PrincipalBibundle,
    pub left_unit: EquivariantMap,
    pub right_unit: EquivariantMap,
}

#[derive(Clone, Debug)]
pub struct MoritaResult {
    pub is_equivalence: bool,
    pub witness: Option<String>,
    pub certificate: Option<MoritaCertificate>,
}

/// Biprincipality: `G` must also act freely and transitively on every
/// `phi`-fiber, with `phi` surjective.
pub fn is_morita_equivalence(p: &PrincipalBibundle) -> Result<MoritaResult> {
    p.validate().into_result("bibundle")?;
    let g = &*p.left;
    let fail = |w: String| {
        Ok(MoritaResult {
            is_equivalence: false,
            witness: Some(w),
            certificate: None,
        })
    };
    for y in p.right.objects() {
        if p.phi_fiber(y).is_empty() {
            return fail(format!("phi is not surjective: empty fiber over {}", p.right.object_name(y)));
        }
    }
    for a in p.points() {
        let fiber = p.phi_fiber(p.phi(a));
        let mut hit = HashMap::new();
        for c in g.arrows().filter(|&c| g.src(c) == p.pi(a)) {
            let b = p.left_act(c, a).expect("validated");
            if hit.insert(b, c).is_some() {
                return fail(format!("G does not act freely at {}", p.point_name(a)));
            }
        }
        if let Some(&b) = fiber.iter().find(|b| !hit.contains_key(b)) {
            return fail(format!(
                "G is not transitive on the phi-fiber over {}: {} and {}",
                p.right.object_name(p.phi(a)),
                p.point_name(a),
                p.point_name(b)
            ));
        }
    }
    let opposite = p.opposite();
    let p_op = compose_bibundles(p, &opposite)?;
    let id_g = PrincipalBibundle::identity(p.left.clone());
    let left_map = p_op
        .representative
        .iter()
        .map(|&(a, b)| {
            let c = p.left_division(a, b)?;
            id_g.point(g.arrow_name(c))
        })
        .collect::<Result<Vec<_>>>()?;
    let left_unit = EquivariantMap::new(p_op.bundle.clone(), id_g, left_map)?;
    let op_p = compose_bibundles(&opposite, p)?;
    let id_h = PrincipalBibundle::identity(p.right.clone());
    let right_map = op_p
        .representative
        .iter()
        .map(|&(a, b)| {
            let c = p.division(a, b)?;
            id_h.point(p.right.arrow_name(c))
        })
        .collect::<Result<Vec<_>>>()?;
    let right_unit = EquivariantMap::new(op_p.bundle.clone(), id_h, right_map)?;
    for (what, m) in [("P⊗P̄ → G", &left_unit), ("P̄⊗P → H", &right_unit)] {
        let v = m.validate();
        if !v.is_valid() {
            return fail(format!("{what} is not an isomorphism: {:?}", v.violations));
        }
    }
    Ok(MoritaResult {
        is_equivalence: true,
        witness: None,
        certificate: Some(MoritaCertificate {
            opposite,
            left_unit,
            right_unit,
        }),
    })
}

/// `P ⊗_H E` along a chosen section `x ↦ p_x` of `pi`: the fiber at `x` is
/// `E_{phi(p_x)}` and `rho(g) = rho_E(h)` where `g·p_x = p_y·h`.
pub fn pullback_rep_with_section(p: &PrincipalBibundle, e: &Representation, section: &[Point]) -> Result<Representation> {
    if !same_groupoid(&p.right, e.groupoid()) {
        return Err(Error::ParentMismatch("representation is not over the right groupoid".into()));
    }
    let g = &*p.left;
    let rho = g
        .arrows()
        .map(|a| {
            let gp = p
                .left_act(a, section[g.src(a).0])
                .ok_or_else(|| Error::Table("left action undefined".into()))?;
            let h = p.division(section[g.tgt(a).0], gp)?;
            Ok(e.rho(h).clone())
        })
        .collect::<Result<Vec<_>>>()?;
    Representation::validated(p.left.clone(), e.rank(), rho)
}

pub fn pullback_rep(p: &PrincipalBibundle, e: &Representation) -> Result<Representation> {
    p.validate().into_result("bibundle")?;
    e.validate().into_result("representation")?;
    pullback_rep_with_section(p, e, &p.canonical_section()?)
}

/// `Rep(P)(phi)`: `phi'(x) = phi(phi(p_x))`.
pub fn pullback_rep_mor(p: &PrincipalBibundle, phi: &RepMorphism) -> Result<RepMorphism> {
    let section = p.canonical_section()?;
    let src = pullback_rep(p, phi.source())?;
    let tgt = pullback_rep(p, phi.target())?;
    let comps = p
        .left
        .objects()
        .map(|x| phi.component(p.phi(section[x.0])).clone())
        .collect();
    RepMorphism::validated(src, tgt, comps)
}

/// `ψ*E`: `rho(g) = rho_E(ψ(g))`.
pub fn functor_pullback(psi: &Functor, src: Arc<FiniteGroupoid>, e: &Representation) -> Result<Representation> {
    let rho = src.arrows().map(|a| e.rho(psi.arrow(a)).clone()).collect();
    Representation::validated(src, e.rank(), rho)
}

/// The natural isomorphism `ψ*E → Rep(P(ψ))(E)`, `v ↦ (x, 1)⊗v`, in the
/// coordinates of the canonical section.
pub fn functor_pullback_iso(psi: &Functor, bundle: &PrincipalBibundle, e: &Representation) -> Result<RepMorphism> {
    let src = bundle.left.clone();
    let classical = functor_pullback(psi, src.clone(), e)?;
    let via_bundle = pullback_rep(bundle, e)?;
    let section = bundle.canonical_section()?;
    let comps = src
        .objects()
        .map(|x| {
            let unit_point = bundle.point(&format!(
                "({}|{})",
                src.object_name(x),
                e.groupoid().arrow_name(e.groupoid().identity(psi.object(x)))
            ))?;
            let h = bundle.division(section[x.0], unit_point)?;
            Ok(e.rho(h).clone())
        })
        .collect::<Result<Vec<_>>>()?;
    RepMorphism::validated(classical, via_bundle, comps)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::GroupTable;
    use crate::matrix::Matrix;
    use crate::rep::{find_isomorphism, intertwiner_space, sign};

    fn trivial_group() -> Arc<FiniteGroupoid> {
        Arc::new(FiniteGroupoid::point(&GroupTable::cyclic(1)))
    }

    fn pair2() -> Arc<FiniteGroupoid> {
        Arc::new(FiniteGroupoid::pair(&["0", "1"]))
    }

    /// `{p0, p1}` over the point, `phi(p_i) = i`, `p_i·(i,j) = p_j`.
    fn point_vs_pair() -> PrincipalBibundle {
        let doc = BibundleDoc {
            name: Some("point_vs_pair".into()),
            left: String::new(),
            right: String::new(),
            points: vec!["p0".into(), "p1".into()],
            pi: [("p0", "*"), ("p1", "*")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            phi: [("p0", "0"), ("p1", "1")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            lact: vec![["e".into(), "p0".into(), "p0".into()], ["e".into(), "p1".into(), "p1".into()]],
            ract: (0..2)
                .flat_map(|i| (0..2).map(move |j| [format!("p{i}"), format!("({i},{j})"), format!("p{j}")]))
                .collect(),
        };
        PrincipalBibundle::from_doc(trivial_group(), pair2(), &doc).unwrap()
    }

    #[test]
    fn validate_examples() {
        let id = PrincipalBibundle::identity(pair2());
        assert!(id.validate().is_valid());
        assert!(point_vs_pair().validate().is_valid());
        let mut doc = point_vs_pair().to_doc();
        doc.ract.retain(|[p, h, _]| !(p == "p0" && h == "(0,1)"));
        let broken = PrincipalBibundle::from_doc(trivial_group(), pair2(), &doc).unwrap();
        assert!(broken.validate().has("principality"));
    }

    #[test]
    fn division_examples() {
        let p = point_vs_pair();
        let (p0, p1) = (p.point("p0").unwrap(), p.point("p1").unwrap());
        assert_eq!(p.division(p0, p0).unwrap(), pair2().arrow("(0,0)").unwrap());
        assert_eq!(p.division(p0, p1).unwrap(), pair2().arrow("(0,1)").unwrap());
        let b = bundle_from_functor(&Functor::identity(&pair2()), pair2(), pair2()).unwrap();
        let (a, c) = (b.point("(0|(0,0))").unwrap(), b.point("(1|(1,1))").unwrap());
        assert!(matches!(b.division(a, c), Err(Error::DifferentFibers(..))));
    }

    #[test]
    fn division_inverts_the_action() {
        let p = point_vs_pair();
        for a in p.points() {
            for h in p.right.arrows() {
                if let Some(b) = p.right_act(a, h) {
                    assert_eq!(p.division(a, b).unwrap(), h);
                    assert_eq!(p.right_act(a, p.division(a, b).unwrap()), Some(b));
                }
            }
        }
    }

    #[test]
    fn composition_examples() {
        let p = point_vs_pair();
        let ph = compose_bibundles(&p, &PrincipalBibundle::identity(pair2())).unwrap();
        assert!(right_unitor(&ph).unwrap().validate().is_valid());
        let gp = compose_bibundles(&PrincipalBibundle::identity(trivial_group()), &p).unwrap();
        assert!(left_unitor(&gp).unwrap().validate().is_valid());
        let pp = compose_bibundles(&p, &p.opposite()).unwrap();
        assert_eq!(pp.bundle.num_points(), 1);
        assert!(compose_bibundles(&p, &p).is_err());
    }

    #[test]
    fn functor_bundles() {
        let g = pair2();
        let id = bundle_from_functor(&Functor::identity(&g), g.clone(), g.clone()).unwrap();
        let map = EquivariantMap::new(
            id.clone(),
            PrincipalBibundle::identity(g.clone()),
            id.points()
                .map(|p| {
                    let name = id.point_name(p);
                    let arrow = &name[name.find('|').unwrap() + 1..name.len() - 1];
                    PrincipalBibundle::identity(g.clone()).point(arrow).unwrap()
                })
                .collect(),
        )
        .unwrap();
        assert!(map.validate().is_valid());
        let unit = Arc::new(FiniteGroupoid::unit(&["0", "1"]));
        let incl = Functor::from_maps(
            &unit,
            &g,
            &[("0", "0"), ("1", "1")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            &[("1_0", "(0,0)"), ("1_1", "(1,1)")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        )
        .unwrap();
        assert_eq!(bundle_from_functor(&incl, unit, g).unwrap().num_points(), 4);
        let z2 = Arc::new(FiniteGroupoid::point(&GroupTable::z2()));
        let constant = Functor {
            on_objects: vec![Object(0)],
            on_arrows: vec![Arrow(0), Arrow(0)],
        };
        assert_eq!(bundle_from_functor(&constant, z2, trivial_group()).unwrap().num_points(), 1);
    }

    #[test]
    fn morita_examples() {
        let id = PrincipalBibundle::identity(pair2());
        assert!(is_morita_equivalence(&id).unwrap().is_equivalence);
        let r = is_morita_equivalence(&point_vs_pair()).unwrap();
        assert!(r.is_equivalence);
        let cert = r.certificate.unwrap();
        assert!(cert.left_unit.validate().is_valid() && cert.right_unit.validate().is_valid());
        // One object into a groupoid with two orbits.
        let two = Arc::new(FiniteGroupoid::unit(&["a", "b"]));
        let one = trivial_group();
        let psi = Functor {
            on_objects: vec![Object(0)],
            on_arrows: vec![Arrow(0)],
        };
        let b = bundle_from_functor(&psi, one, two).unwrap();
        let r = is_morita_equivalence(&b).unwrap();
        assert!(!r.is_equivalence);
        assert!(r.witness.unwrap().contains("fiber"));
    }

    #[test]
    fn pullback_examples() {
        let g = pair2();
        let mut rng_rep = vec![Matrix::identity(1); 4];
        rng_rep[g.arrow("(1,0)").unwrap().0] = Matrix::from_ints(&[&[2]]);
        rng_rep[g.arrow("(0,1)").unwrap().0] = Matrix::scalar(crate::Scalar::from_ratio(1, 2));
        let e = Representation::validated(g.clone(), 1, rng_rep).unwrap();
        let id = PrincipalBibundle::identity(g.clone());
        let back = pullback_rep(&id, &e).unwrap();
        assert!(find_isomorphism(&back, &e).unwrap().is_some());
        let p = point_vs_pair();
        let v = pullback_rep(&p, &e).unwrap();
        assert_eq!(v.rank(), 1);
        assert_eq!(v.groupoid().num_arrows(), 1);
        let z2 = Arc::new(FiniteGroupoid::point(&GroupTable::z2()));
        let b = bundle_from_functor(&Functor::identity(&z2), z2.clone(), z2.clone()).unwrap();
        let sgn = sign(z2).unwrap();
        assert_eq!(pullback_rep(&b, &sgn).unwrap(), sgn);
    }

    #[test]
    fn pullback_morphisms() {
        let p = point_vs_pair();
        let g = pair2();
        let t = Representation::trivial(g.clone(), 1);
        let id = pullback_rep_mor(&p, &RepMorphism::identity(&t)).unwrap();
        assert!(id.components()[0].is_identity());
        let zero = pullback_rep_mor(&p, &RepMorphism::zero(&t, &t).unwrap()).unwrap();
        assert!(zero.components()[0].is_zero());
        let mut rho = vec![Matrix::identity(1); 4];
        rho[g.arrow("(1,0)").unwrap().0] = Matrix::from_ints(&[&[2]]);
        rho[g.arrow("(0,1)").unwrap().0] = Matrix::scalar(crate::Scalar::from_ratio(1, 2));
        let e = Representation::validated(g, 1, rho).unwrap();
        let iso = find_isomorphism(&t, &e).unwrap().unwrap();
        let pulled = pullback_rep_mor(&p, &iso).unwrap();
        assert!(pulled.is_iso());
        assert_eq!(intertwiner_space(pulled.source(), pulled.target()).unwrap().len(), 1);
    }

    #[test]
    fn sections_give_isomorphic_pullbacks() {
        let g = pair2();
        let p = point_vs_pair();
        let mut rho = vec![Matrix::identity(1); 4];
        rho[g.arrow("(1,0)").unwrap().0] = Matrix::from_ints(&[&[3]]);
        rho[g.arrow("(0,1)").unwrap().0] = Matrix::scalar(crate::Scalar::from_ratio(1, 3));
        let e = Representation::validated(g, 1, rho).unwrap();
        let a = pullback_rep_with_section(&p, &e, &[Point(0)]).unwrap();
        let b = pullback_rep_with_section(&p, &e, &[Point(1)]).unwrap();
        assert!(find_isomorphism(&a, &b).unwrap().is_some());
    }

    #[test]
    fn coherence_on_small_chain() {
        let p = point_vs_pair();
        let op = p.opposite();
        assert!(check_triangle(&p, &op).all_pass());
        let pent = check_pentagon(&p, &op, &p, &op);
        assert!(pent.all_pass(), "{:?}", pent.failures().collect::<Vec<_>>());
        let id = PrincipalBibundle::identity(pair2());
        let a = associator_of(&id, &id, &id).unwrap();
        assert!(a.validate().is_valid());
        let a = associator_of(&p, &op, &p).unwrap();
        assert!(a.validate().is_valid());
    }

    #[test]
    fn doc_round_trip() {
        let p = point_vs_pair();
        let back = PrincipalBibundle::from_doc(p.left.clone(), p.right.clone(), &p.to_doc()).unwrap();
        assert_eq!(back, p);
    }
}

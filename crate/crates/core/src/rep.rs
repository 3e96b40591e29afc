//! Representations of finite groupoids on constant-rank bundles and the
//! equivariant maps between them.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::same_groupoid;
use crate::error::{Error, Result};
use crate::groupoid::{Arrow, FiniteGroupoid, Object};
use crate::matrix::{Matrix, MatrixRows};
use crate::report::ValidationReport;
use crate::scalar::Scalar;

/// A rank-`k` representation: one `k × k` matrix per arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    groupoid: Arc<FiniteGroupoid>,
    rank: usize,
    rho: Vec<Matrix>,
}

/// The representation JSON document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepresentationDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub groupoid: String,
    pub rank: usize,
    pub rho: BTreeMap<String, MatrixRows>,
}

impl Representation {
    /// Checks shapes only; axioms are checked by [`Representation::validate`].
    pub fn new(groupoid: Arc<FiniteGroupoid>, rank: usize, rho: Vec<Matrix>) -> Result<Self> {
        if rho.len() != groupoid.num_arrows() {
            return Err(Error::DimensionMismatch(format!(
                "{} matrices for {} arrows",
                rho.len(),
                groupoid.num_arrows()
            )));
        }
        if let Some((g, m)) = rho
            .iter()
            .enumerate()
            .find(|(_, m)| m.rows() != rank || m.cols() != rank)
        {
            return Err(Error::DimensionMismatch(format!(
                "rho({}) is {}x{}, rank is {rank}",
                groupoid.arrow_name(Arrow(g)),
                m.rows(),
                m.cols()
            )));
        }
        Ok(Representation { groupoid, rank, rho })
    }

    pub fn validated(groupoid: Arc<FiniteGroupoid>, rank: usize, rho: Vec<Matrix>) -> Result<Self> {
        let e = Representation::new(groupoid, rank, rho)?;
        e.validate().into_result("representation")?;
        Ok(e)
    }

    /// Every arrow acts by the identity.
    pub fn trivial(groupoid: Arc<FiniteGroupoid>, rank: usize) -> Self {
        let rho = vec![Matrix::identity(rank); groupoid.num_arrows()];
        Representation { groupoid, rank, rho }
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rho(&self, g: Arrow) -> &Matrix {
        &self.rho[g.0]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.rho
    }

    pub fn validate(&self) -> ValidationReport {
        let g = &*self.groupoid;
        let mut report = ValidationReport::default();
        for x in g.objects() {
            if !self.rho(g.identity(x)).is_identity() {
                report.push("identity", g.object_name(x).to_string());
            }
        }
        for a in g.arrows() {
            for b in g.arrows() {
                let Some(ab) = g.compose(a, b) else { continue };
                let prod = self.rho(a).mul(self.rho(b)).expect("square");
                if &prod != self.rho(ab) {
                    report.push(
                        "functoriality",
                        format!("({}, {})", g.arrow_name(a), g.arrow_name(b)),
                    );
                }
            }
        }
        for a in g.arrows() {
            let inv = self.rho(g.inverse(a));
            if self.rho(a).mul(inv).map(|m| m.is_identity()) != Ok(true) {
                report.push("inverse", g.arrow_name(a).to_string());
            }
        }
        report
    }

    fn check_parent(&self, other: &Representation) -> Result<()> {
        if same_groupoid(&self.groupoid, &other.groupoid) {
            Ok(())
        } else {
            Err(Error::ParentMismatch(format!(
                "{:?} vs {:?}",
                self.groupoid.name(),
                other.groupoid.name()
            )))
        }
    }

    fn map_pairs(&self, other: &Representation, rank: usize, f: impl Fn(&Matrix, &Matrix) -> Matrix) -> Result<Representation> {
        self.check_parent(other)?;
        let rho = self.rho.iter().zip(&other.rho).map(|(a, b)| f(a, b)).collect();
        Representation::new(self.groupoid.clone(), rank, rho)
    }

    /// Block-diagonal action on `E ⊕ F`.
    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        self.map_pairs(other, self.rank + other.rank, |a, b| {
            Matrix::block_diag(&[a.clone(), b.clone()])
        })
    }

    /// Kronecker action on `E ⊗ F`.
    pub fn tensor(&self, other: &Representation) -> Result<Representation> {
        self.map_pairs(other, self.rank * other.rank, Matrix::kron)
    }

    /// Inverse-transpose action on the dual bundle.
    pub fn dual(&self) -> Representation {
        let rho = self
            .rho
            .iter()
            .map(|m| m.invert().unwrap_or_else(|_| m.clone()).transpose())
            .collect();
        Representation {
            groupoid: self.groupoid.clone(),
            rank: self.rank,
            rho,
        }
    }

    /// Traces on endomorphism arrows agree and ranks are equal.
    pub fn same_character(&self, other: &Representation) -> bool {
        self.rank == other.rank
            && self.groupoid.arrows().all(|a| {
                self.groupoid.src(a) != self.groupoid.tgt(a)
                    || self.rho(a).trace().ok() == other.rho(a).trace().ok()
            })
    }

    pub fn to_doc(&self) -> RepresentationDoc {
        RepresentationDoc {
            name: None,
            groupoid: self.groupoid.name().to_string(),
            rank: self.rank,
            rho: self
                .groupoid
                .arrows()
                .map(|a| (self.groupoid.arrow_name(a).to_string(), MatrixRows(self.rho(a).to_rows())))
                .collect(),
        }
    }

    /// Parses a document; arrows absent from `rho` are an error.
    pub fn from_doc(groupoid: Arc<FiniteGroupoid>, doc: &RepresentationDoc) -> Result<Self> {
        for k in doc.rho.keys() {
            groupoid.arrow(k)?;
        }
        let rho = groupoid
            .arrows()
            .map(|a| {
                let name = groupoid.arrow_name(a);
                doc.rho
                    .get(name)
                    .ok_or_else(|| Error::DimensionMismatch(format!("rho missing for arrow {name}")))?
                    .clone()
                    .into_matrix(doc.rank, doc.rank)
            })
            .collect::<Result<Vec<_>>>()?;
        Representation::new(groupoid, doc.rank, rho)
    }
}

/// The regular representation of a one-object groupoid `G`: `ℂ[G]` with
/// `g` acting by left translation, in the basis of arrows.
pub fn regular(groupoid: Arc<FiniteGroupoid>) -> Result<Representation> {
    if groupoid.num_objects() != 1 {
        return Err(Error::Table("regular representation needs a one-object groupoid".into()));
    }
    let n = groupoid.num_arrows();
    let rho = groupoid
        .arrows()
        .map(|a| {
            Matrix::from_fn(n, n, |r, c| {
                if groupoid.compose(a, Arrow(c)) == Some(Arrow(r)) {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            })
        })
        .collect();
    Representation::new(groupoid, n, rho)
}

/// The sign character of a one-object groupoid: the determinant of the
/// left-regular permutation of each element.
pub fn sign(groupoid: Arc<FiniteGroupoid>) -> Result<Representation> {
    let reg = regular(groupoid.clone())?;
    let rho = groupoid
        .arrows()
        .map(|a| Matrix::scalar(Scalar::from_int(permutation_sign(reg.rho(a)))))
        .collect();
    Representation::new(groupoid, 1, rho)
}

fn permutation_sign(m: &Matrix) -> i64 {
    let n = m.rows();
    let image: Vec<usize> = (0..n)
        .map(|c| (0..n).find(|&r| !m.get(r, c).is_zero()).expect("permutation matrix"))
        .collect();
    let mut seen = vec![false; n];
    let mut sign = 1;
    for start in 0..n {
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = image[x];
            len += 1;
        }
        if len > 0 && len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// A family of matrices `phi(x): E_x → F_x`, one per object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepMorphism {
    source: Representation,
    target: Representation,
    phi: Vec<Matrix>,
}

impl RepMorphism {
    pub fn new(source: Representation, target: Representation, phi: Vec<Matrix>) -> Result<Self> {
        source.check_parent(&target)?;
        if phi.len() != source.groupoid.num_objects()
            || phi.iter().any(|m| m.rows() != target.rank || m.cols() != source.rank)
        {
            return Err(Error::DimensionMismatch(format!(
                "morphism components must be {}x{}, one per object",
                target.rank, source.rank
            )));
        }
        Ok(RepMorphism { source, target, phi })
    }

    pub fn validated(source: Representation, target: Representation, phi: Vec<Matrix>) -> Result<Self> {
        let m = RepMorphism::new(source, target, phi)?;
        m.validate().into_result("representation morphism")?;
        Ok(m)
    }

    pub fn identity(e: &Representation) -> Self {
        RepMorphism {
            source: e.clone(),
            target: e.clone(),
            phi: vec![Matrix::identity(e.rank); e.groupoid.num_objects()],
        }
    }

    pub fn zero(source: &Representation, target: &Representation) -> Result<Self> {
        RepMorphism::new(
            source.clone(),
            target.clone(),
            vec![Matrix::zeros(target.rank, source.rank); source.groupoid.num_objects()],
        )
    }

    pub fn source(&self) -> &Representation {
        &self.source
    }

    pub fn target(&self) -> &Representation {
        &self.target
    }

    pub fn component(&self, x: Object) -> &Matrix {
        &self.phi[x.0]
    }

    pub fn components(&self) -> &[Matrix] {
        &self.phi
    }

    /// `phi(tgt g) · rho_E(g) = rho_F(g) · phi(src g)` for every arrow.
    pub fn validate(&self) -> ValidationReport {
        let g = &*self.source.groupoid;
        let mut report = ValidationReport::default();
        for a in g.arrows() {
            let lhs = self.component(g.tgt(a)).mul(self.source.rho(a)).expect("shapes");
            let rhs = self.target.rho(a).mul(self.component(g.src(a))).expect("shapes");
            if lhs != rhs {
                report.push("equivariance", g.arrow_name(a).to_string());
            }
        }
        report
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &RepMorphism) -> Result<RepMorphism> {
        if self.source != other.target {
            return Err(Error::DimensionMismatch("morphisms are not composable".into()));
        }
        let phi = self
            .phi
            .iter()
            .zip(&other.phi)
            .map(|(a, b)| a.mul(b))
            .collect::<Result<Vec<_>>>()?;
        RepMorphism::new(other.source.clone(), self.target.clone(), phi)
    }

    pub fn is_iso(&self) -> bool {
        self.phi.iter().all(Matrix::is_invertible)
    }

    pub fn inverse(&self) -> Result<RepMorphism> {
        let phi = self.phi.iter().map(Matrix::invert).collect::<Result<Vec<_>>>()?;
        RepMorphism::new(self.target.clone(), self.source.clone(), phi)
    }

    pub fn add(&self, other: &RepMorphism) -> Result<RepMorphism> {
        let phi = self
            .phi
            .iter()
            .zip(&other.phi)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        RepMorphism::new(self.source.clone(), self.target.clone(), phi)
    }

    pub fn scale(&self, s: &Scalar) -> RepMorphism {
        RepMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            phi: self.phi.iter().map(|m| m.scale(s)).collect(),
        }
    }
}

/// Basis of `Hom(E, F)`: the solution space of the equivariance system
/// over all arrows.
pub fn intertwiner_space(e: &Representation, f: &Representation) -> Result<Vec<RepMorphism>> {
    e.check_parent(f)?;
    let g = &*e.groupoid;
    let (k, l) = (e.rank, f.rank);
    let block = l * k;
    let unknowns = g.num_objects() * block;
    // Unknown (x, i, j) is entry (i, j) of phi(x).
    let var = |x: Object, i: usize, j: usize| x.0 * block + i * k + j;
    let mut rows = Vec::new();
    for a in g.arrows() {
        let (s, t) = (g.src(a), g.tgt(a));
        let re = e.rho(a);
        let rf = f.rho(a);
        for i in 0..l {
            for j in 0..k {
                let mut row = vec![Scalar::zero(); unknowns];
                // (phi_t · rho_E)[i, j] = Σ_m phi_t[i, m] rho_E[m, j]
                for m in 0..k {
                    row[var(t, i, m)] += re.get(m, j);
                }
                // (rho_F · phi_s)[i, j] = Σ_m rho_F[i, m] phi_s[m, j]
                for m in 0..l {
                    row[var(s, m, j)] -= rf.get(i, m);
                }
                rows.push(row);
            }
        }
    }
    let system = Matrix::from_rows(rows, unknowns)?;
    system
        .kernel_basis()
        .into_iter()
        .map(|v| {
            let phi = g
                .objects()
                .map(|x| Matrix::from_fn(l, k, |i, j| v[var(x, i, j)].clone()))
                .collect();
            RepMorphism::new(e.clone(), f.clone(), phi)
        })
        .collect()
}

/// Enumerates `{0, …, bound}^m` by increasing coordinate sum, then
/// lexicographically, skipping the origin.
struct GridScan {
    bound: usize,
    point: Vec<usize>,
    total: usize,
    done: bool,
}

impl GridScan {
    fn new(m: usize, bound: usize) -> Self {
        GridScan {
            bound,
            point: vec![0; m],
            total: 0,
            done: m == 0 || bound == 0,
        }
    }

    /// Next composition of `self.total` into parts of at most `bound`, in
    /// lexicographically decreasing order of the leading parts.
    fn advance(&mut self) -> bool {
        let m = self.point.len();
        // Find the rightmost position (not last) that can give one unit to
        // its right neighbourhood.
        for i in (0..m - 1).rev() {
            if self.point[i] == 0 {
                continue;
            }
            let rest: usize = self.point[i + 1..].iter().sum::<usize>() + 1;
            let room = (m - 1 - i) * self.bound;
            if rest > room {
                continue;
            }
            self.point[i] -= 1;
            let mut rest = rest;
            for p in self.point[i + 1..].iter_mut() {
                *p = rest.min(self.bound);
                rest -= *p;
            }
            return true;
        }
        false
    }

    fn first_of_total(&mut self, total: usize) -> bool {
        if total > self.point.len() * self.bound {
            return false;
        }
        self.total = total;
        let mut rest = total;
        for p in self.point.iter_mut() {
            *p = rest.min(self.bound);
            rest -= *p;
        }
        true
    }
}

impl Iterator for GridScan {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if self.total == 0 {
            if !self.first_of_total(1) {
                self.done = true;
                return None;
            }
            return Some(self.point.clone());
        }
        if !self.advance() && !self.first_of_total(self.total + 1) {
            self.done = true;
            return None;
        }
        Some(self.point.clone())
    }
}

/// An explicit isomorphism `E → F`, or `None` when none exists.
///
/// After the rank and character tests, the combinations `Σ λ_i T_i` of an
/// intertwiner basis are scanned over the grid `{0, …, n}^m`, where `n` is
/// the total dimension. `det` of the combination is a polynomial of degree
/// at most `n`, so if it is not identically zero some grid point is a
/// non-root.
pub fn find_isomorphism(e: &Representation, f: &Representation) -> Result<Option<RepMorphism>> {
    e.check_parent(f)?;
    if !e.same_character(f) {
        return Ok(None);
    }
    if e.rank == 0 {
        return Ok(Some(RepMorphism::zero(e, f)?));
    }
    if e == f {
        return Ok(Some(RepMorphism::identity(e)));
    }
    let basis = intertwiner_space(e, f)?;
    let n = e.rank * e.groupoid.num_objects();
    for lambda in GridScan::new(basis.len(), n) {
        let mut candidate = RepMorphism::zero(e, f)?;
        for (c, t) in lambda.iter().zip(&basis) {
            if *c != 0 {
                candidate = candidate.add(&t.scale(&Scalar::from_int(*c as i64)))?;
            }
        }
        if candidate.is_iso() {
            return Ok(Some(candidate));
        }
    }
    Ok(None)
}

/// Random integer-ish invertible matrix with entries in `ℤ[i]`.
pub fn random_invertible<R: Rng>(n: usize, rng: &mut R) -> Matrix {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| {
            let re = rng.gen_range(-2..=2);
            let im = if rng.gen_bool(0.2) { rng.gen_range(-1..=1) } else { 0 };
            Scalar::complex(re, im)
        });
        if m.is_invertible() {
            return m;
        }
    }
}

/// A random validated rank-`k` representation.
///
/// Each orbit gets a base object `x₀` and transporters `τ_y: x₀ → y`. The
/// isotropy group of `x₀` acts through a random conjugate of a direct sum
/// of trivial, sign and regular blocks, and each object carries a random
/// gauge `A_y`, so that `rho(g) = A_y · rho₀(τ_y⁻¹ g τ_x) · A_x⁻¹`.
pub fn random_representation<R: Rng>(groupoid: Arc<FiniteGroupoid>, rank: usize, rng: &mut R) -> Result<Representation> {
    let g = &*groupoid;
    let mut rho = vec![Matrix::zeros(rank, rank); g.num_arrows()];
    for orbit in g.orbit_partition() {
        let base = orbit[0];
        let iso = g.isotropy(base)?.arrows;
        let order = iso.len();
        let pos = |a: Arrow| iso.iter().position(|&b| b == a).expect("isotropy arrow");
        // Regular and sign blocks of the isotropy group.
        let regular: Vec<Matrix> = iso
            .iter()
            .map(|&a| {
                Matrix::from_fn(order, order, |r, c| {
                    if g.compose(a, iso[c]) == Some(iso[r]) {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                })
            })
            .collect();
        let signs: Vec<i64> = regular.iter().map(permutation_sign).collect();
        let mut blocks: Vec<Box<dyn Fn(usize) -> Matrix>> = Vec::new();
        let mut filled = 0;
        while filled < rank {
            let left = rank - filled;
            let choice = rng.gen_range(0..3);
            if choice == 2 && order > 1 && order <= left {
                let reg = regular.clone();
                blocks.push(Box::new(move |k| reg[k].clone()));
                filled += order;
            } else if choice == 1 {
                let s = signs.clone();
                blocks.push(Box::new(move |k| Matrix::scalar(Scalar::from_int(s[k]))));
                filled += 1;
            } else {
                blocks.push(Box::new(|_| Matrix::identity(1)));
                filled += 1;
            }
        }
        let conj = random_invertible(rank, rng);
        let conj_inv = conj.invert()?;
        let rho0: Vec<Matrix> = (0..order)
            .map(|k| {
                let d = Matrix::block_diag(&blocks.iter().map(|b| b(k)).collect::<Vec<_>>());
                conj_inv.mul(&d).and_then(|m| m.mul(&conj))
            })
            .collect::<Result<_>>()?;
        let mut gauge = BTreeMap::new();
        let mut transporter = BTreeMap::new();
        for &y in &orbit {
            let a = random_invertible(rank, rng);
            let a_inv = a.invert()?;
            gauge.insert(y, (a, a_inv));
            let t = g
                .transporter(base, y)
                .ok_or_else(|| Error::Table("orbit is not connected".into()))?;
            transporter.insert(y, t);
        }
        for a in g.arrows().filter(|&a| orbit.contains(&g.src(a))) {
            let (x, y) = (g.src(a), g.tgt(a));
            let core = g
                .compose(a, transporter[&x])
                .and_then(|m| g.compose(g.inverse(transporter[&y]), m))
                .ok_or_else(|| Error::Table("incomplete composition table".into()))?;
            rho[a.0] = gauge[&y].0.mul(&rho0[pos(core)])?.mul(&gauge[&x].1)?;
        }
    }
    Representation::validated(groupoid, rank, rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::GroupTable;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z2() -> Arc<FiniteGroupoid> {
        Arc::new(FiniteGroupoid::point(&GroupTable::z2()))
    }

    fn pair2() -> Arc<FiniteGroupoid> {
        Arc::new(FiniteGroupoid::pair(&["0", "1"]))
    }

    fn cocycle() -> Representation {
        let g = pair2();
        let mut rho = vec![Matrix::identity(1); 4];
        rho[g.arrow("(1,0)").unwrap().0] = Matrix::from_ints(&[&[2]]);
        rho[g.arrow("(0,1)").unwrap().0] = Matrix::scalar(Scalar::from_ratio(1, 2));
        Representation::validated(g, 1, rho).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(Representation::trivial(pair2(), 3).validate().is_valid());
        let sgn = sign(z2()).unwrap();
        assert!(sgn.validate().is_valid());
        assert_eq!(sgn.rho(z2().arrow("s").unwrap()), &Matrix::from_ints(&[&[-1]]));
        let bad = Representation::new(z2(), 1, vec![Matrix::identity(1), Matrix::from_ints(&[&[2]])]).unwrap();
        let report = bad.validate();
        assert!(report.violations.iter().any(|v| v.name == "functoriality" && v.witness == "(s, s)"));
    }

    #[test]
    fn categorical_operations() {
        let g = z2();
        let sgn = sign(g.clone()).unwrap();
        let zero = Representation::trivial(g.clone(), 0);
        assert_eq!(sgn.direct_sum(&zero).unwrap(), sgn);
        assert_eq!(sgn.tensor(&sgn).unwrap(), Representation::trivial(g.clone(), 1));
        assert_eq!(sgn.dual(), sgn);
        let reg = regular(g.clone()).unwrap();
        for r in [sgn.direct_sum(&reg).unwrap(), reg.tensor(&sgn).unwrap(), reg.dual()] {
            assert!(r.validate().is_valid());
        }
        assert!(sgn.direct_sum(&Representation::trivial(pair2(), 1)).is_err());
    }

    #[test]
    fn intertwiner_dimensions() {
        let pair = pair2();
        let t = Representation::trivial(pair, 1);
        assert_eq!(intertwiner_space(&t, &t).unwrap().len(), 1);
        let g = z2();
        let sgn = sign(g.clone()).unwrap();
        assert_eq!(intertwiner_space(&sgn, &Representation::trivial(g.clone(), 1)).unwrap().len(), 0);
        let reg = regular(g).unwrap();
        let basis = intertwiner_space(&reg, &reg).unwrap();
        assert_eq!(basis.len(), 2);
        assert!(basis.iter().all(|m| m.validate().is_valid()));
    }

    #[test]
    fn find_isomorphism_examples() {
        let e = cocycle();
        assert_eq!(find_isomorphism(&e, &e).unwrap(), Some(RepMorphism::identity(&e)));
        let t = Representation::trivial(e.groupoid().clone(), 1);
        // trivial → E has components proportional to (1, 2)
        let phi = find_isomorphism(&t, &e).unwrap().unwrap();
        assert!(phi.validate().is_valid() && phi.is_iso());
        let (p0, p1) = (phi.component(Object(0)).get(0, 0), phi.component(Object(1)).get(0, 0));
        assert_eq!(p1, &(p0 * &Scalar::from_int(2)));
        let g = z2();
        assert!(find_isomorphism(&sign(g.clone()).unwrap(), &Representation::trivial(g, 1)).unwrap().is_none());
    }

    #[test]
    fn iso_inverse_round_trip() {
        let e = cocycle();
        let t = Representation::trivial(e.groupoid().clone(), 1);
        let phi = find_isomorphism(&e, &t).unwrap().unwrap();
        let back = phi.inverse().unwrap();
        assert_eq!(back.compose(&phi).unwrap(), RepMorphism::identity(&e));
        assert!(find_isomorphism(&t, &e).unwrap().is_some());
    }

    #[test]
    fn grid_scan_order() {
        let pts: Vec<Vec<usize>> = GridScan::new(2, 2).collect();
        assert_eq!(
            pts,
            vec![vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2], vec![2, 1], vec![1, 2], vec![2, 2]]
        );
        assert_eq!(GridScan::new(3, 3).count(), 4usize.pow(3) - 1);
        assert_eq!(GridScan::new(0, 3).count(), 0);
    }

    #[test]
    fn random_reps_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s3 = Arc::new(FiniteGroupoid::point(&GroupTable::symmetric(3)));
        for k in 0..4 {
            let e = random_representation(s3.clone(), k, &mut rng).unwrap();
            assert_eq!(e.rank(), k);
        }
        let swap = Arc::new(
            FiniteGroupoid::action(&GroupTable::z2(), &["0", "1", "2"], &[vec![0, 1, 2], vec![1, 0, 2]]).unwrap(),
        );
        let e = random_representation(swap, 2, &mut rng).unwrap();
        assert!(e.validate().is_valid());
    }

    #[test]
    fn doc_round_trip() {
        let e = cocycle();
        let json = serde_json::to_string(&e.to_doc()).unwrap();
        let doc: RepresentationDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(Representation::from_doc(e.groupoid().clone(), &doc).unwrap(), e);
    }
}

//! The convolution algebra of a finite groupoid,
//! `(ab)(g) = Σ_{g = g'g''} a(g') b(g'')`, and its commutative
//! subalgebra of functions on objects.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::{Arrow, FiniteGroupoid, Object};
use crate::matrix::Matrix;
use crate::report::Report;
use crate::scalar::Scalar;

pub(crate) fn same_groupoid(a: &Arc<FiniteGroupoid>, b: &Arc<FiniteGroupoid>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A function on arrows, stored as a total coefficient vector in
/// canonical arrow order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    groupoid: Arc<FiniteGroupoid>,
    coeffs: Vec<Scalar>,
}

impl AlgebraElement {
    pub fn new(groupoid: Arc<FiniteGroupoid>, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.len() != groupoid.num_arrows() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} arrows",
                coeffs.len(),
                groupoid.num_arrows()
            )));
        }
        Ok(AlgebraElement { groupoid, coeffs })
    }

    pub fn zero(groupoid: Arc<FiniteGroupoid>) -> Self {
        let n = groupoid.num_arrows();
        AlgebraElement {
            groupoid,
            coeffs: vec![Scalar::zero(); n],
        }
    }

    /// The basis element `δ_g`.
    pub fn delta(groupoid: Arc<FiniteGroupoid>, g: Arrow) -> Self {
        let mut e = AlgebraElement::zero(groupoid);
        e.coeffs[g.0] = Scalar::one();
        e
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, g: Arrow) -> &Scalar {
        &self.coeffs[g.0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_parent(other)?;
        Ok(AlgebraElement {
            groupoid: self.groupoid.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, s: &Scalar) -> AlgebraElement {
        AlgebraElement {
            groupoid: self.groupoid.clone(),
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    fn check_parent(&self, other: &AlgebraElement) -> Result<()> {
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

    /// `{ "groupoid": id, "coeffs": {arrow: scalar} }`, zero entries omitted.
    pub fn to_doc(&self) -> AlgebraElementDoc {
        AlgebraElementDoc {
            name: None,
            groupoid: self.groupoid.name().to_string(),
            coeffs: self
                .groupoid
                .arrows()
                .filter(|&g| !self.coeff(g).is_zero())
                .map(|g| (self.groupoid.arrow_name(g).to_string(), self.coeff(g).clone()))
                .collect(),
        }
    }

    pub fn from_doc(groupoid: Arc<FiniteGroupoid>, doc: &AlgebraElementDoc) -> Result<Self> {
        let mut e = AlgebraElement::zero(groupoid);
        for (name, c) in &doc.coeffs {
            let g = e.groupoid.arrow(name)?;
            e.coeffs[g.0] = c.clone();
        }
        Ok(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraElementDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub groupoid: String,
    #[serde(default)]
    pub coeffs: BTreeMap<String, Scalar>,
}

/// `C(G)` with the factorization lists of every arrow precomputed.
#[derive(Clone, Debug)]
pub struct ConvolutionAlgebra {
    groupoid: Arc<FiniteGroupoid>,
    factorizations: Vec<Vec<(Arrow, Arrow)>>,
}

impl ConvolutionAlgebra {
    pub fn new(groupoid: Arc<FiniteGroupoid>) -> Self {
        let mut factorizations = vec![Vec::new(); groupoid.num_arrows()];
        for a in groupoid.arrows() {
            for b in groupoid.arrows() {
                if let Some(c) = groupoid.compose(a, b) {
                    factorizations[c.0].push((a, b));
                }
            }
        }
        ConvolutionAlgebra {
            groupoid,
            factorizations,
        }
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn dim(&self) -> usize {
        self.groupoid.num_arrows()
    }

    /// Pairs `(g', g'')` with `g'g'' = g`.
    pub fn factorizations(&self, g: Arrow) -> &[(Arrow, Arrow)] {
        &self.factorizations[g.0]
    }

    pub fn delta(&self, g: Arrow) -> AlgebraElement {
        AlgebraElement::delta(self.groupoid.clone(), g)
    }

    pub fn convolve(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        for e in [a, b] {
            if !same_groupoid(&self.groupoid, &e.groupoid) {
                return Err(Error::ParentMismatch(format!(
                    "element of {:?} in the algebra of {:?}",
                    e.groupoid.name(),
                    self.groupoid.name()
                )));
            }
        }
        let coeffs = self
            .factorizations
            .iter()
            .map(|fs| {
                fs.iter()
                    .filter(|(x, y)| !a.coeffs[x.0].is_zero() && !b.coeffs[y.0].is_zero())
                    .map(|(x, y)| &a.coeffs[x.0] * &b.coeffs[y.0])
                    .sum()
            })
            .collect();
        Ok(AlgebraElement {
            groupoid: self.groupoid.clone(),
            coeffs,
        })
    }

    /// `Σ_x δ_{1_x}`.
    pub fn unit(&self) -> AlgebraElement {
        self.embed_base(|_| Scalar::one())
    }

    /// `Σ_x f(x) δ_{1_x}`.
    pub fn embed_base(&self, f: impl Fn(Object) -> Scalar) -> AlgebraElement {
        let mut e = AlgebraElement::zero(self.groupoid.clone());
        for x in self.groupoid.objects() {
            e.coeffs[self.groupoid.identity(x).0] = f(x);
        }
        e
    }

    /// The idempotent `e_x = δ_{1_x}`.
    pub fn idempotent(&self, x: Object) -> AlgebraElement {
        self.delta(self.groupoid.identity(x))
    }

    pub fn is_central(&self, a: &AlgebraElement) -> Result<bool> {
        for g in self.groupoid.arrows() {
            let d = self.delta(g);
            if self.convolve(a, &d)? != self.convolve(&d, a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Matrix of left multiplication by `a` in the `δ` basis.
    pub fn left_multiplication(&self, a: &AlgebraElement) -> Result<Matrix> {
        let cols = self
            .groupoid
            .arrows()
            .map(|g| self.convolve(a, &self.delta(g)).map(|e| Matrix::column(e.coeffs)))
            .collect::<Result<Vec<_>>>()?;
        Matrix::hstack(&cols, self.dim())
    }
}

pub fn algebra_unit(g: Arc<FiniteGroupoid>) -> AlgebraElement {
    ConvolutionAlgebra::new(g).unit()
}

pub fn embed_base(f: &[Scalar], g: Arc<FiniteGroupoid>) -> Result<AlgebraElement> {
    if f.len() != g.num_objects() {
        return Err(Error::DimensionMismatch(format!(
            "{} values for {} objects",
            f.len(),
            g.num_objects()
        )));
    }
    Ok(ConvolutionAlgebra::new(g).embed_base(|x| f[x.0].clone()))
}

/// Verifies `δ_(i,j) · δ_(k,l) = [j = k] δ_(i,l)` on the pair groupoid on
/// `n` objects: the structure constants of `n × n` matrix units.
pub fn check_matrix_algebra_iso(n: usize) -> Report {
    let names: Vec<String> = (0..n).map(|k| k.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let g = Arc::new(FiniteGroupoid::pair(&refs));
    let alg = ConvolutionAlgebra::new(g.clone());
    let unit = |i: &str, j: &str| g.arrow(&format!("({i},{j})")).expect("pair arrow");
    let mut report = Report::new();
    let mut checked = 0usize;
    let mut first_failure = None;
    'outer: for i in &refs {
        for j in &refs {
            for k in &refs {
                for l in &refs {
                    let lhs = alg
                        .convolve(&alg.delta(unit(i, j)), &alg.delta(unit(k, l)))
                        .expect("same parent");
                    let rhs = if j == k {
                        alg.delta(unit(i, l))
                    } else {
                        AlgebraElement::zero(g.clone())
                    };
                    checked += 1;
                    if lhs != rhs {
                        first_failure = Some(format!("E{i}{j}·E{k}{l}"));
                        break 'outer;
                    }
                }
            }
        }
    }
    let name = format!("matrix units n={n}: {checked} identities");
    match first_failure {
        None => report.pass(name),
        Some(w) => report.fail(name, w),
    }
    report
}

/// An algebra isomorphism `C(G) → M_n` sending `δ_g` to the matrix unit
/// `E_{tgt g, src g}`, for connected groupoids with trivial isotropy.
#[derive(Clone, Debug)]
pub struct MatrixUnitIso {
    pub images: Vec<Matrix>,
}

impl MatrixUnitIso {
    pub fn new(g: &FiniteGroupoid) -> Result<Self> {
        let n = g.num_objects();
        if g.orbit_partition().len() > 1 {
            return Err(Error::Table("groupoid is not connected".into()));
        }
        if g.num_arrows() != n * n {
            return Err(Error::Table("isotropy is not trivial".into()));
        }
        let images = g
            .arrows()
            .map(|a| {
                Matrix::zeros(n, n).with_block(g.tgt(a).0, g.src(a).0, &Matrix::identity(1))
            })
            .collect();
        Ok(MatrixUnitIso { images })
    }

    pub fn apply(&self, a: &AlgebraElement) -> Matrix {
        let n = self.images.first().map_or(0, Matrix::rows);
        a.coeffs()
            .iter()
            .zip(&self.images)
            .fold(Matrix::zeros(n, n), |acc, (c, m)| acc.add(&m.scale(c)).expect("same shape"))
    }

    /// Checks multiplicativity on all basis pairs, unitality and
    /// bijectivity (images span `M_n`).
    pub fn verify(&self, alg: &ConvolutionAlgebra) -> Report {
        let mut report = Report::new();
        let g = alg.groupoid();
        let mut bad = None;
        for a in g.arrows() {
            for b in g.arrows() {
                let prod = alg.convolve(&alg.delta(a), &alg.delta(b)).expect("same parent");
                let lhs = self.apply(&prod);
                let rhs = self.images[a.0].mul(&self.images[b.0]).expect("square");
                if lhs != rhs && bad.is_none() {
                    bad = Some(format!("({}, {})", g.arrow_name(a), g.arrow_name(b)));
                }
            }
        }
        report.record("multiplicative", bad.is_none(), bad);
        report.record("unital", self.apply(&alg.unit()).is_identity(), None);
        let n = g.num_objects();
        let vecs: Vec<Matrix> = self.images.iter().map(|m| Matrix::column(m.vectorize())).collect();
        let span = Matrix::hstack(&vecs, n * n).expect("uniform").rank();
        report.record(
            "bijective",
            span == n * n && self.images.len() == n * n,
            (span != n * n).then(|| format!("span {span} of {}", n * n)),
        );
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::GroupTable;

    fn pair2() -> ConvolutionAlgebra {
        ConvolutionAlgebra::new(Arc::new(FiniteGroupoid::pair(&["0", "1"])))
    }

    #[test]
    fn pair_groupoid_matrix_units() {
        let alg = pair2();
        let g = alg.groupoid().clone();
        let d = |n: &str| alg.delta(g.arrow(n).unwrap());
        assert_eq!(alg.convolve(&d("(0,1)"), &d("(1,0)")).unwrap(), d("(0,0)"));
        assert!(alg.convolve(&d("(0,1)"), &d("(0,1)")).unwrap().is_zero());
    }

    #[test]
    fn unit_groupoid_is_pointwise() {
        let g = Arc::new(FiniteGroupoid::unit(&["a", "b", "c"]));
        let alg = ConvolutionAlgebra::new(g.clone());
        let f = alg.embed_base(|x| Scalar::from_int(x.0 as i64 + 2));
        let h = alg.embed_base(|x| Scalar::complex(1, x.0 as i64));
        let prod = alg.convolve(&f, &h).unwrap();
        for x in g.objects() {
            let a = g.identity(x);
            assert_eq!(prod.coeff(a), &(f.coeff(a) * h.coeff(a)));
        }
    }

    #[test]
    fn z2_group_algebra() {
        let g = Arc::new(FiniteGroupoid::point(&GroupTable::z2()));
        let alg = ConvolutionAlgebra::new(g.clone());
        let s = alg.delta(g.arrow("s").unwrap());
        assert_eq!(alg.convolve(&s, &s).unwrap(), alg.delta(g.arrow("e").unwrap()));
        assert_eq!(alg.unit(), alg.delta(g.arrow("e").unwrap()));
    }

    #[test]
    fn unit_examples() {
        let g = Arc::new(FiniteGroupoid::unit(&["0", "1"]));
        assert!(algebra_unit(g).coeffs().iter().all(|c| c.is_one()));
        let alg = pair2();
        let g = alg.groupoid().clone();
        let u = alg.unit();
        assert_eq!(u.coeff(g.arrow("(0,0)").unwrap()), &Scalar::one());
        assert_eq!(u.coeff(g.arrow("(1,1)").unwrap()), &Scalar::one());
        assert!(u.coeff(g.arrow("(0,1)").unwrap()).is_zero());
        let x = alg.delta(g.arrow("(0,1)").unwrap());
        assert_eq!(alg.convolve(&u, &x).unwrap(), x);
        assert_eq!(alg.convolve(&x, &u).unwrap(), x);
    }

    #[test]
    fn embed_base_examples() {
        let alg = pair2();
        let g = alg.groupoid().clone();
        assert_eq!(embed_base(&[Scalar::one(), Scalar::one()], g.clone()).unwrap(), alg.unit());
        let e0 = embed_base(&[Scalar::one(), Scalar::zero()], g.clone()).unwrap();
        assert_eq!(alg.convolve(&e0, &e0).unwrap(), e0);
        let f = embed_base(&[Scalar::from_int(2), Scalar::from_int(3)], g.clone()).unwrap();
        let iso = MatrixUnitIso::new(&g).unwrap();
        assert_eq!(iso.apply(&f), Matrix::from_ints(&[&[2, 0], &[0, 3]]));
        assert!(embed_base(&[Scalar::one()], g).is_err());
    }

    #[test]
    fn matrix_algebra_check_counts() {
        for (n, count) in [(1, 1), (2, 16), (3, 81)] {
            let r = check_matrix_algebra_iso(n);
            assert!(r.all_pass());
            assert_eq!(r.checks[0].name, format!("matrix units n={n}: {count} identities"));
        }
    }

    #[test]
    fn base_subalgebra_not_central_in_pair_groupoid() {
        let alg = pair2();
        let e0 = alg.idempotent(Object(0));
        assert!(!alg.is_central(&e0).unwrap());
        assert!(alg.is_central(&alg.unit()).unwrap());
        let z2 = ConvolutionAlgebra::new(Arc::new(FiniteGroupoid::point(&GroupTable::z2())));
        assert!(z2.is_central(&z2.idempotent(Object(0))).unwrap());
    }

    #[test]
    fn parent_mismatch() {
        let alg = pair2();
        let other = AlgebraElement::zero(Arc::new(FiniteGroupoid::unit(&["0"])));
        assert!(matches!(alg.convolve(&alg.unit(), &other), Err(Error::ParentMismatch(_))));
    }
}

//! Finite-dimensional modules over the convolution algebra, the section
//! functor `Γ` from representations, the reconstruction functor back, and
//! the natural isomorphisms `ε: Id ⇒ Γ∘R` and `η: R∘Γ ⇒ Id`.
//!
//! A module is given by the matrices `act(g)` of the basis elements `δ_g`.
//! The fiber at `x` is realized as the image of the idempotent
//! `e_x = act(1_x)`, which for nondegenerate modules is isomorphic to the
//! quotient `M / I_x M` by the ideal of functions vanishing at `x`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::same_groupoid;
use crate::error::{Error, Result};
use crate::groupoid::{Arrow, FiniteGroupoid, Object};
use crate::matrix::{Matrix, MatrixRows};
use crate::rep::{intertwiner_space, RepMorphism, Representation};
use crate::report::{Report, ValidationReport};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct CModule {
    groupoid: Arc<FiniteGroupoid>,
    dim: usize,
    act: Vec<Matrix>,
    validated: bool,
}

impl PartialEq for CModule {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.act == other.act && same_groupoid(&self.groupoid, &other.groupoid)
    }
}

impl Eq for CModule {}

/// The CModule JSON document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CModuleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub groupoid: String,
    pub dim: usize,
    pub act: BTreeMap<String, MatrixRows>,
}

/// `e_x M` in its column-reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub dim: usize,
    /// `n × r`, columns spanning `e_x M`.
    pub basis: Matrix,
    /// `r × n`, sends `m` to the coordinates of `e_x m` in `basis`.
    pub coords: Matrix,
}

/// Outcome of the finite-type and constant-rank predicates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub finite_type: bool,
    /// `k` such that every fiber embeds in `C(M)^k`.
    pub embedding_rank: usize,
    pub constant_rank: Option<usize>,
    pub rank_function: Vec<(String, usize)>,
}

impl CModule {
    pub fn new(groupoid: Arc<FiniteGroupoid>, dim: usize, act: Vec<Matrix>) -> Result<Self> {
        if act.len() != groupoid.num_arrows() {
            return Err(Error::DimensionMismatch(format!(
                "{} action matrices for {} arrows",
                act.len(),
                groupoid.num_arrows()
            )));
        }
        if act.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::DimensionMismatch(format!("action matrices must be {dim}x{dim}")));
        }
        Ok(CModule {
            groupoid,
            dim,
            act,
            validated: false,
        })
    }

    pub fn validated(groupoid: Arc<FiniteGroupoid>, dim: usize, act: Vec<Matrix>) -> Result<Self> {
        CModule::new(groupoid, dim, act)?.checked()
    }

    /// Validates and marks the module as usable by the fiber operations.
    pub fn checked(mut self) -> Result<Self> {
        self.validate().into_result("module")?;
        self.validated = true;
        Ok(self)
    }

    pub fn zero(groupoid: Arc<FiniteGroupoid>) -> Self {
        let n = groupoid.num_arrows();
        CModule {
            groupoid,
            dim: 0,
            act: vec![Matrix::zeros(0, 0); n],
            validated: true,
        }
    }

    /// Builds a module over a unit groupoid whose fiber at each object has
    /// the given dimension.
    pub fn blocks(groupoid: Arc<FiniteGroupoid>, dims: &[usize]) -> Result<Self> {
        if !groupoid.arrows().all(|a| groupoid.is_identity(a)) || dims.len() != groupoid.num_objects() {
            return Err(Error::Table("block modules need a unit groupoid and one size per object".into()));
        }
        let n: usize = dims.iter().sum();
        let offsets: Vec<usize> = dims.iter().scan(0, |acc, d| {
            let o = *acc;
            *acc += d;
            Some(o)
        }).collect();
        let act = groupoid
            .arrows()
            .map(|a| {
                let x = groupoid.src(a).0;
                Matrix::zeros(n, n).with_block(offsets[x], offsets[x], &Matrix::identity(dims[x]))
            })
            .collect();
        CModule::validated(groupoid, n, act)
    }

    /// The convolution algebra acting on itself by left multiplication.
    pub fn regular(groupoid: Arc<FiniteGroupoid>) -> Result<Self> {
        let alg = crate::algebra::ConvolutionAlgebra::new(groupoid.clone());
        let act = groupoid
            .arrows()
            .map(|g| alg.left_multiplication(&alg.delta(g)))
            .collect::<Result<Vec<_>>>()?;
        CModule::validated(groupoid, alg.dim(), act)
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn act(&self, g: Arrow) -> &Matrix {
        &self.act[g.0]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.act
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    /// `e_x`, the action of `δ_{1_x}`.
    pub fn idempotent(&self, x: Object) -> &Matrix {
        self.act(self.groupoid.identity(x))
    }

    pub fn validate(&self) -> ValidationReport {
        let g = &*self.groupoid;
        let mut report = ValidationReport::default();
        let zero = Matrix::zeros(self.dim, self.dim);
        for a in g.arrows() {
            for b in g.arrows() {
                let prod = self.act(a).mul(self.act(b)).expect("square");
                let expect = g.compose(a, b).map_or(&zero, |c| self.act(c));
                if &prod != expect {
                    report.push("action law", format!("({}, {})", g.arrow_name(a), g.arrow_name(b)));
                }
            }
        }
        let sum = g
            .objects()
            .fold(zero.clone(), |acc, x| acc.add(self.idempotent(x)).expect("square"));
        if !sum.is_identity() {
            report.push("nondegeneracy", "sum of e_x is not the identity");
        }
        for x in g.objects() {
            for y in g.objects().filter(|&y| y != x) {
                if !self.idempotent(x).mul(self.idempotent(y)).expect("square").is_zero() {
                    report.push(
                        "orthogonality",
                        format!("({}, {})", g.object_name(x), g.object_name(y)),
                    );
                }
            }
        }
        report
    }

    fn require_validated(&self) -> Result<()> {
        if self.validated {
            Ok(())
        } else {
            Err(Error::Invalid {
                what: "module",
                violations: vec!["module has not been validated".into()],
            })
        }
    }

    pub fn fiber(&self, x: Object) -> Result<Fiber> {
        self.require_validated()?;
        let e = self.idempotent(x);
        let (basis, pivots) = e.column_space();
        let coords = e.select_rows(&pivots);
        Ok(Fiber {
            dim: pivots.len(),
            basis,
            coords,
        })
    }

    /// `dim M − dim I_x M`, with `I_x M = Σ_{y ≠ x} e_y M`.
    pub fn quotient_fiber_dim(&self, x: Object) -> Result<usize> {
        self.require_validated()?;
        let others: Vec<Matrix> = self
            .groupoid
            .objects()
            .filter(|&y| y != x)
            .map(|y| self.idempotent(y).clone())
            .collect();
        let ideal = Matrix::hstack(&others, self.dim)?.rank();
        Ok(self.dim - ideal)
    }

    pub fn rank_function(&self) -> Result<Vec<(Object, usize)>> {
        self.groupoid
            .objects()
            .map(|x| Ok((x, self.fiber(x)?.dim)))
            .collect()
    }

    pub fn is_finite_type_constant_rank(&self) -> Result<RankReport> {
        let ranks = self.rank_function()?;
        let max = ranks.iter().map(|(_, r)| *r).max().unwrap_or(0);
        let constant = match ranks.first() {
            None => Some(0),
            Some((_, r0)) => ranks.iter().all(|(_, r)| r == r0).then_some(*r0),
        };
        Ok(RankReport {
            finite_type: true,
            embedding_rank: max,
            constant_rank: constant,
            rank_function: ranks
                .into_iter()
                .map(|(x, r)| (self.groupoid.object_name(x).to_string(), r))
                .collect(),
        })
    }

    fn constant_rank(&self) -> Result<usize> {
        let report = self.is_finite_type_constant_rank()?;
        report
            .constant_rank
            .ok_or(Error::NonConstantRank(report.rank_function))
    }

    pub fn to_doc(&self) -> CModuleDoc {
        CModuleDoc {
            name: None,
            groupoid: self.groupoid.name().to_string(),
            dim: self.dim,
            act: self
                .groupoid
                .arrows()
                .map(|a| (self.groupoid.arrow_name(a).to_string(), MatrixRows(self.act(a).to_rows())))
                .collect(),
        }
    }

    /// Parses without validating; call [`CModule::checked`] afterwards.
    pub fn from_doc(groupoid: Arc<FiniteGroupoid>, doc: &CModuleDoc) -> Result<Self> {
        for k in doc.act.keys() {
            groupoid.arrow(k)?;
        }
        let act = groupoid
            .arrows()
            .map(|a| {
                let name = groupoid.arrow_name(a);
                doc.act
                    .get(name)
                    .ok_or_else(|| Error::DimensionMismatch(format!("act missing for arrow {name}")))?
                    .clone()
                    .into_matrix(doc.dim, doc.dim)
            })
            .collect::<Result<Vec<_>>>()?;
        CModule::new(groupoid, doc.dim, act)
    }

    fn check_parent(&self, other: &CModule) -> Result<()> {
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
}

/// A linear map commuting with the actions of every `δ_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMorphism {
    source: CModule,
    target: CModule,
    map: Matrix,
}

impl ModuleMorphism {
    pub fn new(source: CModule, target: CModule, map: Matrix) -> Result<Self> {
        source.check_parent(&target)?;
        if map.rows() != target.dim || map.cols() != source.dim {
            return Err(Error::DimensionMismatch(format!(
                "module map must be {}x{}",
                target.dim, source.dim
            )));
        }
        Ok(ModuleMorphism { source, target, map })
    }

    pub fn identity(m: &CModule) -> Self {
        ModuleMorphism {
            source: m.clone(),
            target: m.clone(),
            map: Matrix::identity(m.dim),
        }
    }

    pub fn source(&self) -> &CModule {
        &self.source
    }

    pub fn target(&self) -> &CModule {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.map
    }

    pub fn validate(&self) -> ValidationReport {
        let g = &*self.source.groupoid;
        let mut report = ValidationReport::default();
        for a in g.arrows() {
            let lhs = self.map.mul(self.source.act(a)).expect("shapes");
            let rhs = self.target.act(a).mul(&self.map).expect("shapes");
            if lhs != rhs {
                report.push("intertwining", g.arrow_name(a).to_string());
            }
        }
        report
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleMorphism) -> Result<ModuleMorphism> {
        if self.source != other.target {
            return Err(Error::DimensionMismatch("module maps are not composable".into()));
        }
        ModuleMorphism::new(other.source.clone(), self.target.clone(), self.map.mul(&other.map)?)
    }

    pub fn is_iso(&self) -> bool {
        self.map.is_invertible()
    }

    pub fn inverse(&self) -> Result<ModuleMorphism> {
        ModuleMorphism::new(self.target.clone(), self.source.clone(), self.map.invert()?)
    }
}

/// Basis of the module maps `M → N`.
pub fn module_hom_space(m: &CModule, n: &CModule) -> Result<Vec<ModuleMorphism>> {
    m.check_parent(n)?;
    let (a, b) = (m.dim, n.dim);
    let unknowns = a * b;
    let mut rows = Vec::new();
    for g in m.groupoid.arrows() {
        let (am, an) = (m.act(g), n.act(g));
        for i in 0..b {
            for j in 0..a {
                let mut row = vec![Scalar::default(); unknowns];
                // (X · act_M)[i, j] − (act_N · X)[i, j]
                for k in 0..a {
                    row[i * a + k] += am.get(k, j);
                }
                for k in 0..b {
                    row[k * a + j] -= an.get(i, k);
                }
                rows.push(row);
            }
        }
    }
    Matrix::from_rows(rows, unknowns)?
        .kernel_basis()
        .into_iter()
        .map(|v| ModuleMorphism::new(m.clone(), n.clone(), Matrix::new(b, a, v)?))
        .collect()
}

/// `Γ(E) = ⊕_x E_x`; `δ_g` maps the `src g` block to the `tgt g` block by
/// `rho(g)`.
pub fn gamma(e: &Representation) -> Result<CModule> {
    let g = e.groupoid();
    let k = e.rank();
    let n = k * g.num_objects();
    let act = g
        .arrows()
        .map(|a| Matrix::zeros(n, n).with_block(g.tgt(a).0 * k, g.src(a).0 * k, e.rho(a)))
        .collect();
    CModule::validated(g.clone(), n, act)
}

/// Block-diagonal `⊕_x phi(x)`.
pub fn gamma_mor(phi: &RepMorphism) -> Result<ModuleMorphism> {
    ModuleMorphism::new(
        gamma(phi.source())?,
        gamma(phi.target())?,
        Matrix::block_diag(phi.components()),
    )
}

/// Rebuilds a representation from a constant-rank module: the fiber at
/// `x` is `e_x M`, and `rho(g)` is `act(g)` restricted to
/// `e_{src g} M → e_{tgt g} M`.
pub fn reconstruct(m: &CModule) -> Result<Representation> {
    let rank = m.constant_rank()?;
    let g = m.groupoid();
    let fibers = g.objects().map(|x| m.fiber(x)).collect::<Result<Vec<_>>>()?;
    let rho = g
        .arrows()
        .map(|a| fibers[g.tgt(a).0].coords.mul(m.act(a))?.mul(&fibers[g.src(a).0].basis))
        .collect::<Result<Vec<_>>>()?;
    Representation::validated(g.clone(), rank, rho)
}

/// `phi(x)` is `Phi` restricted to `e_x M → e_x N`.
pub fn reconstruct_mor(phi: &ModuleMorphism) -> Result<RepMorphism> {
    let (m, n) = (phi.source(), phi.target());
    let (rm, rn) = (reconstruct(m)?, reconstruct(n)?);
    let comps = m
        .groupoid
        .objects()
        .map(|x| n.fiber(x)?.coords.mul(&phi.map)?.mul(&m.fiber(x)?.basis))
        .collect::<Result<Vec<_>>>()?;
    RepMorphism::validated(rm, rn, comps)
}

/// `ε(M): M → Γ(R(M))`, `m ↦ (x ↦ e_x m)` in fiber coordinates.
pub fn epsilon(m: &CModule) -> Result<ModuleMorphism> {
    let r = reconstruct(m)?;
    let coords = m
        .groupoid
        .objects()
        .map(|x| Ok(m.fiber(x)?.coords))
        .collect::<Result<Vec<_>>>()?;
    let map = Matrix::vstack(&coords, m.dim)?;
    ModuleMorphism::new(m.clone(), gamma(&r)?, map)
}

/// `η(E): R(Γ(E)) → E`, evaluation of the fiber basis at each object.
pub fn eta(e: &Representation) -> Result<RepMorphism> {
    let m = gamma(e)?;
    let r = reconstruct(&m)?;
    let k = e.rank();
    let comps = e
        .groupoid()
        .objects()
        .map(|x| Ok(m.fiber(x)?.basis.submatrix(x.0 * k..(x.0 + 1) * k, 0..k)))
        .collect::<Result<Vec<_>>>()?;
    RepMorphism::validated(r, e.clone(), comps)
}

fn iso_check(report: &mut Report, name: String, valid: ValidationReport, is_iso: bool) {
    if !valid.is_valid() {
        report.fail(name, format!("{:?}", valid.violations));
    } else if !is_iso {
        report.fail(name, "not invertible");
    } else {
        report.pass(name);
    }
}

/// Runs the equivalence checks on witness families: `η(E)` and
/// `ε(Γ(E))` are isomorphisms for every representation, `ε(M)` for every
/// constant-rank module, and `Γ` is bijective on every `Hom(E, F)`.
pub fn check_serre_swan(
    groupoid: &Arc<FiniteGroupoid>,
    reps: &[(String, Representation)],
    modules: &[(String, CModule)],
) -> Report {
    let mut report = Report::new();
    for (name, e) in reps {
        if !same_groupoid(groupoid, e.groupoid()) {
            report.fail(format!("eta({name})"), "representation of another groupoid");
            continue;
        }
        match eta(e) {
            Ok(h) => iso_check(&mut report, format!("eta({name})"), h.validate(), h.is_iso()),
            Err(err) => report.fail(format!("eta({name})"), err.to_string()),
        }
        match gamma(e).and_then(|m| epsilon(&m)) {
            Ok(h) => iso_check(&mut report, format!("epsilon(gamma({name}))"), h.validate(), h.is_iso()),
            Err(err) => report.fail(format!("epsilon(gamma({name}))"), err.to_string()),
        }
    }
    for (name, m) in modules {
        let label = format!("epsilon({name})");
        if !same_groupoid(groupoid, m.groupoid()) {
            report.fail(label, "module over another groupoid");
            continue;
        }
        match m.clone().checked().and_then(|m| m.is_finite_type_constant_rank().map(|r| (m, r))) {
            Err(err) => report.fail(label, err.to_string()),
            Ok((_, rank)) if rank.constant_rank.is_none() => report.record(
                label,
                true,
                Some(format!("out of scope: non-constant rank {:?}", rank.rank_function)),
            ),
            Ok((m, _)) => match epsilon(&m) {
                Ok(h) => iso_check(&mut report, label, h.validate(), h.is_iso()),
                Err(err) => report.fail(label, err.to_string()),
            },
        }
    }
    for (ne, e) in reps {
        for (nf, f) in reps {
            let label = format!("hom({ne}, {nf})");
            match full_faithfulness(e, f) {
                Ok(None) => report.pass(label),
                Ok(Some(w)) => report.fail(label, w),
                Err(err) => report.fail(label, err.to_string()),
            }
        }
    }
    report
}

/// `None` when `Γ: Hom(E, F) → Hom(ΓE, ΓF)` is a linear bijection,
/// otherwise a description of the failure.
pub fn full_faithfulness(e: &Representation, f: &Representation) -> Result<Option<String>> {
    let reps = intertwiner_space(e, f)?;
    let mods = module_hom_space(&gamma(e)?, &gamma(f)?)?;
    if reps.len() != mods.len() {
        return Ok(Some(format!("dim Hom(E,F) = {} but dim Hom(ΓE,ΓF) = {}", reps.len(), mods.len())));
    }
    let images = reps
        .iter()
        .map(|phi| Ok(Matrix::column(gamma_mor(phi)?.map.vectorize())))
        .collect::<Result<Vec<_>>>()?;
    let len = e.rank() * f.rank() * e.groupoid().num_objects().pow(2);
    let rank = if images.is_empty() { 0 } else { Matrix::hstack(&images, len)?.rank() };
    Ok((rank != reps.len()).then(|| format!("Γ has rank {rank} on a {}-dimensional Hom space", reps.len())))
}

//! Python bindings. Scalars cross the boundary as exact strings such as
//! `"-3/2+1/1i"`; matrices as lists of rows of such strings.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use morita_core::algebra::{check_matrix_algebra_iso, AlgebraElement, ConvolutionAlgebra};
use morita_core::bibundle::{check_pentagon, check_triangle, compose_bibundles, is_morita_equivalence, pullback_rep};
use morita_core::module::{check_serre_swan, epsilon, eta, gamma, reconstruct};
use morita_core::morita::{check_natural_square, check_omega, check_sigma, mod_functor};
use morita_core::rep::{find_isomorphism, intertwiner_space, random_representation, regular, sign};
use morita_core::workspace::{Document, Entry};
use morita_core::{CModule, Error, FiniteGroupoid, GroupTable, Matrix, PrincipalBibundle, Representation, Scalar};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rows(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(Scalar::to_string).collect()).collect()
}

fn arrow(g: &FiniteGroupoid, name: &str) -> PyResult<morita_core::Arrow> {
    g.arrow(name).map_err(err)
}

/// The outcome of a family of checks.
#[pyclass(name = "Report", frozen)]
struct PyReport {
    inner: morita_core::Report,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn passed(&self) -> bool {
        self.inner.all_pass()
    }

    /// `(name, passed, witness)` triples in order.
    #[getter]
    fn checks(&self) -> Vec<(String, bool, Option<String>)> {
        self.inner.checks.iter().map(|c| (c.name.clone(), c.pass, c.witness.clone())).collect()
    }

    fn failures(&self) -> Vec<(String, Option<String>)> {
        self.inner.failures().map(|c| (c.name.clone(), c.witness.clone())).collect()
    }

    fn __bool__(&self) -> bool {
        self.passed()
    }

    fn __len__(&self) -> usize {
        self.inner.checks.len()
    }

    fn __repr__(&self) -> String {
        let ok = self.inner.checks.iter().filter(|c| c.pass).count();
        format!("Report({ok}/{} passed)", self.inner.checks.len())
    }
}

fn report(inner: morita_core::Report) -> PyReport {
    PyReport { inner }
}

fn validation(v: morita_core::ValidationReport) -> PyReport {
    report((&v).into())
}

#[pyclass(name = "Groupoid", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGroupoid {
    inner: Arc<FiniteGroupoid>,
}

#[pymethods]
impl PyGroupoid {
    /// Parses a groupoid document (explicit tables or a `kind` constructor).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        match morita_core::workspace::Workspace::new().resolve(&Document::parse(text).map_err(err)?) {
            Ok(Entry::Groupoid(g)) => Ok(PyGroupoid { inner: g }),
            Ok(other) => Err(PyValueError::new_err(format!("expected a groupoid, got a {}", other.kind()))),
            Err(e) => Err(err(e)),
        }
    }

    #[staticmethod]
    fn unit(objects: Vec<String>) -> Self {
        let o: Vec<&str> = objects.iter().map(String::as_str).collect();
        PyGroupoid { inner: Arc::new(FiniteGroupoid::unit(&o)) }
    }

    #[staticmethod]
    fn pair(objects: Vec<String>) -> Self {
        let o: Vec<&str> = objects.iter().map(String::as_str).collect();
        PyGroupoid { inner: Arc::new(FiniteGroupoid::pair(&o)) }
    }

    #[staticmethod]
    fn cyclic(n: usize) -> Self {
        PyGroupoid { inner: Arc::new(FiniteGroupoid::point(&GroupTable::cyclic(n))) }
    }

    #[staticmethod]
    fn symmetric(n: usize) -> Self {
        PyGroupoid { inner: Arc::new(FiniteGroupoid::point(&GroupTable::symmetric(n))) }
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn objects(&self) -> Vec<String> {
        self.inner.objects().map(|x| self.inner.object_name(x).to_string()).collect()
    }

    #[getter]
    fn arrows(&self) -> Vec<String> {
        self.inner.arrows().map(|a| self.inner.arrow_name(a).to_string()).collect()
    }

    fn src(&self, a: &str) -> PyResult<String> {
        Ok(self.inner.object_name(self.inner.src(arrow(&self.inner, a)?)).to_string())
    }

    fn tgt(&self, a: &str) -> PyResult<String> {
        Ok(self.inner.object_name(self.inner.tgt(arrow(&self.inner, a)?)).to_string())
    }

    /// `a ∘ b` (first `b`, then `a`), or `None` when not composable.
    fn compose(&self, a: &str, b: &str) -> PyResult<Option<String>> {
        let g = &self.inner;
        Ok(g.compose(arrow(g, a)?, arrow(g, b)?).map(|c| g.arrow_name(c).to_string()))
    }

    fn inverse(&self, a: &str) -> PyResult<String> {
        Ok(self.inner.arrow_name(self.inner.inverse(arrow(&self.inner, a)?)).to_string())
    }

    fn validate(&self) -> PyReport {
        validation(self.inner.validate())
    }

    fn to_json(&self) -> String {
        Entry::Groupoid(self.inner.clone()).to_json(self.inner.name())
    }

    fn __repr__(&self) -> String {
        format!(
            "Groupoid({:?}, {} objects, {} arrows)",
            self.inner.name(),
            self.inner.num_objects(),
            self.inner.num_arrows()
        )
    }
}

/// The convolution algebra `C(G)`. Elements are dicts from arrow names
/// to scalar strings; missing arrows are zero.
#[pyclass(name = "Algebra", frozen)]
struct PyAlgebra {
    inner: ConvolutionAlgebra,
}

impl PyAlgebra {
    fn element(&self, coeffs: &BTreeMap<String, String>) -> PyResult<AlgebraElement> {
        let g = self.inner.groupoid();
        let mut out = vec![Scalar::from_int(0); g.num_arrows()];
        for (a, s) in coeffs {
            out[arrow(g, a)?.0] = s.parse::<Scalar>().map_err(|e| PyValueError::new_err(e.to_string()))?;
        }
        AlgebraElement::new(g.clone(), out).map_err(err)
    }

    fn dict(&self, a: &AlgebraElement) -> BTreeMap<String, String> {
        let g = self.inner.groupoid();
        let zero = Scalar::from_int(0);
        g.arrows()
            .filter(|&x| *a.coeff(x) != zero)
            .map(|x| (g.arrow_name(x).to_string(), a.coeff(x).to_string()))
            .collect()
    }
}

#[pymethods]
impl PyAlgebra {
    #[new]
    fn new(groupoid: &PyGroupoid) -> Self {
        PyAlgebra { inner: ConvolutionAlgebra::new(groupoid.inner.clone()) }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn convolve(&self, a: BTreeMap<String, String>, b: BTreeMap<String, String>) -> PyResult<BTreeMap<String, String>> {
        let c = self.inner.convolve(&self.element(&a)?, &self.element(&b)?).map_err(err)?;
        Ok(self.dict(&c))
    }

    fn unit(&self) -> BTreeMap<String, String> {
        self.dict(&self.inner.unit())
    }

    fn is_central(&self, a: BTreeMap<String, String>) -> PyResult<bool> {
        self.inner.is_central(&self.element(&a)?).map_err(err)
    }
}

#[pyclass(name = "Representation", frozen, from_py_object)]
#[derive(Clone)]
struct PyRepresentation {
    inner: Representation,
}

#[pymethods]
impl PyRepresentation {
    #[staticmethod]
    fn from_json(groupoid: &PyGroupoid, text: &str) -> PyResult<Self> {
        match Document::parse(text).map_err(err)? {
            Document::Representation(d) => Ok(PyRepresentation {
                inner: Representation::from_doc(groupoid.inner.clone(), &d).map_err(err)?,
            }),
            _ => Err(PyValueError::new_err("not a representation document")),
        }
    }

    #[staticmethod]
    fn trivial(groupoid: &PyGroupoid, rank: usize) -> Self {
        PyRepresentation { inner: Representation::trivial(groupoid.inner.clone(), rank) }
    }

    #[staticmethod]
    fn regular(groupoid: &PyGroupoid) -> PyResult<Self> {
        Ok(PyRepresentation { inner: regular(groupoid.inner.clone()).map_err(err)? })
    }

    #[staticmethod]
    fn sign(groupoid: &PyGroupoid) -> PyResult<Self> {
        Ok(PyRepresentation { inner: sign(groupoid.inner.clone()).map_err(err)? })
    }

    /// A validated pseudo-random representation, reproducible from `seed`.
    #[staticmethod]
    fn random(groupoid: &PyGroupoid, rank: usize, seed: u64) -> PyResult<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(PyRepresentation {
            inner: random_representation(groupoid.inner.clone(), rank, &mut rng).map_err(err)?,
        })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn groupoid(&self) -> PyGroupoid {
        PyGroupoid { inner: self.inner.groupoid().clone() }
    }

    fn rho(&self, a: &str) -> PyResult<Vec<Vec<String>>> {
        Ok(rows(self.inner.rho(arrow(self.inner.groupoid(), a)?)))
    }

    fn validate(&self) -> PyReport {
        validation(self.inner.validate())
    }

    /// The module of sections `Γ(E)`.
    fn gamma(&self) -> PyResult<PyModule_> {
        Ok(PyModule_ { inner: gamma(&self.inner).map_err(err)? })
    }

    /// Whether the unit `E → R(Γ(E))` is an isomorphism.
    fn eta_is_iso(&self) -> PyResult<bool> {
        Ok(eta(&self.inner).map_err(err)?.is_iso())
    }

    fn hom_dimension(&self, other: &PyRepresentation) -> PyResult<usize> {
        Ok(intertwiner_space(&self.inner, &other.inner).map_err(err)?.len())
    }

    /// An explicit isomorphism as per-object component matrices, if one exists.
    fn isomorphism_to(&self, other: &PyRepresentation) -> PyResult<Option<BTreeMap<String, Vec<Vec<String>>>>> {
        let g = self.inner.groupoid();
        Ok(find_isomorphism(&self.inner, &other.inner).map_err(err)?.map(|phi| {
            g.objects().map(|x| (g.object_name(x).to_string(), rows(phi.component(x)))).collect()
        }))
    }

    fn to_json(&self, name: &str) -> String {
        Entry::Representation(self.inner.clone()).to_json(name)
    }

    fn __repr__(&self) -> String {
        format!("Representation({:?}, rank {})", self.inner.groupoid().name(), self.inner.rank())
    }
}

/// A module over `C(G)`; exposed to Python as `Module`.
#[pyclass(name = "Module", frozen, from_py_object)]
#[derive(Clone)]
struct PyModule_ {
    inner: CModule,
}

#[pymethods]
impl PyModule_ {
    #[staticmethod]
    fn from_json(groupoid: &PyGroupoid, text: &str) -> PyResult<Self> {
        match Document::parse(text).map_err(err)? {
            Document::Module(d) => Ok(PyModule_ {
                inner: CModule::from_doc(groupoid.inner.clone(), &d).map_err(err)?,
            }),
            _ => Err(PyValueError::new_err("not a module document")),
        }
    }

    /// `⊕_x C^{dims[x]}` with `δ_x` acting on its own block.
    #[staticmethod]
    fn blocks(groupoid: &PyGroupoid, dims: Vec<usize>) -> PyResult<Self> {
        Ok(PyModule_ { inner: CModule::blocks(groupoid.inner.clone(), &dims).map_err(err)? })
    }

    #[staticmethod]
    fn regular(groupoid: &PyGroupoid) -> PyResult<Self> {
        Ok(PyModule_ { inner: CModule::regular(groupoid.inner.clone()).map_err(err)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn act(&self, a: &str) -> PyResult<Vec<Vec<String>>> {
        Ok(rows(self.inner.act(arrow(self.inner.groupoid(), a)?)))
    }

    fn rank_function(&self) -> PyResult<Vec<(String, usize)>> {
        Ok(self.inner.is_finite_type_constant_rank().map_err(err)?.rank_function)
    }

    #[getter]
    fn constant_rank(&self) -> PyResult<Option<usize>> {
        Ok(self.inner.is_finite_type_constant_rank().map_err(err)?.constant_rank)
    }

    /// The representation on the fibers; raises for non-constant rank.
    fn reconstruct(&self) -> PyResult<PyRepresentation> {
        Ok(PyRepresentation { inner: reconstruct(&self.inner).map_err(err)? })
    }

    fn epsilon_is_iso(&self) -> PyResult<bool> {
        Ok(epsilon(&self.inner).map_err(err)?.is_iso())
    }

    fn validate(&self) -> PyReport {
        validation(self.inner.validate())
    }

    fn to_json(&self, name: &str) -> String {
        Entry::Module(self.inner.clone()).to_json(name)
    }

    fn __repr__(&self) -> String {
        format!("Module({:?}, dim {})", self.inner.groupoid().name(), self.inner.dim())
    }
}

#[pyclass(name = "Bibundle", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyBibundle {
    inner: PrincipalBibundle,
}

#[pymethods]
impl PyBibundle {
    #[staticmethod]
    fn from_json(left: &PyGroupoid, right: &PyGroupoid, text: &str) -> PyResult<Self> {
        match Document::parse(text).map_err(err)? {
            Document::Bibundle(d) => Ok(PyBibundle {
                inner: PrincipalBibundle::from_doc(left.inner.clone(), right.inner.clone(), &d).map_err(err)?,
            }),
            _ => Err(PyValueError::new_err("not a bibundle document")),
        }
    }

    /// `G` acting on its own arrows from both sides.
    #[staticmethod]
    fn identity(groupoid: &PyGroupoid) -> Self {
        PyBibundle { inner: PrincipalBibundle::identity(groupoid.inner.clone()) }
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn left(&self) -> PyGroupoid {
        PyGroupoid { inner: self.inner.left().clone() }
    }

    #[getter]
    fn right(&self) -> PyGroupoid {
        PyGroupoid { inner: self.inner.right().clone() }
    }

    #[getter]
    fn points(&self) -> Vec<String> {
        self.inner.points().map(|p| self.inner.point_name(p).to_string()).collect()
    }

    fn validate(&self) -> PyReport {
        validation(self.inner.validate())
    }

    fn opposite(&self) -> Self {
        PyBibundle { inner: self.inner.opposite() }
    }

    /// `self ⊗ other`, the quotient of the fiber product by the middle groupoid.
    fn compose(&self, other: &PyBibundle) -> PyResult<Self> {
        Ok(PyBibundle { inner: compose_bibundles(&self.inner, &other.inner).map_err(err)?.bundle })
    }

    fn is_morita_equivalence(&self) -> PyResult<bool> {
        Ok(is_morita_equivalence(&self.inner).map_err(err)?.is_equivalence)
    }

    /// `P ⊗ E`, a representation of the left groupoid.
    fn pullback(&self, rep: &PyRepresentation) -> PyResult<PyRepresentation> {
        Ok(PyRepresentation { inner: pullback_rep(&self.inner, &rep.inner).map_err(err)? })
    }

    /// `C(P) ⊗ M`, a module over the left groupoid.
    fn induce(&self, module: &PyModule_) -> PyResult<PyModule_> {
        Ok(PyModule_ { inner: mod_functor(&self.inner, &module.inner).map_err(err)?.module })
    }

    fn check_sigma(&self, rep: &PyRepresentation) -> PyReport {
        report(check_sigma(&self.inner, &rep.inner))
    }

    fn check_omega(&self, other: &PyBibundle) -> PyReport {
        report(check_omega(&self.inner, &other.inner))
    }

    /// The naturality square for every element of a basis of `Hom(source, target)`.
    fn check_natural_square(&self, source: &PyRepresentation, target: &PyRepresentation) -> PyResult<PyReport> {
        let mut out = morita_core::Report::new();
        for phi in intertwiner_space(&source.inner, &target.inner).map_err(err)? {
            out.extend(check_natural_square(&self.inner, &phi));
        }
        Ok(report(out))
    }

    fn to_json(&self) -> String {
        Entry::Bibundle(self.inner.clone()).to_json(self.inner.name())
    }

    fn __repr__(&self) -> String {
        format!(
            "Bibundle({:?}: {} <- {} points -> {})",
            self.inner.name(),
            self.inner.left().name(),
            self.inner.num_points(),
            self.inner.right().name()
        )
    }
}

/// A registry of named documents with the built-in fixtures as fallback.
#[pyclass(name = "Workspace")]
struct PyWorkspace {
    inner: morita_core::workspace::Workspace,
}

#[pymethods]
impl PyWorkspace {
    #[new]
    fn new() -> Self {
        PyWorkspace { inner: morita_core::workspace::Workspace::new() }
    }

    /// Loads a document or workspace file; returns the names added.
    fn load(&mut self, path: &str) -> PyResult<Vec<String>> {
        self.inner.load_path(Path::new(path)).map_err(err)
    }

    fn add_json(&mut self, name: &str, text: &str) -> PyResult<()> {
        let doc = Document::parse(text).map_err(err)?;
        self.inner.load_document(name, &doc).map_err(err)
    }

    fn names(&self) -> Vec<String> {
        self.inner.entries().map(|(n, _)| n.to_string()).collect()
    }

    fn to_json(&self, name: &str) -> PyResult<String> {
        self.inner
            .get(name)
            .map(|e| e.to_json(name))
            .ok_or_else(|| PyKeyError::new_err(name.to_string()))
    }

    fn groupoid(&self, name: &str) -> PyResult<PyGroupoid> {
        Ok(PyGroupoid { inner: self.inner.groupoid(name).map_err(err)? })
    }

    fn representation(&self, name: &str) -> PyResult<PyRepresentation> {
        Ok(PyRepresentation { inner: self.inner.representation(name).map_err(err)? })
    }

    fn module(&self, name: &str) -> PyResult<PyModule_> {
        Ok(PyModule_ { inner: self.inner.module(name).map_err(err)? })
    }

    fn bibundle(&self, name: &str) -> PyResult<PyBibundle> {
        Ok(PyBibundle { inner: self.inner.bibundle(name).map_err(err)? })
    }

    /// The seeded witness representations of a groupoid.
    fn witness_family(&self, groupoid: &PyGroupoid) -> PyResult<Vec<(String, PyRepresentation)>> {
        let family = self.inner.fixtures().witness_family(&groupoid.inner).map_err(err)?;
        Ok(family.into_iter().map(|(n, e)| (n, PyRepresentation { inner: e })).collect())
    }

    fn validate(&self) -> PyReport {
        report(self.inner.validate_all())
    }
}

#[pyfunction(name = "check_matrix_algebra_iso")]
fn py_check_matrix_algebra_iso(n: usize) -> PyReport {
    report(check_matrix_algebra_iso(n))
}

#[pyfunction(name = "check_serre_swan")]
#[pyo3(signature = (groupoid, reps, modules = Vec::new()))]
fn py_check_serre_swan(
    groupoid: &PyGroupoid,
    reps: Vec<(String, PyRepresentation)>,
    modules: Vec<(String, PyModule_)>,
) -> PyReport {
    let reps: Vec<_> = reps.into_iter().map(|(n, e)| (n, e.inner)).collect();
    let modules: Vec<_> = modules.into_iter().map(|(n, m)| (n, m.inner)).collect();
    report(check_serre_swan(&groupoid.inner, &reps, &modules))
}

#[pyfunction(name = "check_pentagon")]
fn py_check_pentagon(p: &PyBibundle, q: &PyBibundle, r: &PyBibundle, s: &PyBibundle) -> PyReport {
    report(check_pentagon(&p.inner, &q.inner, &r.inner, &s.inner))
}

#[pyfunction(name = "check_triangle")]
fn py_check_triangle(p: &PyBibundle, q: &PyBibundle) -> PyReport {
    report(check_triangle(&p.inner, &q.inner))
}

#[pymodule]
fn morita(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyReport>()?;
    m.add_class::<PyGroupoid>()?;
    m.add_class::<PyAlgebra>()?;
    m.add_class::<PyRepresentation>()?;
    m.add_class::<PyModule_>()?;
    m.add_class::<PyBibundle>()?;
    m.add_class::<PyWorkspace>()?;
    m.add_function(wrap_pyfunction!(py_check_matrix_algebra_iso, m)?)?;
    m.add_function(wrap_pyfunction!(py_check_serre_swan, m)?)?;
    m.add_function(wrap_pyfunction!(py_check_pentagon, m)?)?;
    m.add_function(wrap_pyfunction!(py_check_triangle, m)?)?;
    Ok(())
}

//! Python bindings: groups, matched pairs, fusion rings, crossed actions and
//! the constructions between them.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use zsfusion::bicross::{bicrossed_ring, verify_exact_factorization};
use zsfusion::crossact::{verify_crossed_action, CrossedActionData};
use zsfusion::dualgt::dual_ring_group_theoretical;
use zsfusion::equivar::{equivariant_census_general, equivariantize_pointed};
use zsfusion::fusring::{self, FusionRing};
use zsfusion::grp::FiniteGroup;
use zsfusion::matched::{self, MatchedPair};
use zsfusion::{io, Options, Report};

create_exception!(pyzsfusion, ZsFusionError, PyException);

/// One violated axiom: `(axiom, witness, count)`.
pub type Finding = (String, Vec<usize>, usize);

fn err(e: zsfusion::Error) -> PyErr {
    ZsFusionError::new_err(e.to_string())
}

fn findings(r: Report) -> Vec<Finding> {
    r.violations
        .into_iter()
        .map(|v| (v.axiom, v.witness, v.count))
        .collect()
}

fn options(seed: u64, tol: Option<f64>) -> Options {
    Options {
        tol: tol.unwrap_or(zsfusion::numlin::DEFAULT_TOL),
        seed,
    }
}

#[pyclass(name = "Group", module = "pyzsfusion", skip_from_py_object)]
#[derive(Clone)]
pub struct PyGroup {
    pub inner: FiniteGroup,
}

#[pymethods]
impl PyGroup {
    /// Group from a full multiplication table, identity at index 0.
    #[staticmethod]
    pub fn from_table(table: Vec<Vec<usize>>) -> PyResult<Self> {
        Ok(PyGroup {
            inner: FiniteGroup::from_table(table).map_err(err)?,
        })
    }

    /// Group generated by permutations given as 1-based image lists.
    #[staticmethod]
    pub fn from_permutations(generators: Vec<Vec<usize>>) -> PyResult<Self> {
        let zero: Vec<Vec<usize>> = generators
            .iter()
            .map(|p| p.iter().map(|&x| x.wrapping_sub(1)).collect())
            .collect();
        Ok(PyGroup {
            inner: FiniteGroup::from_permutations(&zero).map_err(err)?,
        })
    }

    #[staticmethod]
    pub fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyGroup {
            inner: io::parse_group(text).map_err(err)?,
        })
    }

    pub fn to_json(&self) -> String {
        io::group_json(&self.inner).to_string()
    }

    #[getter]
    pub fn order(&self) -> usize {
        self.inner.order()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.inner.mul(a, b)
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inner.inv(a)
    }

    pub fn name(&self, a: usize) -> String {
        self.inner.name(a)
    }

    pub fn is_abelian(&self) -> bool {
        self.inner.is_abelian()
    }

    /// Element lists of the subgroup pairs `(G, Γ)` with `Σ = GΓ` exactly.
    pub fn exact_factorizations(&self) -> PyResult<Vec<(Vec<usize>, Vec<usize>)>> {
        Ok(self
            .inner
            .exact_factorizations()
            .map_err(err)?
            .into_iter()
            .map(|(g, k)| (g.elements().to_vec(), k.elements().to_vec()))
            .collect())
    }

    fn __len__(&self) -> usize {
        self.inner.order()
    }

    fn __repr__(&self) -> String {
        format!("Group(order={})", self.inner.order())
    }
}

#[pyclass(name = "MatchedPair", module = "pyzsfusion", skip_from_py_object)]
#[derive(Clone)]
pub struct PyMatchedPair {
    pub inner: MatchedPair,
}

#[pymethods]
impl PyMatchedPair {
    /// Matched pair of the factorization of `sigma` by the subgroups
    /// generated by `g` and `gamma`.
    #[staticmethod]
    pub fn derive(sigma: &PyGroup, g: Vec<usize>, gamma: Vec<usize>) -> PyResult<Self> {
        let s = &sigma.inner;
        let g = s.subgroup_generated(&g).map_err(err)?;
        let k = s.subgroup_generated(&gamma).map_err(err)?;
        Ok(PyMatchedPair {
            inner: matched::derive_matched_pair(s, &g, &k).map_err(err)?,
        })
    }

    #[staticmethod]
    pub fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyMatchedPair {
            inner: io::parse_matched_pair(text).map_err(err)?,
        })
    }

    pub fn to_json(&self) -> String {
        io::matched_pair_json(&self.inner).to_string()
    }

    #[getter]
    pub fn g(&self) -> PyGroup {
        PyGroup {
            inner: self.inner.g().clone(),
        }
    }

    #[getter]
    pub fn gamma(&self) -> PyGroup {
        PyGroup {
            inner: self.inner.gamma().clone(),
        }
    }

    /// `k ▶ g`.
    pub fn lact(&self, k: usize, g: usize) -> usize {
        self.inner.lact(k, g)
    }

    /// `k ◀ g`.
    pub fn ract(&self, k: usize, g: usize) -> usize {
        self.inner.ract(k, g)
    }

    pub fn verify(&self) -> Vec<Finding> {
        findings(matched::verify_matched_pair(&self.inner))
    }

    pub fn zappa_szep(&self) -> PyResult<PyGroup> {
        Ok(PyGroup {
            inner: matched::zappa_szep(&self.inner).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "MatchedPair(|G|={}, |Gamma|={})",
            self.inner.g().order(),
            self.inner.gamma().order()
        )
    }
}

#[pyclass(name = "FusionRing", module = "pyzsfusion", skip_from_py_object)]
#[derive(Clone)]
pub struct PyFusionRing {
    pub inner: FusionRing,
}

#[pymethods]
impl PyFusionRing {
    /// Ring from sparse `(a, b, c, N_ab^c)` entries.
    #[new]
    pub fn new(rank: usize, unit: usize, dual: Vec<usize>, entries: Vec<(usize, usize, usize, u32)>) -> PyResult<Self> {
        Ok(PyFusionRing {
            inner: FusionRing::from_triples(rank, unit, dual, &entries).map_err(err)?,
        })
    }

    #[staticmethod]
    pub fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyFusionRing {
            inner: io::parse_fusion_ring(text).map_err(err)?,
        })
    }

    pub fn to_json(&self) -> String {
        io::fusion_ring_json(&self.inner).to_string()
    }

    #[getter]
    pub fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    pub fn unit(&self) -> usize {
        self.inner.unit()
    }

    #[getter]
    pub fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    pub fn dual(&self, a: usize) -> usize {
        self.inner.dual(a)
    }

    /// `N_ab^c`.
    pub fn n(&self, a: usize, b: usize, c: usize) -> u32 {
        self.inner.n(a, b, c)
    }

    pub fn entries(&self) -> Vec<(usize, usize, usize, u32)> {
        self.inner.triples()
    }

    pub fn validate(&self) -> Vec<Finding> {
        findings(fusring::validate_fusion_ring(&self.inner))
    }

    /// Frobenius–Perron dimensions of the basis and their sum of squares.
    pub fn fpdim(&self) -> PyResult<(Vec<f64>, f64)> {
        let d = fusring::fpdim(&self.inner).map_err(err)?;
        Ok((d.dims, d.total))
    }

    /// A label bijection `a ↦ map[a]` onto `other` preserving unit, duals
    /// and structure constants, or `None`.
    pub fn find_based_iso(&self, other: &PyFusionRing) -> PyResult<Option<Vec<usize>>> {
        Ok(fusring::find_based_iso(&self.inner, &other.inner)
            .map_err(err)?
            .map(|i| i.map))
    }

    fn __repr__(&self) -> String {
        format!("FusionRing(rank={})", self.inner.rank())
    }
}

#[pyclass(name = "CrossedAction", module = "pyzsfusion", skip_from_py_object)]
#[derive(Clone)]
pub struct PyCrossedAction {
    pub inner: CrossedActionData,
}

#[pymethods]
impl PyCrossedAction {
    /// The pointed action of a matched pair on the group ring of `Γ`.
    #[staticmethod]
    pub fn pointed(mp: &PyMatchedPair) -> Self {
        PyCrossedAction {
            inner: CrossedActionData::pointed(&mp.inner),
        }
    }

    /// `Z2` acting on `TY(Z_n)` by inversion.
    #[staticmethod]
    pub fn ty_inversion(n: usize) -> PyResult<Self> {
        Ok(PyCrossedAction {
            inner: zsfusion::suite::ty_inversion(&zsfusion::suite::cyclic(n)).map_err(err)?,
        })
    }

    #[staticmethod]
    pub fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyCrossedAction {
            inner: io::parse_crossed_action(text).map_err(err)?,
        })
    }

    pub fn to_json(&self) -> String {
        io::crossed_action_json(&self.inner).to_string()
    }

    #[getter]
    pub fn ring(&self) -> PyFusionRing {
        PyFusionRing {
            inner: self.inner.ring.clone(),
        }
    }

    pub fn verify(&self) -> Vec<Finding> {
        findings(verify_crossed_action(&self.inner))
    }

    /// The bicrossed product ring and its exact-factorization findings.
    pub fn bicrossed(&self) -> PyResult<(PyFusionRing, Vec<Finding>)> {
        let b = bicrossed_ring(&self.inner).map_err(err)?;
        let rep = verify_exact_factorization(&b.ring, &b.g_labels(), &b.c_labels()).map_err(err)?;
        Ok((PyFusionRing { inner: b.ring }, findings(rep)))
    }

    /// Grothendieck ring of the crossed extension, with `(orbit, dim, fp)`
    /// per simple. Only for pointed actions.
    #[pyo3(signature = (seed = 0, tol = None))]
    pub fn equivariantize(&self, seed: u64, tol: Option<f64>) -> PyResult<(PyFusionRing, Vec<(Vec<usize>, usize, f64)>)> {
        let eq = equivariantize_pointed(&self.inner, &options(seed, tol)).map_err(err)?;
        let simples = eq.simples.iter().map(|s| (s.orbit.clone(), s.dim, s.fp)).collect();
        Ok((PyFusionRing { inner: eq.ring }, simples))
    }

    /// FP-dimensions of the simples of the crossed extension, counted orbit
    /// by orbit; works for any crossed action.
    #[pyo3(signature = (seed = 0, tol = None))]
    pub fn census(&self, seed: u64, tol: Option<f64>) -> PyResult<Vec<f64>> {
        let c = equivariant_census_general(&self.inner, &options(seed, tol)).map_err(err)?;
        Ok(c.fp_dims())
    }
}

#[pyfunction]
pub fn group_ring(g: &PyGroup) -> PyFusionRing {
    PyFusionRing {
        inner: fusring::group_ring(&g.inner),
    }
}

#[pyfunction]
pub fn rep_ring(g: &PyGroup) -> PyResult<PyFusionRing> {
    Ok(PyFusionRing {
        inner: fusring::rep_ring(&g.inner).map_err(err)?,
    })
}

#[pyfunction]
pub fn tambara_yamagami(a: &PyGroup) -> PyResult<PyFusionRing> {
    Ok(PyFusionRing {
        inner: fusring::tambara_yamagami(&a.inner).map_err(err)?,
    })
}

/// Ring of `H`-bimodules in `Σ`-graded spaces, `H` generated by `h`.
#[pyfunction]
#[pyo3(signature = (sigma, h, seed = 0, tol = None))]
pub fn dual_ring(sigma: &PyGroup, h: Vec<usize>, seed: u64, tol: Option<f64>) -> PyResult<PyFusionRing> {
    let sub = sigma.inner.subgroup_generated(&h).map_err(err)?;
    let d = dual_ring_group_theoretical(&sigma.inner, &sub, &options(seed, tol)).map_err(err)?;
    Ok(PyFusionRing { inner: d.ring })
}

/// Compares the crossed extension of `mp` with the dual model. Returns the
/// two rings, the label bijection (or `None`) and the findings.
#[pyfunction]
#[pyo3(signature = (mp, seed = 0, tol = None))]
pub fn theorem1(
    mp: &PyMatchedPair,
    seed: u64,
    tol: Option<f64>,
) -> PyResult<(PyFusionRing, PyFusionRing, Option<Vec<usize>>, Vec<Finding>)> {
    let out = zsfusion::theorem::theorem1(&mp.inner, &options(seed, tol)).map_err(err)?;
    Ok((
        PyFusionRing {
            inner: out.extension_ring.ring,
        },
        PyFusionRing {
            inner: out.dual_ring.ring,
        },
        out.iso.map(|i| i.map),
        findings(out.report),
    ))
}

#[pymodule]
fn pyzsfusion(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ZsFusionError", m.py().get_type::<ZsFusionError>())?;
    m.add_class::<PyGroup>()?;
    m.add_class::<PyMatchedPair>()?;
    m.add_class::<PyFusionRing>()?;
    m.add_class::<PyCrossedAction>()?;
    m.add_function(wrap_pyfunction!(group_ring, m)?)?;
    m.add_function(wrap_pyfunction!(rep_ring, m)?)?;
    m.add_function(wrap_pyfunction!(tambara_yamagami, m)?)?;
    m.add_function(wrap_pyfunction!(dual_ring, m)?)?;
    m.add_function(wrap_pyfunction!(theorem1, m)?)?;
    Ok(())
}

//! Python bindings: the `MPair` class and a few constructors.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use mpair_core::decompose::{self, canonical_form, Label};
use mpair_core::format::{self, WitnessFile};
use mpair_core::minimize::minimize;
use mpair_core::modelgen::{model_from_interval, random_mdifferential, random_triple};
use mpair_core::reduction::{self, invariant_signature};
use mpair_core::render::{render, RenderFormat};
use mpair_core::report::{to_json, DecomposeBody};
use mpair_core::{Error, Field, MDifferential};

create_exception!(mpair, MPairError, PyValueError, "Invalid input or a failed precondition.");
create_exception!(mpair, IntegrityError, PyRuntimeError, "Internal consistency check failed.");

fn py_err(e: Error) -> PyErr {
    if e.is_integrity() {
        IntegrityError::new_err(e.to_string())
    } else {
        MPairError::new_err(e.to_string())
    }
}

fn field_of(s: &str) -> PyResult<Field> {
    s.parse().map_err(py_err)
}

/// An M-pair: an ordered graded basis with boundary and trivial marks and a
/// differential over GF(p) or Q.
#[pyclass(name = "MPair", module = "mpair")]
pub struct MPair {
    inner: MDifferential,
}

fn wrap(inner: MDifferential) -> MPair {
    MPair { inner }
}

#[pymethods]
impl MPair {
    /// Parses an `.mpair` document.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        format::parse(text).map(wrap).map_err(py_err)
    }

    /// Canonical `.mpair` text.
    fn emit(&self) -> String {
        format::emit(&self.inner)
    }

    #[getter]
    fn ids(&self) -> Vec<String> {
        self.inner.triple().elements().iter().map(|e| e.id.clone()).collect()
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field().to_string()
    }

    /// Violated invariants as `(invariant, row_id, col_id)`; empty when valid.
    fn validate(&self) -> Vec<(String, String, String)> {
        self.inner
            .validate()
            .violations
            .iter()
            .map(|v| (v.invariant.to_string(), v.row_id.clone(), v.col_id.clone()))
            .collect()
    }

    fn is_valid(&self) -> bool {
        self.inner.is_valid()
    }

    /// `(source, target)` id pairs of the elementary form.
    fn pairing(&self) -> PyResult<Vec<(String, String)>> {
        let t = self.inner.triple();
        let p = reduction::pairing(&self.inner).map_err(py_err)?;
        Ok(p.pairs.iter().map(|&(s, g)| (t.id(s).to_string(), t.id(g).to_string())).collect())
    }

    /// Pairing, essentials, trivial set, H and h+ keyed by name.
    fn invariants<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let t = self.inner.triple();
        let id = |i: usize| t.id(i).to_string();
        let p = reduction::pairing(&self.inner).map_err(py_err)?;
        let sig = invariant_signature(&self.inner).map_err(py_err)?;
        let out = PyDict::new(py);
        out.set_item("pairs", p.pairs.iter().map(|&(a, b)| (id(a), id(b))).collect::<Vec<_>>())?;
        out.set_item("essentials", p.essentials.iter().map(|&i| id(i)).collect::<Vec<_>>())?;
        out.set_item("trivial", self.inner.trivial_elements().into_iter().map(id).collect::<Vec<_>>())?;
        out.set_item("h", sig.h.iter().map(|&i| id(i)).collect::<Vec<_>>())?;
        out.set_item("hplus", sig.hplus.iter().map(|&(a, b)| (id(a), id(b))).collect::<Vec<_>>())?;
        Ok(out)
    }

    /// Elementary form and its witness as JSON.
    fn reduce(&self) -> PyResult<(MPair, String)> {
        let r = reduction::reduce_elementary(&self.inner).map_err(py_err)?;
        Ok((wrap(r.output), WitnessFile::from_transform(&r.witness).to_json()))
    }

    /// Minimal form and its witness as JSON.
    fn minimize(&self) -> PyResult<(MPair, String)> {
        let m = minimize(&self.inner).map_err(py_err)?;
        Ok((wrap(m.result.output), WitnessFile::from_transform(&m.result.witness).to_json()))
    }

    /// Applies a witness produced by `reduce` or `minimize`.
    fn conjugate(&self, witness_json: &str) -> PyResult<MPair> {
        let g =
            WitnessFile::from_json(witness_json).and_then(|w| w.to_transform(self.inner.triple())).map_err(py_err)?;
        self.inner.conjugate(&g).map(wrap).map_err(py_err)
    }

    /// Sorted labels of the indecomposable summands.
    fn canonical_labels(&self) -> PyResult<Vec<String>> {
        canonical_form(&self.inner).map(|c| c.labels).map_err(py_err)
    }

    /// The full decomposition report as JSON.
    fn decompose_report(&self) -> PyResult<String> {
        let c = canonical_form(&self.inner).map_err(py_err)?;
        Ok(to_json("decompose", &DecomposeBody::new(&c)))
    }

    #[pyo3(signature = (format = "ascii"))]
    fn render(&self, format: &str) -> PyResult<String> {
        let f: RenderFormat = format.parse().map_err(py_err)?;
        Ok(render(&self.inner, f))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: &MPair) -> bool {
        self.inner.equal(&other.inner)
    }

    fn __str__(&self) -> String {
        self.emit()
    }

    fn __repr__(&self) -> String {
        format!("MPair({} elements over {})", self.inner.len(), self.inner.field())
    }
}

/// Algebraic model of a function on an interval given as `.scenario` text.
#[pyfunction]
#[pyo3(signature = (scenario, field = "GF(2)"))]
fn from_interval(scenario: &str, field: &str) -> PyResult<MPair> {
    let events = format::parse_scenario(scenario).map_err(py_err)?;
    model_from_interval(&events, field_of(field)?).map(|m| wrap(m.differential)).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (n, seed = 0, field = "GF(2)", density = 0.7, trivial_rate = 0.3))]
fn random(n: usize, seed: u64, field: &str, density: f64, trivial_rate: f64) -> PyResult<MPair> {
    let t = random_triple(seed, n, 2, trivial_rate);
    random_mdifferential(&t, field_of(field)?, seed, density).map(wrap).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (k, field = "GF(2)"))]
fn make_l(k: usize, field: &str) -> PyResult<MPair> {
    Ok(wrap(decompose::make_l(k, field_of(field)?)))
}

#[pyfunction]
#[pyo3(signature = (l, field = "GF(2)"))]
fn make_r(l: usize, field: &str) -> PyResult<MPair> {
    Ok(wrap(decompose::make_r(l, field_of(field)?)))
}

/// A representative summand for a label such as `"LR(2,1)"`.
#[pyfunction]
#[pyo3(signature = (label, field = "GF(2)"))]
fn realize(label: &str, field: &str) -> PyResult<MPair> {
    let label: Label = label.parse().map_err(py_err)?;
    decompose::realize(&label, field_of(field)?).map(wrap).map_err(py_err)
}

/// `a # b`; ids must be disjoint and degrees must line up.
#[pyfunction]
fn sharp(a: &MPair, b: &MPair) -> PyResult<MPair> {
    decompose::sharp(&a.inner, &b.inner).map(wrap).map_err(py_err)
}

/// `a # b` after renaming both sides apart and shifting `b` into place.
#[pyfunction]
fn glue(a: &MPair, b: &MPair) -> PyResult<MPair> {
    decompose::glue(&a.inner, &b.inner, "a.", "b.").map(wrap).map_err(py_err)
}

#[pymodule]
fn mpair(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<MPair>()?;
    m.add("MPairError", m.py().get_type::<MPairError>())?;
    m.add("IntegrityError", m.py().get_type::<IntegrityError>())?;
    m.add_function(wrap_pyfunction!(from_interval, m)?)?;
    m.add_function(wrap_pyfunction!(random, m)?)?;
    m.add_function(wrap_pyfunction!(make_l, m)?)?;
    m.add_function(wrap_pyfunction!(make_r, m)?)?;
    m.add_function(wrap_pyfunction!(realize, m)?)?;
    m.add_function(wrap_pyfunction!(sharp, m)?)?;
    m.add_function(wrap_pyfunction!(glue, m)?)?;
    Ok(())
}

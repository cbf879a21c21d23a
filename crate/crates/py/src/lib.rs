//! Python module `grouptensor`.
//!
//! Caps come from the file named by `GROUPTENSOR_CONFIG`, as for the CLI.
//! Structured results are returned as plain dicts and lists.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use grouptensor::matching::{self, Matching};
use grouptensor::{conjugacy, modrep, report, slicerank, Config, ElementId, Error};

create_exception!(grouptensor, ResourceCapError, PyRuntimeError, "A configured resource cap was exceeded.");

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Resource(_) => ResourceCapError::new_err(e.to_string()),
        Error::Parameter(_) | Error::Input(_) | Error::Serde(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

trait IntoPyResult<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPyResult<T> for grouptensor::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py_err)
    }
}

fn config() -> PyResult<Config> {
    Config::from_env().py()
}

/// Serialize through JSON into native Python objects.
fn to_python<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn codes(xs: &[ElementId]) -> Vec<u64> {
    xs.iter().map(|x| x.0).collect()
}

fn ids(xs: Vec<u64>) -> Vec<ElementId> {
    xs.into_iter().map(ElementId).collect()
}

/// A finite group built from a descriptor such as `psl2:5` or
/// `prod:cyclic:2,cyclic:3`. Elements are integer codes.
#[pyclass(frozen, name = "Group", module = "grouptensor")]
struct PyGroup {
    inner: Arc<grouptensor::Group>,
}

#[pymethods]
impl PyGroup {
    #[new]
    fn new(descriptor: &str) -> PyResult<Self> {
        let g = grouptensor::Group::from_descriptor(descriptor, &config()?).py()?;
        Ok(PyGroup { inner: Arc::new(g) })
    }

    #[getter]
    fn descriptor(&self) -> String {
        self.inner.descriptor()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn identity(&self) -> u64 {
        self.inner.identity().0
    }

    fn generators(&self) -> Vec<u64> {
        codes(&self.inner.generators())
    }

    fn elements(&self) -> Vec<u64> {
        self.inner.elements().map(|e| e.0).collect()
    }

    fn mul(&self, a: u64, b: u64) -> PyResult<u64> {
        self.inner.mul(ElementId(a), ElementId(b)).py().map(|e| e.0)
    }

    fn inv(&self, a: u64) -> PyResult<u64> {
        self.inner.inv(ElementId(a)).py().map(|e| e.0)
    }

    fn element_order(&self, a: u64) -> PyResult<usize> {
        self.inner.element_order(ElementId(a)).py()
    }

    fn is_abelian(&self) -> bool {
        self.inner.is_abelian()
    }

    fn __len__(&self) -> usize {
        self.inner.order()
    }

    fn __repr__(&self) -> String {
        format!("Group('{}')", self.inner.descriptor())
    }
}

/// A 3-tensor over a prime field with sparse entries.
#[pyclass(frozen, name = "Tensor", module = "grouptensor")]
struct PyTensor {
    inner: slicerank::Tensor3,
}

#[pymethods]
impl PyTensor {
    #[new]
    fn new(dims: [usize; 3], char: u32, entries: Vec<[u64; 4]>) -> PyResult<Self> {
        let mut t = slicerank::Tensor3::zero(dims, char).py()?;
        for [i, j, k, v] in entries {
            let idx = [i as usize, j as usize, k as usize];
            if idx.iter().zip(dims).any(|(&x, n)| x >= n) {
                return Err(PyValueError::new_err(format!("entry {idx:?} outside dims {dims:?}")));
            }
            t.add(idx[0], idx[1], idx[2], (v % char as u64) as u32);
        }
        Ok(PyTensor { inner: t })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyTensor {
            inner: slicerank::Tensor3::from_json(text).py()?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().py()
    }

    #[getter]
    fn dims(&self) -> [usize; 3] {
        self.inner.dims()
    }

    #[getter]
    fn char(&self) -> u32 {
        self.inner.p()
    }

    fn entries(&self) -> Vec<(usize, usize, usize, u32)> {
        self.inner.entries().map(|([i, j, k], v)| (i, j, k, v)).collect()
    }

    fn __repr__(&self) -> String {
        format!("Tensor(dims={:?}, char={}, nnz={})", self.inner.dims(), self.inner.p(), self.inner.nnz())
    }
}

/// Conjugacy classes as dicts `{rep, size, order}`.
#[pyfunction]
fn conjugacy_classes(py: Python<'_>, group: &PyGroup) -> PyResult<Py<PyAny>> {
    let g = &group.inner;
    let data = conjugacy::conjugacy_classes(g, &config()?).py()?;
    #[derive(Serialize)]
    struct Class {
        rep: u64,
        size: usize,
        order: usize,
    }
    let out: Vec<Class> = data
        .classes
        .iter()
        .map(|c| Class {
            rep: g.element(c.rep).0,
            size: c.size,
            order: c.element_order,
        })
        .collect();
    to_python(py, &out)
}

#[pyfunction]
fn ell_regular_count(group: &PyGroup, ell: u64) -> PyResult<usize> {
    conjugacy::ell_regular_count(&group.inner, ell, &config()?).py()
}

/// `{group, ell, simples: [{d, e, mult}], dim_semisimple, dim_radical}`.
#[pyfunction]
#[pyo3(signature = (group, ell, seed = 0))]
fn semisimple_summary(py: Python<'_>, group: &PyGroup, ell: u32, seed: u64) -> PyResult<Py<PyAny>> {
    let s = py
        .detach(|| modrep::semisimple_summary(&group.inner, ell, seed, &Config::from_env()?))
        .py()?;
    to_python(py, &s)
}

#[pyfunction]
fn radical_trace_chain(group: &PyGroup, ell: u32) -> PyResult<usize> {
    modrep::radical_trace_chain(&group.inner, ell, &config()?).py()
}

/// Whether the degree-`d` symmetric-power module of `sl2:p` / `psl2:p` is
/// simple over `F_p`.
#[pyfunction]
#[pyo3(signature = (group, d, seed = 0))]
fn sym_power_is_simple(group: &PyGroup, d: usize, seed: u64) -> PyResult<bool> {
    let m = modrep::sym_power_rep(&group.inner, d).py()?;
    modrep::is_simple(&m, seed, config()?.chop_retry_budget).py()
}

type Triple = (Vec<u64>, Vec<u64>, Vec<u64>);

fn triple(m: &Matching) -> Triple {
    (codes(&m.a), codes(&m.b), codes(&m.c))
}

/// `(a, b, c)` lists of an exact maximum matching.
#[pyfunction]
fn exact_max_matching(py: Python<'_>, group: &PyGroup) -> PyResult<Triple> {
    let cfg = config()?;
    let (_, m) = py.detach(|| matching::exact_max_matching(&group.inner, &cfg)).py()?;
    Ok(triple(&m))
}

#[pyfunction]
#[pyo3(signature = (group, seed = 0, iters = 200))]
fn heuristic_matching(py: Python<'_>, group: &PyGroup, seed: u64, iters: usize) -> PyResult<Triple> {
    let m = py.detach(|| matching::heuristic_matching(&group.inner, seed, iters)).py()?;
    Ok(triple(&m))
}

/// `None` for a valid matching, otherwise an offending `(i, j, k)`.
#[pyfunction]
fn verify_matching(group: &PyGroup, a: Vec<u64>, b: Vec<u64>, c: Vec<u64>) -> PyResult<Option<(usize, usize, usize)>> {
    let m = Matching {
        a: ids(a),
        b: ids(b),
        c: ids(c),
    };
    matching::verify_matching(&group.inner, &m).py()
}

#[pyfunction]
fn gowers_matching_upper(order: u128, d: u128) -> PyResult<u128> {
    matching::gowers_matching_upper(order, d).py()
}

#[pyfunction]
fn group_tensor(group: &PyGroup, ell: u32) -> PyResult<PyTensor> {
    Ok(PyTensor {
        inner: slicerank::build_group_tensor(&group.inner, ell, &config()?).py()?,
    })
}

#[pyfunction]
fn exact_slice_rank(py: Python<'_>, tensor: &PyTensor) -> PyResult<usize> {
    let cfg = config()?;
    let (v, _) = py.detach(|| slicerank::exact_slice_rank(&tensor.inner, &cfg)).py()?;
    Ok(v)
}

/// `(N, min(3N, p^n))`.
#[pyfunction]
fn clp_count(p: u64, n: u32) -> PyResult<(u128, u128)> {
    slicerank::clp_count(p, n).py()
}

#[pyfunction]
#[pyo3(signature = (p, tol = 1e-9))]
fn c_p(p: u64, tol: f64) -> PyResult<f64> {
    slicerank::c_p(p, tol).py()
}

#[pyfunction]
fn gap_eval(py: Python<'_>, p: u64) -> PyResult<Py<PyAny>> {
    to_python(py, &report::gap_eval(p).py()?)
}

#[pyfunction]
#[pyo3(signature = (limit = 100_003))]
fn gap_scan(py: Python<'_>, limit: u64) -> PyResult<Py<PyAny>> {
    to_python(py, &report::gap_scan(limit).py()?)
}

#[pyfunction]
#[pyo3(signature = (group, seed = 0))]
fn bounds_report(py: Python<'_>, group: &PyGroup, seed: u64) -> PyResult<Py<PyAny>> {
    let cfg = config()?;
    let r = py.detach(|| report::bounds_report(&group.inner, seed, &cfg)).py()?;
    to_python(py, &r)
}

#[pyfunction]
#[pyo3(signature = (groups, seed = 0))]
fn quasirandom_probe(py: Python<'_>, groups: Vec<PyRef<'_, PyGroup>>, seed: u64) -> PyResult<Py<PyAny>> {
    let cfg = config()?;
    let gs: Vec<_> = groups.iter().map(|g| g.inner.clone()).collect();
    let rows = py.detach(|| report::quasirandom_probe(&gs, seed, &cfg));
    to_python(py, &rows)
}

#[pymodule]
#[pyo3(name = "grouptensor")]
fn init_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ResourceCapError", m.py().get_type::<ResourceCapError>())?;
    m.add("SCHEMA", report::SCHEMA)?;
    m.add_class::<PyGroup>()?;
    m.add_class::<PyTensor>()?;
    m.add_function(wrap_pyfunction!(conjugacy_classes, m)?)?;
    m.add_function(wrap_pyfunction!(ell_regular_count, m)?)?;
    m.add_function(wrap_pyfunction!(semisimple_summary, m)?)?;
    m.add_function(wrap_pyfunction!(radical_trace_chain, m)?)?;
    m.add_function(wrap_pyfunction!(sym_power_is_simple, m)?)?;
    m.add_function(wrap_pyfunction!(exact_max_matching, m)?)?;
    m.add_function(wrap_pyfunction!(heuristic_matching, m)?)?;
    m.add_function(wrap_pyfunction!(verify_matching, m)?)?;
    m.add_function(wrap_pyfunction!(gowers_matching_upper, m)?)?;
    m.add_function(wrap_pyfunction!(group_tensor, m)?)?;
    m.add_function(wrap_pyfunction!(exact_slice_rank, m)?)?;
    m.add_function(wrap_pyfunction!(clp_count, m)?)?;
    m.add_function(wrap_pyfunction!(c_p, m)?)?;
    m.add_function(wrap_pyfunction!(gap_eval, m)?)?;
    m.add_function(wrap_pyfunction!(gap_scan, m)?)?;
    m.add_function(wrap_pyfunction!(bounds_report, m)?)?;
    m.add_function(wrap_pyfunction!(quasirandom_probe, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_mapping() {
        Python::initialize();
        Python::attach(|py| {
            let e = to_py_err(Error::Resource("cap".into()));
            assert!(e.is_instance_of::<ResourceCapError>(py));
            assert!(e.is_instance_of::<PyRuntimeError>(py));
            assert!(to_py_err(Error::Parameter("p".into())).is_instance_of::<PyValueError>(py));
            assert!(to_py_err(Error::Internal("i".into())).is_instance_of::<PyRuntimeError>(py));
        });
    }

    #[test]
    fn module_functions() {
        Python::initialize();
        Python::attach(|py| {
            let g = PyGroup::new("psl2:5").unwrap();
            assert_eq!(g.order(), 60);
            let s = semisimple_summary(py, &g, 2, 0).unwrap();
            let dim: usize = s.bind(py).get_item("dim_semisimple").unwrap().extract().unwrap();
            assert_eq!(dim, 25);
            let (a, b, c) = heuristic_matching(py, &g, 1, 10).unwrap();
            assert_eq!(verify_matching(&g, a, b, c).unwrap(), None);
            let t = PyTensor::new([2, 2, 2], 2, vec![[0, 0, 0, 1], [1, 1, 1, 1]]).unwrap();
            assert_eq!(exact_slice_rank(py, &t).unwrap(), 2);
            assert!(PyGroup::new("psl2:4").is_err());
            let gap = gap_eval(py, 13).unwrap();
            let exceeds: bool = gap.bind(py).get_item("ratio_exceeds_one").unwrap().extract().unwrap();
            assert!(!exceeds);
        });
    }
}

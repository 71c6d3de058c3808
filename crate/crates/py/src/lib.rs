//! Python bindings. Contexts load from the same documents the command line
//! reads, elements travel as words in the `t<i> x<j>` syntax, and reports
//! come back as plain dicts with the same shape as the CLI's JSON.

use std::path::PathBuf;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;

use ehresmann::actions::{check_conditions_ab, check_full, check_order_preserving, check_strong};
use ehresmann::fixtures::{build_subset_expansion, sample, FlaUniverse};
use ehresmann::globalization::{globalize, verify_globalisation};
use ehresmann::io::{
    globalization_value, reconstruct_doc, run_laws_suite, run_pipeline, Doc, DocRef, Registry,
};
use ehresmann::laws::{Biunary, Mode, SampleCfg};
use ehresmann::report::LawReport;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Loads a document; references inside it resolve against its directory.
fn open(path: &str) -> PyResult<(Registry, DocRef)> {
    let p = PathBuf::from(path);
    let abs = if p.is_absolute() {
        p
    } else {
        std::env::current_dir().map_err(err)?.join(p)
    };
    let base = abs
        .parent()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."));
    let reg = Registry::new(base);
    let doc = reg.read_doc(&abs.display().to_string()).map_err(err)?;
    Ok((reg, DocRef::Inline(Box::new(doc))))
}

fn to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    use serde_json::Value;
    match v {
        Value::Null => Ok(py.None()),
        Value::Bool(b) => b.into_py_any(py),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_py_any(py)
            } else if let Some(u) = n.as_u64() {
                u.into_py_any(py)
            } else {
                n.as_f64().expect("finite number").into_py_any(py)
            }
        }
        Value::String(s) => s.into_py_any(py),
        Value::Array(a) => {
            let list = PyList::empty(py);
            for x in a {
                list.append(to_py(py, x)?)?;
            }
            list.into_py_any(py)
        }
        Value::Object(o) => {
            let dict = PyDict::new(py);
            for (k, x) in o {
                dict.set_item(k, to_py(py, x)?)?;
            }
            dict.into_py_any(py)
        }
    }
}

fn report_to_py(py: Python<'_>, value: &impl serde::Serialize) -> PyResult<Py<PyAny>> {
    to_py(py, &serde_json::to_value(value).map_err(err)?)
}

/// A normal-form monoid over a loaded action. Elements are words like
/// "t1 x0 t2"; every method reduces its inputs first.
#[pyclass(name = "PlContext", frozen)]
struct PyPlContext {
    inner: ehresmann::pl::PlContext,
}

#[pymethods]
impl PyPlContext {
    /// Load from an action or pl-context document.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let (reg, r) = open(path)?;
        Ok(PyPlContext {
            inner: reg.pl_context(&r).map_err(err)?,
        })
    }

    fn reduce(&self, word: &str) -> PyResult<String> {
        Ok(self.inner.parse_element(word).map_err(err)?.to_string())
    }

    fn mul(&self, a: &str, b: &str) -> PyResult<String> {
        let x = self.inner.parse_element(a).map_err(err)?;
        let y = self.inner.parse_element(b).map_err(err)?;
        Ok(self.inner.mul(&x, &y).to_string())
    }

    fn plus(&self, a: &str) -> PyResult<String> {
        let x = self.inner.parse_element(a).map_err(err)?;
        Ok(self.inner.plus(&x).to_string())
    }

    fn star(&self, a: &str) -> PyResult<String> {
        let x = self.inner.parse_element(a).map_err(err)?;
        Ok(self.inner.star(&x).to_string())
    }

    /// Index of the element's image in the acting monoid.
    fn ct(&self, a: &str) -> PyResult<usize> {
        let x = self.inner.parse_element(a).map_err(err)?;
        Ok(self.inner.c_t(&x))
    }

    fn atoms(&self) -> Vec<String> {
        self.inner.atoms().iter().map(|a| a.to_string()).collect()
    }

    /// Every element whose canonical form has at most `bound` letters.
    fn elements(&self, bound: usize) -> Vec<String> {
        self.inner
            .enumerate_elements(bound)
            .iter()
            .map(|e| e.to_string())
            .collect()
    }
}

/// The submonoid of a normal-form monoid carved out by a subset of the
/// space, with its class queries.
#[pyclass(name = "QlContext", frozen)]
struct PyQlContext {
    inner: ehresmann::ql::QlContext,
}

#[pymethods]
impl PyQlContext {
    /// Load from a ql-context document.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let (reg, r) = open(path)?;
        Ok(PyQlContext {
            inner: reg.ql_context(&r).map_err(err)?,
        })
    }

    fn pl(&self) -> PyPlContext {
        PyPlContext {
            inner: self.inner.pl().clone(),
        }
    }

    fn is_member(&self, a: &str) -> PyResult<bool> {
        let x = self.inner.pl().parse_element(a).map_err(err)?;
        Ok(self.inner.is_member(&x))
    }

    fn sigma_eq(&self, a: &str, b: &str) -> PyResult<bool> {
        let x = self.inner.pl().parse_element(a).map_err(err)?;
        let y = self.inner.pl().parse_element(b).map_err(err)?;
        self.inner.sigma_eq(&x, &y).map_err(err)
    }

    /// The generator word representing a member's class.
    fn sigma_rep(&self, a: &str) -> PyResult<String> {
        let x = self.inner.pl().parse_element(a).map_err(err)?;
        Ok(self.inner.sigma_rep(&x).map_err(err)?.to_string())
    }

    fn qatoms(&self) -> Vec<String> {
        self.inner.qatoms().iter().map(|a| a.to_string()).collect()
    }

    /// Every member whose canonical form has at most `bound` letters.
    fn members(&self, bound: usize) -> Vec<String> {
        self.inner
            .enumerate_members(bound)
            .iter()
            .map(|e| e.to_string())
            .collect()
    }
}

/// Validate a partial action document: strong composition, order
/// preservation, fullness, and with `y` the two restriction conditions.
#[pyfunction]
#[pyo3(signature = (path, y=None))]
fn check_action(py: Python<'_>, path: &str, y: Option<Vec<usize>>) -> PyResult<Py<PyAny>> {
    let (reg, r) = open(path)?;
    let pa = reg.partial_action(&r).map_err(err)?;
    let mut checks = vec![
        check_strong(&pa),
        check_order_preserving(&pa),
        check_full(&pa),
    ];
    if let Some(y) = y {
        let total = reg.total_action(&r).map_err(err)?;
        let (a, b) = check_conditions_ab(&total, &y).map_err(err)?;
        checks.push(a);
        checks.push(b);
    }
    report_to_py(py, &LawReport::new("action", path, None, "exhaustive", None, checks))
}

/// Embed a partial action into a total action on order ideals. The dict
/// matches the CLI output; with `verify` it carries a "verification" key.
#[pyfunction]
#[pyo3(signature = (path, verify=true))]
fn globalize_action(py: Python<'_>, path: &str, verify: bool) -> PyResult<Py<PyAny>> {
    let (reg, r) = open(path)?;
    let pa = reg.partial_action(&r).map_err(err)?;
    let ga = globalize(&pa).map_err(err)?;
    let mut value = globalization_value(&ga);
    if verify {
        let report = verify_globalisation(&ga);
        value["verification"] = serde_json::to_value(&report).map_err(err)?;
    }
    to_py(py, &value)
}

/// Run one law suite against a document. Suites: left-ehresmann, star,
/// ample, atomic, proper, basis.
#[pyfunction]
#[pyo3(signature = (suite, target, bound=4, samples=None, seed=0))]
fn laws_check(
    py: Python<'_>,
    suite: &str,
    target: &str,
    bound: usize,
    samples: Option<usize>,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    let mode = match samples {
        Some(samples) => Mode::Sampled(SampleCfg { seed, samples }),
        None => Mode::Exhaustive,
    };
    let (reg, r) = open(target)?;
    let (value, _) = run_laws_suite(&reg, suite, &r, bound, &mode).map_err(err)?;
    to_py(py, &value)
}

/// Rebuild a monoid from its quotient data and verify the atom map.
#[pyfunction]
#[pyo3(signature = (path, bound=4, seed=0))]
fn reconstruct(py: Python<'_>, path: &str, bound: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let (reg, r) = open(path)?;
    report_to_py(py, &reconstruct_doc(&reg, &r, bound, seed).map_err(err)?)
}

/// Run a staged pipeline document, returning its aggregate report.
#[pyfunction]
#[pyo3(signature = (path, seed=None))]
fn pipeline_run(py: Python<'_>, path: &str, seed: Option<u64>) -> PyResult<Py<PyAny>> {
    let (reg, r) = open(path)?;
    let doc = reg.resolve(&r).map_err(err)?;
    report_to_py(py, &run_pipeline(&reg, &doc, seed).map_err(err)?)
}

/// The subset expansion of the cyclic group of order `n` as a biunary
/// document dict, every element designated an atom.
#[pyfunction]
fn subset_expansion(py: Python<'_>, n: usize) -> PyResult<Py<PyAny>> {
    if n == 0 {
        return Err(PyValueError::new_err("group order must be at least 1"));
    }
    let b = build_subset_expansion(&sample::cyclic(n)).map_err(err)?;
    let atoms: Vec<usize> = (0..b.n()).collect();
    let doc = Doc::from_biunary(&b, Some(atoms), Some(format!("subset-expansion-z{n}")));
    report_to_py(py, &doc)
}

/// The bounded prefix-language window: element and atom counts plus the
/// canonical element with two distinct factorizations.
#[pyfunction]
fn fla_window(py: Python<'_>, k: usize, bound: usize) -> PyResult<Py<PyAny>> {
    if !(1..=26).contains(&k) {
        return Err(PyValueError::new_err("alphabet size must be 1..=26"));
    }
    let b = FlaUniverse::new(k, bound);
    let atom_count = b.elements().iter().filter(|c| FlaUniverse::is_atom(c)).count();
    let mut value = serde_json::json!({
        "k": k,
        "bound": bound,
        "element_count": b.elements().len(),
        "atom_count": atom_count,
    });
    if k >= 2 && bound >= 2 {
        let (elem, factorizations) = b.duplicate_witness();
        value["duplicate_witness"] = serde_json::json!({
            "element": elem.to_string(),
            "factorizations": factorizations
                .iter()
                .map(|f| f.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        });
    }
    to_py(py, &value)
}

#[pymodule]
fn ehresmann_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPlContext>()?;
    m.add_class::<PyQlContext>()?;
    m.add_function(wrap_pyfunction!(check_action, m)?)?;
    m.add_function(wrap_pyfunction!(globalize_action, m)?)?;
    m.add_function(wrap_pyfunction!(laws_check, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(pipeline_run, m)?)?;
    m.add_function(wrap_pyfunction!(subset_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(fla_window, m)?)?;
    Ok(())
}

//! Python bindings. Structured results come back as Python objects built
//! from the same JSON the CLI writes.

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use cyclic_curves::arcs;
use cyclic_curves::curvefam::{self, CanonicalCurve};
use cyclic_curves::fields::{Elem, Gf, TowerContext};
use cyclic_curves::genus::{self, Method};
use cyclic_curves::workbench::{self, RunConfig, EXIT_DISAGREE};
use cyclic_curves::{arith, Error};

fn py_err(e: Error) -> PyErr {
    if workbench::exit_code_for(&e) == EXIT_DISAGREE {
        PyArithmeticError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(x).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

/// A finite field `GF(p^h)`; elements are strings (`"3"` or `"c0,c1,..."`).
#[pyclass(name = "Field", frozen)]
struct PyField {
    inner: Gf,
}

#[pymethods]
impl PyField {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(PyField {
            inner: Gf::parse(spec).map_err(py_err)?,
        })
    }

    #[getter]
    fn order(&self) -> u64 {
        self.inner.order()
    }

    #[getter]
    fn characteristic(&self) -> u64 {
        self.inner.characteristic()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    fn spec(&self) -> String {
        self.inner.spec_string()
    }

    fn elem(&self, s: &str) -> PyResult<String> {
        Ok(self.inner.format_elem(self.parse(s)?))
    }

    fn add(&self, a: &str, b: &str) -> PyResult<String> {
        let f = &self.inner;
        Ok(f.format_elem(f.add(self.parse(a)?, self.parse(b)?)))
    }

    fn mul(&self, a: &str, b: &str) -> PyResult<String> {
        let f = &self.inner;
        Ok(f.format_elem(f.mul(self.parse(a)?, self.parse(b)?)))
    }

    fn inv(&self, a: &str) -> PyResult<String> {
        let f = &self.inner;
        Ok(f.format_elem(f.inv(self.parse(a)?).map_err(py_err)?))
    }

    fn pow(&self, a: &str, e: u64) -> PyResult<String> {
        let f = &self.inner;
        Ok(f.format_elem(f.pow(self.parse(a)?, e)))
    }

    fn element_order(&self, a: &str) -> PyResult<u64> {
        let x = self.parse(a)?;
        if x.is_zero() {
            return Err(PyValueError::new_err("zero has no multiplicative order"));
        }
        Ok(self.inner.element_order(x))
    }

    fn __repr__(&self) -> String {
        format!("Field('{}')", self.inner.spec_string())
    }
}

impl PyField {
    fn parse(&self, s: &str) -> PyResult<Elem> {
        self.inner.parse_elem(s).map_err(py_err)
    }
}

/// A member of the canonical family over a given field.
#[pyclass(name = "CanonicalCurve", frozen)]
struct PyCurve {
    inner: CanonicalCurve,
}

#[pymethods]
impl PyCurve {
    #[new]
    #[pyo3(signature = (field, t, c, eps1 = "1", eps2 = "1"))]
    fn new(field: &str, t: u32, c: &str, eps1: &str, eps2: &str) -> PyResult<Self> {
        let f = Gf::parse(field).map_err(py_err)?;
        let p = |s: &str| f.parse_elem(s).map_err(py_err);
        let inner = CanonicalCurve::new(&f, t, p(eps1)?, p(eps2)?, p(c)?).map_err(py_err)?;
        Ok(PyCurve { inner })
    }

    #[getter]
    fn t(&self) -> u32 {
        self.inner.t
    }

    /// `t^2 - 3t + 3`.
    #[getter]
    fn n(&self) -> u64 {
        self.inner.big_n()
    }

    fn equation(&self) -> String {
        self.inner.equation().display(&self.inner.field)
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.to_json())
    }

    fn is_absolutely_irreducible(&self) -> PyResult<bool> {
        self.inner.is_absolutely_irreducible().map_err(py_err)
    }

    fn one_term_per_degree(&self) -> bool {
        curvefam::check_one_term_per_degree(&self.inner.equation())
    }

    /// The symmetry ratio eps, or `None` when no single eps exists.
    fn coefficient_symmetry(&self) -> Option<String> {
        let f = &self.inner.field;
        curvefam::check_coefficient_symmetry(&self.inner.equation(), self.inner.n(), f)
            .ok()
            .map(|e| f.format_elem(e))
    }

    fn congruence(&self, k: u64) -> bool {
        curvefam::check_congruence(&self.inner.equation(), k, u64::from(self.inner.t))
    }

    #[pyo3(signature = (method = "all", seed = 1))]
    fn genus<'py>(&self, py: Python<'py>, method: &str, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let m = Method::parse(method).map_err(py_err)?;
        let r = py.detach(|| genus::genus(&self.inner, m, seed)).map_err(py_err)?;
        to_py(py, &r)
    }

    fn __repr__(&self) -> String {
        format!("CanonicalCurve({}, t={})", self.equation(), self.inner.t)
    }
}

/// The Singer orbit of size `k` in `PG(2, q)` as an ArcRecord dict.
#[pyfunction]
#[pyo3(signature = (q, k, check_complete = false))]
fn singer_arc<'py>(py: Python<'py>, q: u64, k: u64, check_complete: bool) -> PyResult<Bound<'py, PyAny>> {
    let (p, h) = arith::prime_power(q).ok_or_else(|| PyValueError::new_err(format!("{q} is not a prime power")))?;
    let ctx = TowerContext::build(p, h).map_err(py_err)?;
    let mut arc = arcs::singer_orbit(&ctx, k).map_err(py_err)?;
    if check_complete && arc.is_arc {
        arc.is_complete = Some(arcs::is_complete(&arc).map_err(py_err)?);
    }
    to_py(py, &arc.to_json())
}

/// Feasible `(q, k)` with their hypothesis flags.
#[pyfunction]
fn enumerate<'py>(py: Python<'py>, q_lo: u64, q_hi: u64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &arcs::enumerate_candidates(q_lo, q_hi))
}

/// Closed-form genus for `t` and the curve type (`"first"` or `"second"`).
#[pyfunction]
fn genus_formula(t: u32, curve_type: &str) -> PyResult<i64> {
    use cyclic_curves::branches::CurveType;
    let ty = match curve_type {
        "first" => CurveType::First,
        "second" => CurveType::Second,
        _ => return Err(PyValueError::new_err(format!("unknown curve type {curve_type}"))),
    };
    Ok(genus::genus_formula(t, ty))
}

/// Runs a RunConfig given as JSON text; returns `(report_json, exit_code)`.
#[pyfunction]
fn run(py: Python<'_>, config_json: &str) -> PyResult<(String, i32)> {
    let cfg = RunConfig::from_json_str(config_json).map_err(py_err)?;
    let report = py.detach(|| workbench::run(&cfg));
    Ok((report.to_json_string(), report.exit_code))
}

#[pymodule]
fn pycyclic(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyCurve>()?;
    m.add_function(wrap_pyfunction!(singer_arc, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(genus_formula, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}

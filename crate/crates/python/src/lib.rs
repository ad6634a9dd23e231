//! Python bindings for `openbook_ribbons`.
//!
//! Reports come back as plain dicts; geometry goes in and out through the
//! text formats, so anything saved from Python loads in the command line tool
//! and the other way round.

use openbook_ribbons as core;
use openbook_ribbons::io;
use openbook_ribbons::rational::q;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py(py: Python<'_>, v: &impl serde::Serialize) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).map_err(err)?;
    Ok(PyModule::import(py, "json")?.call_method1("loads", (text,))?.unbind())
}

fn parse_q(s: &str) -> PyResult<core::Q> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: i128 = n.trim().parse().map_err(err)?;
    let d: i128 = d.trim().parse().map_err(err)?;
    if d == 0 {
        return Err(err("zero denominator"));
    }
    Ok(q(n, d))
}

#[pyclass(name = "MorseDiagram", module = "openbook_ribbons_py", skip_from_py_object)]
struct PyMorseDiagram {
    inner: core::MorseDiagram,
}

#[pymethods]
impl PyMorseDiagram {
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        Ok(Self { inner: core::builtin_diagram(name).map_err(err)? })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Self { inner: io::parse_morse(text).map_err(err)? })
    }

    fn to_text(&self) -> String {
        io::write_morse(&self.inner)
    }

    #[getter]
    fn tori(&self) -> usize {
        self.inner.tori
    }

    /// Violations as a list of dicts; empty when the diagram is valid.
    fn validate(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let r = core::validate_morse_diagram(&self.inner).map_err(err)?;
        to_py(py, &r.violations)
    }

    fn page_invariants(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.page_invariants().map_err(err)?)
    }

    fn render(&self) -> Vec<String> {
        core::render::render(&self.inner, None, None)
    }

    fn __repr__(&self) -> String {
        format!("MorseDiagram(tori={}, edges={}, vertices={})", self.inner.tori, self.inner.edges.len(), self.inner.vertices.len())
    }
}

#[pyclass(name = "GraphFront", module = "openbook_ribbons_py", skip_from_py_object)]
struct PyGraphFront {
    inner: core::GraphFront,
}

#[pymethods]
impl PyGraphFront {
    /// A builtin front together with the name of its diagram.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<(Self, String)> {
        let (d, f) = core::builtin_front(name).map_err(err)?;
        Ok((Self { inner: f }, d))
    }

    #[staticmethod]
    #[pyo3(signature = (diagram, seed, size = 6))]
    fn random(diagram: &PyMorseDiagram, seed: u64, size: usize) -> PyResult<Self> {
        Ok(Self { inner: core::random_graph_front(seed, size, &diagram.inner).map_err(err)? })
    }

    /// Parse a front file; returns the front and its diagram reference.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<(Self, String)> {
        let (r, f) = io::parse_front(text).map_err(err)?;
        Ok((Self { inner: f }, r))
    }

    fn to_text(&self, morse_ref: &str) -> String {
        io::write_front(morse_ref, &self.inner)
    }

    fn validate(&self, py: Python<'_>, diagram: &PyMorseDiagram) -> PyResult<Py<PyAny>> {
        let r = core::validate_front(&self.inner, &diagram.inner).map_err(err)?;
        to_py(py, &r.issues)
    }

    fn graph_counts(&self, py: Python<'_>, diagram: &PyMorseDiagram) -> PyResult<Py<PyAny>> {
        to_py(py, &core::graph_counts(&self.inner, &diagram.inner).map_err(err)?)
    }

    /// Euler characteristic and boundary count of the ribbon.
    fn ribbon(&self, diagram: &PyMorseDiagram) -> PyResult<(i64, usize)> {
        let r = core::ribbon_front(&self.inner, &diagram.inner).map_err(err)?;
        Ok((r.euler_char(), r.boundary_components()))
    }

    /// Move the front into arc position. `epsilon` is `None` for automatic
    /// choice or a string like `"1/16"`.
    #[pyo3(signature = (diagram, epsilon = None))]
    fn to_arc_position(&self, diagram: &PyMorseDiagram, epsilon: Option<&str>) -> PyResult<PyArcDiagram> {
        let eps = epsilon.map(parse_q).transpose()?;
        let (a, _) = core::to_arc_position(&self.inner, &diagram.inner, eps).map_err(err)?;
        Ok(PyArcDiagram { inner: a })
    }

    fn render(&self, diagram: &PyMorseDiagram) -> Vec<String> {
        core::render::render(&diagram.inner, Some(&self.inner), None)
    }
}

#[pyclass(name = "ArcDiagram", module = "openbook_ribbons_py", skip_from_py_object)]
struct PyArcDiagram {
    inner: core::ArcDiagram,
}

#[pymethods]
impl PyArcDiagram {
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<(Self, String)> {
        let (r, a) = io::parse_arc(text).map_err(err)?;
        Ok((Self { inner: a }, r))
    }

    fn to_text(&self, morse_ref: &str) -> String {
        io::write_arc(morse_ref, &self.inner)
    }

    fn euler(&self) -> i64 {
        self.inner.euler()
    }

    fn validate(&self, py: Python<'_>, diagram: &PyMorseDiagram) -> PyResult<Py<PyAny>> {
        let r = core::validate_arc_diagram(&self.inner, &diagram.inner).map_err(err)?;
        to_py(py, &r.issues)
    }

    fn to_bennequin(&self) -> PyResult<PyBennequinSurface> {
        Ok(PyBennequinSurface { inner: core::ribbon_to_bennequin(&self.inner).map_err(err)? })
    }

    #[getter]
    fn n_wires(&self) -> usize {
        self.inner.wires.len()
    }

    #[getter]
    fn n_vertices(&self) -> usize {
        self.inner.vertices.len()
    }
}

#[pyclass(name = "BennequinSurface", module = "openbook_ribbons_py", skip_from_py_object)]
struct PyBennequinSurface {
    inner: core::BennequinSurface,
}

#[pymethods]
impl PyBennequinSurface {
    /// `bands` holds `(theta, from, to, sign)` with `theta` a string like `"1/3"`.
    #[staticmethod]
    fn from_bands(d: usize, bands: Vec<(String, usize, usize, i8)>) -> PyResult<Self> {
        let bands = bands
            .into_iter()
            .map(|(t, i, j, s)| Ok((parse_q(&t)?, i, j, s)))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Self { inner: core::bennequin_from_bands(d, &bands).map_err(err)? })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        let s = io::parse_bsurf(text).map_err(err)?;
        s.check(s.provenance == core::surface::Provenance::FromRibbon).map_err(err)?;
        Ok(Self { inner: s })
    }

    fn to_text(&self) -> String {
        io::write_bsurf(&self.inner)
    }

    fn report(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.report())
    }

    fn stabilize(&self) -> Self {
        Self { inner: core::positive_markov_stabilization(&self.inner) }
    }

    fn destabilize(&self) -> PyResult<Self> {
        Ok(Self { inner: core::destabilize(&self.inner).map_err(err)? })
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.disks.len()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("BennequinSurface(d={}, b+={}, b-={})", self.inner.disks.len(), self.inner.b_plus(), self.inner.b_minus())
    }
}

fn companion(s: Option<&PyBennequinSurface>) -> PyResult<core::CompanionSummary> {
    let s = match s {
        Some(s) => s.inner.clone(),
        None => {
            let (dn, f) = core::builtin_front("disk_unknot").map_err(err)?;
            let d = core::builtin_diagram(&dn).map_err(err)?;
            core::quasipositive_annulus(&f, &d).map_err(err)?
        }
    };
    Ok(core::CompanionSummary::from_surface(&s))
}

/// The `(p, q)` cable of `companion` (the unknot annulus by default).
#[pyfunction]
#[pyo3(signature = (p, q, companion = None))]
fn cable(py: Python<'_>, p: i64, q: i64, companion: Option<&PyBennequinSurface>) -> PyResult<Py<PyAny>> {
    let c = self::companion(companion)?;
    to_py(py, &core::cable(p, q, &c).map_err(err)?)
}

/// Satellite with an `n`-strand pattern given as `(i, j, sign)` band generators.
#[pyfunction]
#[pyo3(signature = (n, bands, companion = None))]
fn satellite(
    py: Python<'_>,
    n: usize,
    bands: Vec<(usize, usize, i8)>,
    companion: Option<&PyBennequinSurface>,
) -> PyResult<Py<PyAny>> {
    let pattern = core::PatternBraid::from_generators(n, &bands).map_err(err)?;
    let c = self::companion(companion)?;
    to_py(py, &core::satellite(&pattern, &c).map_err(err)?)
}

#[pymodule]
fn openbook_ribbons_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMorseDiagram>()?;
    m.add_class::<PyGraphFront>()?;
    m.add_class::<PyArcDiagram>()?;
    m.add_class::<PyBennequinSurface>()?;
    m.add_function(wrap_pyfunction!(cable, m)?)?;
    m.add_function(wrap_pyfunction!(satellite, m)?)?;
    m.add("BUILTIN_DIAGRAMS", core::morse::BUILTIN_NAMES.to_vec())?;
    Ok(())
}

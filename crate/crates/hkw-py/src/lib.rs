use std::collections::BTreeMap;

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};

use hkw::diagram::Diagram;
use hkw::filtered;
use hkw::jones;
use hkw::local::Locals;
use hkw::moves::{apply_sequence, MoveScalars, MoveSequence};
use hkw::verify;
use hkw::Q;

fn err(e: hkw::Error) -> PyErr {
    match e {
        hkw::Error::Invariant(m) => PyRuntimeError::new_err(m),
        hkw::Error::Io(e) => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, q: &Q) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.to_string(),))
}

/// A potential `w` given by the roots of `dw`.
#[pyclass(name = "Potential", module = "hkw_py", frozen)]
struct PyPotential(hkw::Potential);

#[pymethods]
impl PyPotential {
    /// Roots may be ints, strings like "1/2", or `fractions.Fraction`.
    #[new]
    fn new(roots: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let qs = roots
            .iter()
            .map(|r| {
                let s = r.str()?.to_string();
                s.trim()
                    .parse::<Q>()
                    .map_err(|_| PyValueError::new_err(format!("bad root {s:?}")))
            })
            .collect::<PyResult<Vec<_>>>()?;
        if qs.len() < 2 {
            return Err(PyValueError::new_err("need at least two roots"));
        }
        Ok(PyPotential(hkw::Potential::new(qs).map_err(err)?))
    }

    /// Roots `1..n`.
    #[staticmethod]
    fn standard(n: usize) -> PyResult<Self> {
        if n < 2 {
            return Err(PyValueError::new_err("n must be at least 2"));
        }
        Ok(PyPotential(hkw::Potential::standard(n)))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n
    }

    #[getter]
    fn roots<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.0.roots.iter().map(|r| fraction(py, r)).collect()
    }

    fn __repr__(&self) -> String {
        let r: Vec<String> = self.0.roots.iter().map(|r| r.to_string()).collect();
        format!("Potential([{}])", r.join(", "))
    }
}

/// An oriented link diagram as a PD code.
#[pyclass(name = "Diagram", module = "hkw_py", frozen)]
struct PyDiagram(Diagram);

#[pymethods]
impl PyDiagram {
    #[staticmethod]
    fn from_pd(pd: &str) -> PyResult<Self> {
        Ok(PyDiagram(Diagram::parse(pd).map_err(err)?))
    }

    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        Ok(PyDiagram(Diagram::preset(name).map_err(err)?))
    }

    #[staticmethod]
    fn torus(p: usize, q: usize) -> PyResult<Self> {
        Ok(PyDiagram(Diagram::torus(p, q).map_err(err)?))
    }

    #[staticmethod]
    fn braid(strands: usize, word: Vec<i32>) -> PyResult<Self> {
        Ok(PyDiagram(Diagram::braid_closure(strands, &word).map_err(err)?))
    }

    fn mirror(&self) -> Self {
        PyDiagram(self.0.mirror())
    }

    #[getter]
    fn pd(&self) -> String {
        self.0.to_pd()
    }

    #[getter]
    fn crossings(&self) -> usize {
        self.0.crossings.len()
    }

    #[getter]
    fn components(&self) -> usize {
        self.0.components()
    }

    #[getter]
    fn writhe(&self) -> i64 {
        self.0.crossings.iter().map(|c| if c.positive { 1 } else { -1 }).sum()
    }

    fn __repr__(&self) -> String {
        format!("Diagram({})", self.0.to_pd())
    }
}

/// Filtered homology: `dims[(i, j)]`, the total, and the canonical generators.
#[pyclass(name = "Homology", module = "hkw_py", frozen)]
struct PyHomology(filtered::HomologyResult);

#[pymethods]
impl PyHomology {
    #[getter]
    fn n(&self) -> usize {
        self.0.n
    }

    #[getter]
    fn total(&self) -> usize {
        self.0.total
    }

    #[getter]
    fn components(&self) -> usize {
        self.0.components
    }

    #[getter]
    fn dims(&self) -> BTreeMap<(i64, i64), usize> {
        self.0.dims.clone()
    }

    /// `(psi, i, j)` per root assignment, `psi` as root indices.
    #[getter]
    fn generators(&self) -> Vec<(Vec<usize>, i64, i64)> {
        self.0
            .generators
            .iter()
            .map(|g| (g.psi.clone(), g.degree, g.level))
            .collect()
    }

    /// `(j_top, g*)` lower bound; knots only.
    fn slice_bound<'py>(&self, py: Python<'py>) -> PyResult<(i64, Bound<'py, PyAny>)> {
        let b = filtered::slice_bound(&self.0).map_err(err)?;
        Ok((b.j_top, fraction(py, &b.value)?))
    }

    fn __repr__(&self) -> String {
        format!(
            "Homology(n={}, total={}, dims={:?})",
            self.0.n, self.0.total, self.0.dims
        )
    }
}

#[pyfunction]
#[pyo3(signature = (diagram, potential, max_crossings = 8))]
fn homology(
    py: Python<'_>,
    diagram: &PyDiagram,
    potential: &PyPotential,
    max_crossings: usize,
) -> PyResult<PyHomology> {
    let (d, loc) = (diagram.0.clone(), Locals::new(&potential.0));
    let h = py
        .detach(move || filtered::homology(&d, &loc, max_crossings))
        .map_err(err)?;
    Ok(PyHomology(h))
}

/// Positive-diagram shortcut: `(j_top, bound, genus)` without building the cube.
#[pyfunction]
fn positive_fast_path<'py>(
    py: Python<'py>,
    diagram: &PyDiagram,
    n: usize,
) -> PyResult<(i64, Bound<'py, PyAny>, usize)> {
    let (b, g) = filtered::positive_fast_path(&diagram.0, n).map_err(err)?;
    Ok((b.j_top, fraction(py, &b.value)?, g))
}

#[pyfunction]
fn milnor(p: usize, q: usize) -> PyResult<usize> {
    filtered::milnor(p, q).map_err(err)
}

/// `P_2` as `{exponent: coefficient}`.
#[pyfunction]
fn jones_p2(diagram: &PyDiagram) -> PyResult<BTreeMap<i64, i64>> {
    jones::p2(&diagram.0).map_err(err)
}

/// Run the consistency suite; returns one line per passing check, raises on the first failure.
#[pyfunction]
#[pyo3(signature = (diagram, potential, max_crossings = 8))]
fn run_verify(
    py: Python<'_>,
    diagram: &PyDiagram,
    potential: &PyPotential,
    max_crossings: usize,
) -> PyResult<Vec<String>> {
    let (d, pot) = (diagram.0.clone(), potential.0.clone());
    py.detach(move || verify::run(&d, &pot, max_crossings)).map_err(err)
}

/// Track the generator of `psi` through a move sequence: `({psi': coefficient}, degree)` with `psi'` a tuple.
#[pyfunction]
fn apply_moves<'py>(
    py: Python<'py>,
    sequence: &str,
    psi: Vec<usize>,
    potential: &PyPotential,
) -> PyResult<(Bound<'py, PyDict>, i64)> {
    let seq: MoveSequence = sequence.parse().map_err(err)?;
    let sc = MoveScalars::new(&Locals::new(&potential.0)).map_err(err)?;
    let (out, degree, _) = apply_sequence(&sc, &seq, &psi).map_err(err)?;
    let dict = PyDict::new(py);
    for (p, c) in &out {
        dict.set_item(PyTuple::new(py, p)?, fraction(py, c)?)?;
    }
    Ok((dict, degree))
}

#[pymodule]
pub fn hkw_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPotential>()?;
    m.add_class::<PyDiagram>()?;
    m.add_class::<PyHomology>()?;
    m.add_function(wrap_pyfunction!(homology, m)?)?;
    m.add_function(wrap_pyfunction!(positive_fast_path, m)?)?;
    m.add_function(wrap_pyfunction!(milnor, m)?)?;
    m.add_function(wrap_pyfunction!(jones_p2, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    m.add_function(wrap_pyfunction!(apply_moves, m)?)?;
    m.add("PRESETS", hkw::diagram::PRESETS.to_vec())?;
    Ok(())
}

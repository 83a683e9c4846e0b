use pyo3::prelude::*;
use pyo3::types::PyModule;

fn with_module(f: impl FnOnce(Python<'_>, &Bound<'_, PyModule>) -> PyResult<()>) {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "hkw_py")?;
        hkw_py::hkw_py(&m)?;
        f(py, &m)
    })
    .unwrap();
}

#[test]
fn trefoil_from_python() {
    with_module(|_py, m| {
        let p = m.getattr("Potential")?.call1((vec![1, -1],))?;
        let d = m.getattr("Diagram")?.call_method1("preset", ("trefoil+",))?;
        let h = m.getattr("homology")?.call1((&d, &p))?;
        assert_eq!(h.getattr("total")?.extract::<usize>()?, 2);
        let (j, g): (i64, Bound<'_, PyAny>) = h.call_method0("slice_bound")?.extract()?;
        assert_eq!(j, -1);
        assert_eq!(g.str()?.to_string(), "1");
        assert_eq!(m.getattr("milnor")?.call1((3, 5))?.extract::<usize>()?, 4);
        Ok(())
    });
}

#[test]
fn errors_map_to_python_exceptions() {
    with_module(|py, m| {
        let e = m.getattr("Potential")?.call1((vec![2, 2],)).unwrap_err();
        assert!(e.is_instance_of::<pyo3::exceptions::PyValueError>(py));
        let e = m
            .getattr("Diagram")?
            .call_method1("from_pd", ("PD[X(1)]",))
            .unwrap_err();
        assert!(e.is_instance_of::<pyo3::exceptions::PyValueError>(py));
        Ok(())
    });
}

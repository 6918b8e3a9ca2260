//! Python module `ffframes`: frames over finite fields.
//!
//! Inputs may be JSON text or plain Python objects in the same schema; reports
//! come back as dicts.

use ffframes_core::combinatorics::{
    design_verify, incoherence_number, simplex_enumerate, two_graph_of, two_graph_regularity,
};
use ffframes_core::json::*;
use ffframes_core::search::search_equiangular;
use ffframes_core::{naimark_of, switching_equiv, Error, Field, FrameSystem};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyString;
use serde_json::{json, Value};

create_exception!(ffframes, FfframesError, PyValueError);
create_exception!(ffframes, BudgetExceeded, FfframesError);

fn err(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded { .. } => BudgetExceeded::new_err(e.to_string()),
        _ => FfframesError::new_err(e.to_string()),
    }
}

fn to_value(obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    let text: String = if let Ok(s) = obj.cast::<PyString>() {
        s.to_str()?.to_owned()
    } else {
        obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?
    };
    parse(&text).map_err(err)
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

#[pyclass(name = "Field", frozen, module = "ffframes")]
struct PyField(Field);

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (p, degree = 1, modulus = None, involution = "identity"))]
    fn new(p: u64, degree: u32, modulus: Option<Vec<i64>>, involution: &str) -> PyResult<Self> {
        let v = json!({ "p": p, "degree": degree, "modulus": modulus, "involution": involution });
        field_from_json(&v).map(PyField).map_err(err)
    }

    #[getter]
    fn p(&self) -> u32 {
        self.0.p()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.0.degree()
    }

    #[getter]
    fn order(&self) -> u32 {
        self.0.order()
    }

    #[getter]
    fn case(&self) -> &'static str {
        case_str(self.0.case())
    }

    fn to_json(&self) -> String {
        field_to_json(&self.0).to_string()
    }

    fn __repr__(&self) -> String {
        format!("Field(p={}, degree={}, case={})", self.0.p(), self.0.degree(), case_str(self.0.case()))
    }
}

/// A finite set of vectors in a hermitian space.
#[pyclass(name = "Frame", frozen, module = "ffframes")]
struct PyFrame(FrameSystem);

#[pymethods]
impl PyFrame {
    /// From a frame object {"field", "form"?, "vectors"} (dict or JSON text).
    #[new]
    fn new(obj: &Bound<'_, PyAny>) -> PyResult<Self> {
        frame_from_json(&to_value(obj)?).map(PyFrame).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn d(&self) -> usize {
        self.0.d()
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField(self.0.field().clone())
    }

    fn gram<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &matrix_to_json(self.0.gram()))
    }

    fn status<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &tightness_to_json(self.0.field(), &self.0.status()))
    }

    fn etf<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let rep = self.0.etf_verify().map_err(err)?;
        to_py(py, &etf_to_json(self.0.field(), &rep))
    }

    #[pyo3(signature = (scale = None))]
    fn naimark<'py>(&self, py: Python<'py>, scale: Option<&Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
        let f = self.0.field();
        let s = scale.map(|s| to_value(s).and_then(|v| elem_from_json(f, &v).map_err(err))).transpose()?;
        let rep = naimark_of(&self.0, s).map_err(err)?;
        to_py(py, &naimark_to_json(f, &rep))
    }

    #[pyo3(signature = (sizes = None))]
    fn simplices<'py>(&self, py: Python<'py>, sizes: Option<Vec<usize>>) -> PyResult<Bound<'py, PyAny>> {
        let recs = simplex_enumerate(&self.0, sizes.as_deref()).map_err(err)?;
        let v: Vec<Value> = recs.iter().map(|r| simplex_record_to_json(self.0.field(), r)).collect();
        to_py(py, &Value::Array(v))
    }

    fn incoherence<'py>(&self, py: Python<'py>, beta: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let f = self.0.field();
        let beta = elem_from_json(f, &to_value(beta)?).map_err(err)?;
        let rep = incoherence_number(&self.0, beta).map_err(err)?;
        to_py(py, &incoherence_to_json(f, &rep))
    }

    fn two_graph<'py>(&self, py: Python<'py>, beta: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let f = self.0.field();
        let beta = elem_from_json(f, &to_value(beta)?).map_err(err)?;
        let tg = two_graph_of(&self.0, beta).map_err(err)?;
        let params = two_graph_regularity(&tg).map_err(err)?;
        let mut v = two_graph_to_json(Some(f), &tg);
        v["params"] = two_graph_params_to_json(&params);
        to_py(py, &v)
    }

    fn to_json(&self) -> String {
        frame_to_json(&self.0).to_string()
    }

    fn __repr__(&self) -> String {
        format!("Frame(n={}, d={}, p={}, degree={})", self.0.n(), self.0.d(), self.0.field().p(), self.0.field().degree())
    }
}

/// Switching equivalence of two frames; strategy is auto, triples or general.
#[pyfunction]
#[pyo3(signature = (a, b, strategy = "auto"))]
fn switching_equivalent<'py>(py: Python<'py>, a: &PyFrame, b: &PyFrame, strategy: &str) -> PyResult<Bound<'py, PyAny>> {
    let s = strategy_from_str(strategy).map_err(err)?;
    let cert = switching_equiv(&a.0, &b.0, s).map_err(err)?;
    to_py(py, &switching_to_json(a.0.field(), &cert))
}

/// t-design check; blocks are 1-based.
#[pyfunction]
#[pyo3(signature = (points, blocks, t = 2))]
fn design<'py>(py: Python<'py>, points: usize, blocks: Vec<Vec<usize>>, t: usize) -> PyResult<Bound<'py, PyAny>> {
    let (n, blocks, t) =
        design_input_from_json(&json!({ "points": points, "blocks": blocks }), Some(t)).map_err(err)?;
    let d = design_verify(n, &blocks, t).map_err(err)?;
    to_py(py, &design_to_json(&d))
}

/// Runs a search spec (dict or JSON text) and returns the result with frames.
#[pyfunction]
fn search<'py>(py: Python<'py>, spec: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let spec = search_spec_from_json(&to_value(spec)?).map_err(err)?;
    let res = search_equiangular(&spec).map_err(err)?;
    to_py(py, &search_result_to_json(&spec, &res))
}

/// The command line, e.g. run_cli(["etf", "--input", "hesse.json"]); returns the exit code.
#[pyfunction]
fn run_cli(args: Vec<String>) -> i32 {
    ffframes_core::cli::run_cli(std::iter::once("ffframes".to_string()).chain(args))
}

#[pymodule]
fn ffframes(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyFrame>()?;
    m.add_function(wrap_pyfunction!(switching_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(design, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("FfframesError", m.py().get_type::<FfframesError>())?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    Ok(())
}

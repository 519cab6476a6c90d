use std::path::PathBuf;

use ::hitcell::driver::{run_source, Command, Options};
use ::hitcell::surface::{parse_term, ParseEnv};
use ::hitcell::{builtin_schemas, pretty_print, Checker, Context, Signature, Term};
use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn prelude_sig() -> Signature {
    let mut sig = Signature::new();
    for s in builtin_schemas() {
        sig.add_schema(s);
    }
    sig
}

fn closed(text: &str) -> PyResult<Term> {
    parse_term(text, &[], &ParseEnv::prelude()).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Runs driver commands on in-memory sources and kernel queries on closed
/// terms over the builtin schemas.
#[pyclass(frozen)]
struct Session {
    prelude: Option<PathBuf>,
}

impl Session {
    fn run<'py>(
        &self,
        py: Python<'py>,
        cmd: Command,
        source: &str,
        file: &str,
        opts: Options,
    ) -> PyResult<Bound<'py, PyDict>> {
        let opts = Options {
            prelude: self.prelude.clone(),
            ..opts
        };
        let out = py.detach(|| run_source(cmd, file, source, &opts));
        let json = py.import("json")?;
        let report = json
            .call_method1("loads", (out.report.to_json(),))?
            .cast_into::<PyDict>()?;
        report.set_item("exit", out.exit)?;
        Ok(report)
    }
}

#[pymethods]
impl Session {
    #[new]
    #[pyo3(signature = (prelude = None))]
    fn new(prelude: Option<PathBuf>) -> Self {
        Session { prelude }
    }

    /// Typechecks a module; returns the JSON report as a dict plus `exit`.
    #[pyo3(signature = (source, file = "<input>"))]
    fn check<'py>(
        &self,
        py: Python<'py>,
        source: &str,
        file: &str,
    ) -> PyResult<Bound<'py, PyDict>> {
        self.run(py, Command::Check, source, file, Options::default())
    }

    /// Validates schema declarations only.
    #[pyo3(signature = (source, file = "<input>"))]
    fn lint<'py>(&self, py: Python<'py>, source: &str, file: &str) -> PyResult<Bound<'py, PyDict>> {
        self.run(py, Command::Lint, source, file, Options::default())
    }

    /// Checks a module, then evaluates its eval requests.
    #[pyo3(signature = (source, request = None, fuel = None, check_initiality = None, file = "<input>"))]
    fn eval<'py>(
        &self,
        py: Python<'py>,
        source: &str,
        request: Option<String>,
        fuel: Option<usize>,
        check_initiality: Option<usize>,
        file: &str,
    ) -> PyResult<Bound<'py, PyDict>> {
        let opts = Options {
            request,
            fuel,
            check_initiality,
            ..Options::default()
        };
        self.run(py, Command::Eval, source, file, opts)
    }

    /// The inferred type of a closed term, pretty-printed.
    fn infer(&self, term: &str) -> PyResult<String> {
        let t = closed(term)?;
        let sig = prelude_sig();
        let ty = Checker::new(&sig)
            .infer(&Context::new(), &t)
            .map_err(|e| PyTypeError::new_err(e.to_string()))?;
        Ok(pretty_print(&ty, &[]))
    }

    /// The normal form of a closed term, pretty-printed.
    fn normalize(&self, term: &str) -> PyResult<String> {
        let t = closed(term)?;
        let sig = prelude_sig();
        let nf = Checker::new(&sig)
            .normalize(&t)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(pretty_print(&nf, &[]))
    }

    /// Whether two closed terms have alpha-equal normal forms.
    fn def_equal(&self, a: &str, b: &str) -> PyResult<bool> {
        let (a, b) = (closed(a)?, closed(b)?);
        let sig = prelude_sig();
        Checker::new(&sig)
            .def_equal(&a, &b)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }
}

#[pymodule(name = "hitcell")]
fn hitcell_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Session>()?;
    Ok(())
}

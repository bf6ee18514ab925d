//! Python bindings for the entropy estimators.
//!
//! Reports that already serialize to JSON on the Rust side are handed to
//! Python as plain dicts.

use std::collections::HashMap;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use entropy_chain::catalg::CatalgConfig;
use entropy_chain::dynamics::{
    capacity_entropy as sampled_capacity, capacity_entropy_exact, curve_volume_growth, MapSystem,
    OrbitGraphSpec,
};
use entropy_chain::harness::{
    compare_entropies, crofton_series, parse_curve, sup_inf_sweep, CompareFailure,
    ComparisonReport, ExperimentConfig, DEFAULT_CURVE_TOLERANCE,
};
use entropy_chain::persistence::{
    barcode as reduce_barcode, count_b_epsilon, parse_fcx, write_fcx, BarLength,
};
use entropy_chain::rational::{parse_rational, to_f64};

create_exception!(entropy_chain_py, EntropyChainError, PyException);

fn err(e: entropy_chain::Error) -> PyErr {
    EntropyChainError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn config(text: &str) -> PyResult<ExperimentConfig> {
    let cfg = ExperimentConfig::parse(text).map_err(err)?;
    cfg.validate().map_err(err)?;
    Ok(cfg)
}

/// A filtered chain complex over F2 with rational actions.
#[pyclass(name = "FilteredComplex", module = "entropy_chain_py")]
struct PyComplex {
    inner: entropy_chain::persistence::FilteredComplex,
}

#[pymethods]
impl PyComplex {
    /// Parses the `fcx v1` text format.
    #[staticmethod]
    fn from_fcx(text: &str) -> PyResult<Self> {
        Ok(PyComplex {
            inner: parse_fcx(text).map_err(err)?,
        })
    }

    fn to_fcx(&self) -> String {
        write_fcx(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Bar lengths as exact strings, `"inf"` for infinite bars.
    fn barcode(&self) -> PyResult<Vec<String>> {
        let b = reduce_barcode(&self.inner).map_err(err)?;
        Ok(b.bars().iter().map(|l| l.to_string()).collect())
    }

    /// Bar lengths as floats.
    fn barcode_f64(&self) -> PyResult<Vec<f64>> {
        let b = reduce_barcode(&self.inner).map_err(err)?;
        Ok(b.bars()
            .iter()
            .map(|l| match l {
                BarLength::Finite(r) => to_f64(r),
                BarLength::Infinite => f64::INFINITY,
            })
            .collect())
    }

    /// Number of bars of length at least `epsilon` (a rational such as `"1/8"`).
    fn b_epsilon(&self, epsilon: &str) -> PyResult<usize> {
        let b = reduce_barcode(&self.inner).map_err(err)?;
        let e = parse_rational(epsilon).map_err(err)?;
        count_b_epsilon(&b, BarLength::Finite(e)).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("FilteredComplex({} generators)", self.inner.len())
    }
}

/// Result of `compare`: estimates plus inequality verdicts.
#[pyclass(name = "ComparisonReport", module = "entropy_chain_py")]
struct PyReport {
    inner: ComparisonReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn h_cat(&self) -> Option<f64> {
        self.inner.h_cat_model.map(|e| e.value)
    }

    #[getter]
    fn h_bar(&self) -> Option<f64> {
        self.inner.h_bar.map(|e| e.value)
    }

    #[getter]
    fn h_top_capacity(&self) -> Option<f64> {
        self.inner.h_top_capacity.map(|e| e.value)
    }

    #[getter]
    fn h_top_volume(&self) -> Option<f64> {
        self.inner.h_top_volume.map(|e| e.value)
    }

    #[getter]
    fn all_pass(&self) -> bool {
        self.inner.all_pass()
    }

    #[getter]
    fn spread(&self) -> f64 {
        self.inner.spread()
    }

    /// One summary line per verdict.
    fn verdicts(&self) -> Vec<String> {
        self.inner.verdicts.iter().map(|v| v.summary()).collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    /// File name to contents, as written by the CLI.
    fn artifacts(&self) -> HashMap<String, String> {
        self.inner.artifacts().into_iter().collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "ComparisonReport(system={:?}, all_pass={})",
            self.inner.system,
            self.inner.all_pass()
        )
    }
}

/// Categorical entropy report of a twist word on a plumbing tree.
#[pyfunction]
#[pyo3(signature = (tree, word, parity = "even", n_max = 30))]
fn catalg_report<'py>(
    py: Python<'py>,
    tree: &str,
    word: &str,
    parity: &str,
    n_max: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let text = format!("tree: {tree}\nword: {word}\nparity: {parity}\nn_max: {n_max}\n");
    let report = CatalgConfig::parse(&text)
        .and_then(|c| c.run())
        .map_err(err)?;
    json_to_py(py, &serde_json::to_string(&report).expect("report serializes"))
}

/// Capacity entropy of a map given by its config spec (`cat`, `horseshoe 1/3 3`, ...).
/// Without `grid` the occupied boxes are enumerated exactly.
#[pyfunction]
#[pyo3(signature = (system, ks, epsilons, grid = None))]
fn capacity_entropy(
    system: &str,
    ks: Vec<usize>,
    epsilons: Vec<f64>,
    grid: Option<usize>,
) -> PyResult<f64> {
    let map = MapSystem::parse(system).map_err(err)?;
    let est = match grid {
        None => capacity_entropy_exact(&map, &ks, &epsilons),
        Some(g) => OrbitGraphSpec::schedule(&ks, &epsilons, g)
            .and_then(|s| sampled_capacity(&map, &s)),
    }
    .map_err(err)?;
    Ok(est.value())
}

/// Exponential growth rate of the length of `φⁿ(curve)`.
#[pyfunction]
fn volume_growth(system: &str, curve: &str, n_max: usize) -> PyResult<f64> {
    let map = MapSystem::parse(system).map_err(err)?;
    let c = parse_curve(curve, DEFAULT_CURVE_TOLERANCE).map_err(err)?;
    Ok(curve_volume_growth(&map, &c, n_max)
        .map_err(err)?
        .estimate
        .value)
}

/// Runs the full comparison for a key-value config text.
#[pyfunction]
fn compare(config_text: &str) -> PyResult<PyReport> {
    match compare_entropies(&config(config_text)?) {
        Ok(inner) => Ok(PyReport { inner }),
        Err(CompareFailure::Config(e)) => Err(err(e)),
        Err(CompareFailure::Estimator {
            estimator, error, ..
        }) => Err(EntropyChainError::new_err(format!(
            "{estimator} estimator failed: {error}"
        ))),
    }
}

#[pyfunction]
fn sweep<'py>(py: Python<'py>, config_text: &str) -> PyResult<Bound<'py, PyAny>> {
    let table = sup_inf_sweep(&config(config_text)?).map_err(err)?;
    json_to_py(py, &table.to_json())
}

#[pyfunction]
fn crofton<'py>(py: Python<'py>, config_text: &str) -> PyResult<Bound<'py, PyAny>> {
    let series = crofton_series(&config(config_text)?).map_err(err)?;
    json_to_py(py, &series.to_json())
}

#[pymodule]
fn entropy_chain_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("EntropyChainError", m.py().get_type::<EntropyChainError>())?;
    m.add_class::<PyComplex>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(catalg_report, m)?)?;
    m.add_function(wrap_pyfunction!(capacity_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(volume_growth, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(crofton, m)?)?;
    Ok(())
}

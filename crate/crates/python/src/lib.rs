//! Python bindings for `qam_receiver`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use qam_receiver::bounds::{self, HelstromOptions};
use qam_receiver::cli::{format_csv, ResultRow};
use qam_receiver::constellation::{self, ComplexAmplitude};
use qam_receiver::montecarlo::{self, Preset};
use qam_receiver::receiver::{DetectorKind, DetectorModel, ReceiverParams};
use qam_receiver::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NotConverged { .. } | Error::Io(_) | Error::Json(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Coherent-state constellation with prior probabilities.
#[pyclass(name = "Constellation", module = "qam_receiver", frozen)]
struct PyConstellation {
    inner: constellation::Constellation,
}

#[pymethods]
impl PyConstellation {
    #[new]
    #[pyo3(signature = (points, priors=None, alpha=1.0))]
    fn new(points: Vec<ComplexAmplitude>, priors: Option<Vec<f64>>, alpha: f64) -> PyResult<Self> {
        let inner = match priors {
            Some(p) => constellation::Constellation::new(points, p, alpha),
            None => constellation::Constellation::uniform(points, alpha),
        }
        .map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Square QAM grid scaled to mean photon number `ns`.
    #[staticmethod]
    fn qam(order: usize, ns: f64) -> PyResult<Self> {
        Ok(Self {
            inner: constellation::qam_for_ns(order, ns).map_err(to_py)?,
        })
    }

    /// `{+α, −α}` with equal priors.
    #[staticmethod]
    fn binary(alpha: f64) -> Self {
        Self {
            inner: constellation::Constellation::binary(alpha),
        }
    }

    #[getter]
    fn points(&self) -> Vec<ComplexAmplitude> {
        self.inner.points().to_vec()
    }

    #[getter]
    fn priors(&self) -> Vec<f64> {
        self.inner.priors().to_vec()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn mean_photon_number(&self) -> f64 {
        self.inner.mean_photon_number()
    }

    fn __len__(&self) -> usize {
        self.inner.order()
    }

    fn __repr__(&self) -> String {
        format!(
            "Constellation(order={}, alpha={}, ns={})",
            self.inner.order(),
            self.inner.alpha(),
            self.inner.mean_photon_number()
        )
    }
}

/// Adaptive-feedback receiver settings.
#[pyclass(name = "Receiver", module = "qam_receiver", frozen)]
struct PyReceiver {
    inner: ReceiverParams,
}

#[pymethods]
impl PyReceiver {
    #[new]
    #[pyo3(signature = (n_partitions, detector="onoff", eta=1.0, nu=0.0, tau=1.0, xi=1.0))]
    fn new(
        n_partitions: usize,
        detector: &str,
        eta: f64,
        nu: f64,
        tau: f64,
        xi: f64,
    ) -> PyResult<Self> {
        let kind: DetectorKind = detector.parse().map_err(to_py)?;
        let det = DetectorModel::new(kind, eta, nu).map_err(to_py)?;
        Ok(Self {
            inner: ReceiverParams::new(n_partitions, tau, xi, det).map_err(to_py)?,
        })
    }

    #[getter]
    fn n_partitions(&self) -> usize {
        self.inner.n_partitions
    }

    #[getter]
    fn detector(&self) -> String {
        self.inner.detector.kind.to_string()
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "Receiver(n_partitions={}, detector='{}', eta={}, nu={}, tau={}, xi={})",
            p.n_partitions, p.detector.kind, p.detector.eta, p.detector.nu, p.tau, p.xi
        )
    }
}

/// Monte Carlo symbol error rate.
#[pyclass(name = "SerEstimate", module = "qam_receiver", frozen, get_all)]
struct PySerEstimate {
    errors: u64,
    trials: u64,
    ser: f64,
    std_err: f64,
    seed: u64,
}

#[pymethods]
impl PySerEstimate {
    fn __repr__(&self) -> String {
        format!(
            "SerEstimate(ser={}, std_err={}, errors={}, trials={}, seed={})",
            self.ser, self.std_err, self.errors, self.trials, self.seed
        )
    }
}

#[pyfunction]
fn alpha_for_ns(order: usize, ns: f64) -> PyResult<f64> {
    constellation::alpha_for_ns(order, ns).map_err(to_py)
}

#[pyfunction]
fn sql_error_rate(order: usize, ns: f64) -> PyResult<f64> {
    bounds::sql_error_rate(order, ns).map_err(to_py)
}

#[pyfunction]
fn srm_error_rate(c: &PyConstellation) -> PyResult<f64> {
    bounds::srm_error_rate(&c.inner).map_err(to_py)
}

/// Row-stochastic `P(decided | sent)` of the square-root measurement.
#[pyfunction]
fn srm_confusion(c: &PyConstellation) -> PyResult<Vec<Vec<f64>>> {
    Ok(bounds::srm_confusion(&c.inner)
        .map_err(to_py)?
        .rows()
        .to_vec())
}

#[pyfunction]
#[pyo3(signature = (c, epsilon=1e-8, tol=1e-6, max_iter=5000))]
fn helstrom_error_rate(
    py: Python<'_>,
    c: &PyConstellation,
    epsilon: f64,
    tol: f64,
    max_iter: usize,
) -> PyResult<f64> {
    let opts = HelstromOptions {
        epsilon,
        tol,
        max_iter,
    };
    let c = c.inner.clone();
    py.detach(move || bounds::helstrom_error_rate(&c, &opts))
        .map(|s| s.p_err)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (c, receiver, trials=10_000, seed=1))]
fn estimate_ser(
    py: Python<'_>,
    c: &PyConstellation,
    receiver: &PyReceiver,
    trials: u64,
    seed: u64,
) -> PyResult<PySerEstimate> {
    let (c, params) = (c.inner.clone(), receiver.inner);
    let e = py
        .detach(move || montecarlo::estimate_ser(&c, &params, trials, seed))
        .map_err(to_py)?;
    Ok(PySerEstimate {
        errors: e.errors,
        trials: e.trials,
        ser: e.ser,
        std_err: e.std_err,
        seed: e.seed,
    })
}

/// SER by enumerating every count sequence; finite-resolution detectors only.
#[pyfunction]
fn exact_ser(py: Python<'_>, c: &PyConstellation, receiver: &PyReceiver) -> PyResult<f64> {
    let (c, params) = (c.inner.clone(), receiver.inner);
    py.detach(move || montecarlo::exact_ser(&c, &params))
        .map_err(to_py)
}

/// Runs a named figure preset and returns the CSV table.
#[pyfunction]
#[pyo3(signature = (name, trials=10_000, seed=1))]
fn preset_csv(py: Python<'_>, name: &str, trials: u64, seed: u64) -> PyResult<String> {
    let preset: Preset = name.parse().map_err(to_py)?;
    py.detach(move || {
        let rows = montecarlo::run_sweep(&preset.spec(trials, seed))?;
        let rows = rows
            .iter()
            .map(ResultRow::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(format_csv(&rows))
    })
    .map_err(to_py)
}

#[pymodule(name = "qam_receiver")]
fn qam_receiver_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyConstellation>()?;
    m.add_class::<PyReceiver>()?;
    m.add_class::<PySerEstimate>()?;
    m.add_function(wrap_pyfunction!(alpha_for_ns, m)?)?;
    m.add_function(wrap_pyfunction!(sql_error_rate, m)?)?;
    m.add_function(wrap_pyfunction!(srm_error_rate, m)?)?;
    m.add_function(wrap_pyfunction!(srm_confusion, m)?)?;
    m.add_function(wrap_pyfunction!(helstrom_error_rate, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_ser, m)?)?;
    m.add_function(wrap_pyfunction!(exact_ser, m)?)?;
    m.add_function(wrap_pyfunction!(preset_csv, m)?)?;
    Ok(())
}

//! Python bindings for qgeo: density-matrix construction, entanglement
//! measures, the monotone Riemannian metric, channels, and the relation
//! audit.

use std::path::Path;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qgeo::geometry::{channel_by_spec, MonotonicityVerdict};
use qgeo::relations::{registry, relation_by_id, AuditEngine};
use qgeo::states::{load_state, save_state};
use qgeo::{McFunction, Pauli, Subsystem};

fn py_err(e: qgeo::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn subsystem_from(index: u8) -> PyResult<Subsystem> {
    match index {
        1 => Ok(Subsystem::First),
        2 => Ok(Subsystem::Second),
        other => Err(PyValueError::new_err(format!(
            "subsystem must be 1 or 2, got {other}"
        ))),
    }
}

fn pauli_from(name: &str) -> PyResult<Pauli> {
    match name {
        "sx" => Ok(Pauli::X),
        "sy" => Ok(Pauli::Y),
        "sz" => Ok(Pauli::Z),
        other => Err(PyValueError::new_err(format!(
            "generator must be sx|sy|sz, got '{other}'"
        ))),
    }
}

/// Two-qubit or single-qubit density matrix.
#[pyclass(frozen)]
struct DensityMatrix {
    inner: qgeo::DensityMatrix,
}

impl DensityMatrix {
    fn wrap(r: qgeo::error::Result<qgeo::DensityMatrix>) -> PyResult<Self> {
        r.map(|inner| Self { inner }).map_err(py_err)
    }
}

#[pymethods]
impl DensityMatrix {
    /// Projector onto alpha|00> + sqrt(1-alpha^2)|11>.
    #[staticmethod]
    fn pure_schmidt(alpha: f64) -> PyResult<Self> {
        Self::wrap(qgeo::pure_schmidt(alpha))
    }

    /// The |Phi+> Bell projector.
    #[staticmethod]
    fn bell() -> Self {
        Self {
            inner: qgeo::bell(),
        }
    }

    #[staticmethod]
    fn mems_rank4(p2: f64, p4: f64) -> PyResult<Self> {
        Self::wrap(qgeo::mems_rank4(p2, p4))
    }

    #[staticmethod]
    fn mems_rank3(p2: f64) -> PyResult<Self> {
        Self::wrap(qgeo::mems_rank3(p2))
    }

    #[staticmethod]
    fn mems_rank2(p1: f64) -> PyResult<Self> {
        Self::wrap(qgeo::mems_rank2(p1))
    }

    #[staticmethod]
    fn mjw_mems(r: f64) -> PyResult<Self> {
        Self::wrap(qgeo::mjw_mems(r))
    }

    #[staticmethod]
    fn nmems(p: f64, alpha: f64) -> PyResult<Self> {
        Self::wrap(qgeo::nmems(p, alpha))
    }

    /// Builds and validates a state from real and imaginary parts given as
    /// row-major nested lists (2x2 or 4x4).
    #[staticmethod]
    fn from_parts(re: Vec<Vec<f64>>, im: Vec<Vec<f64>>) -> PyResult<Self> {
        let n = re.len();
        if im.len() != n || re.iter().chain(&im).any(|row| row.len() != n) {
            return Err(PyValueError::new_err(
                "re and im must be square and equally sized",
            ));
        }
        let mut data = Vec::with_capacity(n * n);
        for (r_row, i_row) in re.iter().zip(&im) {
            for (&a, &b) in r_row.iter().zip(i_row) {
                data.push(num_complex::Complex64::new(a, b));
            }
        }
        let mat = qgeo::ComplexMatrix::new(n, n, data).map_err(py_err)?;
        Self::wrap(qgeo::DensityMatrix::new(mat))
    }

    /// Loads a state from the JSON state-file format.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Self::wrap(load_state(Path::new(path)))
    }

    /// Writes the state in the JSON state-file format (17 significant
    /// digits).
    fn save(&self, path: &str) -> PyResult<()> {
        save_state(Path::new(path), &self.inner).map_err(py_err)
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn re(&self) -> Vec<Vec<f64>> {
        let m = self.inner.matrix();
        (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m[(i, j)].re).collect())
            .collect()
    }

    fn im(&self) -> Vec<Vec<f64>> {
        let m = self.inner.matrix();
        (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m[(i, j)].im).collect())
            .collect()
    }

    /// Eigenvalues, non-increasing.
    fn spectrum(&self) -> Vec<f64> {
        self.inner.spectrum()
    }

    fn purity(&self) -> f64 {
        self.inner.purity()
    }

    /// Partial trace keeping subsystem 1 or 2.
    #[pyo3(signature = (subsystem = 1))]
    fn reduce(&self, subsystem: u8) -> PyResult<Self> {
        Self::wrap(self.inner.reduce(subsystem_from(subsystem)?))
    }

    /// Negativity (||rho^T_A||_1 - 1)/2, in [0, 1/2].
    fn negativity(&self) -> PyResult<f64> {
        qgeo::negativity(&self.inner).map_err(py_err)
    }

    /// Wootters concurrence, in [0, 1].
    fn concurrence(&self) -> PyResult<f64> {
        qgeo::concurrence(&self.inner).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "DensityMatrix(dim={}, purity={:.6})",
            self.inner.dim(),
            self.inner.purity()
        )
    }
}

/// Riemannian metric K(i[rho,K], i[rho,K]) at the state (reduced first for
/// two-qubit input) for a Pauli generator and a registered MC function.
#[pyfunction]
#[pyo3(signature = (state, generator = "sx", mc_function = "bures", subsystem = 1))]
fn riemannian_metric(
    state: &DensityMatrix,
    generator: &str,
    mc_function: &str,
    subsystem: u8,
) -> PyResult<f64> {
    let mc = McFunction::by_name(mc_function).map_err(py_err)?;
    let base = if state.inner.dim() == 4 {
        state
            .inner
            .reduce(subsystem_from(subsystem)?)
            .map_err(py_err)?
    } else {
        state.inner.clone()
    };
    let tangent =
        qgeo::tangent_from_generator(&base, &pauli_from(generator)?.matrix()).map_err(py_err)?;
    qgeo::metric_eval(&base, &tangent, &mc).map_err(py_err)
}

/// Applies a Kraus channel given as "name:param" (or "identity"); qubit
/// channels act on both factors of a two-qubit state.
#[pyfunction]
fn apply_channel(state: &DensityMatrix, channel: &str) -> PyResult<DensityMatrix> {
    let ch = channel_by_spec(channel).map_err(py_err)?;
    let ch = if state.inner.dim() == 4 {
        ch.two_qubit_lift().map_err(py_err)?
    } else {
        ch
    };
    let mapped = qgeo::apply_channel(&ch, state.inner.matrix()).map_err(py_err)?;
    DensityMatrix::wrap(qgeo::DensityMatrix::new(mapped))
}

/// Metric contraction check under a channel; returns
/// {"lhs", "rhs", "holds"} or {"skipped": reason}.
#[pyfunction]
#[pyo3(signature = (state, channel, generator = "sx", mc_function = "bures", subsystem = 1))]
fn contraction_check<'py>(
    py: Python<'py>,
    state: &DensityMatrix,
    channel: &str,
    generator: &str,
    mc_function: &str,
    subsystem: u8,
) -> PyResult<Bound<'py, PyDict>> {
    let mc = McFunction::by_name(mc_function).map_err(py_err)?;
    let ch = channel_by_spec(channel).map_err(py_err)?;
    let base = if state.inner.dim() == 4 {
        state
            .inner
            .reduce(subsystem_from(subsystem)?)
            .map_err(py_err)?
    } else {
        state.inner.clone()
    };
    let tangent =
        qgeo::tangent_from_generator(&base, &pauli_from(generator)?.matrix()).map_err(py_err)?;
    let dict = PyDict::new(py);
    match qgeo::monotonicity_check(&base, &tangent, &ch, &mc).map_err(py_err)? {
        MonotonicityVerdict::Checked(rep) => {
            dict.set_item("lhs", rep.lhs)?;
            dict.set_item("rhs", rep.rhs)?;
            dict.set_item("holds", rep.holds)?;
        }
        MonotonicityVerdict::Skipped { reason } => {
            dict.set_item("skipped", reason)?;
        }
    }
    Ok(dict)
}

/// Audits one relation over its parameter grid; returns a summary dict.
#[pyfunction]
#[pyo3(signature = (relation_id, grid_density = 50))]
fn audit_relation<'py>(
    py: Python<'py>,
    relation_id: &str,
    grid_density: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let rel = relation_by_id(relation_id).map_err(py_err)?;
    let outcome = AuditEngine::default()
        .audit(&rel, grid_density)
        .map_err(py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("relation_id", outcome.relation_id)?;
    dict.set_item("family", outcome.family.name())?;
    dict.set_item("verdict", outcome.verdict.to_string())?;
    dict.set_item("published_form", outcome.published_text)?;
    dict.set_item("corrected_form", outcome.corrected_text)?;
    dict.set_item("points", outcome.evaluated)?;
    dict.set_item("skipped", outcome.skipped)?;
    dict.set_item("max_residual_published", outcome.max_residual_published)?;
    dict.set_item("max_residual_corrected", outcome.max_residual_corrected)?;
    Ok(dict)
}

/// Ids of every registered relation.
#[pyfunction]
fn relation_ids() -> Vec<&'static str> {
    registry().iter().map(|r| r.id).collect()
}

/// Names of the registered MC functions.
#[pyfunction]
fn mc_function_names() -> Vec<&'static str> {
    McFunction::registered_names().to_vec()
}

#[pymodule]
fn qgeo_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<DensityMatrix>()?;
    m.add_function(wrap_pyfunction!(riemannian_metric, m)?)?;
    m.add_function(wrap_pyfunction!(apply_channel, m)?)?;
    m.add_function(wrap_pyfunction!(contraction_check, m)?)?;
    m.add_function(wrap_pyfunction!(audit_relation, m)?)?;
    m.add_function(wrap_pyfunction!(relation_ids, m)?)?;
    m.add_function(wrap_pyfunction!(mc_function_names, m)?)?;
    Ok(())
}

//! Python bindings: `import trapped_ion_cnot`.
//!
//! Frequencies are angular (rad/s) unless the argument name ends in `_hz`;
//! pulse areas `Omega t` are dimensionless.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use ion_cnot as core;
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(trapped_ion_cnot, IonCnotError, PyValueError);
create_exception!(trapped_ion_cnot, NoSolutionError, IonCnotError);
create_exception!(trapped_ion_cnot, DegenerateEtaError, IonCnotError);
create_exception!(trapped_ion_cnot, TruncationError, IonCnotError);

fn to_py(err: core::Error) -> PyErr {
    let msg = err.to_string();
    match err {
        core::Error::NoSolution { .. } => NoSolutionError::new_err(msg),
        core::Error::DegenerateEta { .. } => DegenerateEtaError::new_err(msg),
        core::Error::Truncation { .. }
        | core::Error::TruncationLeakage { .. }
        | core::Error::TruncationNotConverged { .. } => TruncationError::new_err(msg),
        _ => IonCnotError::new_err(msg),
    }
}

fn ld(value: f64) -> PyResult<core::LDParameter> {
    core::LDParameter::new(value).map_err(to_py)
}

type Matrix = Vec<Vec<Complex64>>;

fn matrix(u: &core::SubspaceUnitary) -> Matrix {
    u.rows().iter().map(|r| r.to_vec()).collect()
}

/// Duration-search settings; `omega_t_max` is the budget as a pulse area.
#[pyclass(name = "SearchConfig", get_all, set_all, from_py_object)]
#[derive(Clone, Copy)]
pub struct PySearchConfig {
    pub omega_t_max: f64,
    pub grid_step: f64,
    pub refine_tol: f64,
    pub objective_floor: f64,
}

#[pymethods]
impl PySearchConfig {
    #[new]
    #[pyo3(signature = (omega_t_max=360.0, grid_step=0.01, refine_tol=1e-9, objective_floor=0.9))]
    fn new(
        omega_t_max: f64,
        grid_step: f64,
        refine_tol: f64,
        objective_floor: f64,
    ) -> PyResult<Self> {
        let cfg = Self {
            omega_t_max,
            grid_step,
            refine_tol,
            objective_floor,
        };
        cfg.inner().validate().map_err(to_py)?;
        Ok(cfg)
    }

    fn __repr__(&self) -> String {
        format!(
            "SearchConfig(omega_t_max={}, grid_step={}, refine_tol={}, objective_floor={})",
            self.omega_t_max, self.grid_step, self.refine_tol, self.objective_floor
        )
    }
}

impl PySearchConfig {
    fn inner(&self) -> core::SearchConfig {
        core::SearchConfig {
            omega_t_max: self.omega_t_max,
            grid_step: self.grid_step,
            refine_tol: self.refine_tol,
            objective_floor: self.objective_floor,
        }
    }
}

fn search_config(config: Option<PySearchConfig>) -> core::SearchConfig {
    config.map_or_else(core::SearchConfig::default, |c| c.inner())
}

#[pyclass(name = "OptimizationResult", get_all, frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
pub struct PyOptimizationResult {
    pub eta: f64,
    pub omega_t1: f64,
    pub c11: f64,
    pub c12: f64,
    pub c33: f64,
    pub c34: f64,
    pub objective: f64,
}

impl From<core::OptimizationResult> for PyOptimizationResult {
    fn from(r: core::OptimizationResult) -> Self {
        Self {
            eta: r.eta,
            omega_t1: r.omega_t1,
            c11: r.c11,
            c12: r.c12,
            c33: r.c33,
            c34: r.c34,
            objective: r.objective,
        }
    }
}

#[pymethods]
impl PyOptimizationResult {
    fn __repr__(&self) -> String {
        format!(
            "OptimizationResult(eta={}, omega_t1={:.4}, c11={:.5}, c12={:.5}, c33={:.5}, c34={:.5})",
            self.eta, self.omega_t1, self.c11, self.c12, self.c33, self.c34
        )
    }
}

/// Carrier pulse + ideal controlled-Z, compared with the CNOT.
#[pyclass(name = "Synthesis", get_all, frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PySynthesis {
    pub optimization: PyOptimizationResult,
    pub theta1: f64,
    pub gate: Matrix,
    pub fidelity_trace: f64,
    pub fidelity_worst_element: f64,
    /// Seconds.
    pub cz_duration: f64,
}

#[pymethods]
impl PySynthesis {
    fn __repr__(&self) -> String {
        format!(
            "Synthesis(eta={}, omega_t1={:.4}, fidelity_trace={:.6}, fidelity_worst_element={:.6}, cz_duration={:.4e})",
            self.optimization.eta,
            self.optimization.omega_t1,
            self.fidelity_trace,
            self.fidelity_worst_element,
            self.cz_duration
        )
    }
}

#[pyclass(name = "SensitivityReport", get_all, frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
pub struct PySensitivityReport {
    pub eta: f64,
    pub omega_t1: f64,
    pub area_shift: f64,
    pub nominal_c11: f64,
    pub nominal_c34: f64,
    pub perturbed_c11: f64,
    pub perturbed_c34: f64,
    pub drop_c11: f64,
    pub drop_c34: f64,
}

#[pymethods]
impl PySensitivityReport {
    #[getter]
    fn worst_drop(&self) -> f64 {
        self.drop_c11.max(self.drop_c34)
    }
}

/// Generalized Laguerre polynomial `L_m^k(x)`.
#[pyfunction]
pub fn laguerre(m: usize, k: usize, x: f64) -> PyResult<f64> {
    core::laguerre_assoc(m, k, x).map_err(to_py)
}

/// `Omega_{m,k}` in the units of `omega`.
#[pyfunction]
pub fn effective_rabi(omega: f64, eta: f64, m: usize, k: usize) -> PyResult<f64> {
    Ok(core::effective_rabi(omega, ld(eta)?, m, k)
        .map_err(to_py)?
        .value())
}

/// `<row| exp[i eta (a + a^dag)] |col>`.
#[pyfunction]
pub fn displacement_element(eta: f64, row: usize, col: usize) -> PyResult<Complex64> {
    core::displacement_element(ld(eta)?, row, col).map_err(to_py)
}

/// `(c11, c12, c33, c34)` after a carrier pulse of area `omega_t1`.
#[pyfunction]
pub fn carrier_amplitudes(omega_t1: f64, eta: f64) -> PyResult<(f64, f64, f64, f64)> {
    let a = core::carrier_amplitudes(omega_t1, ld(eta)?);
    Ok((a.c11, a.c12, a.c33, a.c34))
}

/// 4x4 carrier unitary on (|0g>, |0e>, |1g>, |1e>) as nested lists.
#[pyfunction]
#[pyo3(signature = (omega_t1, eta, theta1=FRAC_PI_2))]
pub fn carrier_matrix(omega_t1: f64, eta: f64, theta1: f64) -> PyResult<Matrix> {
    let u = core::carrier_matrix(omega_t1, ld(eta)?, theta1).map_err(to_py)?;
    Ok(matrix(&u))
}

#[pyfunction]
pub fn objective(omega_t1: f64, eta: f64) -> PyResult<f64> {
    Ok(core::objective(omega_t1, ld(eta)?))
}

#[pyfunction]
#[pyo3(signature = (eta, config=None))]
pub fn search_duration(eta: f64, config: Option<PySearchConfig>) -> PyResult<PyOptimizationResult> {
    let cfg = search_config(config);
    Ok(core::search_duration(ld(eta)?, &cfg).map_err(to_py)?.into())
}

/// `(eta, result, error)` per grid point; exactly one of the last two is `None`.
#[pyfunction]
#[pyo3(signature = (start=0.18, end=0.98, step=0.02, config=None))]
pub fn reproduce_table(
    start: f64,
    end: f64,
    step: f64,
    config: Option<PySearchConfig>,
) -> Vec<(f64, Option<PyOptimizationResult>, Option<String>)> {
    let cfg = search_config(config);
    core::reproduce_table(start, end, step, &cfg)
        .into_iter()
        .map(|row| match row.outcome {
            Ok(r) => (row.eta, Some(r.into()), None),
            Err(e) => (row.eta, None, Some(e.to_string())),
        })
        .collect()
}

/// `(eta, omega_t1)` of the exact solution labelled by `(n, m)`.
#[pyfunction]
pub fn magic_parameters(n: u32, m: u32) -> PyResult<(f64, f64)> {
    let (e, x) = core::magic_parameters(n, m).map_err(to_py)?;
    Ok((e.value(), x))
}

/// `(n, m, eta, omega_t1)` for every exact solution in the interval.
#[pyfunction]
#[pyo3(signature = (eta_lo, eta_hi, budget=360.0))]
pub fn enumerate_magic(eta_lo: f64, eta_hi: f64, budget: f64) -> Vec<(u32, u32, f64, f64)> {
    core::enumerate_magic(eta_lo, eta_hi, budget)
        .into_iter()
        .map(|p| (p.n, p.m, p.eta.value(), p.omega_t1))
        .collect()
}

#[pyfunction]
#[pyo3(signature = (eta, omega_hz=500e3, config=None, theta1=FRAC_PI_2))]
pub fn synthesize(
    eta: f64,
    omega_hz: f64,
    config: Option<PySearchConfig>,
    theta1: f64,
) -> PyResult<PySynthesis> {
    let cfg = search_config(config);
    let s = core::synthesize_with_phase(ld(eta)?, TAU * omega_hz, &cfg, theta1).map_err(to_py)?;
    Ok(PySynthesis {
        optimization: s.optimization.into(),
        theta1: s.theta1,
        gate: matrix(&s.report.gate),
        fidelity_trace: s.report.fidelity_trace,
        fidelity_worst_element: s.report.fidelity_worst_element,
        cz_duration: s.cz_duration,
    })
}

/// `dt` in seconds.
#[pyfunction]
#[pyo3(signature = (eta, omega_t1, dt, omega_hz=500e3))]
pub fn sensitivity(
    eta: f64,
    omega_t1: f64,
    dt: f64,
    omega_hz: f64,
) -> PyResult<PySensitivityReport> {
    let r = core::sensitivity(ld(eta)?, omega_t1, TAU * omega_hz, dt).map_err(to_py)?;
    Ok(PySensitivityReport {
        eta: r.eta,
        omega_t1: r.omega_t1,
        area_shift: r.area_shift,
        nominal_c11: r.nominal_c11,
        nominal_c34: r.nominal_c34,
        perturbed_c11: r.perturbed_c11,
        perturbed_c34: r.perturbed_c34,
        drop_c11: r.drop_c11,
        drop_c34: r.drop_c34,
    })
}

/// Controlled-Z duration in seconds.
#[pyfunction]
#[pyo3(signature = (eta, omega_hz=500e3))]
pub fn cz_duration(eta: f64, omega_hz: f64) -> PyResult<f64> {
    core::cz_duration(ld(eta)?, TAU * omega_hz).map_err(to_py)
}

/// `(k, eta, truncation, max_deviation)` per cell of the default oracle grid.
#[pyfunction]
pub fn compare_with_oracle() -> PyResult<Vec<(usize, f64, usize, f64)>> {
    let cells = core::compare_with_oracle(&core::OracleGrid::default()).map_err(to_py)?;
    Ok(cells
        .into_iter()
        .map(|c| (c.k, c.eta, c.truncation, c.max_deviation))
        .collect())
}

/// Rotating-wave error after a pulse of area `pi` from `|0, g>`.
#[pyfunction]
#[pyo3(signature = (eta, k, omega_over_nu, truncation=16))]
pub fn rwa_deviation(eta: f64, k: usize, omega_over_nu: f64, truncation: usize) -> PyResult<f64> {
    let drive = core::SidebandDrive::resonant(ld(eta)?, 1.0, 0.0, 1.0 / omega_over_nu, k);
    let start = core::JointState::basis(truncation, 0, core::Level::Ground).map_err(to_py)?;
    core::rwa_deviation(&drive, PI, &start).map_err(to_py)
}

#[pyfunction]
pub fn cnot_target() -> Matrix {
    matrix(&core::cnot_target())
}

#[pymodule]
fn trapped_ion_cnot(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("IonCnotError", py.get_type::<IonCnotError>())?;
    m.add("NoSolutionError", py.get_type::<NoSolutionError>())?;
    m.add("DegenerateEtaError", py.get_type::<DegenerateEtaError>())?;
    m.add("TruncationError", py.get_type::<TruncationError>())?;
    m.add_class::<PySearchConfig>()?;
    m.add_class::<PyOptimizationResult>()?;
    m.add_class::<PySynthesis>()?;
    m.add_class::<PySensitivityReport>()?;
    m.add_function(wrap_pyfunction!(laguerre, m)?)?;
    m.add_function(wrap_pyfunction!(effective_rabi, m)?)?;
    m.add_function(wrap_pyfunction!(displacement_element, m)?)?;
    m.add_function(wrap_pyfunction!(carrier_amplitudes, m)?)?;
    m.add_function(wrap_pyfunction!(carrier_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(objective, m)?)?;
    m.add_function(wrap_pyfunction!(search_duration, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce_table, m)?)?;
    m.add_function(wrap_pyfunction!(magic_parameters, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_magic, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(sensitivity, m)?)?;
    m.add_function(wrap_pyfunction!(cz_duration, m)?)?;
    m.add_function(wrap_pyfunction!(compare_with_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(rwa_deviation, m)?)?;
    m.add_function(wrap_pyfunction!(cnot_target, m)?)?;
    Ok(())
}

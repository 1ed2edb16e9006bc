//! Python bindings: the parameter type, operator construction, overlap
//! evaluators, trajectory runner and the figure-pipeline helpers.

use num_complex::Complex64 as C64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ptembed::central_spin;
use ptembed::dynamics;
use ptembed::embedding;

fn py_err(e: ptembed::PtError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Physical parameter set (N spins, interaction angle, anisotropy axis).
#[pyclass(name = "ModelParams", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyModelParams {
    inner: embedding::ModelParams,
}

#[pymethods]
impl PyModelParams {
    /// Build from alpha in [0, pi/2).
    #[staticmethod]
    #[pyo3(signature = (n_spins, alpha, theta1 = 0.0, phi1 = 0.0, dense_cap = 8))]
    fn from_alpha(
        n_spins: usize,
        alpha: f64,
        theta1: f64,
        phi1: f64,
        dense_cap: usize,
    ) -> PyResult<Self> {
        let inner = embedding::ModelParams::from_alpha(n_spins, alpha, theta1, phi1)
            .and_then(|p| p.with_dense_cap(dense_cap))
            .map_err(py_err)?;
        Ok(Self { inner })
    }

    /// Build from theta >= 0 directly (large-theta studies).
    #[staticmethod]
    #[pyo3(signature = (n_spins, theta, theta1 = 0.0, phi1 = 0.0, dense_cap = 8))]
    fn from_theta(
        n_spins: usize,
        theta: f64,
        theta1: f64,
        phi1: f64,
        dense_cap: usize,
    ) -> PyResult<Self> {
        let inner = embedding::ModelParams::from_theta(n_spins, theta, theta1, phi1)
            .and_then(|p| p.with_dense_cap(dense_cap))
            .map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n_spins(&self) -> usize {
        self.inner.n_spins()
    }
    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }
    #[getter]
    fn theta(&self) -> f64 {
        self.inner.theta()
    }
    #[getter]
    fn theta1(&self) -> f64 {
        self.inner.theta1()
    }
    #[getter]
    fn phi1(&self) -> f64 {
        self.inner.phi1()
    }
    #[getter]
    fn ln_c(&self) -> f64 {
        self.inner.ln_c()
    }
    #[getter]
    fn c(&self) -> f64 {
        self.inner.c()
    }

    fn __repr__(&self) -> String {
        format!(
            "ModelParams(n_spins={}, alpha={:.6}, theta={:.6}, theta1={:.6}, phi1={:.6})",
            self.inner.n_spins(),
            self.inner.alpha(),
            self.inner.theta(),
            self.inner.theta1(),
            self.inner.phi1()
        )
    }
}

/// Ground-manifold overlap diagnostics.
#[pyclass(name = "OverlapReport", frozen)]
struct PyOverlapReport {
    #[pyo3(get)]
    overlap: C64,
    #[pyo3(get)]
    modulus_sq: f64,
    #[pyo3(get)]
    p2_mean: f64,
    #[pyo3(get)]
    p2q_mean: f64,
    #[pyo3(get)]
    dpmax_log: f64,
    #[pyo3(get)]
    f1: f64,
    #[pyo3(get)]
    f2: f64,
    #[pyo3(get)]
    f3: f64,
    #[pyo3(get)]
    beta: f64,
    #[pyo3(get)]
    method: String,
}

impl From<central_spin::OverlapReport> for PyOverlapReport {
    fn from(r: central_spin::OverlapReport) -> Self {
        Self {
            overlap: r.overlap,
            modulus_sq: r.modulus_sq,
            p2_mean: r.p2_mean,
            p2q_mean: r.p2q_mean,
            dpmax_log: r.dpmax_log,
            f1: r.f1,
            f2: r.f2,
            f3: r.f3,
            beta: r.beta,
            method: match r.method {
                central_spin::OverlapMethod::Dense => "dense".into(),
                central_spin::OverlapMethod::Binomial => "binomial".into(),
            },
        }
    }
}

/// Power-law fit result for f(N) = A - B N^{-gamma}.
#[pyclass(name = "FitResult", frozen)]
struct PyFitResult {
    #[pyo3(get)]
    a_const: f64,
    #[pyo3(get)]
    b_const: f64,
    #[pyo3(get)]
    gamma: f64,
    #[pyo3(get)]
    residual_rms: f64,
}

/// One trajectory grid point.
#[pyclass(name = "TrajectoryPoint", frozen)]
struct PyTrajectoryPoint {
    #[pyo3(get)]
    t: f64,
    #[pyo3(get)]
    success_prob: f64,
    #[pyo3(get)]
    pt_norm: f64,
    #[pyo3(get)]
    euclid_norm: f64,
    #[pyo3(get)]
    oracle_distance: f64,
    #[pyo3(get)]
    postselected_state: Vec<C64>,
}

#[pyfunction]
fn theta_of_alpha(alpha: f64) -> PyResult<f64> {
    embedding::theta_of_alpha(alpha).map_err(py_err)
}

#[pyfunction]
fn alpha_of_theta(theta: f64) -> f64 {
    embedding::alpha_of_theta(theta)
}

#[pyfunction]
fn phi1_star(n_spins: usize) -> f64 {
    central_spin::phi1_star(n_spins)
}

#[pyfunction]
fn dpmax_log(params: &PyModelParams) -> f64 {
    central_spin::dpmax_log(&params.inner)
}

#[pyfunction]
fn f_values(n_spins: usize, beta: f64, phi1: f64, theta1: f64) -> (f64, f64, f64) {
    central_spin::f_values(n_spins, beta, phi1, theta1)
}

#[pyfunction]
fn solve_beta(n_spins: usize, f3_value: f64) -> PyResult<f64> {
    central_spin::solve_beta(n_spins, f3_value).map_err(py_err)
}

#[pyfunction]
fn overlap_binomial(params: &PyModelParams) -> PyOverlapReport {
    central_spin::overlap_binomial(&params.inner).into()
}

#[pyfunction]
fn overlap_dense(params: &PyModelParams) -> PyResult<PyOverlapReport> {
    central_spin::overlap_dense(&params.inner)
        .map(Into::into)
        .map_err(py_err)
}

#[pyfunction]
fn n2_coefficients(alpha: f64) -> PyResult<(f64, f64, f64, f64)> {
    embedding::n2_coefficients(alpha).map_err(py_err)
}

/// Dense total Hamiltonian H_T as a nested list of complex entries.
#[pyfunction]
fn h_total_matrix(params: &PyModelParams) -> PyResult<Vec<Vec<C64>>> {
    let ops = embedding::build_h_total(&params.inner).map_err(py_err)?;
    let (rows, cols) = ops.h_total.dims();
    Ok((0..rows)
        .map(|i| (0..cols).map(|j| ops.h_total[(i, j)]).collect())
        .collect())
}

/// Emergent Pauli-string decomposition of H_T: list of (string, coefficient).
#[pyfunction]
#[pyo3(signature = (params, cutoff = 1e-12))]
fn pauli_terms(params: &PyModelParams, cutoff: f64) -> PyResult<Vec<(String, f64)>> {
    let ops = embedding::build_h_total(&params.inner).map_err(py_err)?;
    let terms = embedding::pauli_decompose(&ops.h_total, cutoff).map_err(py_err)?;
    Ok(terms
        .into_iter()
        .map(|t| (t.string_label(), t.coefficient))
        .collect())
}

#[pyfunction]
fn spin_flip_element(params: &PyModelParams, k: usize) -> PyResult<f64> {
    central_spin::spin_flip_element(&params.inner, k).map_err(py_err)
}

#[pyfunction]
fn bright_entropy(params: &PyModelParams, k: usize) -> PyResult<f64> {
    central_spin::bright_entropy(&params.inner, k).map_err(py_err)
}

#[pyfunction]
fn bath_site_entropy(params: &PyModelParams) -> PyResult<f64> {
    central_spin::bath_site_entropy(&params.inner).map_err(py_err)
}

/// Post-selected trajectory against the non-Hermitian oracle.
/// `initial` is "pt_ground" (default) or "up_z".
#[pyfunction]
#[pyo3(signature = (params, t_grid, initial = "pt_ground"))]
fn run_trajectory(
    params: &PyModelParams,
    t_grid: Vec<f64>,
    initial: &str,
) -> PyResult<Vec<PyTrajectoryPoint>> {
    let psi0 = match initial {
        "pt_ground" => dynamics::default_initial_state(&params.inner).map_err(py_err)?,
        "up_z" => dynamics::up_z_initial_state(&params.inner).map_err(py_err)?,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown initial state '{other}'"
            )))
        }
    };
    let records = dynamics::run_trajectory(&params.inner, &psi0, &t_grid).map_err(py_err)?;
    Ok(records
        .into_iter()
        .map(|r| PyTrajectoryPoint {
            t: r.t,
            success_prob: r.success_prob,
            pt_norm: r.pt_norm,
            euclid_norm: r.euclid_norm,
            oracle_distance: r.oracle_distance,
            postselected_state: r.postselected_state,
        })
        .collect())
}

/// Alpha at which |<B-|B+>|^2 = target for the given N (theta1 = pi/2,
/// phi1 = phi1_star(N)).
#[pyfunction]
#[pyo3(signature = (target_modsq, n_spins, theta1 = std::f64::consts::FRAC_PI_2))]
fn contour_point(target_modsq: f64, n_spins: usize, theta1: f64) -> PyResult<f64> {
    central_spin::contour_point(target_modsq, n_spins, theta1).map_err(py_err)
}

#[pyfunction]
fn power_law_fit(points: Vec<(f64, f64)>) -> PyResult<PyFitResult> {
    let fit = central_spin::power_law_fit(&points).map_err(py_err)?;
    Ok(PyFitResult {
        a_const: fit.a_const,
        b_const: fit.b_const,
        gamma: fit.gamma,
        residual_rms: fit.residual_rms,
    })
}

#[pymodule]
fn ptembed_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModelParams>()?;
    m.add_class::<PyOverlapReport>()?;
    m.add_class::<PyFitResult>()?;
    m.add_class::<PyTrajectoryPoint>()?;
    m.add_function(wrap_pyfunction!(theta_of_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_of_theta, m)?)?;
    m.add_function(wrap_pyfunction!(phi1_star, m)?)?;
    m.add_function(wrap_pyfunction!(dpmax_log, m)?)?;
    m.add_function(wrap_pyfunction!(f_values, m)?)?;
    m.add_function(wrap_pyfunction!(solve_beta, m)?)?;
    m.add_function(wrap_pyfunction!(overlap_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(overlap_dense, m)?)?;
    m.add_function(wrap_pyfunction!(n2_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(h_total_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(pauli_terms, m)?)?;
    m.add_function(wrap_pyfunction!(spin_flip_element, m)?)?;
    m.add_function(wrap_pyfunction!(bright_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(bath_site_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(run_trajectory, m)?)?;
    m.add_function(wrap_pyfunction!(contour_point, m)?)?;
    m.add_function(wrap_pyfunction!(power_law_fit, m)?)?;
    m.add("__version__", ptembed::VERSION)?;
    Ok(())
}

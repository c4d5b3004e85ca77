//! Python bindings for `hypstab`.

use hypstab::spectral::{self, IndexOptions, Scheme};
use hypstab::{geom, hyperbolic, stability, Error};
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn to_py(e: Error) -> PyErr {
    if e.is_invalid_input() {
        PyValueError::new_err(e.to_string())
    } else {
        PyArithmeticError::new_err(e.to_string())
    }
}

/// Converts any serializable value to plain Python objects through JSON.
fn to_python<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_scheme(name: &str) -> PyResult<Scheme> {
    name.parse().map_err(to_py)
}

#[pyclass(
    name = "LorentzVector",
    module = "hypstab_py",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
struct PyLorentzVector(hypstab::LorentzVector);

#[pymethods]
impl PyLorentzVector {
    #[new]
    fn new(coords: Vec<f64>) -> PyResult<Self> {
        hypstab::LorentzVector::new(coords).map(Self).map_err(to_py)
    }

    #[getter]
    fn coords(&self) -> Vec<f64> {
        self.0.coords().to_vec()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn inner(&self, other: &PyLorentzVector) -> PyResult<f64> {
        self.0.inner(&other.0).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("LorentzVector({:?})", self.0.coords())
    }
}

#[pyfunction]
fn minkowski_inner(x: &PyLorentzVector, y: &PyLorentzVector) -> PyResult<f64> {
    geom::minkowski_inner(&x.0, &y.0).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (x, tol=1e-9))]
fn on_hyperboloid(x: &PyLorentzVector, tol: f64) -> PyResult<bool> {
    geom::on_hyperboloid(&x.0, tol).map_err(to_py)
}

#[pyclass(name = "SphericalCatenoid", module = "hypstab_py", frozen)]
struct PySphericalCatenoid(hypstab::SphericalCatenoid);

#[pymethods]
impl PySphericalCatenoid {
    #[new]
    fn new(a: f64) -> PyResult<Self> {
        hypstab::SphericalCatenoid::new(a).map(Self).map_err(to_py)
    }

    #[getter]
    fn a(&self) -> f64 {
        self.0.a()
    }

    fn warp_rho(&self, s: f64) -> f64 {
        self.0.warp_rho(s)
    }

    fn norm_a_sq(&self, s: f64) -> f64 {
        self.0.norm_a_sq(s)
    }

    fn grad_norm_a(&self, s: f64) -> f64 {
        self.0.grad_norm_a(s)
    }

    fn sup_norm_a_sq(&self) -> f64 {
        self.0.sup_norm_a_sq()
    }

    #[pyo3(signature = (s, tol=1e-12))]
    fn phi(&self, s: f64, tol: f64) -> PyResult<f64> {
        self.0.phi(s, tol).map_err(to_py)
    }

    #[pyo3(signature = (s, theta, tol=1e-12))]
    fn embed(&self, s: f64, theta: f64, tol: f64) -> PyResult<PyLorentzVector> {
        self.0
            .embed(s, theta, tol)
            .map(PyLorentzVector)
            .map_err(to_py)
    }

    #[pyo3(signature = (s, theta, h=1e-5))]
    fn metric_residual(&self, s: f64, theta: f64, h: f64) -> PyResult<f64> {
        self.0.metric_residual(s, theta, h).map_err(to_py)
    }

    /// `(value, error_estimate)`.
    #[pyo3(signature = (tol=1e-9))]
    fn total_norm_a_sq(&self, tol: f64) -> PyResult<(f64, f64)> {
        self.0
            .total_norm_a_sq(tol)
            .map(|r| (r.value, r.error_estimate))
            .map_err(to_py)
    }

    #[pyo3(signature = (tol=1e-9))]
    fn total_grad_norm_a_sq(&self, tol: f64) -> PyResult<(f64, f64)> {
        self.0
            .total_grad_norm_a_sq(tol)
            .map(|r| (r.value, r.error_estimate))
            .map_err(to_py)
    }

    #[pyo3(signature = (tol=1e-9))]
    fn stability_functional(&self, tol: f64) -> PyResult<(f64, f64)> {
        self.0
            .stability_functional(tol)
            .map(|r| (r.value, r.error_estimate))
            .map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (tol=1e-6))]
    fn instability_threshold<'py>(py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        let th = hypstab::SphericalCatenoid::instability_threshold(tol).map_err(to_py)?;
        to_python(py, &th)
    }

    /// Morse index report as a dict.
    #[pyo3(signature = (r=10.0, n=2000, m_max=5, k_lowest=3, scheme="galerkin"))]
    fn morse_index<'py>(
        &self,
        py: Python<'py>,
        r: f64,
        n: usize,
        m_max: usize,
        k_lowest: usize,
        scheme: &str,
    ) -> PyResult<Bound<'py, PyAny>> {
        let opts = IndexOptions {
            r,
            n,
            m_max,
            k_lowest,
            scheme: parse_scheme(scheme)?,
        };
        let report = py
            .detach(|| spectral::morse_index(&self.0, &opts))
            .map_err(to_py)?;
        to_python(py, &report)
    }

    fn mode_is_positive_by_bound(&self, m: usize) -> bool {
        spectral::mode_is_positive_by_bound(&self.0, m)
    }

    fn __repr__(&self) -> String {
        format!("SphericalCatenoid(a={})", self.0.a())
    }
}

#[pyclass(name = "SturmLiouvilleDisc", module = "hypstab_py", frozen)]
struct PySturmLiouvilleDisc(hypstab::SturmLiouvilleDisc);

#[pymethods]
impl PySturmLiouvilleDisc {
    /// Mode `m` of the spherical catenoid stability operator on `[−R, R]`.
    #[staticmethod]
    #[pyo3(signature = (catenoid, m, r, n, scheme="galerkin"))]
    fn assemble(
        catenoid: &PySphericalCatenoid,
        m: usize,
        r: f64,
        n: usize,
        scheme: &str,
    ) -> PyResult<Self> {
        spectral::assemble_mode_operator(&catenoid.0, m, r, n, parse_scheme(scheme)?)
            .map(Self)
            .map_err(to_py)
    }

    /// `−(ρ f′)′/ρ + q f` with constant `ρ` and `q` on `[−R, R]`.
    #[staticmethod]
    #[pyo3(signature = (rho, q, r, n, scheme="galerkin"))]
    fn constant(rho: f64, q: f64, r: f64, n: usize, scheme: &str) -> PyResult<Self> {
        hypstab::SturmLiouvilleDisc::from_coefficients(
            |_| rho,
            |_| q,
            r,
            n,
            0,
            parse_scheme(scheme)?,
        )
        .map(Self)
        .map_err(to_py)
    }

    #[getter]
    fn grid(&self) -> Vec<f64> {
        self.0.grid().to_vec()
    }

    #[getter]
    fn weight(&self) -> Vec<f64> {
        self.0.weight().to_vec()
    }

    #[getter]
    fn potential(&self) -> Vec<f64> {
        self.0.potential().to_vec()
    }

    #[getter]
    fn mode(&self) -> usize {
        self.0.mode()
    }

    fn count_negative_eigenvalues(&self) -> usize {
        spectral::count_negative_eigenvalues(&self.0)
    }

    fn lowest_eigenvalues(&self, k: usize) -> Vec<f64> {
        self.0.lowest_eigenvalues(k)
    }
}

#[pyclass(name = "HyperbolicCatenoid", module = "hypstab_py", frozen)]
struct PyHyperbolicCatenoid(hypstab::HyperbolicCatenoid);

#[pymethods]
impl PyHyperbolicCatenoid {
    #[new]
    fn new(n: usize, t: f64) -> PyResult<Self> {
        hypstab::HyperbolicCatenoid::new(n, t)
            .map(Self)
            .map_err(to_py)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn t(&self) -> f64 {
        self.0.t()
    }

    #[getter]
    fn a(&self) -> f64 {
        self.0.a()
    }

    fn sup_norm_a_sq(&self) -> f64 {
        self.0.sup_norm_a_sq()
    }

    fn norm_a_sq_bound(&self) -> f64 {
        self.0.norm_a_sq_bound()
    }

    fn is_stable_by_window(&self) -> bool {
        self.0.is_stable_by_window()
    }

    fn in_nominal_window(&self) -> bool {
        self.0.in_nominal_window()
    }

    /// Profile samples `(s, x, x')` on `[0, s_max]`.
    #[pyo3(signature = (s_max=hyperbolic::DEFAULT_S_MAX, step_tol=hyperbolic::DEFAULT_STEP_TOL))]
    fn integrate_profile(
        &self,
        py: Python<'_>,
        s_max: f64,
        step_tol: f64,
    ) -> PyResult<Vec<(f64, f64, f64)>> {
        let profile = py
            .detach(|| self.0.integrate_profile(s_max, step_tol))
            .map_err(to_py)?;
        Ok(profile
            .samples()
            .iter()
            .map(|s| (s.s, s.x, s.x_prime))
            .collect())
    }

    /// Generating curve points `(x, y, z)` at the given arclengths.
    #[pyo3(signature = (s_values, tol=1e-9))]
    fn generating_curve(&self, s_values: Vec<f64>, tol: f64) -> PyResult<Vec<(f64, f64, f64)>> {
        let reach = s_values.iter().fold(1e-3f64, |m, s| m.max(s.abs()));
        let profile = self
            .0
            .integrate_profile(reach, hyperbolic::DEFAULT_STEP_TOL)
            .map_err(to_py)?;
        s_values
            .iter()
            .map(|&s| profile.curve_at(s, tol).map_err(to_py))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("HyperbolicCatenoid(n={}, t={})", self.0.n(), self.0.t())
    }
}

#[pyclass(name = "Helicoid", module = "hypstab_py", frozen)]
struct PyHelicoid(hypstab::Helicoid);

#[pymethods]
impl PyHelicoid {
    #[new]
    fn new(alpha: f64) -> PyResult<Self> {
        hypstab::Helicoid::new(alpha).map(Self).map_err(to_py)
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha()
    }

    fn embed(&self, s: f64, t: f64) -> PyLorentzVector {
        PyLorentzVector(self.0.embed(s, t))
    }

    /// `(E, F, G)`.
    fn first_fundamental(&self, t: f64) -> (f64, f64, f64) {
        let f = self.0.first_fundamental(t);
        (f.ss, f.st, f.tt)
    }

    fn second_fundamental(&self, t: f64) -> (f64, f64, f64) {
        let f = self.0.second_fundamental(t);
        (f.ss, f.st, f.tt)
    }

    fn norm_a_sq(&self, t: f64) -> f64 {
        self.0.norm_a_sq(t)
    }

    fn norm_a_sq_from_forms(&self, t: f64) -> f64 {
        self.0.norm_a_sq_from_forms(t)
    }

    fn sup_norm_a_sq(&self) -> f64 {
        self.0.sup_norm_a_sq()
    }

    fn is_stable_by_pitch(&self) -> bool {
        self.0.is_stable_by_pitch()
    }

    fn __repr__(&self) -> String {
        format!("Helicoid(alpha={})", self.0.alpha())
    }
}

#[pyfunction]
fn lambda1_bounds(n: usize) -> PyResult<(f64, f64)> {
    stability::lambda1_bounds(n).map_err(to_py)
}

#[pyfunction]
fn lambda1_bounds_pinched(a: f64, b: f64) -> PyResult<(f64, f64)> {
    stability::lambda1_bounds_pinched(a, b).map_err(to_py)
}

#[pyfunction]
fn pointwise_stability_test<'py>(
    py: Python<'py>,
    n: usize,
    sup_a_sq: f64,
) -> PyResult<Bound<'py, PyAny>> {
    to_python(
        py,
        &stability::pointwise_stability_test(n, sup_a_sq).map_err(to_py)?,
    )
}

#[pyfunction]
fn sobolev_stability_test<'py>(
    py: Python<'py>,
    n: usize,
    sobolev_const: f64,
    a_norm_pow_n: f64,
) -> PyResult<Bound<'py, PyAny>> {
    to_python(
        py,
        &stability::sobolev_stability_test(n, sobolev_const, a_norm_pow_n).map_err(to_py)?,
    )
}

#[pyfunction]
fn grad_condition_deficit(n: usize, mass_a_sq: f64, mass_grad_a_sq: f64) -> PyResult<f64> {
    stability::grad_condition_deficit(n, mass_a_sq, mass_grad_a_sq).map_err(to_py)
}

#[pyfunction]
fn stability_window_max_t(n: usize) -> PyResult<f64> {
    hyperbolic::stability_window_max_t(n).map_err(to_py)
}

/// Runs the command-line tool in-process; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> (i32, String, String) {
    py.detach(|| {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("hypstab".to_owned()).chain(args);
        let code = hypstab::cli::run(
            argv,
            std::env::var_os(hypstab::cli::THREADS_ENV),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8_lossy(&out).into_owned(),
            String::from_utf8_lossy(&err).into_owned(),
        )
    })
}

#[pymodule]
fn hypstab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", hypstab::VERSION)?;
    m.add_class::<PyLorentzVector>()?;
    m.add_class::<PySphericalCatenoid>()?;
    m.add_class::<PySturmLiouvilleDisc>()?;
    m.add_class::<PyHyperbolicCatenoid>()?;
    m.add_class::<PyHelicoid>()?;
    m.add_function(wrap_pyfunction!(minkowski_inner, m)?)?;
    m.add_function(wrap_pyfunction!(on_hyperboloid, m)?)?;
    m.add_function(wrap_pyfunction!(lambda1_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(lambda1_bounds_pinched, m)?)?;
    m.add_function(wrap_pyfunction!(pointwise_stability_test, m)?)?;
    m.add_function(wrap_pyfunction!(sobolev_stability_test, m)?)?;
    m.add_function(wrap_pyfunction!(grad_condition_deficit, m)?)?;
    m.add_function(wrap_pyfunction!(stability_window_max_t, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}

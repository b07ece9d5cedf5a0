//! Python bindings: thin wrappers that take and return plain floats, complexes and lists.
//!
//! Domain errors raise `ValueError`; series or root-finder failures raise `RuntimeError`.
//! Series limits honour `QOSC_MAX_TERMS`, as in the CLI.

use num_bigint::BigUint;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qosc::flows::{self, AnnulusSpec, VortexState, DEFAULT_TRUNCATION};
use qosc::nls::{self, GridField, Soliton};
use qosc::oscillators::{self, SemiRelVariant};
use qosc::qcalc::{self, SeriesControl};
use qosc::qschrodinger::{self, DispersionOperator, ROOT_SEED};
use qosc::C64;

fn py_err(e: qosc::Error) -> PyErr {
    if e.is_convergence() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn ctl() -> SeriesControl {
    SeriesControl::from_env()
}

#[pyfunction]
fn q_number(n: u32, q: f64) -> f64 {
    qcalc::q_number(n, q)
}

#[pyfunction]
fn sym_q_number(n: u32, lam: f64) -> f64 {
    qcalc::sym_q_number(n, lam)
}

/// Jackson q-exponential `sum z^k / [k]_q!`.
#[pyfunction]
fn q_exp(z: C64, q: f64) -> PyResult<C64> {
    qcalc::q_exp(z, q, &ctl()).map_err(py_err)
}

/// q-logarithm `Ln_q(1 - x)`.
#[pyfunction]
fn q_log1m(x: C64, q: f64) -> PyResult<C64> {
    qcalc::q_log1m(x, q, &ctl()).map_err(py_err)
}

/// Golden exponential `sum z^n / F_n!`.
#[pyfunction]
fn fib_exp(z: C64) -> PyResult<C64> {
    qcalc::fib_exp(z, &ctl()).map_err(py_err)
}

#[pyfunction]
fn fibonacci(n: u64) -> BigUint {
    qcalc::fibonacci(n)
}

#[pyfunction]
fn sym_q_spectrum(lam: f64, n_max: u64) -> PyResult<Vec<f64>> {
    Ok(oscillators::sym_q_spectrum(lam, n_max)
        .map_err(py_err)?
        .energies())
}

#[pyfunction]
#[pyo3(signature = (n_max, hbar_omega = 1.0))]
fn golden_spectrum(n_max: u64, hbar_omega: f64) -> Vec<f64> {
    oscillators::golden_spectrum(n_max, hbar_omega).energies()
}

#[pyfunction]
#[pyo3(signature = (n_max, m = 1.0, c = 1.0, omega0 = 1.0))]
fn semirel_spectrum(n_max: u64, m: f64, c: f64, omega0: f64) -> PyResult<Vec<f64>> {
    let t = oscillators::semi_relativistic_spectrum(m, c, omega0, n_max, SemiRelVariant::Sum)
        .map_err(py_err)?;
    Ok(t.energies())
}

/// Fock coefficients `c_0..c_{n_max}` of the normalized golden coherent state.
#[pyfunction]
fn golden_coherent(beta: C64, n_max: usize) -> PyResult<Vec<C64>> {
    Ok(oscillators::golden_coherent(beta, n_max, &ctl())
        .map_err(py_err)?
        .coeffs)
}

/// Nonzero terms `((i, j), c)` of `H_n = sum c x^i t^j`, sorted by `(i, j)`.
#[pyfunction]
#[pyo3(signature = (n, lam = 0.0, hbar = 1.0, m = 1.0))]
fn qkf_terms(n: u32, lam: f64, hbar: f64, m: f64) -> PyResult<Vec<((u32, u32), C64)>> {
    let disp = DispersionOperator::new(lam, hbar, m).map_err(py_err)?;
    Ok(qschrodinger::qkf_polynomial(n, &disp).terms().collect())
}

/// Zeros in `x` of `H_n(x, t)`.
#[pyfunction]
#[pyo3(signature = (n, t, lam = 0.0, hbar = 1.0, m = 1.0, seed = ROOT_SEED))]
fn qkf_zeros(n: u32, t: f64, lam: f64, hbar: f64, m: f64, seed: u64) -> PyResult<Vec<C64>> {
    let disp = DispersionOperator::new(lam, hbar, m).map_err(py_err)?;
    let poly = qschrodinger::qkf_polynomial(n, &disp);
    qschrodinger::polynomial_roots(&poly.x_coefficients_at(t), seed).map_err(py_err)
}

fn annulus(r1: f64, r2: f64, truncation: u32) -> PyResult<AnnulusSpec> {
    AnnulusSpec::new(r1, r2, truncation).map_err(py_err)
}

/// Rotation frequency of a vortex at `|z|^2 = j`.
#[pyfunction]
#[pyo3(signature = (j, gamma = 1.0, r1 = 1.0, r2 = 2.0, truncation = DEFAULT_TRUNCATION))]
fn annulus_omega(j: f64, gamma: f64, r1: f64, r2: f64, truncation: u32) -> PyResult<f64> {
    flows::annulus_omega(j, gamma, &annulus(r1, r2, truncation)?, &ctl()).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (j, gamma = 1.0, r1 = 1.0, r2 = 2.0, truncation = DEFAULT_TRUNCATION))]
fn annulus_hamiltonian(j: f64, gamma: f64, r1: f64, r2: f64, truncation: u32) -> PyResult<f64> {
    flows::annulus_hamiltonian(j, gamma, &annulus(r1, r2, truncation)?, &ctl()).map_err(py_err)
}

/// Complex potential of a vortex in the annulus, evaluated at `points`.
#[pyfunction]
#[pyo3(signature = (z0, points, gamma = 1.0, r1 = 1.0, r2 = 2.0, truncation = DEFAULT_TRUNCATION))]
fn annulus_vortex_field(
    z0: C64,
    points: Vec<C64>,
    gamma: f64,
    r1: f64,
    r2: f64,
    truncation: u32,
) -> PyResult<Vec<C64>> {
    let f = flows::annulus_vortex_potential(z0, gamma, &annulus(r1, r2, truncation)?)
        .map_err(py_err)?;
    points
        .into_iter()
        .map(|z| f.eval(z).map_err(py_err))
        .collect()
}

/// RK4 run; returns the sampled path and the conservation diagnostics as a dict.
#[pyfunction]
#[pyo3(signature = (z0, dt, steps, gamma = 1.0, r1 = 1.0, r2 = 2.0, stride = 10, truncation = DEFAULT_TRUNCATION))]
#[allow(clippy::too_many_arguments)]
fn vortex_simulate<'py>(
    py: Python<'py>,
    z0: C64,
    dt: f64,
    steps: usize,
    gamma: f64,
    r1: f64,
    r2: f64,
    stride: usize,
    truncation: u32,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = annulus(r1, r2, truncation)?;
    let tr = flows::vortex_simulate(VortexState { z0, gamma }, &spec, dt, steps, stride, &ctl())
        .map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("t", tr.points.iter().map(|p| p.t).collect::<Vec<_>>())?;
    d.set_item("z", tr.points.iter().map(|p| p.z).collect::<Vec<_>>())?;
    d.set_item("J", tr.points.iter().map(|p| p.j).collect::<Vec<_>>())?;
    d.set_item("H", tr.points.iter().map(|p| p.h).collect::<Vec<_>>())?;
    d.set_item("omega", tr.omega)?;
    d.set_item("radius_drift", tr.radius_drift)?;
    d.set_item("energy_drift", tr.energy_drift)?;
    d.set_item("period_closed_form", tr.period_closed_form)?;
    d.set_item("period_measured", tr.period_measured)?;
    Ok(d)
}

/// `psi_t` of the `n`-th NLS-hierarchy flow for samples `psi` on `x0 + k dx`.
#[pyfunction]
#[pyo3(signature = (n, psi, x0, dx, kappa = 1.0))]
fn nls_flow(n: u32, psi: Vec<C64>, x0: f64, dx: f64, kappa: f64) -> PyResult<Vec<C64>> {
    let f = GridField::physical(x0, dx, psi).map_err(py_err)?;
    Ok(nls::hierarchy_rhs(n, &f, kappa).map_err(py_err)?.upper)
}

/// NLS-equation residual of the exact one-soliton on a spectral grid.
#[pyfunction]
#[pyo3(signature = (a = 1.5, b = 0.3, shift = 0.5, phase = 0.2, kappa = 1.0, x0 = nls::DEFAULT_X0, length = nls::DEFAULT_LENGTH, points = nls::DEFAULT_POINTS))]
#[allow(clippy::too_many_arguments)]
fn soliton_residual(
    a: f64,
    b: f64,
    shift: f64,
    phase: f64,
    kappa: f64,
    x0: f64,
    length: f64,
    points: usize,
) -> PyResult<f64> {
    let sol = Soliton::new(a, b, shift, phase, kappa).map_err(py_err)?;
    let f = sol.field(x0, length, points, 0.0).map_err(py_err)?;
    nls::nls_residual(&f, &sol.time_derivative(&f, 0.0).upper, kappa).map_err(py_err)
}

#[pymodule]
fn qosc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(q_number, m)?)?;
    m.add_function(wrap_pyfunction!(sym_q_number, m)?)?;
    m.add_function(wrap_pyfunction!(q_exp, m)?)?;
    m.add_function(wrap_pyfunction!(q_log1m, m)?)?;
    m.add_function(wrap_pyfunction!(fib_exp, m)?)?;
    m.add_function(wrap_pyfunction!(fibonacci, m)?)?;
    m.add_function(wrap_pyfunction!(sym_q_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(golden_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(semirel_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(golden_coherent, m)?)?;
    m.add_function(wrap_pyfunction!(qkf_terms, m)?)?;
    m.add_function(wrap_pyfunction!(qkf_zeros, m)?)?;
    m.add_function(wrap_pyfunction!(annulus_omega, m)?)?;
    m.add_function(wrap_pyfunction!(annulus_hamiltonian, m)?)?;
    m.add_function(wrap_pyfunction!(annulus_vortex_field, m)?)?;
    m.add_function(wrap_pyfunction!(vortex_simulate, m)?)?;
    m.add_function(wrap_pyfunction!(nls_flow, m)?)?;
    m.add_function(wrap_pyfunction!(soliton_residual, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn module(py: Python<'_>) -> Bound<'_, PyModule> {
        let m = PyModule::new(py, "qosc_py").unwrap();
        qosc_py(&m).unwrap();
        m
    }

    #[test]
    fn calls_round_trip() {
        Python::attach(|py| {
            let m = module(py);
            let e: Vec<f64> = m
                .getattr("golden_spectrum")
                .unwrap()
                .call1((5,))
                .unwrap()
                .extract()
                .unwrap();
            assert_eq!(e, [0.5, 1.0, 1.5, 2.5, 4.0, 6.5]);
            let f: BigUint = m
                .getattr("fibonacci")
                .unwrap()
                .call1((100,))
                .unwrap()
                .extract()
                .unwrap();
            assert_eq!(f.to_string(), "354224848179261915075");
            let terms: Vec<((u32, u32), C64)> = m
                .getattr("qkf_terms")
                .unwrap()
                .call1((2, 0.7))
                .unwrap()
                .extract()
                .unwrap();
            assert_eq!(
                terms.iter().map(|t| t.0).collect::<Vec<_>>(),
                [(0, 1), (2, 0)]
            );
        });
    }

    #[test]
    fn errors_map_to_python_types() {
        Python::attach(|py| {
            let m = module(py);
            let err = m
                .getattr("annulus_omega")
                .unwrap()
                .call1((9.0,))
                .unwrap_err();
            assert!(err.is_instance_of::<PyValueError>(py));
            let conv = py_err(qosc::Error::NoConvergence {
                terms: 1,
                last_term: 1.0,
            });
            assert!(conv.is_instance_of::<PyRuntimeError>(py));
        });
    }
}

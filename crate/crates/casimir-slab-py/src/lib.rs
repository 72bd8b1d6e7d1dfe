//! Python bindings for the casimir-slab library.
//!
//! Exposes the pressure operations, the surface-plasmon mode solver and
//! the verification suite as a CPython extension module. All quantities
//! are in reduced units: lengths in 1/k_P, frequencies in w_P, pressures
//! in hbar c k_P^4.

// #[pyfunction] expands to a From<PyErr> conversion that clippy flags as
// useless when the error already is a PyErr.
#![allow(clippy::useless_conversion)]

use casimir_slab::medium::{self, Polarization, Symmetry};
use casimir_slab::pressure::{self, SlabSystem};
use casimir_slab::quadrature::{self, QuadratureSpec};
use casimir_slab::{modes, verify};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

type BranchTuple = (String, String, f64, f64);

fn parse_polarization(q: &str) -> PyResult<Polarization> {
    match q {
        "p" | "P" => Ok(Polarization::P),
        "s" | "S" => Ok(Polarization::S),
        other => Err(PyValueError::new_err(format!(
            "polarization must be 'p' or 's', got '{other}'"
        ))),
    }
}

fn parse_symmetry(nu: &str) -> PyResult<Symmetry> {
    match nu {
        "+" | "plus" => Ok(Symmetry::Plus),
        "-" | "minus" => Ok(Symmetry::Minus),
        other => Err(PyValueError::new_err(format!(
            "symmetry must be '+' or '-', got '{other}'"
        ))),
    }
}

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn quad_spec(rel_tol: Option<f64>) -> QuadratureSpec {
    match rel_tol {
        Some(rel_tol) => QuadratureSpec {
            rel_tol,
            ..Default::default()
        },
        None => QuadratureSpec::default(),
    }
}

/// A reduced-unit pressure with its numerical error bound and the formula
/// that produced it.
#[pyclass(name = "PressureValue", frozen)]
struct PyPressureValue {
    #[pyo3(get)]
    value: f64,
    #[pyo3(get)]
    error_estimate: f64,
    #[pyo3(get)]
    formula: String,
}

#[pymethods]
impl PyPressureValue {
    fn __repr__(&self) -> String {
        format!(
            "PressureValue(value={:e}, error_estimate={:e}, formula='{}')",
            self.value, self.error_estimate, self.formula
        )
    }
}

impl From<pressure::PressureValue> for PyPressureValue {
    fn from(p: pressure::PressureValue) -> Self {
        PyPressureValue {
            value: p.value,
            error_estimate: p.error_estimate,
            formula: p.formula.label().to_string(),
        }
    }
}

/// Mode-sum pressure split into per-branch contributions.
#[pyclass(name = "ModeSumPressure", frozen)]
struct PyModeSumPressure {
    #[pyo3(get)]
    total: f64,
    #[pyo3(get)]
    error_estimate: f64,
    /// List of (polarization, symmetry, value, error_estimate) tuples.
    #[pyo3(get)]
    branches: Vec<BranchTuple>,
}

#[pymethods]
impl PyModeSumPressure {
    fn __repr__(&self) -> String {
        format!(
            "ModeSumPressure(total={:e}, branches={})",
            self.total,
            self.branches.len()
        )
    }
}

impl From<modes::ModeSumPressure> for PyModeSumPressure {
    fn from(m: modes::ModeSumPressure) -> Self {
        PyModeSumPressure {
            total: m.total,
            error_estimate: m.error_estimate,
            branches: m
                .branches
                .iter()
                .map(|b| {
                    (
                        b.q.label().to_string(),
                        b.nu.label().to_string(),
                        b.value,
                        b.error_estimate,
                    )
                })
                .collect(),
        }
    }
}

/// A solved dispersion branch w(u).
#[pyclass(name = "ModeBranch", frozen)]
struct PyModeBranch {
    #[pyo3(get)]
    polarization: String,
    #[pyo3(get)]
    symmetry: String,
    #[pyo3(get)]
    ds: f64,
    #[pyo3(get)]
    gap: Option<f64>,
    /// Solved (u, w) pairs, ascending in u.
    #[pyo3(get)]
    samples: Vec<(f64, f64)>,
    /// Grid points where the branch is cut off.
    #[pyo3(get)]
    absent: Vec<f64>,
    #[pyo3(get)]
    extra_sign_changes: usize,
}

#[pymethods]
impl PyModeBranch {
    fn __repr__(&self) -> String {
        format!(
            "ModeBranch(q='{}', nu='{}', samples={}, absent={})",
            self.polarization,
            self.symmetry,
            self.samples.len(),
            self.absent.len()
        )
    }
}

/// Plasma permittivity at imaginary frequency, eps(i x w_P) = 1 + 1/x^2.
#[pyfunction]
fn epsilon_imag(x: f64) -> PyResult<f64> {
    let x = medium::ReducedFrequency::new(x).map_err(value_err)?;
    medium::epsilon_imag(x).map_err(value_err)
}

/// Vacuum-slab reflection amplitude rho^q at imaginary frequency.
#[pyfunction]
fn rho(q: &str, x: f64, u: f64) -> PyResult<f64> {
    let q = parse_polarization(q)?;
    let x = medium::ReducedFrequency::new(x).map_err(value_err)?;
    let u = medium::ReducedWavevector::new(u).map_err(value_err)?;
    medium::rho(q, x, u).map_err(value_err)
}

/// Whole-slab Fresnel amplitudes (r, t) at imaginary frequency.
#[pyfunction]
fn slab_fresnel(q: &str, x: f64, u: f64, ds: f64) -> PyResult<(f64, f64)> {
    let q = parse_polarization(q)?;
    let x = medium::ReducedFrequency::new(x).map_err(value_err)?;
    let u = medium::ReducedWavevector::new(u).map_err(value_err)?;
    medium::slab_fresnel(q, x, u, ds).map_err(value_err)
}

/// Modified Bessel function of the second kind, order 1 or 2.
#[pyfunction]
fn bessel_k(order: u32, a: f64) -> PyResult<f64> {
    quadrature::bessel_k(order, a).map_err(value_err)
}

/// Pressure on a free-standing slab.
#[pyfunction]
#[pyo3(signature = (ds, rel_tol=None))]
fn pressure_free(ds: f64, rel_tol: Option<f64>) -> PyResult<PyPressureValue> {
    pressure::pressure_free_with(ds, &quad_spec(rel_tol))
        .map(Into::into)
        .map_err(value_err)
}

/// Free-slab pressure through the (x, p) parameterization (oracle route).
#[pyfunction]
#[pyo3(signature = (ds, rel_tol=None))]
fn pressure_free_pform(ds: f64, rel_tol: Option<f64>) -> PyResult<PyPressureValue> {
    pressure::pressure_free_pform_with(ds, &quad_spec(rel_tol))
        .map(Into::into)
        .map_err(value_err)
}

/// The quasistatic constant C in F_nr = -C/ds^3.
#[pyfunction]
fn pressure_nonretarded_coefficient() -> f64 {
    pressure::pressure_nonretarded_coefficient()
}

/// Quasistatic pressure F_nr = -C/ds^3.
#[pyfunction]
fn pressure_nonretarded(ds: f64) -> PyResult<PyPressureValue> {
    pressure::pressure_nonretarded(ds)
        .map(Into::into)
        .map_err(value_err)
}

/// Ideal Casimir pressure -pi^2/(240 ds^4).
#[pyfunction]
fn casimir_pressure(ds: f64) -> f64 {
    pressure::casimir_pressure(ds)
}

/// Leading thick-slab asymptote (valid for ds > 1).
#[pyfunction]
fn pressure_thick_asymptotic(ds: f64) -> PyResult<PyPressureValue> {
    pressure::pressure_thick_asymptotic(ds)
        .map(Into::into)
        .map_err(value_err)
}

/// Perfect-mirror sandwich via the single-integral form.
#[pyfunction]
#[pyo3(signature = (ds, rel_tol=None))]
fn pressure_mirrors_integral(ds: f64, rel_tol: Option<f64>) -> PyResult<PyPressureValue> {
    pressure::pressure_mirrors_integral_with(ds, &quad_spec(rel_tol))
        .map(Into::into)
        .map_err(value_err)
}

/// Perfect-mirror sandwich via the Bessel-function series.
#[pyfunction]
fn pressure_mirrors_bessel(ds: f64) -> PyResult<PyPressureValue> {
    pressure::pressure_mirrors_bessel(ds)
        .map(Into::into)
        .map_err(value_err)
}

fn build_system(ds: f64, gap1: f64, gap2: Option<f64>) -> PyResult<SlabSystem> {
    SlabSystem::from_gaps(ds, gap1, gap2.unwrap_or(gap1)).map_err(value_err)
}

/// Pressure on the slab in a cavity; infinite gaps mean absent mirrors,
/// and `gap2` defaults to `gap1` (centered slab).
#[pyfunction]
#[pyo3(signature = (ds, gap1, gap2=None, rel_tol=None))]
fn pressure_cavity(
    ds: f64,
    gap1: f64,
    gap2: Option<f64>,
    rel_tol: Option<f64>,
) -> PyResult<PyPressureValue> {
    let sys = build_system(ds, gap1, gap2)?;
    pressure::pressure_cavity_with(&sys, &quad_spec(rel_tol))
        .map(Into::into)
        .map_err(value_err)
}

/// Slab-mirror interaction force F' = f2 - f1 (vanishes for gap1 = gap2).
#[pyfunction]
#[pyo3(signature = (ds, gap1, gap2, rel_tol=None))]
fn interaction_force(
    ds: f64,
    gap1: f64,
    gap2: f64,
    rel_tol: Option<f64>,
) -> PyResult<PyPressureValue> {
    let sys = build_system(ds, gap1, Some(gap2))?;
    pressure::interaction_force_with(&sys, &quad_spec(rel_tol))
        .map(Into::into)
        .map_err(value_err)
}

/// Nonretarded surface-plasmon frequency of the free slab.
#[pyfunction]
fn sp_freq_nonretarded(u: f64, ds: f64, nu: &str) -> PyResult<f64> {
    let nu = parse_symmetry(nu)?;
    modes::sp_freq_nonretarded(u, ds, nu)
        .map(|w| w.value())
        .map_err(value_err)
}

/// The raw dispersion residual r_s^q e^{-alpha_s ds} - nu.
#[pyfunction]
#[pyo3(signature = (q, nu, w, u, ds, gap=None))]
fn dispersion_residual(
    q: &str,
    nu: &str,
    w: f64,
    u: f64,
    ds: f64,
    gap: Option<f64>,
) -> PyResult<f64> {
    let q = parse_polarization(q)?;
    let nu = parse_symmetry(nu)?;
    modes::dispersion_residual(q, nu, w, u, ds, gap).map_err(value_err)
}

/// Track one (q, nu) dispersion branch across a wavevector grid.
#[pyfunction]
#[pyo3(signature = (q, nu, u_grid, ds, gap=None))]
fn solve_sp_branch(
    q: &str,
    nu: &str,
    u_grid: Vec<f64>,
    ds: f64,
    gap: Option<f64>,
) -> PyResult<PyModeBranch> {
    let qp = parse_polarization(q)?;
    let nus = parse_symmetry(nu)?;
    let branch = modes::solve_sp_branch(qp, nus, &u_grid, ds, gap).map_err(value_err)?;
    Ok(PyModeBranch {
        polarization: branch.q.label().to_string(),
        symmetry: branch.nu.label().to_string(),
        ds: branch.ds,
        gap: branch.gap,
        samples: branch.samples.iter().map(|s| (s.u, s.w)).collect(),
        absent: branch.absent,
        extra_sign_changes: branch.extra_sign_changes,
    })
}

/// Nonretarded mode-sum pressure of the free slab (two plasmon branches).
#[pyfunction]
fn sp_pressure_nonretarded(ds: f64) -> PyResult<PyModeSumPressure> {
    modes::sp_pressure_nonretarded(ds)
        .map(Into::into)
        .map_err(value_err)
}

/// Retarded mode-sum pressure; `gap=None` is the free slab.
#[pyfunction]
#[pyo3(signature = (ds, gap=None))]
fn sp_pressure_retarded(ds: f64, gap: Option<f64>) -> PyResult<PyModeSumPressure> {
    modes::sp_pressure_retarded(ds, gap)
        .map(Into::into)
        .map_err(value_err)
}

/// Photonic mode frequency of the zero-gap sandwich.
#[pyfunction]
fn photonic_mode_freq(n: u32, u: f64, ds: f64) -> PyResult<f64> {
    modes::photonic_mode_freq(n, u, ds)
        .map(|w| w.value())
        .map_err(value_err)
}

/// Run the acceptance criteria; returns (id, name, passed, detail) tuples.
#[pyfunction]
fn run_verification() -> Vec<(usize, String, bool, String)> {
    verify::run_all()
        .into_iter()
        .map(|o| (o.id, o.name.to_string(), o.passed, o.detail))
        .collect()
}

#[pymodule]
fn casimir_slab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyPressureValue>()?;
    m.add_class::<PyModeSumPressure>()?;
    m.add_class::<PyModeBranch>()?;
    m.add_function(wrap_pyfunction!(epsilon_imag, m)?)?;
    m.add_function(wrap_pyfunction!(rho, m)?)?;
    m.add_function(wrap_pyfunction!(slab_fresnel, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_k, m)?)?;
    m.add_function(wrap_pyfunction!(pressure_free, m)?)?;
    m.add_function(wrap_pyfunction!(pressure_free_pform, m)?)?;
    m.add_function(wrap_pyfunction!(pressure_nonretarded_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(pressure_nonretarded, m)?)?;
    m.add_function(wrap_pyfunction!(casimir_pressure, m)?)?;
    m.add_function(wrap_pyfunction!(pressure_thick_asymptotic, m)?)?;
    m.add_function(wrap_pyfunction!(pressure_mirrors_integral, m)?)?;
    m.add_function(wrap_pyfunction!(pressure_mirrors_bessel, m)?)?;
    m.add_function(wrap_pyfunction!(pressure_cavity, m)?)?;
    m.add_function(wrap_pyfunction!(interaction_force, m)?)?;
    m.add_function(wrap_pyfunction!(sp_freq_nonretarded, m)?)?;
    m.add_function(wrap_pyfunction!(dispersion_residual, m)?)?;
    m.add_function(wrap_pyfunction!(solve_sp_branch, m)?)?;
    m.add_function(wrap_pyfunction!(sp_pressure_nonretarded, m)?)?;
    m.add_function(wrap_pyfunction!(sp_pressure_retarded, m)?)?;
    m.add_function(wrap_pyfunction!(photonic_mode_freq, m)?)?;
    m.add_function(wrap_pyfunction!(run_verification, m)?)?;
    Ok(())
}

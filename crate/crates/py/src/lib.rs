//! Python bindings for the `planckfield` library: constants, external
//! fields, lattice models, spectral densities, total energies, heat
//! capacities, special functions, and spectrum fitting.
//!
//! Input-side failures (bad arguments, malformed datasets) surface as
//! `ValueError`; numerical failures (divergence, non-convergence) surface
//! as `RuntimeError`.

use std::collections::HashMap;
use std::str::FromStr;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use planckfield::extfield as xf;
use planckfield::fitting as ft;
use planckfield::heat;
use planckfield::radiation as rad;
use planckfield::specfun as sf;
use planckfield::Error;

fn to_py_err(err: Error) -> PyErr {
    if err.is_input_error() {
        PyValueError::new_err(err.to_string())
    } else {
        PyRuntimeError::new_err(err.to_string())
    }
}

trait IntoPyResult<T> {
    fn into_py(self) -> PyResult<T>;
}

impl<T> IntoPyResult<T> for planckfield::Result<T> {
    fn into_py(self) -> PyResult<T> {
        self.map_err(to_py_err)
    }
}

/// Physical constants in a chosen unit system ("si" or "natural").
#[pyclass(name = "Constants", module = "planckfield_py", frozen)]
struct PyConstants {
    inner: rad::PhysicalConstants,
}

#[pymethods]
impl PyConstants {
    #[new]
    #[pyo3(signature = (mode = "si"))]
    fn new(mode: &str) -> PyResult<Self> {
        let mode = rad::UnitsMode::from_str(mode).into_py()?;
        Ok(PyConstants {
            inner: rad::PhysicalConstants::for_mode(mode),
        })
    }

    #[staticmethod]
    fn si() -> Self {
        PyConstants {
            inner: rad::PhysicalConstants::si(),
        }
    }

    #[staticmethod]
    fn natural() -> Self {
        PyConstants {
            inner: rad::PhysicalConstants::natural(),
        }
    }

    #[getter]
    fn hbar(&self) -> f64 {
        self.inner.hbar()
    }

    #[getter]
    fn k_boltzmann(&self) -> f64 {
        self.inner.k_boltzmann()
    }

    #[getter]
    fn c(&self) -> f64 {
        self.inner.c()
    }

    #[getter]
    fn mode(&self) -> &'static str {
        self.inner.mode().as_str()
    }

    fn __repr__(&self) -> String {
        format!("Constants(mode='{}')", self.inner.mode().as_str())
    }
}

fn consts_or_si(constants: Option<&PyConstants>) -> rad::PhysicalConstants {
    constants.map_or_else(rad::PhysicalConstants::si, |c| c.inner)
}

/// External field acting on the radiation: uniform coefficient `p` and a
/// frequency-dependent channel `q(ω) = r·exp(−s·ω)`.
#[pyclass(name = "ExternalField", module = "planckfield_py", frozen)]
struct PyExternalField {
    inner: xf::ExternalField,
}

#[pymethods]
impl PyExternalField {
    #[new]
    #[pyo3(signature = (p = 0.0, r = 0.0, s = 0.0))]
    fn new(p: f64, r: f64, s: f64) -> PyResult<Self> {
        Ok(PyExternalField {
            inner: xf::ExternalField::new(p, r, s).into_py()?,
        })
    }

    #[staticmethod]
    fn zero() -> Self {
        PyExternalField {
            inner: xf::ExternalField::zero(),
        }
    }

    #[getter]
    fn p_coeff(&self) -> f64 {
        self.inner.p_coeff()
    }

    #[getter]
    fn q_amplitude(&self) -> f64 {
        self.inner.q_amplitude()
    }

    #[getter]
    fn q_decay(&self) -> f64 {
        self.inner.q_decay()
    }

    fn q_of(&self, omega: f64) -> f64 {
        xf::q_of_omega(&self.inner, omega)
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn __repr__(&self) -> String {
        format!(
            "ExternalField(p={}, r={}, s={})",
            self.inner.p_coeff(),
            self.inner.q_amplitude(),
            self.inner.q_decay()
        )
    }
}

/// Collection of identical quantum oscillators.
#[pyclass(name = "EinsteinSolid", module = "planckfield_py", frozen)]
struct PyEinsteinSolid {
    inner: heat::EinsteinSolid,
}

#[pymethods]
impl PyEinsteinSolid {
    #[new]
    fn new(n_oscillators: f64, omega_e: f64) -> PyResult<Self> {
        Ok(PyEinsteinSolid {
            inner: heat::EinsteinSolid::new(n_oscillators, omega_e).into_py()?,
        })
    }

    #[getter]
    fn n_oscillators(&self) -> f64 {
        self.inner.n_oscillators()
    }

    #[getter]
    fn omega_e(&self) -> f64 {
        self.inner.omega_e()
    }
}

/// Elastic continuum with an acoustic frequency cutoff.
#[pyclass(name = "DebyeSolid", module = "planckfield_py", frozen)]
struct PyDebyeSolid {
    inner: heat::DebyeSolid,
}

#[pymethods]
impl PyDebyeSolid {
    #[staticmethod]
    #[pyo3(signature = (n_density, v_t, v_l, volume, constants = None))]
    fn from_material(
        n_density: f64,
        v_t: f64,
        v_l: f64,
        volume: f64,
        constants: Option<&PyConstants>,
    ) -> PyResult<Self> {
        let consts = consts_or_si(constants);
        Ok(PyDebyeSolid {
            inner: heat::debye_solid_from_material(n_density, v_t, v_l, volume, &consts)
                .into_py()?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (t_d, n_oscillators, volume = 1.0, constants = None))]
    fn from_debye_temperature(
        t_d: f64,
        n_oscillators: f64,
        volume: f64,
        constants: Option<&PyConstants>,
    ) -> PyResult<Self> {
        let consts = consts_or_si(constants);
        Ok(PyDebyeSolid {
            inner: heat::debye_solid_from_debye_temperature(t_d, n_oscillators, volume, &consts)
                .into_py()?,
        })
    }

    #[getter]
    fn n_density(&self) -> f64 {
        self.inner.n_density()
    }

    #[getter]
    fn volume(&self) -> f64 {
        self.inner.volume()
    }

    #[getter]
    fn c_eff(&self) -> f64 {
        self.inner.c_eff()
    }

    #[getter]
    fn omega_d(&self) -> f64 {
        self.inner.omega_d()
    }

    #[getter]
    fn t_d(&self) -> f64 {
        self.inner.t_d()
    }

    #[getter]
    fn n_oscillators(&self) -> f64 {
        self.inner.n_oscillators()
    }
}

// ---- special functions ----

#[pyfunction]
fn gamma(x: f64) -> PyResult<f64> {
    sf::gamma(x).into_py()
}

/// Thermal integral of the given order; returns `(value, error_estimate)`.
#[pyfunction]
fn bose_integral(s: u32) -> PyResult<(f64, f64)> {
    let r = sf::bose_integral(s, &sf::QuadratureSpec::default()).into_py()?;
    Ok((r.value, r.error_estimate))
}

/// Band-limited thermal integral; returns `(value, error_estimate)`.
#[pyfunction]
fn incomplete_bose_integral(s: u32, y: f64) -> PyResult<(f64, f64)> {
    let r = sf::incomplete_bose_integral(s, y, &sf::QuadratureSpec::default()).into_py()?;
    Ok((r.value, r.error_estimate))
}

#[pyfunction]
fn debye_function(y: f64) -> PyResult<f64> {
    sf::debye_function(y).into_py()
}

#[pyfunction]
fn debye_function_derivative(y: f64) -> PyResult<f64> {
    sf::debye_function_derivative(y).into_py()
}

/// Peak position of the n-dimensional spectrum in units of ħω/kT.
#[pyfunction]
fn planck_peak(n: u32) -> PyResult<f64> {
    sf::planck_peak(n).into_py()
}

// ---- spectral densities and energies ----

#[pyfunction]
#[pyo3(signature = (omega, t, constants = None))]
fn planck_spectral_density(omega: f64, t: f64, constants: Option<&PyConstants>) -> PyResult<f64> {
    rad::planck_spectral_density(omega, t, &consts_or_si(constants)).into_py()
}

#[pyfunction]
#[pyo3(signature = (omega, t, n, constants = None))]
fn planck_spectral_density_nd(
    omega: f64,
    t: f64,
    n: u32,
    constants: Option<&PyConstants>,
) -> PyResult<f64> {
    rad::planck_spectral_density_nd(omega, t, n, &consts_or_si(constants)).into_py()
}

#[pyfunction]
#[pyo3(signature = (omega, t, field, constants = None))]
fn generalized_spectral_density(
    omega: f64,
    t: f64,
    field: &PyExternalField,
    constants: Option<&PyConstants>,
) -> PyResult<f64> {
    xf::generalized_spectral_density(omega, t, &field.inner, &consts_or_si(constants)).into_py()
}

/// Mode occupancy `(1 + p − q·e^x)/(e^x − 1)` at `x = ħω/kT`.
#[pyfunction]
#[pyo3(signature = (x, p = 0.0, q = 0.0))]
fn generalized_occupancy(x: f64, p: f64, q: f64) -> f64 {
    xf::generalized_occupancy(x, p, q)
}

#[pyfunction]
#[pyo3(signature = (t, n = 3, constants = None))]
fn total_energy_density(t: f64, n: u32, constants: Option<&PyConstants>) -> PyResult<f64> {
    rad::total_energy_density(t, n, &consts_or_si(constants), &sf::QuadratureSpec::default())
        .into_py()
}

#[pyfunction]
#[pyo3(signature = (t, field, constants = None))]
fn generalized_total_energy(
    t: f64,
    field: &PyExternalField,
    constants: Option<&PyConstants>,
) -> PyResult<f64> {
    xf::generalized_total_energy(
        t,
        &field.inner,
        &consts_or_si(constants),
        &sf::QuadratureSpec::default(),
    )
    .into_py()
}

fn build_grid(
    omega_min: f64,
    omega_max: f64,
    points: usize,
    spacing: &str,
) -> PyResult<rad::SpectralGrid> {
    let spacing = rad::GridSpacing::from_str(spacing).into_py()?;
    rad::SpectralGrid::new(omega_min, omega_max, points, spacing).into_py()
}

/// Thermal spectrum over a grid as a list of `(omega, density)` pairs.
#[pyfunction]
#[pyo3(signature = (t, omega_min, omega_max, points, spacing = "log", constants = None))]
fn planck_spectrum(
    t: f64,
    omega_min: f64,
    omega_max: f64,
    points: usize,
    spacing: &str,
    constants: Option<&PyConstants>,
) -> PyResult<Vec<(f64, f64)>> {
    let grid = build_grid(omega_min, omega_max, points, spacing)?;
    Ok(rad::planck_spectrum(&grid, t, &consts_or_si(constants))
        .into_py()?
        .samples)
}

/// Generalized spectrum over a grid as a list of `(omega, density)` pairs.
#[pyfunction]
#[pyo3(signature = (t, field, omega_min, omega_max, points, spacing = "log", constants = None))]
fn generalized_spectrum(
    t: f64,
    field: &PyExternalField,
    omega_min: f64,
    omega_max: f64,
    points: usize,
    spacing: &str,
    constants: Option<&PyConstants>,
) -> PyResult<Vec<(f64, f64)>> {
    let grid = build_grid(omega_min, omega_max, points, spacing)?;
    Ok(
        xf::generalized_spectrum(&grid, t, &field.inner, &consts_or_si(constants))
            .into_py()?
            .samples,
    )
}

/// Scan a grid for negativity and energy finiteness of a generalized
/// spectrum; returns a dict.
#[pyfunction]
#[pyo3(signature = (field, t, omega_min, omega_max, points, spacing = "log", constants = None))]
#[allow(clippy::too_many_arguments)]
fn field_diagnostics<'py>(
    py: Python<'py>,
    field: &PyExternalField,
    t: f64,
    omega_min: f64,
    omega_max: f64,
    points: usize,
    spacing: &str,
    constants: Option<&PyConstants>,
) -> PyResult<Bound<'py, PyDict>> {
    let grid = build_grid(omega_min, omega_max, points, spacing)?;
    let diag =
        xf::scan_field_diagnostics(&field.inner, t, &grid, &consts_or_si(constants)).into_py()?;
    let d = PyDict::new(py);
    d.set_item("first_negative_omega", diag.first_negative_omega)?;
    d.set_item("energy_finite", diag.energy_finite)?;
    d.set_item("max_relative_correction", diag.max_relative_correction)?;
    Ok(d)
}

// ---- heat capacities ----

#[pyfunction]
#[pyo3(signature = (solid, t, constants = None))]
fn einstein_internal_energy(
    solid: &PyEinsteinSolid,
    t: f64,
    constants: Option<&PyConstants>,
) -> PyResult<f64> {
    heat::einstein_internal_energy(&solid.inner, t, &consts_or_si(constants)).into_py()
}

#[pyfunction]
#[pyo3(signature = (solid, t, constants = None))]
fn einstein_heat_capacity(
    solid: &PyEinsteinSolid,
    t: f64,
    constants: Option<&PyConstants>,
) -> PyResult<f64> {
    heat::einstein_heat_capacity(&solid.inner, t, &consts_or_si(constants)).into_py()
}

#[pyfunction]
#[pyo3(signature = (solid, t, constants = None))]
fn debye_internal_energy(
    solid: &PyDebyeSolid,
    t: f64,
    constants: Option<&PyConstants>,
) -> PyResult<f64> {
    heat::debye_internal_energy(
        &solid.inner,
        t,
        &consts_or_si(constants),
        &sf::QuadratureSpec::default(),
    )
    .into_py()
}

#[pyfunction]
#[pyo3(signature = (solid, t, constants = None))]
fn debye_heat_capacity(
    solid: &PyDebyeSolid,
    t: f64,
    constants: Option<&PyConstants>,
) -> PyResult<f64> {
    heat::debye_heat_capacity(&solid.inner, t, &consts_or_si(constants)).into_py()
}

#[pyfunction]
#[pyo3(signature = (solid, t, field, constants = None))]
fn generalized_phonon_internal_energy(
    solid: &PyDebyeSolid,
    t: f64,
    field: &PyExternalField,
    constants: Option<&PyConstants>,
) -> PyResult<f64> {
    heat::generalized_phonon_internal_energy(
        &solid.inner,
        t,
        &field.inner,
        &consts_or_si(constants),
        &sf::QuadratureSpec::default(),
    )
    .into_py()
}

#[pyfunction]
#[pyo3(signature = (solid, t, field, constants = None))]
fn generalized_phonon_heat_capacity(
    solid: &PyDebyeSolid,
    t: f64,
    field: &PyExternalField,
    constants: Option<&PyConstants>,
) -> PyResult<f64> {
    heat::generalized_phonon_heat_capacity(
        &solid.inner,
        t,
        &field.inner,
        &consts_or_si(constants),
        &sf::QuadratureSpec::default(),
    )
    .into_py()
}

// ---- fitting ----

fn dataset_from_arrays(
    omegas: &[f64],
    values: &[f64],
    sigmas: Option<&Vec<f64>>,
) -> PyResult<ft::SpectrumDataset> {
    if omegas.len() != values.len() {
        return Err(PyValueError::new_err(format!(
            "omegas and values must have equal length, got {} and {}",
            omegas.len(),
            values.len()
        )));
    }
    if let Some(s) = sigmas {
        if s.len() != omegas.len() {
            return Err(PyValueError::new_err(format!(
                "sigmas must match the data length, got {} and {}",
                s.len(),
                omegas.len()
            )));
        }
    }
    let samples = omegas
        .iter()
        .zip(values)
        .enumerate()
        .map(|(i, (&w, &v))| ft::SpectrumSample {
            abscissa: w,
            value: v,
            sigma: sigmas.map(|s| s[i]),
        })
        .collect();
    ft::SpectrumDataset::new(
        samples,
        ft::AbscissaKind::Angular,
        ft::OrdinateKind::PerOmega,
        None,
    )
    .into_py()
}

fn fit_to_dict<'py>(
    py: Python<'py>,
    fit: &ft::FitResult,
    ds: &ft::SpectrumDataset,
    consts: &rad::PhysicalConstants,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("model", fit.model.to_string())?;
    d.set_item("converged", fit.converged)?;
    d.set_item("degenerate", fit.degenerate)?;
    d.set_item("iterations", fit.iterations)?;
    d.set_item("degrees_of_freedom", fit.degrees_of_freedom)?;
    d.set_item("chi_square", fit.chi_square)?;
    d.set_item("parameters", fit.parameters.clone())?;
    match &fit.standard_errors {
        Some(se) => d.set_item("standard_errors", se.clone())?,
        None => d.set_item("standard_errors", py.None())?,
    }
    d.set_item("residuals", fit.residuals.clone())?;
    if fit.converged {
        let report = ft::deviation_report(ds, fit, consts).into_py()?;
        d.set_item("deviation_rms", report.rms_relative)?;
        d.set_item("deviation_max_abs", report.max_abs_relative)?;
    }
    Ok(d)
}

/// Fit the single-temperature thermal model; returns a result dict.
#[pyfunction]
#[pyo3(signature = (omegas, values, t_bounds, sigmas = None, constants = None))]
fn fit_planck<'py>(
    py: Python<'py>,
    omegas: Vec<f64>,
    values: Vec<f64>,
    t_bounds: (f64, f64),
    sigmas: Option<Vec<f64>>,
    constants: Option<&PyConstants>,
) -> PyResult<Bound<'py, PyDict>> {
    let consts = consts_or_si(constants);
    let ds = dataset_from_arrays(&omegas, &values, sigmas.as_ref())?;
    let fit = ft::fit_planck(&ds, t_bounds, &consts).into_py()?;
    fit_to_dict(py, &fit, &ds, &consts)
}

fn bounds_from_dict(bounds: &HashMap<String, (f64, f64)>) -> PyResult<ft::GeneralizedBounds> {
    for key in bounds.keys() {
        if !["T", "beta", "R", "S"].contains(&key.as_str()) {
            return Err(PyValueError::new_err(format!(
                "unknown bounds key '{key}' (expected T, beta, R, S)"
            )));
        }
    }
    let get = |key: &str| {
        bounds
            .get(key)
            .copied()
            .ok_or_else(|| PyValueError::new_err(format!("bounds must include '{key}'")))
    };
    Ok(ft::GeneralizedBounds {
        t: get("T")?,
        beta: get("beta")?,
        r: get("R")?,
        s: get("S")?,
    })
}

fn fixed_from_dict(fixed: Option<&HashMap<String, f64>>) -> PyResult<ft::FixedParams> {
    let mut out = ft::FixedParams::default();
    if let Some(map) = fixed {
        for (key, &value) in map {
            match key.as_str() {
                "T" => out.t = Some(value),
                "beta" => out.beta = Some(value),
                "R" => out.r = Some(value),
                "S" => out.s = Some(value),
                other => {
                    return Err(PyValueError::new_err(format!(
                        "unknown fixed-parameter key '{other}' (expected T, beta, R, S)"
                    )))
                }
            }
        }
    }
    Ok(out)
}

/// Fit the field-generalized model; returns a result dict.
///
/// `bounds` must carry all four keys `T`, `beta`, `R`, `S` as `(lo, hi)`
/// pairs; `fixed` optionally pins a subset by the same names.
#[pyfunction]
#[pyo3(signature = (omegas, values, bounds, fixed = None, sigmas = None, seed = 0, constants = None))]
#[allow(clippy::too_many_arguments)]
fn fit_generalized<'py>(
    py: Python<'py>,
    omegas: Vec<f64>,
    values: Vec<f64>,
    bounds: HashMap<String, (f64, f64)>,
    fixed: Option<HashMap<String, f64>>,
    sigmas: Option<Vec<f64>>,
    seed: u64,
    constants: Option<&PyConstants>,
) -> PyResult<Bound<'py, PyDict>> {
    let consts = consts_or_si(constants);
    let ds = dataset_from_arrays(&omegas, &values, sigmas.as_ref())?;
    let bounds = bounds_from_dict(&bounds)?;
    let fixed = fixed_from_dict(fixed.as_ref())?;
    let fit = ft::fit_generalized(&ds, &bounds, &fixed, &consts, seed).into_py()?;
    fit_to_dict(py, &fit, &ds, &consts)
}

/// Read a spectrum dataset CSV; returns a dict with the raw columns and
/// schema metadata.
#[pyfunction]
fn read_spectrum_csv<'py>(py: Python<'py>, path: &str) -> PyResult<Bound<'py, PyDict>> {
    let (ds, units) = ft::read_csv_path(std::path::Path::new(path)).into_py()?;
    let d = PyDict::new(py);
    d.set_item("abscissa_kind", ds.abscissa_kind().as_str())?;
    d.set_item("ordinate_kind", ds.ordinate_kind().as_str())?;
    d.set_item("units", units.as_str())?;
    let abscissa: Vec<f64> = ds.samples().iter().map(|s| s.abscissa).collect();
    let value: Vec<f64> = ds.samples().iter().map(|s| s.value).collect();
    d.set_item("abscissa", abscissa)?;
    d.set_item("value", value)?;
    if ds.has_sigmas() {
        let sigma: Vec<f64> = ds.samples().iter().map(|s| s.sigma.unwrap()).collect();
        d.set_item("sigma", sigma)?;
    } else {
        d.set_item("sigma", py.None())?;
    }
    Ok(d)
}

#[pymodule]
fn planckfield_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyConstants>()?;
    m.add_class::<PyExternalField>()?;
    m.add_class::<PyEinsteinSolid>()?;
    m.add_class::<PyDebyeSolid>()?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(bose_integral, m)?)?;
    m.add_function(wrap_pyfunction!(incomplete_bose_integral, m)?)?;
    m.add_function(wrap_pyfunction!(debye_function, m)?)?;
    m.add_function(wrap_pyfunction!(debye_function_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(planck_peak, m)?)?;
    m.add_function(wrap_pyfunction!(planck_spectral_density, m)?)?;
    m.add_function(wrap_pyfunction!(planck_spectral_density_nd, m)?)?;
    m.add_function(wrap_pyfunction!(generalized_spectral_density, m)?)?;
    m.add_function(wrap_pyfunction!(generalized_occupancy, m)?)?;
    m.add_function(wrap_pyfunction!(total_energy_density, m)?)?;
    m.add_function(wrap_pyfunction!(generalized_total_energy, m)?)?;
    m.add_function(wrap_pyfunction!(planck_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(generalized_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(field_diagnostics, m)?)?;
    m.add_function(wrap_pyfunction!(einstein_internal_energy, m)?)?;
    m.add_function(wrap_pyfunction!(einstein_heat_capacity, m)?)?;
    m.add_function(wrap_pyfunction!(debye_internal_energy, m)?)?;
    m.add_function(wrap_pyfunction!(debye_heat_capacity, m)?)?;
    m.add_function(wrap_pyfunction!(generalized_phonon_internal_energy, m)?)?;
    m.add_function(wrap_pyfunction!(generalized_phonon_heat_capacity, m)?)?;
    m.add_function(wrap_pyfunction!(fit_planck, m)?)?;
    m.add_function(wrap_pyfunction!(fit_generalized, m)?)?;
    m.add_function(wrap_pyfunction!(read_spectrum_csv, m)?)?;
    Ok(())
}

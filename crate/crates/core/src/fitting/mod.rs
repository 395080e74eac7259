//! Least-squares estimation of radiation parameters from measured spectra.
//!
//! Datasets may be tabulated against wavelength, frequency, or angular
//! frequency, with any of the matching density conventions; fitting always
//! converts to the canonical per-angular-frequency representation first, so
//! the recovered parameters do not depend on how the data were tabulated.
//! Two models are available: the plain thermal spectrum with temperature as
//! its single parameter, and the external-field spectrum with up to four
//! free parameters (`T`, `beta`, `R`, `S`), any subset of which may be
//! pinned. The four-parameter objective is multimodal enough to warrant
//! multiple starts, drawn from a seeded Latin-hypercube so runs are
//! reproducible.

mod csv;
mod dataset;
mod lsq;

pub use csv::{read_csv_path, read_csv_str, write_csv};
pub use dataset::{
    abscissa_from_omega, omega_from_abscissa, ordinate_factor_from_canonical, AbscissaKind,
    OrdinateKind, SpectrumDataset, SpectrumSample,
};

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::extfield::{generalized_spectral_density, ExternalField};
use crate::radiation::{planck_spectral_density, PhysicalConstants};

use lsq::{levenberg_marquardt, LsqOptions, LsqOutcome};

/// Which spectral model a fit used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// Thermal spectrum, single parameter `T`.
    Planck,
    /// External-field spectrum with parameters `T`, `beta`, `R`, `S`.
    Generalized,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Planck => "planck",
            ModelKind::Generalized => "generalized",
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "planck" => Ok(ModelKind::Planck),
            "generalized" => Ok(ModelKind::Generalized),
            _ => Err(Error::InvalidInput(format!(
                "unknown model '{s}' (expected 'planck' or 'generalized')"
            ))),
        }
    }
}

/// Box constraints for the four-parameter model, as `(lower, upper)` pairs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneralizedBounds {
    pub t: (f64, f64),
    pub beta: (f64, f64),
    pub r: (f64, f64),
    pub s: (f64, f64),
}

/// Parameters to pin instead of fit; `None` means free.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FixedParams {
    pub t: Option<f64>,
    pub beta: Option<f64>,
    pub r: Option<f64>,
    pub s: Option<f64>,
}

/// Outcome of a spectrum fit.
///
/// `parameters` holds every model parameter (fitted and pinned alike) keyed
/// by name; `standard_errors` holds one entry per *free* parameter and is
/// present only for converged fits with at least one free parameter.
/// `residuals` are the weighted residuals `(data − model)/σ` in canonical
/// (ascending angular frequency) order. `chi_square` is their sum of
/// squares. `degenerate` flags fits that should not be trusted: constant
/// data, a parameter at its bound, or a singular covariance.
#[derive(Clone, Debug)]
pub struct FitResult {
    pub model: ModelKind,
    pub parameters: BTreeMap<String, f64>,
    pub standard_errors: Option<BTreeMap<String, f64>>,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    pub converged: bool,
    pub degenerate: bool,
    pub iterations: usize,
    pub residuals: Vec<f64>,
}

/// Pointwise relative deviations of data from a fitted model.
#[derive(Clone, Debug)]
pub struct DeviationReport {
    /// `(ω, (data − model)/model)` pairs in ascending ω order.
    pub residuals: Vec<(f64, f64)>,
    pub max_abs_relative: f64,
    pub rms_relative: f64,
}

const PARAM_NAMES: [&str; 4] = ["T", "beta", "R", "S"];
const GENERALIZED_STARTS: usize = 16;

/// Fit the single-temperature thermal spectrum to a dataset.
///
/// The temperature is constrained to `t_bounds` and the optimizer is started
/// from eight log-spaced seeds spanning the interval; the best minimum wins.
/// An unconverged outcome is still returned (with `converged = false`), not
/// treated as an error.
pub fn fit_planck(
    ds: &SpectrumDataset,
    t_bounds: (f64, f64),
    consts: &PhysicalConstants,
) -> Result<FitResult> {
    let (lo, hi) = t_bounds;
    if !lo.is_finite() || !hi.is_finite() || lo <= 0.0 || hi <= lo {
        return Err(Error::InvalidInput(format!(
            "temperature bounds must satisfy 0 < lower < upper, got [{lo}, {hi}]"
        )));
    }
    let (omegas, values, sigmas, has_sigmas) = canonical_arrays(ds, consts)?;
    let resid = |p: &[f64]| -> Result<Vec<f64>> {
        let t = p[0];
        omegas
            .iter()
            .zip(&values)
            .zip(&sigmas)
            .map(|((&w, &v), &s)| Ok((v - planck_spectral_density(w, t, consts)?) / s))
            .collect()
    };

    let opts = LsqOptions::default();
    let mut best: Option<LsqOutcome> = None;
    for k in 0..8 {
        let t0 = lo * (hi / lo).powf((2 * k + 1) as f64 / 16.0);
        let out = levenberg_marquardt(&resid, &[t0], &[lo], &[hi], &opts)?;
        if best.as_ref().is_none_or(|b| out.cost < b.cost) {
            best = Some(out);
        }
    }
    let best = best.expect("at least one start ran");

    Ok(build_result(
        ModelKind::Planck,
        best,
        &["T"],
        &[],
        &values,
        &[lo],
        &[hi],
        has_sigmas,
    ))
}

/// Fit the external-field spectrum, with any subset of `T`, `beta`, `R`, `S`
/// pinned via `fixed`.
///
/// Free parameters are constrained to their boxes in `bounds`; `R` and `S`
/// must stay non-negative and `T` positive. The optimizer runs from
/// [`GENERALIZED_STARTS`] Latin-hypercube starts drawn from a stream cipher
/// seeded with `seed` (temperature is sampled log-uniformly), so results are
/// reproducible. The best minimum wins; an unconverged outcome is returned,
/// not raised as an error.
pub fn fit_generalized(
    ds: &SpectrumDataset,
    bounds: &GeneralizedBounds,
    fixed: &FixedParams,
    consts: &PhysicalConstants,
    seed: u64,
) -> Result<FitResult> {
    // Validate pinned values.
    if let Some(t) = fixed.t {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "fixed temperature must be positive and finite, got {t}"
            )));
        }
    }
    if let Some(b) = fixed.beta {
        if !b.is_finite() {
            return Err(Error::InvalidInput(format!(
                "fixed beta must be finite, got {b}"
            )));
        }
    }
    for (name, v) in [("R", fixed.r), ("S", fixed.s)] {
        if let Some(v) = v {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "fixed {name} must be non-negative and finite, got {v}"
                )));
            }
        }
    }

    let fixed_arr = [fixed.t, fixed.beta, fixed.r, fixed.s];
    let bounds_arr = [bounds.t, bounds.beta, bounds.r, bounds.s];
    let free_idx: Vec<usize> = (0..4).filter(|&i| fixed_arr[i].is_none()).collect();

    // Validate bounds of the free parameters.
    for &i in &free_idx {
        let (lo, hi) = bounds_arr[i];
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::InvalidInput(format!(
                "bounds for {} must satisfy lower < upper, got [{lo}, {hi}]",
                PARAM_NAMES[i]
            )));
        }
        let positivity_violated = match i {
            0 => lo <= 0.0,      // T strictly positive
            2 | 3 => lo < 0.0,   // R, S non-negative
            _ => false,
        };
        if positivity_violated {
            return Err(Error::InvalidInput(format!(
                "lower bound for {} must be {} , got {lo}",
                PARAM_NAMES[i],
                if i == 0 { "positive" } else { "non-negative" }
            )));
        }
    }

    let (omegas, values, sigmas, has_sigmas) = canonical_arrays(ds, consts)?;

    let defaults: [f64; 4] = std::array::from_fn(|i| fixed_arr[i].unwrap_or(f64::NAN));
    let assemble = |p_free: &[f64]| -> [f64; 4] {
        let mut full = defaults;
        for (slot, &i) in free_idx.iter().enumerate() {
            full[i] = p_free[slot];
        }
        full
    };
    let resid = |p_free: &[f64]| -> Result<Vec<f64>> {
        let [t, beta, r, s] = assemble(p_free);
        let field = ExternalField::new(beta, r, s)?;
        omegas
            .iter()
            .zip(&values)
            .zip(&sigmas)
            .map(|((&w, &v), &sg)| {
                Ok((v - generalized_spectral_density(w, t, &field, consts)?) / sg)
            })
            .collect()
    };

    if free_idx.is_empty() {
        let residuals = resid(&[])?;
        let chi_square = residuals.iter().map(|r| r * r).sum();
        let mut parameters = BTreeMap::new();
        for i in 0..4 {
            parameters.insert(PARAM_NAMES[i].to_string(), defaults[i]);
        }
        return Ok(FitResult {
            model: ModelKind::Generalized,
            parameters,
            standard_errors: None,
            chi_square,
            degrees_of_freedom: values.len(),
            converged: true,
            degenerate: false,
            iterations: 0,
            residuals,
        });
    }

    let lower: Vec<f64> = free_idx.iter().map(|&i| bounds_arr[i].0).collect();
    let upper: Vec<f64> = free_idx.iter().map(|&i| bounds_arr[i].1).collect();

    // Latin-hypercube starts: one stratum per start in every free dimension.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let strata: Vec<Vec<usize>> = free_idx
        .iter()
        .map(|_| {
            let mut order: Vec<usize> = (0..GENERALIZED_STARTS).collect();
            order.shuffle(&mut rng);
            order
        })
        .collect();
    let mut start_strata = vec![vec![0usize; free_idx.len()]; GENERALIZED_STARTS];
    for (d, perm) in strata.iter().enumerate() {
        for (k, &stratum) in perm.iter().enumerate() {
            start_strata[k][d] = stratum;
        }
    }

    let opts = LsqOptions::default();
    let mut best: Option<LsqOutcome> = None;
    for start in &start_strata {
        let p0: Vec<f64> = free_idx
            .iter()
            .zip(start)
            .map(|(&i, &stratum)| {
                let u = (stratum as f64 + rng.random::<f64>()) / GENERALIZED_STARTS as f64;
                let (lo, hi) = bounds_arr[i];
                if i == 0 {
                    lo * (hi / lo).powf(u) // temperature: log-uniform
                } else {
                    lo + u * (hi - lo)
                }
            })
            .collect();
        let out = levenberg_marquardt(&resid, &p0, &lower, &upper, &opts)?;
        if best.as_ref().is_none_or(|b| out.cost < b.cost) {
            best = Some(out);
        }
    }
    let best = best.expect("at least one start ran");

    let free_names: Vec<&str> = free_idx.iter().map(|&i| PARAM_NAMES[i]).collect();
    let pinned: Vec<(&str, f64)> = (0..4)
        .filter(|i| fixed_arr[*i].is_some())
        .map(|i| (PARAM_NAMES[i], defaults[i]))
        .collect();
    Ok(build_result(
        ModelKind::Generalized,
        best,
        &free_names,
        &pinned,
        &values,
        &lower,
        &upper,
        has_sigmas,
    ))
}

/// Relative deviations `(data − model)/model` of a dataset from a fitted
/// model, with their maximum magnitude and root-mean-square.
///
/// Requires a converged fit; asking for deviations from a failed fit is
/// reported as a convergence error rather than producing misleading numbers.
pub fn deviation_report(
    ds: &SpectrumDataset,
    fit: &FitResult,
    consts: &PhysicalConstants,
) -> Result<DeviationReport> {
    if !fit.converged {
        return Err(Error::NonConvergence(
            "deviation report requires a converged fit".to_string(),
        ));
    }
    let get = |k: &str| -> Result<f64> {
        fit.parameters.get(k).copied().ok_or_else(|| {
            Error::InvalidInput(format!("fit result lacks parameter '{k}'"))
        })
    };
    let canon = ds.to_canonical(consts)?;
    let t = get("T")?;
    let field = match fit.model {
        ModelKind::Planck => ExternalField::zero(),
        ModelKind::Generalized => ExternalField::new(get("beta")?, get("R")?, get("S")?)?,
    };

    let mut residuals = Vec::with_capacity(canon.len());
    let mut max_abs = 0.0f64;
    let mut sum_sq = 0.0f64;
    for s in canon.samples() {
        let m = generalized_spectral_density(s.abscissa, t, &field, consts)?;
        let rel = (s.value - m) / m;
        residuals.push((s.abscissa, rel));
        max_abs = max_abs.max(rel.abs());
        sum_sq += rel * rel;
    }
    let rms_relative = (sum_sq / residuals.len() as f64).sqrt();
    Ok(DeviationReport {
        residuals,
        max_abs_relative: max_abs,
        rms_relative,
    })
}

/// `(omegas, values, sigmas-with-unit-fallback, had-real-sigmas)`.
type CanonicalArrays = (Vec<f64>, Vec<f64>, Vec<f64>, bool);

/// Canonicalize a dataset into parallel arrays; missing uncertainties become
/// unit weights.
fn canonical_arrays(
    ds: &SpectrumDataset,
    consts: &PhysicalConstants,
) -> Result<CanonicalArrays> {
    let canon = ds.to_canonical(consts)?;
    let has_sigmas = canon.has_sigmas();
    let mut omegas = Vec::with_capacity(canon.len());
    let mut values = Vec::with_capacity(canon.len());
    let mut sigmas = Vec::with_capacity(canon.len());
    for s in canon.samples() {
        omegas.push(s.abscissa);
        values.push(s.value);
        sigmas.push(s.sigma.unwrap_or(1.0));
    }
    Ok((omegas, values, sigmas, has_sigmas))
}

#[allow(clippy::too_many_arguments)]
fn build_result(
    model: ModelKind,
    best: LsqOutcome,
    free_names: &[&str],
    pinned: &[(&str, f64)],
    values: &[f64],
    lower: &[f64],
    upper: &[f64],
    has_sigmas: bool,
) -> FitResult {
    let n = values.len();
    let dof = n.saturating_sub(free_names.len());
    let ses = standard_errors(&best.jacobian, best.cost, dof, has_sigmas);

    let constant_data = values.iter().all(|v| *v == values[0]);
    let at_bound = best
        .params
        .iter()
        .zip(lower.iter().zip(upper))
        .any(|(p, (lo, hi))| {
            let tol = 1e-8 * (hi - lo);
            (p - lo).abs() <= tol || (hi - p).abs() <= tol
        });
    let singular = ses.iter().any(|s| !s.is_finite());
    let degenerate = constant_data || at_bound || singular;

    let mut parameters = BTreeMap::new();
    for (name, value) in free_names.iter().zip(&best.params) {
        parameters.insert((*name).to_string(), *value);
    }
    for (name, value) in pinned {
        parameters.insert((*name).to_string(), *value);
    }
    let standard_errors = if best.converged && !free_names.is_empty() {
        Some(
            free_names
                .iter()
                .zip(&ses)
                .map(|(name, se)| ((*name).to_string(), *se))
                .collect(),
        )
    } else {
        None
    };

    FitResult {
        model,
        parameters,
        standard_errors,
        chi_square: best.cost,
        degrees_of_freedom: dof,
        converged: best.converged,
        degenerate,
        iterations: best.iterations,
        residuals: best.residuals,
    }
}

/// Per-parameter standard errors from the Jacobian at the solution: square
/// roots of the diagonal of `(JᵀJ)⁻¹`, inflated by the reduced chi-square
/// when the data carry no uncertainties. Infinite when `JᵀJ` is singular.
fn standard_errors(
    jac_cols: &[Vec<f64>],
    cost: f64,
    dof: usize,
    has_sigmas: bool,
) -> Vec<f64> {
    if jac_cols.is_empty() {
        return Vec::new();
    }
    let scale = if has_sigmas {
        1.0
    } else {
        cost / dof.max(1) as f64
    };
    match lsq::invert(&lsq::normal_matrix(jac_cols)) {
        Some(c) => (0..jac_cols.len())
            .map(|j| (c[j][j].max(0.0) * scale).sqrt())
            .collect(),
        None => vec![f64::INFINITY; jac_cols.len()],
    }
}

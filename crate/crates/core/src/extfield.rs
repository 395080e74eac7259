//! Radiation in equilibrium with an external field.
//!
//! On top of the spontaneous/stimulated Einstein channels, the kinetic
//! balance gains two field-driven channels with coefficients `C_mn` (downward)
//! and `C_nm` (upward). Normalized by the spontaneous rate they become the
//! dimensionless functions `P = C_mn/A` and `Q = C_nm/A`, and the mode
//! occupancy generalizes from `1/(e^x − 1)` to
//!
//! ```text
//! n(x) = (1 + P − Q e^x) / (e^x − 1),      x = ħω/kT.
//! ```
//!
//! `P` is taken constant in frequency while `Q(ω) = R e^{−Sω}` decays, so
//! the total energy stays finite whenever `S > 0`. A field with `Q` too
//! large drives the density negative at low frequency — that regime is
//! reported through [`FieldDiagnostics`] rather than clamped away.

use crate::error::{Error, Result};
use crate::radiation::{
    mode_density_3d, planck_spectral_density, EinsteinCoefficients, LevelPopulations,
    PhysicalConstants, SpectralDensity, SpectralGrid,
};
use crate::specfun::{self, QuadratureSpec};

/// Field strength parameters: constant `P` plus the exponentially damped
/// `Q(ω) = R e^{−Sω}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExternalField {
    p_coeff: f64,
    q_amplitude: f64,
    q_decay: f64,
}

impl ExternalField {
    /// Build a field; the amplitude `R` and decay `S` must be non-negative
    /// and finite, while `P` may take either sign.
    pub fn new(p_coeff: f64, q_amplitude: f64, q_decay: f64) -> Result<Self> {
        if !p_coeff.is_finite() {
            return Err(Error::Domain(format!(
                "field coefficient P must be finite, got {p_coeff}"
            )));
        }
        if !q_amplitude.is_finite() || q_amplitude < 0.0 {
            return Err(Error::Domain(format!(
                "field amplitude R must be finite and non-negative, got {q_amplitude}"
            )));
        }
        if !q_decay.is_finite() || q_decay < 0.0 {
            return Err(Error::Domain(format!(
                "field decay S must be finite and non-negative, got {q_decay}"
            )));
        }
        Ok(ExternalField {
            p_coeff,
            q_amplitude,
            q_decay,
        })
    }

    /// The zero field: spectra reduce to the Planck law exactly.
    pub fn zero() -> Self {
        ExternalField {
            p_coeff: 0.0,
            q_amplitude: 0.0,
            q_decay: 0.0,
        }
    }

    pub fn p_coeff(&self) -> f64 {
        self.p_coeff
    }

    pub fn q_amplitude(&self) -> f64 {
        self.q_amplitude
    }

    pub fn q_decay(&self) -> f64 {
        self.q_decay
    }

    /// True when both channels are absent.
    pub fn is_zero(&self) -> bool {
        self.p_coeff == 0.0 && self.q_amplitude == 0.0
    }
}

/// Scan summary of a field's effect across a frequency grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldDiagnostics {
    /// Lowest grid frequency at which the generalized density is negative,
    /// if any.
    pub first_negative_omega: Option<f64>,
    /// Whether the total energy integral converges (`S > 0` or `R = 0`).
    pub energy_finite: bool,
    /// Largest relative deviation from the Planck density over the grid.
    pub max_relative_correction: f64,
}

/// Upward-channel strength at a frequency: `Q(ω) = R e^{−Sω}`.
pub fn q_of_omega(field: &ExternalField, omega: f64) -> f64 {
    field.q_amplitude * (-field.q_decay * omega).exp()
}

/// Generalized mode occupancy `(1 + p − q e^x)/(e^x − 1)`.
///
/// Evaluated as `(1+p)/(e^x − 1) − q/(1 − e^{−x})`, which stays accurate for
/// small x and saturates to `(1+p) e^{−x} − q` for large x instead of
/// overflowing.
pub fn generalized_occupancy(x: f64, p: f64, q: f64) -> f64 {
    (1.0 + p) / x.exp_m1() - q / (-(-x).exp_m1())
}

/// Spectral energy density in the external field:
/// `ρ_ω = (ħω³/π²c³) · (1 + P − Q(ω) e^x)/(e^x − 1)`.
///
/// Computed as the Planck density plus the field correction, so a zero field
/// reproduces [`planck_spectral_density`] bit for bit and a pure-`P` field
/// scales it by exactly `1 + P`. The value may be negative for strong `Q`;
/// that is reported by [`scan_field_diagnostics`], not masked here.
pub fn generalized_spectral_density(
    omega: f64,
    t: f64,
    field: &ExternalField,
    consts: &PhysicalConstants,
) -> Result<f64> {
    let planck = planck_spectral_density(omega, t, consts)?;
    let q = q_of_omega(field, omega);
    let x = consts.hbar() * omega / (consts.k_boltzmann() * t);
    // q e^x/(e^x − 1) written as q/(1 − e^{−x}) to survive large x.
    let q_term = mode_density_3d(omega, consts) * consts.hbar() * omega * q / (-(-x).exp_m1());
    Ok(planck * (1.0 + field.p_coeff) - q_term)
}

/// Evaluate the generalized density over a grid.
pub fn generalized_spectrum(
    grid: &SpectralGrid,
    t: f64,
    field: &ExternalField,
    consts: &PhysicalConstants,
) -> Result<SpectralDensity> {
    let mut samples = Vec::with_capacity(grid.points());
    for omega in grid.omegas() {
        samples.push((omega, generalized_spectral_density(omega, t, field, consts)?));
    }
    Ok(SpectralDensity {
        samples,
        dimension: 3,
        temperature: t,
        field_tag: Some(*field),
    })
}

/// Transition-rate imbalance including the field channels:
/// `N_m A + N_m ρ B + N_m C_mn − N_n ρ B − N_n C_nm`, with
/// `C_mn = P·A` and `C_nm = Q(ω)·A`.
///
/// Reduces to the ordinary detailed-balance residual for a zero field, and
/// vanishes when ρ is the generalized spectral density for this field.
pub fn equilibrium_residual_with_field(
    coeffs: &EinsteinCoefficients,
    pops: &LevelPopulations,
    rho: f64,
    field: &ExternalField,
    consts: &PhysicalConstants,
) -> f64 {
    let base = crate::radiation::detailed_balance_residual(coeffs, pops, rho, consts);
    let c_mn = field.p_coeff * coeffs.a_mn;
    let c_nm = q_of_omega(field, coeffs.omega) * coeffs.a_mn;
    base + pops.n_upper * c_mn - pops.n_lower * c_nm
}

/// Scan a grid for negativity, energy finiteness, and the size of the field
/// correction relative to the Planck density.
pub fn scan_field_diagnostics(
    field: &ExternalField,
    t: f64,
    grid: &SpectralGrid,
    consts: &PhysicalConstants,
) -> Result<FieldDiagnostics> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::Domain(format!(
            "temperature must be positive and finite, got {t}"
        )));
    }
    let mut first_negative_omega = None;
    let mut max_relative_correction: f64 = 0.0;
    for omega in grid.omegas() {
        let rho = generalized_spectral_density(omega, t, field, consts)?;
        if rho < 0.0 && first_negative_omega.is_none() {
            first_negative_omega = Some(omega);
        }
        // Relative correction (ρ_gen − ρ_planck)/ρ_planck = P − Q(ω) e^x.
        let x = consts.hbar() * omega / (consts.k_boltzmann() * t);
        let q = q_of_omega(field, omega);
        let correction = if q == 0.0 {
            field.p_coeff
        } else if x > 700.0 {
            f64::NEG_INFINITY
        } else {
            field.p_coeff - q * x.exp()
        };
        max_relative_correction = max_relative_correction.max(correction.abs());
    }
    Ok(FieldDiagnostics {
        first_negative_omega,
        energy_finite: field.q_decay > 0.0 || field.q_amplitude == 0.0,
        max_relative_correction,
    })
}

/// Total energy per unit volume of the generalized spectrum,
/// `∫_0^∞ ρ_ω dω`.
///
/// A constant-`Q` field (`S = 0` with `R > 0`) makes the integral diverge;
/// that case is detected analytically and reported as [`Error::Divergent`]
/// before any quadrature runs. A pure-`P` field scales the Planck total by
/// exactly `1 + P`.
pub fn generalized_total_energy(
    t: f64,
    field: &ExternalField,
    consts: &PhysicalConstants,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::Domain(format!(
            "temperature must be positive and finite, got {t}"
        )));
    }
    if field.q_amplitude == 0.0 {
        return Ok((1.0 + field.p_coeff)
            * crate::radiation::total_energy_density(t, 3, consts, spec)?);
    }
    if field.q_decay == 0.0 {
        return Err(Error::Divergent(
            "total energy diverges for a constant Q field (S = 0 with R > 0): the \
             correction integrand grows like ω³ at large frequency"
                .to_string(),
        ));
    }

    let kt_over_hbar = consts.k_boltzmann() * t / consts.hbar();
    let prefactor =
        crate::radiation::mode_density_prefactor(3, consts)? * consts.hbar() * kt_over_hbar.powi(4);
    let planck_part = (1.0 + field.p_coeff) * specfun::bose_integral(3, spec)?.value;

    // Q part: ∫ x³ e^{−s̃x}/(1 − e^{−x}) dx with s̃ = S kT/ħ, computed in
    // u = s̃ x so the effective decay length is always O(1).
    let s_tilde = field.q_decay * kt_over_hbar;
    let (j, _) = specfun::integrate(
        &|u: f64| {
            if u <= 0.0 {
                return 0.0;
            }
            let denom = -(-u / s_tilde).exp_m1(); // 1 − e^{−u/s̃}
            u.powi(3) * (-u).exp() / denom
        },
        0.0,
        60.0,
        spec,
    )?;
    let q_part = field.q_amplitude * j / s_tilde.powi(4);

    Ok(prefactor * (planck_part - q_part))
}

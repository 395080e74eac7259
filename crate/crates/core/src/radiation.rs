//! Equilibrium cavity radiation: Planck spectral densities in three and in
//! n spatial dimensions, Einstein coefficients with their detailed-balance
//! relation, and integrated energy densities.
//!
//! The spectral density factorizes as `ρ_ω = g(ω) · ⟨E(ω,T)⟩`: a
//! temperature-independent mode density times the mean energy of one
//! oscillator mode. The functions here keep that factorization literal so
//! the identity holds to the last bit.

use crate::error::{Error, Result};
use crate::specfun::{self, QuadratureSpec};

/// Unit system selector carried inside [`PhysicalConstants`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitsMode {
    /// SI values of ħ, k, c.
    Si,
    /// ħ = k = c = 1.
    Natural,
}

impl UnitsMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            UnitsMode::Si => "si",
            UnitsMode::Natural => "natural",
        }
    }
}

impl std::fmt::Display for UnitsMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for UnitsMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "si" => Ok(UnitsMode::Si),
            "natural" => Ok(UnitsMode::Natural),
            _ => Err(Error::InvalidInput(format!(
                "unknown units mode '{s}' (expected 'si' or 'natural')"
            ))),
        }
    }
}

/// The three constants every formula in this crate needs, bundled so that a
/// unit system is chosen once and passed explicitly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConstants {
    hbar: f64,
    k_boltzmann: f64,
    c: f64,
    mode: UnitsMode,
}

impl PhysicalConstants {
    /// CODATA SI values.
    pub fn si() -> Self {
        PhysicalConstants {
            hbar: 1.054_571_817e-34,
            k_boltzmann: 1.380_649e-23,
            c: 2.997_924_58e8,
            mode: UnitsMode::Si,
        }
    }

    /// Natural units: ħ = k = c = 1 exactly.
    pub fn natural() -> Self {
        PhysicalConstants {
            hbar: 1.0,
            k_boltzmann: 1.0,
            c: 1.0,
            mode: UnitsMode::Natural,
        }
    }

    /// Build from a mode tag.
    pub fn for_mode(mode: UnitsMode) -> Self {
        match mode {
            UnitsMode::Si => Self::si(),
            UnitsMode::Natural => Self::natural(),
        }
    }

    /// Reduced Planck constant.
    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Boltzmann constant.
    pub fn k_boltzmann(&self) -> f64 {
        self.k_boltzmann
    }

    /// Speed of light.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// Which unit system this bundle represents.
    pub fn mode(&self) -> UnitsMode {
        self.mode
    }

    /// Dimensionless photon energy `x = ħω / kT`.
    pub(crate) fn x_of(&self, omega: f64, t: f64) -> f64 {
        self.hbar * omega / (self.k_boltzmann * t)
    }
}

/// Grid point spacing for spectral evaluations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridSpacing {
    Linear,
    Log,
}

impl GridSpacing {
    pub fn as_str(&self) -> &'static str {
        match self {
            GridSpacing::Linear => "linear",
            GridSpacing::Log => "log",
        }
    }
}

impl std::fmt::Display for GridSpacing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for GridSpacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" => Ok(GridSpacing::Linear),
            "log" => Ok(GridSpacing::Log),
            _ => Err(Error::InvalidInput(format!(
                "unknown grid spacing '{s}' (expected 'linear' or 'log')"
            ))),
        }
    }
}

/// A validated angular-frequency grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralGrid {
    omega_min: f64,
    omega_max: f64,
    points: usize,
    spacing: GridSpacing,
}

impl SpectralGrid {
    /// Build a grid; requires `0 < omega_min < omega_max` and at least two
    /// points.
    pub fn new(omega_min: f64, omega_max: f64, points: usize, spacing: GridSpacing) -> Result<Self> {
        if !omega_min.is_finite() || !omega_max.is_finite() || omega_min <= 0.0 {
            return Err(Error::Domain(format!(
                "grid frequencies must be finite and positive, got [{omega_min}, {omega_max}]"
            )));
        }
        if omega_min >= omega_max {
            return Err(Error::Domain(format!(
                "grid needs omega_min < omega_max, got [{omega_min}, {omega_max}]"
            )));
        }
        if points < 2 {
            return Err(Error::Domain(format!(
                "grid needs at least 2 points, got {points}"
            )));
        }
        Ok(SpectralGrid {
            omega_min,
            omega_max,
            points,
            spacing,
        })
    }

    /// Default evaluation window for a temperature: 512 log-spaced points
    /// covering `ħω/kT` from 1e-3 to 50.
    pub fn default_for(t: f64, consts: &PhysicalConstants) -> Result<Self> {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::Domain(format!(
                "temperature must be positive and finite, got {t}"
            )));
        }
        let scale = consts.k_boltzmann() * t / consts.hbar();
        SpectralGrid::new(1e-3 * scale, 50.0 * scale, 512, GridSpacing::Log)
    }

    pub fn omega_min(&self) -> f64 {
        self.omega_min
    }

    pub fn omega_max(&self) -> f64 {
        self.omega_max
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> GridSpacing {
        self.spacing
    }

    /// Materialize the grid points; the first and last entries are exactly
    /// the configured endpoints.
    pub fn omegas(&self) -> Vec<f64> {
        let n = self.points;
        let mut out = Vec::with_capacity(n);
        match self.spacing {
            GridSpacing::Linear => {
                let step = (self.omega_max - self.omega_min) / (n - 1) as f64;
                for i in 0..n {
                    out.push(self.omega_min + step * i as f64);
                }
            }
            GridSpacing::Log => {
                let ln_min = self.omega_min.ln();
                let step = (self.omega_max.ln() - ln_min) / (n - 1) as f64;
                for i in 0..n {
                    out.push((ln_min + step * i as f64).exp());
                }
            }
        }
        out[0] = self.omega_min;
        out[n - 1] = self.omega_max;
        out
    }
}

/// A sampled spectral energy density.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDensity {
    /// `(ω, ρ_ω)` pairs in ascending ω order.
    pub samples: Vec<(f64, f64)>,
    /// Spatial dimension the density was computed in.
    pub dimension: u32,
    /// Temperature of the radiation.
    pub temperature: f64,
    /// External field used, if any.
    pub field_tag: Option<crate::extfield::ExternalField>,
}

/// Spontaneous coefficient together with the stimulated pair it fixes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EinsteinCoefficients {
    /// Spontaneous emission rate A (upper → lower).
    pub a_mn: f64,
    /// Stimulated emission coefficient B (upper → lower).
    pub b_mn: f64,
    /// Absorption coefficient B (lower → upper); equals `b_mn`.
    pub b_nm: f64,
    /// Transition angular frequency.
    pub omega: f64,
}

/// Thermal populations of the two levels of a transition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevelPopulations {
    pub n_upper: f64,
    pub n_lower: f64,
    pub e_upper: f64,
    pub e_lower: f64,
    pub temperature: f64,
}

impl LevelPopulations {
    /// Boltzmann-weighted populations `N = prefactor · e^{−E/kT}` for a
    /// transition of frequency ω with the lower level at `e_lower`.
    pub fn thermal(
        omega: f64,
        e_lower: f64,
        temperature: f64,
        prefactor: f64,
        consts: &PhysicalConstants,
    ) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::Domain(format!(
                "transition frequency must be positive, got {omega}"
            )));
        }
        if !temperature.is_finite() || temperature <= 0.0 {
            return Err(Error::Domain(format!(
                "temperature must be positive, got {temperature}"
            )));
        }
        if !prefactor.is_finite() || prefactor <= 0.0 {
            return Err(Error::Domain(format!(
                "population prefactor must be positive, got {prefactor}"
            )));
        }
        let e_upper = e_lower + consts.hbar() * omega;
        let kt = consts.k_boltzmann() * temperature;
        Ok(LevelPopulations {
            n_upper: prefactor * (-e_upper / kt).exp(),
            n_lower: prefactor * (-e_lower / kt).exp(),
            e_upper,
            e_lower,
            temperature,
        })
    }
}

/// Mean energy of one radiation mode, `ħω / (e^{ħω/kT} − 1)`.
///
/// Overflow-safe: once `ħω/kT > 700` the value has underflowed and 0 is
/// returned instead of a NaN from `∞/∞` arithmetic. Approaches `kT` as
/// `ħω/kT → 0`.
pub fn mean_photon_energy(omega: f64, t: f64, consts: &PhysicalConstants) -> Result<f64> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::Domain(format!(
            "frequency must be positive and finite, got {omega}"
        )));
    }
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::Domain(format!(
            "temperature must be positive and finite, got {t}"
        )));
    }
    let x = consts.x_of(omega, t);
    if x > 700.0 {
        return Ok(0.0);
    }
    Ok(consts.hbar() * omega / x.exp_m1())
}

/// Three-dimensional mode density `ω² / (π² c³)` (two polarizations folded
/// in). Assumes `ω ≥ 0`.
pub fn mode_density_3d(omega: f64, consts: &PhysicalConstants) -> f64 {
    let c = consts.c();
    omega * omega / (std::f64::consts::PI.powi(2) * c * c * c)
}

/// Prefactor of the n-dimensional mode density: the density is
/// `prefactor · ω^{n−1}`. Two polarization states are assumed in every
/// dimension.
pub(crate) fn mode_density_prefactor(n: u32, consts: &PhysicalConstants) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain("dimension must be at least 1".to_string()));
    }
    let nf = f64::from(n);
    let gamma_half_n = specfun::gamma(nf / 2.0)?;
    Ok(2.0
        / (2f64.powi(n as i32 - 1)
            * gamma_half_n
            * std::f64::consts::PI.powf(nf / 2.0)
            * consts.c().powi(n as i32)))
}

/// Mode density per unit volume in n spatial dimensions,
/// `2 · ω^{n−1} / (2^{n−1} Γ(n/2) π^{n/2} cⁿ)`.
pub fn mode_density_nd(omega: f64, n: u32, consts: &PhysicalConstants) -> Result<f64> {
    if !omega.is_finite() || omega < 0.0 {
        return Err(Error::Domain(format!(
            "frequency must be non-negative and finite, got {omega}"
        )));
    }
    Ok(mode_density_prefactor(n, consts)? * omega.powi(n as i32 - 1))
}

/// Planck spectral energy density `ρ_ω = ħω³/(π²c³) · 1/(e^{ħω/kT} − 1)`,
/// computed literally as mode density × mean mode energy.
pub fn planck_spectral_density(omega: f64, t: f64, consts: &PhysicalConstants) -> Result<f64> {
    Ok(mode_density_3d(omega, consts) * mean_photon_energy(omega, t, consts)?)
}

/// n-dimensional spectral energy density: mode density × mean mode energy.
/// Reduces to [`planck_spectral_density`] at n = 3 up to the accuracy of the
/// Γ(3/2) evaluation.
pub fn planck_spectral_density_nd(
    omega: f64,
    t: f64,
    n: u32,
    consts: &PhysicalConstants,
) -> Result<f64> {
    Ok(mode_density_nd(omega, n, consts)? * mean_photon_energy(omega, t, consts)?)
}

/// Derive the stimulated coefficients from a spontaneous rate:
/// `B = π²c³/(ħω³) · A`, identical for emission and absorption.
pub fn einstein_b_from_a(
    a_mn: f64,
    omega: f64,
    consts: &PhysicalConstants,
) -> Result<EinsteinCoefficients> {
    if !a_mn.is_finite() || a_mn <= 0.0 {
        return Err(Error::Domain(format!(
            "spontaneous rate must be positive and finite, got {a_mn}"
        )));
    }
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::Domain(format!(
            "transition frequency must be positive and finite, got {omega}"
        )));
    }
    let c = consts.c();
    let b = std::f64::consts::PI.powi(2) * c * c * c / (consts.hbar() * omega.powi(3)) * a_mn;
    Ok(EinsteinCoefficients {
        a_mn,
        b_mn: b,
        b_nm: b,
        omega,
    })
}

/// Net transition-rate imbalance `N_m A + N_m ρ B − N_n ρ B` for a radiation
/// density ρ at the transition frequency.
///
/// Vanishes (to rounding) exactly when ρ is the Planck density at the
/// populations' temperature; it is positive when ρ is too small to pump the
/// upper level and negative when ρ exceeds the equilibrium density.
pub fn detailed_balance_residual(
    coeffs: &EinsteinCoefficients,
    pops: &LevelPopulations,
    rho: f64,
    _consts: &PhysicalConstants,
) -> f64 {
    pops.n_upper * coeffs.a_mn + pops.n_upper * rho * coeffs.b_mn - pops.n_lower * rho * coeffs.b_nm
}

/// Total energy per unit volume of n-dimensional cavity radiation,
/// `∫_0^∞ ρ_{nω} dω`, evaluated by quadrature after substituting
/// `x = ħω/kT`. Scales as `T^{n+1}`.
pub fn total_energy_density(
    t: f64,
    n: u32,
    consts: &PhysicalConstants,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::Domain(format!(
            "temperature must be positive and finite, got {t}"
        )));
    }
    let prefactor = mode_density_prefactor(n, consts)?;
    let kt_over_hbar = consts.k_boltzmann() * t / consts.hbar();
    let bose = specfun::bose_integral(n, spec)?;
    Ok(prefactor * consts.hbar() * kt_over_hbar.powi(n as i32 + 1) * bose.value)
}

/// Evaluate the three-dimensional Planck density over a grid.
pub fn planck_spectrum(
    grid: &SpectralGrid,
    t: f64,
    consts: &PhysicalConstants,
) -> Result<SpectralDensity> {
    let mut samples = Vec::with_capacity(grid.points());
    for omega in grid.omegas() {
        samples.push((omega, planck_spectral_density(omega, t, consts)?));
    }
    Ok(SpectralDensity {
        samples,
        dimension: 3,
        temperature: t,
        field_tag: None,
    })
}

/// Evaluate the n-dimensional density over a grid.
pub fn planck_spectrum_nd(
    grid: &SpectralGrid,
    t: f64,
    n: u32,
    consts: &PhysicalConstants,
) -> Result<SpectralDensity> {
    let mut samples = Vec::with_capacity(grid.points());
    for omega in grid.omegas() {
        samples.push((omega, planck_spectral_density_nd(omega, t, n, consts)?));
    }
    Ok(SpectralDensity {
        samples,
        dimension: n,
        temperature: t,
        field_tag: None,
    })
}

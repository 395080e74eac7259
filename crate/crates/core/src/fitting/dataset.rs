//! Measured spectra and conversions between spectral representations.
//!
//! A dataset records which abscissa the measurements are tabulated against
//! (wavelength, ordinary frequency, or angular frequency) and which spectral
//! density the ordinate is (per unit wavelength, frequency, or angular
//! frequency). Fitting always happens in the canonical representation —
//! angular frequency with a per-angular-frequency density — and conversions
//! carry the usual Jacobian factors, applied to uncertainties as well.

use crate::error::{Error, Result};
use crate::radiation::PhysicalConstants;

/// Quantity the abscissa column tabulates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AbscissaKind {
    /// Wavelength λ; converts as `ω = 2πc/λ`.
    Wavelength,
    /// Ordinary frequency ν; converts as `ω = 2πν`.
    Frequency,
    /// Angular frequency ω (canonical).
    Angular,
}

impl AbscissaKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            AbscissaKind::Wavelength => "wavelength",
            AbscissaKind::Frequency => "frequency",
            AbscissaKind::Angular => "angular",
        }
    }
}

impl std::fmt::Display for AbscissaKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for AbscissaKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "wavelength" => Ok(AbscissaKind::Wavelength),
            "frequency" => Ok(AbscissaKind::Frequency),
            "angular" => Ok(AbscissaKind::Angular),
            _ => Err(Error::InvalidInput(format!(
                "unknown abscissa kind '{s}' (expected 'wavelength', 'frequency', or 'angular')"
            ))),
        }
    }
}

/// Spectral density the ordinate column holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrdinateKind {
    /// Energy density per unit wavelength, `ρ_λ = ρ_ω · ω²/(2πc)`.
    PerLambda,
    /// Energy density per unit frequency, `ρ_ν = 2π ρ_ω`.
    PerNu,
    /// Energy density per unit angular frequency (canonical).
    PerOmega,
}

impl OrdinateKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OrdinateKind::PerLambda => "per_lambda",
            OrdinateKind::PerNu => "per_nu",
            OrdinateKind::PerOmega => "per_omega",
        }
    }
}

impl std::fmt::Display for OrdinateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for OrdinateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "per_lambda" => Ok(OrdinateKind::PerLambda),
            "per_nu" => Ok(OrdinateKind::PerNu),
            "per_omega" => Ok(OrdinateKind::PerOmega),
            _ => Err(Error::InvalidInput(format!(
                "unknown ordinate kind '{s}' (expected 'per_lambda', 'per_nu', or 'per_omega')"
            ))),
        }
    }
}

/// One measured spectrum point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumSample {
    pub abscissa: f64,
    pub value: f64,
    /// One-sigma measurement uncertainty of `value`, if known.
    pub sigma: Option<f64>,
}

/// A measured spectrum with its representation metadata.
///
/// Construction validates every sample and sorts by ascending abscissa;
/// uncertainties must be given for either all samples or none.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumDataset {
    samples: Vec<SpectrumSample>,
    abscissa_kind: AbscissaKind,
    ordinate_kind: OrdinateKind,
    source_label: Option<String>,
}

impl SpectrumDataset {
    pub fn new(
        mut samples: Vec<SpectrumSample>,
        abscissa_kind: AbscissaKind,
        ordinate_kind: OrdinateKind,
        source_label: Option<String>,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidInput("dataset has no samples".to_string()));
        }
        let mut with_sigma = 0usize;
        for s in &samples {
            if !s.abscissa.is_finite() || s.abscissa <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "abscissa values must be positive and finite, got {}",
                    s.abscissa
                )));
            }
            if !s.value.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "ordinate values must be finite, got {}",
                    s.value
                )));
            }
            if let Some(sig) = s.sigma {
                if !sig.is_finite() || sig <= 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "uncertainties must be positive and finite, got {sig}"
                    )));
                }
                with_sigma += 1;
            }
        }
        if with_sigma != 0 && with_sigma != samples.len() {
            return Err(Error::InvalidInput(
                "uncertainties must be given for all samples or none".to_string(),
            ));
        }
        samples.sort_by(|a, b| a.abscissa.total_cmp(&b.abscissa));
        Ok(SpectrumDataset {
            samples,
            abscissa_kind,
            ordinate_kind,
            source_label,
        })
    }

    pub fn samples(&self) -> &[SpectrumSample] {
        &self.samples
    }

    pub fn abscissa_kind(&self) -> AbscissaKind {
        self.abscissa_kind
    }

    pub fn ordinate_kind(&self) -> OrdinateKind {
        self.ordinate_kind
    }

    pub fn source_label(&self) -> Option<&str> {
        self.source_label.as_deref()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Whether the samples carry uncertainties (all-or-none by construction).
    pub fn has_sigmas(&self) -> bool {
        self.samples.first().is_some_and(|s| s.sigma.is_some())
    }

    /// Convert to the canonical representation: angular-frequency abscissa
    /// with a per-angular-frequency density, sorted by ascending ω.
    /// Uncertainties are scaled by the same Jacobian as the values.
    pub fn to_canonical(&self, consts: &PhysicalConstants) -> Result<SpectrumDataset> {
        let converted = self
            .samples
            .iter()
            .map(|s| {
                let omega = omega_from_abscissa(s.abscissa, self.abscissa_kind, consts);
                let factor = ordinate_factor_from_canonical(omega, self.ordinate_kind, consts);
                SpectrumSample {
                    abscissa: omega,
                    value: s.value / factor,
                    sigma: s.sigma.map(|sig| sig / factor),
                }
            })
            .collect();
        SpectrumDataset::new(
            converted,
            AbscissaKind::Angular,
            OrdinateKind::PerOmega,
            self.source_label.clone(),
        )
    }
}

/// Angular frequency corresponding to an abscissa value of the given kind.
pub fn omega_from_abscissa(abscissa: f64, kind: AbscissaKind, consts: &PhysicalConstants) -> f64 {
    match kind {
        AbscissaKind::Wavelength => 2.0 * std::f64::consts::PI * consts.c() / abscissa,
        AbscissaKind::Frequency => 2.0 * std::f64::consts::PI * abscissa,
        AbscissaKind::Angular => abscissa,
    }
}

/// Abscissa value of the given kind at an angular frequency.
pub fn abscissa_from_omega(omega: f64, kind: AbscissaKind, consts: &PhysicalConstants) -> f64 {
    match kind {
        AbscissaKind::Wavelength => 2.0 * std::f64::consts::PI * consts.c() / omega,
        AbscissaKind::Frequency => omega / (2.0 * std::f64::consts::PI),
        AbscissaKind::Angular => omega,
    }
}

/// Multiplicative Jacobian taking the canonical per-ω density to the given
/// ordinate kind: `ρ_kind = factor · ρ_ω`.
pub fn ordinate_factor_from_canonical(
    omega: f64,
    kind: OrdinateKind,
    consts: &PhysicalConstants,
) -> f64 {
    match kind {
        OrdinateKind::PerLambda => omega * omega / (2.0 * std::f64::consts::PI * consts.c()),
        OrdinateKind::PerNu => 2.0 * std::f64::consts::PI,
        OrdinateKind::PerOmega => 1.0,
    }
}

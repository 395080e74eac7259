//! Lattice heat models built on the same quantized-oscillator statistics as
//! the radiation field.
//!
//! The Einstein solid treats all 3N vibrational modes as oscillators at one
//! frequency; the Debye solid spreads them over an elastic-continuum band
//! with an effective sound speed built from the transverse and longitudinal
//! speeds. Both recover the Dulong–Petit limit `C_V → 3Nk` at high
//! temperature; the Debye model also exhibits the `T³` law at low
//! temperature. The phonon occupancy can additionally be generalized with
//! the same external-field parameters used for photons.

use crate::error::{Error, Result};
use crate::extfield::ExternalField;
use crate::radiation::{mean_photon_energy, PhysicalConstants};
use crate::specfun::{self, QuadratureSpec};

/// Collection of `N` identical oscillators at the Einstein frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EinsteinSolid {
    n_oscillators: f64,
    omega_e: f64,
}

impl EinsteinSolid {
    pub fn new(n_oscillators: f64, omega_e: f64) -> Result<Self> {
        if !n_oscillators.is_finite() || n_oscillators <= 0.0 {
            return Err(Error::Domain(format!(
                "oscillator count must be positive and finite, got {n_oscillators}"
            )));
        }
        if !omega_e.is_finite() || omega_e <= 0.0 {
            return Err(Error::Domain(format!(
                "Einstein frequency must be positive and finite, got {omega_e}"
            )));
        }
        Ok(EinsteinSolid {
            n_oscillators,
            omega_e,
        })
    }

    pub fn n_oscillators(&self) -> f64 {
        self.n_oscillators
    }

    pub fn omega_e(&self) -> f64 {
        self.omega_e
    }
}

/// Thermal mean energy of a single quantized oscillator, `ħω/(e^{ħω/kT}−1)`
/// (no zero-point term). Identical to the mean energy of a radiation mode.
pub fn oscillator_mean_energy(omega: f64, t: f64, consts: &PhysicalConstants) -> Result<f64> {
    mean_photon_energy(omega, t, consts)
}

/// Internal energy `U = 3N ħω_E/(e^{x}−1)` of an Einstein solid, `x = ħω_E/kT`.
pub fn einstein_internal_energy(
    solid: &EinsteinSolid,
    t: f64,
    consts: &PhysicalConstants,
) -> Result<f64> {
    Ok(3.0 * solid.n_oscillators * oscillator_mean_energy(solid.omega_e, t, consts)?)
}

/// Heat capacity `C_V = 3Nk x² e^x/(e^x−1)²` of an Einstein solid.
///
/// Evaluated as `x²/((e^x−1)(1−e^{−x}))` so neither factor overflows; past
/// `x = 700` the value has underflowed to zero and 0 is returned.
pub fn einstein_heat_capacity(
    solid: &EinsteinSolid,
    t: f64,
    consts: &PhysicalConstants,
) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::Domain(format!(
            "temperature must be positive and finite, got {t}"
        )));
    }
    let x = consts.hbar() * solid.omega_e / (consts.k_boltzmann() * t);
    if x > 700.0 {
        return Ok(0.0);
    }
    let shape = x * x / (x.exp_m1() * (-(-x).exp_m1()));
    Ok(3.0 * solid.n_oscillators * consts.k_boltzmann() * shape)
}

/// Low-temperature asymptote `C_V ≈ 3Nk x² e^{−x}` of the Einstein model,
/// exhibiting the exponential freeze-out of a gapped spectrum.
pub fn einstein_heat_capacity_low_t(
    solid: &EinsteinSolid,
    t: f64,
    consts: &PhysicalConstants,
) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::Domain(format!(
            "temperature must be positive and finite, got {t}"
        )));
    }
    let x = consts.hbar() * solid.omega_e / (consts.k_boltzmann() * t);
    Ok(3.0 * solid.n_oscillators * consts.k_boltzmann() * x * x * (-x).exp())
}

/// Elastic solid with a Debye phonon band.
///
/// Constructed either from material data (oscillator density and the two
/// sound speeds) or directly from a Debye temperature. The effective sound
/// speed averages the two transverse branches and one longitudinal branch as
/// `3/c_eff³ = 2/v_t³ + 1/v_l³`, and the band edge `ω_D = c_eff (6π² n)^{1/3}`
/// holds exactly 3N modes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DebyeSolid {
    n_density: f64,
    v_t: f64,
    v_l: f64,
    volume: f64,
    c_eff: f64,
    omega_d: f64,
    t_d: f64,
}

impl DebyeSolid {
    pub fn n_density(&self) -> f64 {
        self.n_density
    }

    pub fn v_t(&self) -> f64 {
        self.v_t
    }

    pub fn v_l(&self) -> f64 {
        self.v_l
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Effective (branch-averaged) sound speed.
    pub fn c_eff(&self) -> f64 {
        self.c_eff
    }

    /// Debye cutoff frequency.
    pub fn omega_d(&self) -> f64 {
        self.omega_d
    }

    /// Debye temperature `ħω_D/k`.
    pub fn t_d(&self) -> f64 {
        self.t_d
    }

    pub fn n_oscillators(&self) -> f64 {
        self.n_density * self.volume
    }
}

/// Build a Debye solid from material data: oscillator number density,
/// transverse and longitudinal sound speeds, and sample volume.
///
/// After constructing the cutoff, the mode count `V ∫_0^{ω_D} g(ω) dω` is
/// re-evaluated by quadrature and required to equal 3N to within 1e-10 as a
/// consistency guard.
pub fn debye_solid_from_material(
    n_density: f64,
    v_t: f64,
    v_l: f64,
    volume: f64,
    consts: &PhysicalConstants,
) -> Result<DebyeSolid> {
    for (name, v) in [
        ("oscillator density", n_density),
        ("transverse sound speed", v_t),
        ("longitudinal sound speed", v_l),
        ("volume", volume),
    ] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::Domain(format!(
                "{name} must be positive and finite, got {v}"
            )));
        }
    }
    let c_eff = (3.0 / (2.0 / v_t.powi(3) + 1.0 / v_l.powi(3))).cbrt();
    let omega_d = c_eff * (6.0 * std::f64::consts::PI.powi(2) * n_density).cbrt();
    let t_d = consts.hbar() * omega_d / consts.k_boltzmann();

    // Mode-count normalization guard: the band must hold exactly 3 modes per
    // oscillator.
    let density_prefactor = 3.0 / (2.0 * std::f64::consts::PI.powi(2) * c_eff.powi(3));
    let (mode_count_per_volume, _) = specfun::integrate(
        &|w: f64| density_prefactor * w * w,
        0.0,
        omega_d,
        &QuadratureSpec::default(),
    )?;
    let expected = 3.0 * n_density;
    if ((mode_count_per_volume - expected) / expected).abs() > 1e-10 {
        return Err(Error::NonConvergence(format!(
            "Debye mode normalization check failed: integrated {mode_count_per_volume} modes \
             per unit volume, expected {expected}"
        )));
    }

    Ok(DebyeSolid {
        n_density,
        v_t,
        v_l,
        volume,
        c_eff,
        omega_d,
        t_d,
    })
}

/// Build a Debye solid directly from a Debye temperature, oscillator count,
/// and volume; the implied isotropic sound speed is recovered from the
/// cutoff.
pub fn debye_solid_from_debye_temperature(
    t_d: f64,
    n_oscillators: f64,
    volume: f64,
    consts: &PhysicalConstants,
) -> Result<DebyeSolid> {
    for (name, v) in [
        ("Debye temperature", t_d),
        ("oscillator count", n_oscillators),
        ("volume", volume),
    ] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::Domain(format!(
                "{name} must be positive and finite, got {v}"
            )));
        }
    }
    let n_density = n_oscillators / volume;
    let omega_d = consts.k_boltzmann() * t_d / consts.hbar();
    let c_eff = omega_d / (6.0 * std::f64::consts::PI.powi(2) * n_density).cbrt();
    Ok(DebyeSolid {
        n_density,
        v_t: c_eff,
        v_l: c_eff,
        volume,
        c_eff,
        omega_d,
        t_d,
    })
}

/// Phonon internal energy of a Debye solid,
/// `U = [3V (kT)⁴ / (2π² c_eff³ ħ³)] ∫_0^{T_D/T} x³/(e^x−1) dx`,
/// equivalently `3NkT·D(T_D/T)` with the third-order Debye function D.
pub fn debye_internal_energy(
    solid: &DebyeSolid,
    t: f64,
    consts: &PhysicalConstants,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::Domain(format!(
            "temperature must be positive and finite, got {t}"
        )));
    }
    let kt = consts.k_boltzmann() * t;
    let coef = 3.0 * solid.volume * kt.powi(4)
        / (2.0 * std::f64::consts::PI.powi(2) * solid.c_eff.powi(3) * consts.hbar().powi(3));
    let band = specfun::incomplete_bose_integral(3, solid.t_d / t, spec)?;
    Ok(coef * band.value)
}

/// Phonon heat capacity `C_V = 3Nk [D(y) − y D′(y)]` with `y = T_D/T`.
///
/// Approaches `3Nk` (Dulong–Petit) for `T ≫ T_D` and the `T³` law
/// `(12π⁴/5) Nk (T/T_D)³` for `T ≪ T_D`.
pub fn debye_heat_capacity(
    solid: &DebyeSolid,
    t: f64,
    consts: &PhysicalConstants,
) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::Domain(format!(
            "temperature must be positive and finite, got {t}"
        )));
    }
    let y = solid.t_d / t;
    let d = specfun::debye_function(y)?;
    let dp = specfun::debye_function_derivative(y)?;
    Ok(3.0 * solid.n_oscillators() * consts.k_boltzmann() * (d - y * dp))
}

/// Low-temperature `T³` law `C_V ≈ (12π⁴/5) Nk (T/T_D)³`.
pub fn debye_heat_capacity_low_t(
    solid: &DebyeSolid,
    t: f64,
    consts: &PhysicalConstants,
) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::Domain(format!(
            "temperature must be positive and finite, got {t}"
        )));
    }
    let ratio = t / solid.t_d;
    Ok(12.0 * std::f64::consts::PI.powi(4) / 5.0
        * solid.n_oscillators()
        * consts.k_boltzmann()
        * ratio.powi(3))
}

/// Phonon internal energy with the external-field occupancy
/// `(1 + P − Q(ω) e^x)/(e^x − 1)` in place of the Bose factor.
///
/// The band is finite, so the integral converges for every admissible field
/// (including `S = 0`). A field with `R = 0` scales the Debye energy by
/// exactly `1 + P`.
pub fn generalized_phonon_internal_energy(
    solid: &DebyeSolid,
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
    if field.q_amplitude() == 0.0 {
        return Ok((1.0 + field.p_coeff()) * debye_internal_energy(solid, t, consts, spec)?);
    }
    let kt = consts.k_boltzmann() * t;
    let coef = 3.0 * solid.volume * kt.powi(4)
        / (2.0 * std::f64::consts::PI.powi(2) * solid.c_eff.powi(3) * consts.hbar().powi(3));
    let p = field.p_coeff();
    let r = field.q_amplitude();
    // In x = ħω/kT the decay becomes e^{−s̃x} with s̃ = S kT/ħ.
    let s_tilde = field.q_decay() * kt / consts.hbar();
    let (band, _) = specfun::integrate(
        &|x: f64| {
            let planck_part = (1.0 + p) * specfun::bose_integrand(3, x);
            let q_part = if x <= 0.0 {
                0.0
            } else {
                r * (-s_tilde * x).exp() * x.powi(3) / (-(-x).exp_m1())
            };
            planck_part - q_part
        },
        0.0,
        solid.t_d / t,
        spec,
    )?;
    Ok(coef * band)
}

/// Heat capacity of the field-generalized phonon gas, `dU/dT`.
///
/// For `R = 0` this is exactly `(1 + P)` times the Debye heat capacity;
/// otherwise it is differentiated numerically with a symmetric step.
pub fn generalized_phonon_heat_capacity(
    solid: &DebyeSolid,
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
    if field.q_amplitude() == 0.0 {
        return Ok((1.0 + field.p_coeff()) * debye_heat_capacity(solid, t, consts)?);
    }
    let h = (1e-6 * t).max(t * f64::EPSILON.cbrt());
    let u_plus = generalized_phonon_internal_energy(solid, t + h, field, consts, spec)?;
    let u_minus = generalized_phonon_internal_energy(solid, t - h, field, consts, spec)?;
    Ok((u_plus - u_minus) / (2.0 * h))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // pinned reference values keep all oracle digits
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn natural_unit_solid() -> DebyeSolid {
        // ω_D = 1, T_D = 1, c_eff = 1, V = 1 in natural units.
        let n = 1.0 / (6.0 * std::f64::consts::PI.powi(2));
        debye_solid_from_material(n, 1.0, 1.0, 1.0, &PhysicalConstants::natural()).unwrap()
    }

    #[test]
    fn einstein_solid_validation() {
        assert!(EinsteinSolid::new(0.0, 1.0).is_err());
        assert!(EinsteinSolid::new(1.0, -1.0).is_err());
        let s = EinsteinSolid::new(2.0, 3.0).unwrap();
        assert_eq!(s.n_oscillators(), 2.0);
        assert_eq!(s.omega_e(), 3.0);
    }

    #[test]
    fn einstein_pinned_values_at_unit_x() {
        // Natural units, N = 1, ω_E = 1, T = 1, so x = 1.
        let nat = PhysicalConstants::natural();
        let s = EinsteinSolid::new(1.0, 1.0).unwrap();
        // U = 3/(e − 1).
        assert_relative_eq!(
            einstein_internal_energy(&s, 1.0, &nat).unwrap(),
            1.745_930_120_607_979_3,
            max_relative = 1e-13
        );
        // C = 3 e/(e − 1)².
        assert_relative_eq!(
            einstein_heat_capacity(&s, 1.0, &nat).unwrap(),
            3.0 * 0.920_673_594_207_792_32,
            max_relative = 1e-13
        );
    }

    #[test]
    fn einstein_dulong_petit_limit() {
        let nat = PhysicalConstants::natural();
        let s = EinsteinSolid::new(1.0, 1.0).unwrap();
        let c = einstein_heat_capacity(&s, 1000.0, &nat).unwrap();
        assert_relative_eq!(c, 3.0, max_relative = 1e-6);
    }

    #[test]
    fn einstein_low_t_freezeout() {
        let nat = PhysicalConstants::natural();
        let s = EinsteinSolid::new(1.0, 1.0).unwrap();
        // x = 50: the asymptote matches to ~2e^{−x}.
        let t = 1.0 / 50.0;
        let full = einstein_heat_capacity(&s, t, &nat).unwrap();
        let asym = einstein_heat_capacity_low_t(&s, t, &nat).unwrap();
        assert_relative_eq!(full, asym, max_relative = 1e-12);
        // Deep freeze-out underflows cleanly to zero.
        assert_eq!(einstein_heat_capacity(&s, 1.0 / 800.0, &nat).unwrap(), 0.0);
        assert_eq!(einstein_internal_energy(&s, 1.0 / 800.0, &nat).unwrap(), 0.0);
    }

    #[test]
    fn oscillator_mean_energy_classical_limit() {
        let nat = PhysicalConstants::natural();
        // kT ≫ ħω: equipartition gives kT per mode.
        let mean = oscillator_mean_energy(1.0, 1000.0, &nat).unwrap();
        assert_relative_eq!(mean, 1000.0, max_relative = 1e-3);
    }

    #[test]
    fn debye_construction_pinned() {
        let s = natural_unit_solid();
        assert_relative_eq!(s.c_eff(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(s.omega_d(), 1.0, max_relative = 1e-13);
        assert_relative_eq!(s.t_d(), 1.0, max_relative = 1e-13);
        assert_relative_eq!(
            s.n_oscillators(),
            1.0 / (6.0 * std::f64::consts::PI.powi(2)),
            max_relative = 1e-15
        );
    }

    #[test]
    fn debye_effective_speed_between_branches() {
        let nat = PhysicalConstants::natural();
        let s = debye_solid_from_material(1.0, 1.0, 2.0, 1.0, &nat).unwrap();
        // Two transverse branches dominate the average.
        assert!(s.c_eff() > s.v_t() && s.c_eff() < s.v_l());
        assert!(s.c_eff() - s.v_t() < s.v_l() - s.c_eff());
        let iso = debye_solid_from_material(1.0, 2.0, 2.0, 1.0, &nat).unwrap();
        assert_relative_eq!(iso.c_eff(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn debye_temperature_si_sanity() {
        // Aluminum-like data: n ≈ 6.02e28 m⁻³, v_t ≈ 3040 m/s, v_l ≈ 6420 m/s
        // should land near the known Debye temperature (~400 K).
        let si = PhysicalConstants::si();
        let s = debye_solid_from_material(6.02e28, 3040.0, 6420.0, 1e-6, &si).unwrap();
        assert!(
            s.t_d() > 350.0 && s.t_d() < 450.0,
            "unexpected Debye temperature {}",
            s.t_d()
        );
    }

    #[test]
    fn debye_from_temperature_round_trip() {
        let nat = PhysicalConstants::natural();
        let a = natural_unit_solid();
        let b =
            debye_solid_from_debye_temperature(a.t_d(), a.n_oscillators(), a.volume(), &nat)
                .unwrap();
        assert_relative_eq!(b.c_eff(), a.c_eff(), max_relative = 1e-12);
        assert_relative_eq!(b.omega_d(), a.omega_d(), max_relative = 1e-12);
        assert_relative_eq!(b.t_d(), a.t_d(), max_relative = 1e-12);
    }

    #[test]
    fn debye_invalid_inputs() {
        let nat = PhysicalConstants::natural();
        assert!(debye_solid_from_material(-1.0, 1.0, 1.0, 1.0, &nat).is_err());
        assert!(debye_solid_from_material(1.0, 0.0, 1.0, 1.0, &nat).is_err());
        assert!(debye_solid_from_debye_temperature(0.0, 1.0, 1.0, &nat).is_err());
        let s = natural_unit_solid();
        assert!(debye_heat_capacity(&s, -1.0, &nat).is_err());
        assert!(debye_internal_energy(&s, 0.0, &nat, &QuadratureSpec::default()).is_err());
    }

    #[test]
    fn debye_energy_pinned_and_band_identity() {
        let nat = PhysicalConstants::natural();
        let spec = QuadratureSpec::default();
        let s = natural_unit_solid();
        // U(T = 1) = 3NkT·D(1) with N = 1/(6π²).
        assert_relative_eq!(
            debye_internal_energy(&s, 1.0, &nat, &spec).unwrap(),
            0.034_166_291_609_589_54,
            max_relative = 1e-10
        );
        // The quadrature form equals 3NkT·D(T_D/T) across temperatures.
        for t in [0.5, 1.0, 3.0] {
            let u = debye_internal_energy(&s, t, &nat, &spec).unwrap();
            let d = specfun::debye_function(s.t_d() / t).unwrap();
            assert_relative_eq!(u, 3.0 * s.n_oscillators() * t * d, max_relative = 1e-12);
        }
    }

    #[test]
    fn debye_heat_capacity_pinned() {
        let nat = PhysicalConstants::natural();
        let s = natural_unit_solid();
        // C(T = 1) = 3Nk·(D(1) − D′(1)).
        let expected =
            3.0 * s.n_oscillators() * (0.674_415_564_077_814_68 + 0.277_316_571_625_464_77);
        assert_relative_eq!(
            debye_heat_capacity(&s, 1.0, &nat).unwrap(),
            expected,
            max_relative = 1e-12
        );
    }

    #[test]
    fn debye_dulong_petit_limit() {
        let nat = PhysicalConstants::natural();
        let s = natural_unit_solid();
        let c = debye_heat_capacity(&s, 100.0 * s.t_d(), &nat).unwrap();
        assert_relative_eq!(
            c,
            3.0 * s.n_oscillators(),
            max_relative = 1e-4
        );
    }

    #[test]
    fn debye_t_cubed_law() {
        let nat = PhysicalConstants::natural();
        let s = natural_unit_solid();
        let t = s.t_d() / 50.0;
        let c = debye_heat_capacity(&s, t, &nat).unwrap();
        let law = debye_heat_capacity_low_t(&s, t, &nat).unwrap();
        assert_relative_eq!(c, law, max_relative = 1e-2);
        // And the asymptote constant itself: 12π⁴/5.
        assert_relative_eq!(
            law,
            233.781_818_481_605_85 * s.n_oscillators() * (t / s.t_d()).powi(3),
            max_relative = 1e-13
        );
    }

    #[test]
    fn debye_heat_capacity_monotone_in_t() {
        let nat = PhysicalConstants::natural();
        let s = natural_unit_solid();
        let mut prev = 0.0;
        for i in 0..30 {
            let t = s.t_d() * 10f64.powf(-2.0 + 3.0 * i as f64 / 29.0);
            let c = debye_heat_capacity(&s, t, &nat).unwrap();
            assert!(c > prev, "heat capacity not increasing at T = {t}");
            prev = c;
        }
    }

    #[test]
    fn phonon_zero_field_is_bitwise_debye() {
        let nat = PhysicalConstants::natural();
        let spec = QuadratureSpec::default();
        let s = natural_unit_solid();
        for t in [0.2, 1.0, 7.0] {
            let gen = generalized_phonon_internal_energy(
                &s,
                t,
                &ExternalField::zero(),
                &nat,
                &spec,
            )
            .unwrap();
            let debye = debye_internal_energy(&s, t, &nat, &spec).unwrap();
            assert_eq!(gen.to_bits(), debye.to_bits());
            let c_gen = generalized_phonon_heat_capacity(
                &s,
                t,
                &ExternalField::zero(),
                &nat,
                &spec,
            )
            .unwrap();
            let c_debye = debye_heat_capacity(&s, t, &nat).unwrap();
            assert_eq!(c_gen.to_bits(), c_debye.to_bits());
        }
    }

    #[test]
    fn phonon_pure_p_scales_exactly() {
        let nat = PhysicalConstants::natural();
        let spec = QuadratureSpec::default();
        let s = natural_unit_solid();
        let field = ExternalField::new(0.25, 0.0, 0.0).unwrap();
        let gen = generalized_phonon_internal_energy(&s, 1.0, &field, &nat, &spec).unwrap();
        let debye = debye_internal_energy(&s, 1.0, &nat, &spec).unwrap();
        assert_eq!(gen.to_bits(), (1.25 * debye).to_bits());
    }

    #[test]
    fn phonon_pinned_field_values() {
        // Natural-unit solid, T = 1, field P = 0, R = 0.05, S = 1.
        let nat = PhysicalConstants::natural();
        let spec = QuadratureSpec::default();
        let s = natural_unit_solid();
        let field = ExternalField::new(0.0, 0.05, 1.0).unwrap();
        let u = generalized_phonon_internal_energy(&s, 1.0, &field, &nat, &spec).unwrap();
        assert_relative_eq!(u, 0.032_457_977_029_110_06, max_relative = 1e-9);
        assert!(u < debye_internal_energy(&s, 1.0, &nat, &spec).unwrap());
        let c = generalized_phonon_heat_capacity(&s, 1.0, &field, &nat, &spec).unwrap();
        assert_relative_eq!(c, 0.047_048_659_133_635_71, max_relative = 1e-6);
    }

    #[test]
    fn phonon_constant_q_band_is_finite() {
        // A constant Q diverges for photons but the phonon band is bounded,
        // so the energy is finite (just reduced).
        let nat = PhysicalConstants::natural();
        let spec = QuadratureSpec::default();
        let s = natural_unit_solid();
        let field = ExternalField::new(0.0, 0.01, 0.0).unwrap();
        let u = generalized_phonon_internal_energy(&s, 1.0, &field, &nat, &spec).unwrap();
        assert!(u.is_finite());
        assert!(u < debye_internal_energy(&s, 1.0, &nat, &spec).unwrap());
    }
}

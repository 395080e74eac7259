//! Special functions backing the radiation and heat-capacity modules:
//! the gamma function, Bose–Einstein integrals, the third-order Debye
//! function with its derivative, and the displacement-law peak equation.

mod quadrature;

pub use quadrature::QuadratureSpec;

pub(crate) use quadrature::integrate;

use crate::error::{Error, Result};

/// Upper truncation point for Bose integrals over `[0, inf)`: beyond x = 60
/// the integrand `x^s e^{-x}` contributes less than 1e-17 relative for every
/// supported order.
const BOSE_CUTOFF: f64 = 60.0;

/// Below this argument the Bose integrand switches to its series form to
/// avoid evaluating `x^s / (e^x - 1)` as an indeterminate ratio.
const BOSE_SERIES_CUTOFF: f64 = 1e-4;

/// Absolute bracket width at which the displacement-peak bisection stops.
pub const PLANCK_PEAK_TOLERANCE: f64 = 1e-12;

/// Value and error estimate of a Bose integral computed by quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoseIntegralResult {
    pub value: f64,
    pub error_estimate: f64,
}

// Lanczos approximation with g = 607/128 and 15 coefficients (Godfrey's
// set); relative error is a few ulps across the positive real axis.
const LANCZOS_G: f64 = 4.742_187_5;
const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_048_8e-4,
    2.174_396_181_152_126_4e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_274e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162_6e-6,
];

/// Gamma function for positive real arguments.
///
/// Accuracy is a few ulps (well below 1e-13 relative on `[0.5, 20]`), which
/// is what the mode-density prefactors require. Arguments at or below zero
/// are rejected.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("gamma argument must be finite, got {x}")));
    }
    if x <= 0.0 {
        return Err(Error::Domain(format!(
            "gamma is only supported for positive arguments, got {x}"
        )));
    }
    if x < 0.5 {
        // Recurrence keeps the Lanczos series in its sweet spot.
        return Ok(lanczos(x + 1.0) / x);
    }
    Ok(lanczos(x))
}

fn lanczos(x: f64) -> f64 {
    let mut series = LANCZOS_COEFFS[0];
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (x - 1.0 + k as f64);
    }
    let t = x + LANCZOS_G - 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x - 0.5) * (-t).exp() * series
}

/// Integrand `x^s / (e^x - 1)` with a series fallback near the origin.
pub(crate) fn bose_integrand(s: u32, x: f64) -> f64 {
    if x <= 0.0 {
        // Limit value at the origin: 1 for s = 1, 0 for larger orders.
        return if s == 1 { 1.0 } else { 0.0 };
    }
    if x < BOSE_SERIES_CUTOFF {
        // 1/(e^x - 1) = (1/x)(1 - x/2 + x^2/12 - x^4/720 + ...)
        let series = 1.0 - x / 2.0 + x * x / 12.0 - x.powi(4) / 720.0;
        return x.powi(s as i32 - 1) * series;
    }
    x.powi(s as i32) / x.exp_m1()
}

/// `∫_0^∞ x^s / (e^x − 1) dx` for integer order `s ≥ 1`.
///
/// Analytically this equals `Γ(s+1) ζ(s+1)`; the value here comes from
/// adaptive quadrature with the upper limit truncated at x = 60 where the
/// integrand has decayed far below the tolerance.
pub fn bose_integral(s: u32, spec: &QuadratureSpec) -> Result<BoseIntegralResult> {
    if s < 1 {
        return Err(Error::Domain(
            "Bose integral order must be at least 1".to_string(),
        ));
    }
    let (value, error_estimate) = integrate(&|x| bose_integrand(s, x), 0.0, BOSE_CUTOFF, spec)?;
    Ok(BoseIntegralResult {
        value,
        error_estimate,
    })
}

/// `∫_0^y x^s / (e^x − 1) dx` for integer order `s ≥ 1` and `y ≥ 0`.
pub fn incomplete_bose_integral(s: u32, y: f64, spec: &QuadratureSpec) -> Result<BoseIntegralResult> {
    if s < 1 {
        return Err(Error::Domain(
            "Bose integral order must be at least 1".to_string(),
        ));
    }
    if !y.is_finite() || y < 0.0 {
        return Err(Error::Domain(format!(
            "incomplete Bose integral needs a finite upper limit y >= 0, got {y}"
        )));
    }
    if y == 0.0 {
        return Ok(BoseIntegralResult {
            value: 0.0,
            error_estimate: 0.0,
        });
    }
    let (value, error_estimate) = integrate(&|x| bose_integrand(s, x), 0.0, y, spec)?;
    Ok(BoseIntegralResult {
        value,
        error_estimate,
    })
}

/// Third-order Debye function `D(y) = (3/y³) ∫_0^y x³/(e^x − 1) dx`.
///
/// `D(0+) = 1`, strictly decreasing, with the large-argument asymptote
/// `(π⁴/5) / y³`.
pub fn debye_function(y: f64) -> Result<f64> {
    if !y.is_finite() || y <= 0.0 {
        return Err(Error::Domain(format!(
            "Debye function argument must be positive and finite, got {y}"
        )));
    }
    let spec = QuadratureSpec::default();
    let integral = incomplete_bose_integral(3, y, &spec)?;
    Ok(3.0 / (y * y * y) * integral.value)
}

/// Switch point below which `D'(y)` uses its Maclaurin series; the direct
/// formula loses digits to cancellation as y → 0.
const DEBYE_DERIVATIVE_SERIES_CUTOFF: f64 = 0.05;

/// Derivative of the third-order Debye function.
///
/// Uses the identity `D'(y) = −3 D(y)/y + 3/(e^y − 1)` away from the origin
/// and the series `−3/8 + y/10 − y³/420 + y⁵/15120` for small y, where the
/// identity would cancel catastrophically. `D'(0+) = −3/8`.
pub fn debye_function_derivative(y: f64) -> Result<f64> {
    if !y.is_finite() || y <= 0.0 {
        return Err(Error::Domain(format!(
            "Debye derivative argument must be positive and finite, got {y}"
        )));
    }
    if y < DEBYE_DERIVATIVE_SERIES_CUTOFF {
        let y2 = y * y;
        return Ok(-0.375 + y / 10.0 - y2 * y / 420.0 + y2 * y2 * y / 15120.0);
    }
    let d = debye_function(y)?;
    Ok(-3.0 * d / y + 3.0 / y.exp_m1())
}

/// Displacement-law peak: the positive root of `x = n (1 − e^{−x})`, where
/// `n` is the spatial dimension. The spectral density `∝ x^n/(e^x−1)` peaks
/// at this x.
///
/// `n = 1` is degenerate — the equation has no positive root (the photon
/// density in one dimension has no interior maximum) — and is reported as a
/// domain error rather than a fabricated value.
pub fn planck_peak(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".to_string()));
    }
    if n == 1 {
        return Err(Error::Domain(
            "n = 1 is degenerate: x = 1 - exp(-x) has no positive root".to_string(),
        ));
    }
    let nf = f64::from(n);
    let f = |x: f64| x - nf * (-(-x).exp_m1());
    // f < 0 just right of the origin, f(n + 1) = 1 + n e^{-(n+1)} > 0.
    let mut lo = 1e-8;
    let mut hi = nf + 1.0;
    debug_assert!(f(lo) < 0.0 && f(hi) > 0.0);
    while hi - lo > PLANCK_PEAK_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // pinned reference values keep all oracle digits
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const SQRT_PI: f64 = 1.772_453_850_905_516;

    #[test]
    fn gamma_known_values() {
        assert_relative_eq!(gamma(0.5).unwrap(), SQRT_PI, max_relative = 1e-14);
        assert_relative_eq!(gamma(1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(1.5).unwrap(), SQRT_PI / 2.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(2.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(5.0).unwrap(), 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(10.0).unwrap(), 362_880.0, max_relative = 1e-14);
        assert_relative_eq!(
            gamma(20.0).unwrap(),
            1.216_451_004_088_320_3e17,
            max_relative = 1e-13
        );
    }

    #[test]
    fn gamma_half_integers_match_double_factorial_form() {
        // For odd n, Γ(n/2) = (n-2)!! √π / 2^((n-1)/2).
        let mut double_factorial = 1.0; // (n-2)!! for n = 1 (empty product)
        for n in [1u32, 3, 5, 7, 9, 11] {
            if n >= 3 {
                double_factorial *= f64::from(n - 2);
            }
            let expected = double_factorial * SQRT_PI / 2f64.powi(((n - 1) / 2) as i32);
            assert_relative_eq!(
                gamma(f64::from(n) / 2.0).unwrap(),
                expected,
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn gamma_rejects_bad_arguments() {
        assert!(gamma(0.0).is_err());
        assert!(gamma(-1.5).is_err());
        assert!(gamma(f64::NAN).is_err());
        assert!(gamma(f64::INFINITY).is_err());
    }

    #[test]
    fn bose_integral_matches_zeta_values() {
        let spec = QuadratureSpec::default();
        // Γ(s+1) ζ(s+1) for s = 1..5.
        let expected = [
            1.644_934_066_848_226_4,
            2.404_113_806_319_188_6,
            6.493_939_402_266_829,
            24.886_266_123_440_878,
            122.081_167_438_133_9,
        ];
        for (s, &want) in (1u32..=5).zip(expected.iter()) {
            let got = bose_integral(s, &spec).unwrap();
            assert_relative_eq!(got.value, want, max_relative = 1e-10);
            assert!(got.error_estimate <= 1e-10 * want.abs().max(1.0));
        }
    }

    #[test]
    fn bose_integral_rejects_order_zero() {
        assert!(bose_integral(0, &QuadratureSpec::default()).is_err());
    }

    #[test]
    fn incomplete_bose_pinned_value() {
        let spec = QuadratureSpec::default();
        let got = incomplete_bose_integral(3, 1.0, &spec).unwrap();
        // mpmath: ∫_0^1 x³/(e^x−1) dx
        assert_relative_eq!(got.value, 0.224_805_188_025_938_23, max_relative = 1e-11);
    }

    #[test]
    fn incomplete_bose_edge_cases() {
        let spec = QuadratureSpec::default();
        let zero = incomplete_bose_integral(3, 0.0, &spec).unwrap();
        assert_eq!(zero.value, 0.0);
        assert!(incomplete_bose_integral(3, -1.0, &spec).is_err());
        assert!(incomplete_bose_integral(0, 1.0, &spec).is_err());

        // Monotone in the upper limit.
        let mut prev = 0.0;
        for y in [0.5, 1.0, 2.0, 5.0, 10.0] {
            let v = incomplete_bose_integral(3, y, &spec).unwrap().value;
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn incomplete_bose_converges_to_complete() {
        let spec = QuadratureSpec::default();
        for s in 1u32..=5 {
            let full = bose_integral(s, &spec).unwrap().value;
            let trunc = incomplete_bose_integral(s, 80.0, &spec).unwrap().value;
            assert!(
                (full - trunc).abs() <= 1e-12 * full,
                "s = {s}: |{full} - {trunc}| too large"
            );
        }
    }

    #[test]
    fn debye_function_pinned_and_limits() {
        // mpmath: D(1)
        assert_relative_eq!(
            debye_function(1.0).unwrap(),
            0.674_415_564_077_814_7,
            max_relative = 1e-11
        );
        // D(y) -> 1 as y -> 0.
        assert_relative_eq!(debye_function(1e-6).unwrap(), 1.0, max_relative = 1e-5);
        // Large-argument asymptote (π⁴/5)/y³ to 0.01% at y = 20.
        let y = 20.0;
        let asymptote = std::f64::consts::PI.powi(4) / 5.0 / (y * y * y);
        assert_relative_eq!(debye_function(y).unwrap(), asymptote, max_relative = 1e-4);
        assert!(debye_function(0.0).is_err());
        assert!(debye_function(-2.0).is_err());
    }

    #[test]
    fn debye_function_strictly_decreasing() {
        // 100-point log grid over [1e-3, 1e3].
        let mut prev = f64::INFINITY;
        for i in 0..100 {
            let y = 10f64.powf(-3.0 + 6.0 * i as f64 / 99.0);
            let d = debye_function(y).unwrap();
            assert!(d > 0.0 && d <= 1.0 + 1e-15);
            assert!(d < prev, "D not strictly decreasing at y = {y}");
            prev = d;
        }
    }

    #[test]
    fn debye_derivative_pinned_and_series_junction() {
        // mpmath: D'(1) = -3 D(1) + 3/(e-1)
        assert_relative_eq!(
            debye_function_derivative(1.0).unwrap(),
            -0.277_316_571_625_464_77,
            max_relative = 1e-10
        );
        // D'(0+) = -3/8.
        assert_relative_eq!(
            debye_function_derivative(1e-6).unwrap(),
            -0.375,
            max_relative = 1e-6
        );
        // The series and the direct identity must agree where they meet.
        let y = DEBYE_DERIVATIVE_SERIES_CUTOFF;
        let series = -0.375 + y / 10.0 - y.powi(3) / 420.0 + y.powi(5) / 15120.0;
        let direct = -3.0 * debye_function(y).unwrap() / y + 3.0 / y.exp_m1();
        assert_relative_eq!(series, direct, max_relative = 1e-11);
        assert!(debye_function_derivative(0.0).is_err());
    }

    #[test]
    fn debye_derivative_matches_finite_differences() {
        for &y in &[0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0] {
            let h = y * 1e-6;
            let fd = (debye_function(y + h).unwrap() - debye_function(y - h).unwrap()) / (2.0 * h);
            let analytic = debye_function_derivative(y).unwrap();
            let tol = f64::max(1e-8, 1e-6 * analytic.abs());
            assert!(
                (fd - analytic).abs() <= tol,
                "y = {y}: fd {fd} vs analytic {analytic}"
            );
        }
    }

    #[test]
    fn planck_peak_pinned_roots() {
        // Bisection oracle values (mpmath findroot).
        assert!((planck_peak(2).unwrap() - 1.593_624_260_040_040_1).abs() < 1e-8);
        assert!((planck_peak(3).unwrap() - 2.821_439_372_122_078_9).abs() < 1e-8);
        assert!((planck_peak(4).unwrap() - 3.920_690_394_872_886_3).abs() < 1e-8);
        assert!((planck_peak(5).unwrap() - 4.965_114_231_744_276_3).abs() < 1e-8);
    }

    #[test]
    fn planck_peak_satisfies_fixed_point() {
        for n in 2u32..=6 {
            let x = planck_peak(n).unwrap();
            let rhs = f64::from(n) * (-(-x).exp_m1());
            assert!((x - rhs).abs() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn planck_peak_degenerate_cases() {
        assert!(matches!(planck_peak(0), Err(Error::Domain(_))));
        let err = planck_peak(1).unwrap_err();
        assert!(err.to_string().contains("degenerate"));
    }

    #[test]
    fn bose_integrand_series_is_smooth_at_cutoff() {
        // Adjacent floats straddling the branch switch: the value jump from
        // changing branch must be at rounding level, far below the 1e-8 gate.
        let just_below = f64::from_bits(BOSE_SERIES_CUTOFF.to_bits() - 1);
        for s in 1u32..=5 {
            let below = bose_integrand(s, just_below);
            let above = bose_integrand(s, BOSE_SERIES_CUTOFF);
            assert_relative_eq!(below, above, max_relative = 1e-8);
        }
    }
}

//! Adaptive Gauss–Kronrod quadrature on finite intervals.
//!
//! Each panel is evaluated with the 15-point Kronrod extension of 7-point
//! Gauss; the difference between the two embedded estimates serves as the
//! panel error. The panel with the largest error is bisected until the
//! summed error estimate meets the requested tolerance or the subdivision
//! budget runs out.

use crate::error::{Error, Result};

/// Tolerances and subdivision budget for adaptive quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    /// Relative tolerance on the integral value.
    pub rel_tol: f64,
    /// Absolute tolerance floor (protects integrals whose value is near 0).
    pub abs_tol: f64,
    /// Maximum number of panels before giving up.
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    /// Build a spec, rejecting non-positive tolerances and a zero budget.
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !rel_tol.is_finite() || rel_tol <= 0.0 {
            return Err(Error::Domain(format!(
                "quadrature rel_tol must be positive and finite, got {rel_tol}"
            )));
        }
        if !abs_tol.is_finite() || abs_tol <= 0.0 {
            return Err(Error::Domain(format!(
                "quadrature abs_tol must be positive and finite, got {abs_tol}"
            )));
        }
        if max_subdivisions == 0 {
            return Err(Error::Domain(
                "quadrature max_subdivisions must be at least 1".to_string(),
            ));
        }
        Ok(QuadratureSpec {
            rel_tol,
            abs_tol,
            max_subdivisions,
        })
    }
}

// Abscissae of the 15-point Kronrod rule on [-1, 1]; the odd-indexed entries
// (plus the centre) are the embedded 7-point Gauss nodes.
const XGK: [f64; 7] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_2,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, &x) in XGK.iter().enumerate() {
        let dx = half * x;
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }

    Panel {
        a,
        b,
        value: kronrod * half,
        error: (kronrod - gauss).abs() * half,
    }
}

/// Integrate `f` over the finite interval `[a, b]`.
///
/// Returns `(value, error_estimate)`. The estimate is conservative: it is the
/// sum of the per-panel Gauss/Kronrod discrepancies at termination, which the
/// stopping rule keeps at or below `max(abs_tol, rel_tol * |value|)`.
pub(crate) fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "integration limits must be finite, got [{a}, {b}]"
        )));
    }
    if a > b {
        return Err(Error::Domain(format!(
            "integration limits are reversed: [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok((0.0, 0.0));
    }

    let mut panels = vec![kronrod15(f, a, b)];
    loop {
        // Sum in position order so the result does not depend on the
        // bookkeeping order of the panel list.
        let mut order: Vec<usize> = (0..panels.len()).collect();
        order.sort_by(|&i, &j| panels[i].a.total_cmp(&panels[j].a));
        let mut value = 0.0;
        let mut error = 0.0;
        for &i in &order {
            value += panels[i].value;
            error += panels[i].error;
        }

        if !value.is_finite() {
            return Err(Error::NonConvergence(
                "integrand produced a non-finite panel value".to_string(),
            ));
        }
        if error <= spec.abs_tol.max(spec.rel_tol * value.abs()) {
            return Ok((value, error));
        }
        if panels.len() >= spec.max_subdivisions {
            return Err(Error::NonConvergence(format!(
                "adaptive quadrature used all {} subdivisions (error estimate {:.3e}, value {:.6e})",
                spec.max_subdivisions, error, value
            )));
        }

        // Bisect the worst panel (first-encountered maximum, so the
        // refinement sequence is deterministic).
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            if p.error > panels[worst].error {
                worst = i;
            }
        }
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Err(Error::NonConvergence(
                "panel width reached floating-point resolution before the tolerance was met"
                    .to_string(),
            ));
        }
        panels.push(kronrod15(f, p.a, mid));
        panels.push(kronrod15(f, mid, p.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact_on_one_panel() {
        let spec = QuadratureSpec::default();
        let (v, e) = integrate(&|x: f64| 3.0 * x * x, 0.0, 2.0, &spec).unwrap();
        assert_relative_eq!(v, 8.0, max_relative = 1e-15);
        assert!(e < 1e-12);
    }

    #[test]
    fn exponential_tail() {
        let spec = QuadratureSpec::default();
        let (v, _) = integrate(&|x: f64| (-x).exp(), 0.0, 60.0, &spec).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn empty_interval_is_zero() {
        let spec = QuadratureSpec::default();
        assert_eq!(integrate(&|x: f64| x, 3.0, 3.0, &spec).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn reversed_limits_rejected() {
        let spec = QuadratureSpec::default();
        assert!(integrate(&|x: f64| x, 1.0, 0.0, &spec).is_err());
    }

    #[test]
    fn budget_exhaustion_reports_nonconvergence() {
        let spec = QuadratureSpec::new(1e-14, 1e-300, 4).unwrap();
        // |x - pi/4| has a kink that four panels cannot resolve to 1e-14.
        let r = integrate(
            &|x: f64| (x - std::f64::consts::FRAC_PI_4).abs().sqrt(),
            0.0,
            1.0,
            &spec,
        );
        assert!(matches!(r, Err(Error::NonConvergence(_))));
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::new(0.0, 1e-14, 10).is_err());
        assert!(QuadratureSpec::new(1e-10, -1.0, 10).is_err());
        assert!(QuadratureSpec::new(1e-10, 1e-14, 0).is_err());
        assert!(QuadratureSpec::new(1e-10, 1e-14, 10).is_ok());
    }

    #[test]
    fn default_matches_documented_policy() {
        let d = QuadratureSpec::default();
        assert_eq!(d.rel_tol, 1e-10);
        assert_eq!(d.abs_tol, 1e-14);
        assert_eq!(d.max_subdivisions, 2000);
    }
}

//! Box-constrained Levenberg–Marquardt least squares.
//!
//! A deliberately small implementation for the ≤4-parameter problems this
//! crate fits: dense forward-difference Jacobians, Marquardt diagonal
//! damping, Gaussian elimination on the normal equations, and parameter
//! clamping to the feasible box after every step.

use crate::error::{Error, Result};

pub(crate) struct LsqOptions {
    pub max_iterations: usize,
    /// Converged when the accepted relative step falls below this.
    pub step_rel_tol: f64,
    /// Converged when the accepted relative cost decrease falls below this.
    pub cost_rel_tol: f64,
    pub lambda_init: f64,
    pub lambda_max: f64,
}

impl Default for LsqOptions {
    fn default() -> Self {
        LsqOptions {
            max_iterations: 200,
            step_rel_tol: 1e-10,
            cost_rel_tol: 1e-12,
            lambda_init: 1e-3,
            lambda_max: 1e12,
        }
    }
}

pub(crate) struct LsqOutcome {
    pub params: Vec<f64>,
    /// Sum of squared residuals at `params`.
    pub cost: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Residual vector at `params`.
    pub residuals: Vec<f64>,
    /// Jacobian columns (one per parameter) at `params`.
    pub jacobian: Vec<Vec<f64>>,
}

/// Minimize `‖f(p)‖²` over the box `lower ≤ p ≤ upper` starting from `p0`.
///
/// `f` returns the residual vector; its length must not change between
/// calls. An unconverged return (budget exhausted, or damping maxed out with
/// no downhill step) still carries the best parameters found.
pub(crate) fn levenberg_marquardt<F>(
    f: &F,
    p0: &[f64],
    lower: &[f64],
    upper: &[f64],
    opts: &LsqOptions,
) -> Result<LsqOutcome>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let n = p0.len();
    assert_eq!(lower.len(), n);
    assert_eq!(upper.len(), n);
    for j in 0..n {
        if lower[j].partial_cmp(&upper[j]) != Some(std::cmp::Ordering::Less) {
            return Err(Error::InvalidInput(format!(
                "parameter {j} has an empty bound interval [{}, {}]",
                lower[j], upper[j]
            )));
        }
    }

    let clamp = |p: &mut [f64]| {
        for j in 0..n {
            p[j] = p[j].clamp(lower[j], upper[j]);
        }
    };

    let mut p = p0.to_vec();
    clamp(&mut p);
    let mut r = f(&p)?;
    let m = r.len();
    if m < n {
        return Err(Error::InvalidInput(format!(
            "{m} residuals cannot determine {n} parameters"
        )));
    }
    let mut cost = dot(&r, &r);
    if !cost.is_finite() {
        return Err(Error::Domain(
            "residuals are not finite at the starting point".to_string(),
        ));
    }

    let mut jac = jacobian(f, &p, &r, lower, upper)?;
    let mut lambda = opts.lambda_init;
    let mut converged = cost == 0.0;
    let mut iterations = 0;

    while !converged && iterations < opts.max_iterations {
        iterations += 1;
        let jtj = normal_matrix(&jac);
        let g = jt_r(&jac, &r);

        // Flat in every relative direction: accept as converged so exact
        // minima (e.g. noiseless starts at the truth) don't read as failures.
        let grad_scale: f64 = (0..n)
            .map(|j| g[j].abs() * p[j].abs().max(1e-2 * (upper[j] - lower[j])))
            .sum();
        if grad_scale <= 1e-14 * cost.max(1e-300) {
            converged = true;
            break;
        }

        let mut accepted = false;
        while lambda <= opts.lambda_max {
            // Marquardt damping: scale the diagonal.
            let mut a = jtj.clone();
            for j in 0..n {
                a[j][j] += lambda * jtj[j][j].max(1e-300);
            }
            let rhs: Vec<f64> = g.iter().map(|v| -v).collect();
            let Some(delta) = solve_linear(a, rhs) else {
                lambda *= 10.0;
                continue;
            };
            let mut p_new = p.clone();
            for j in 0..n {
                p_new[j] += delta[j];
            }
            clamp(&mut p_new);
            if p_new == p {
                // Clamping annihilated the step; stronger damping won't help
                // along this boundary direction either.
                lambda *= 10.0;
                continue;
            }
            let r_new = f(&p_new)?;
            let cost_new = dot(&r_new, &r_new);
            if cost_new.is_finite() && cost_new < cost {
                let step_norm = p_new
                    .iter()
                    .zip(&p)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                let p_norm = p_new.iter().map(|v| v * v).sum::<f64>().sqrt();
                let rel_step = step_norm / p_norm.max(1e-300);
                let rel_decrease = (cost - cost_new) / cost.max(1e-300);
                p = p_new;
                r = r_new;
                cost = cost_new;
                lambda = (lambda / 3.0).max(1e-12);
                if rel_step < opts.step_rel_tol
                    || rel_decrease < opts.cost_rel_tol
                    || cost == 0.0
                {
                    converged = true;
                }
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            break; // damping exhausted with no downhill step
        }
        if !converged {
            jac = jacobian(f, &p, &r, lower, upper)?;
        }
    }

    // Refresh the Jacobian at the final point so covariance estimates use it.
    jac = jacobian(f, &p, &r, lower, upper)?;
    Ok(LsqOutcome {
        params: p,
        cost,
        iterations,
        converged,
        residuals: r,
        jacobian: jac,
    })
}

/// Forward-difference Jacobian columns, stepping backwards where a forward
/// step would leave the box.
fn jacobian<F>(
    f: &F,
    p: &[f64],
    r0: &[f64],
    lower: &[f64],
    upper: &[f64],
) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let n = p.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut h = 1e-7 * p[j].abs().max(1e-2 * (upper[j] - lower[j]));
        if p[j] + h > upper[j] {
            h = -h;
        }
        let mut p_step = p.to_vec();
        p_step[j] = p[j] + h;
        let h_actual = p_step[j] - p[j];
        let r_step = f(&p_step)?;
        cols.push(
            r_step
                .iter()
                .zip(r0)
                .map(|(a, b)| (a - b) / h_actual)
                .collect(),
        );
    }
    Ok(cols)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `JᵀJ` from Jacobian columns.
pub(crate) fn normal_matrix(cols: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = cols.len();
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = dot(&cols[i], &cols[j]);
            a[i][j] = v;
            a[j][i] = v;
        }
    }
    a
}

/// `Jᵀr` from Jacobian columns.
fn jt_r(cols: &[Vec<f64>], r: &[f64]) -> Vec<f64> {
    cols.iter().map(|c| dot(c, r)).collect()
}

/// Solve `A x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` when `A` is singular to working precision.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot_row = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot_row][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        let pivot_vals = a[col].clone();
        let pivot_b = b[col];
        for row in (col + 1)..n {
            let factor = a[row][col] / pivot_vals[col];
            if factor == 0.0 {
                continue;
            }
            for (target, &pv) in a[row][col..].iter_mut().zip(&pivot_vals[col..]) {
                *target -= factor * pv;
            }
            b[row] -= factor * pivot_b;
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in (col + 1)..n {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
        if !x[col].is_finite() {
            return None;
        }
    }
    Some(x)
}

/// Invert a symmetric positive-definite-ish matrix by Gauss–Jordan
/// elimination. Returns `None` when singular to working precision.
pub(crate) fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut work: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot_row =
            (col..n).max_by(|&i, &j| work[i][col].abs().total_cmp(&work[j][col].abs()))?;
        if work[pivot_row][col].abs() < 1e-300 {
            return None;
        }
        work.swap(col, pivot_row);
        let pivot = work[col][col];
        for v in work[col].iter_mut() {
            *v /= pivot;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = work[row][col];
            if factor == 0.0 {
                continue;
            }
            let (source, target) = if row < col {
                let (head, tail) = work.split_at_mut(col);
                (&tail[0], &mut head[row])
            } else {
                let (head, tail) = work.split_at_mut(row);
                (&head[col], &mut tail[0])
            };
            for k in 0..2 * n {
                target[k] -= factor * source[k];
            }
        }
    }
    Some(
        work.into_iter()
            .map(|row| row[n..].to_vec())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn line_data() -> (Vec<f64>, Vec<f64>) {
        let xs: Vec<f64> = (0..20).map(|i| i as f64 / 4.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 1.5 + 0.8 * x).collect();
        (xs, ys)
    }

    #[test]
    fn recovers_linear_model() {
        let (xs, ys) = line_data();
        let f = |p: &[f64]| -> Result<Vec<f64>> {
            Ok(xs
                .iter()
                .zip(&ys)
                .map(|(x, y)| p[0] + p[1] * x - y)
                .collect())
        };
        let out = levenberg_marquardt(
            &f,
            &[0.0, 0.0],
            &[-10.0, -10.0],
            &[10.0, 10.0],
            &LsqOptions::default(),
        )
        .unwrap();
        assert!(out.converged);
        assert_relative_eq!(out.params[0], 1.5, max_relative = 1e-8);
        assert_relative_eq!(out.params[1], 0.8, max_relative = 1e-8);
        assert!(out.cost < 1e-16);
    }

    #[test]
    fn recovers_exponential_model() {
        let xs: Vec<f64> = (0..40).map(|i| i as f64 / 8.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * (-0.7 * x).exp()).collect();
        let f = |p: &[f64]| -> Result<Vec<f64>> {
            Ok(xs
                .iter()
                .zip(&ys)
                .map(|(x, y)| p[0] * (-p[1] * x).exp() - y)
                .collect())
        };
        let out = levenberg_marquardt(
            &f,
            &[1.0, 1.0],
            &[0.01, 0.01],
            &[50.0, 50.0],
            &LsqOptions::default(),
        )
        .unwrap();
        assert!(out.converged);
        assert_relative_eq!(out.params[0], 2.0, max_relative = 1e-7);
        assert_relative_eq!(out.params[1], 0.7, max_relative = 1e-7);
    }

    #[test]
    fn exterior_minimum_stops_at_bound_unconverged() {
        let f = |p: &[f64]| -> Result<Vec<f64>> { Ok(vec![p[0] - 5.0]) };
        let out =
            levenberg_marquardt(&f, &[0.0], &[0.0], &[2.0], &LsqOptions::default()).unwrap();
        assert_eq!(out.params[0], 2.0);
        assert!(!out.converged);
        assert_relative_eq!(out.cost, 9.0, max_relative = 1e-12);
    }

    #[test]
    fn rank_deficient_model_still_finds_the_valley() {
        // Only p0 + p1 is identified.
        let xs: Vec<f64> = (1..30).map(|i| i as f64 / 3.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x).collect();
        let f = |p: &[f64]| -> Result<Vec<f64>> {
            Ok(xs
                .iter()
                .zip(&ys)
                .map(|(x, y)| (p[0] + p[1]) * x - y)
                .collect())
        };
        let out = levenberg_marquardt(
            &f,
            &[0.3, 0.3],
            &[-10.0, -10.0],
            &[10.0, 10.0],
            &LsqOptions::default(),
        )
        .unwrap();
        assert!(out.converged);
        assert_relative_eq!(out.params[0] + out.params[1], 2.0, max_relative = 1e-8);
        // The covariance of the degenerate problem is singular.
        assert!(invert(&normal_matrix(&out.jacobian)).is_none() || {
            // Rounding can make it barely invertible; entries are then huge.
            let c = invert(&normal_matrix(&out.jacobian)).unwrap();
            c[0][0].abs() > 1e10
        });
    }

    #[test]
    fn start_at_exact_minimum_converges_immediately() {
        let (xs, ys) = line_data();
        let f = |p: &[f64]| -> Result<Vec<f64>> {
            Ok(xs
                .iter()
                .zip(&ys)
                .map(|(x, y)| p[0] + p[1] * x - y)
                .collect())
        };
        let out = levenberg_marquardt(
            &f,
            &[1.5, 0.8],
            &[-10.0, -10.0],
            &[10.0, 10.0],
            &LsqOptions::default(),
        )
        .unwrap();
        assert!(out.converged);
        assert_eq!(out.iterations, 0);
        assert_eq!(out.cost, 0.0);
    }

    #[test]
    fn rejects_empty_bounds_and_underdetermined_problems() {
        let f = |p: &[f64]| -> Result<Vec<f64>> { Ok(vec![p[0]]) };
        assert!(
            levenberg_marquardt(&f, &[0.0], &[1.0], &[1.0], &LsqOptions::default()).is_err()
        );
        let f2 = |p: &[f64]| -> Result<Vec<f64>> { Ok(vec![p[0] + p[1]]) };
        assert!(levenberg_marquardt(
            &f2,
            &[0.0, 0.0],
            &[-1.0, -1.0],
            &[1.0, 1.0],
            &LsqOptions::default()
        )
        .is_err());
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn solve_and_invert_agree_on_small_systems() {
        let a = vec![vec![4.0, 1.0, 0.0], vec![1.0, 3.0, 1.0], vec![0.0, 1.0, 2.0]];
        let b = vec![1.0, 2.0, 3.0];
        let x = solve_linear(a.clone(), b.clone()).unwrap();
        // Residual check.
        for i in 0..3 {
            let ax: f64 = (0..3).map(|j| a[i][j] * x[j]).sum();
            assert_relative_eq!(ax, b[i], max_relative = 1e-12);
        }
        let inv = invert(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let prod: f64 = (0..3).map(|k| a[i][k] * inv[k][j]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((prod - expected).abs() < 1e-12);
            }
        }
        // Singular matrix.
        let s = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        assert!(invert(&s).is_none());
        assert!(solve_linear(s, vec![1.0, 0.0]).is_none());
    }
}

//! Dense Gaussian elimination for the small reduced systems of the
//! equilibrium solver (dimension = element count + 1, at most 6 here).

/// Solve `A x = rhs` in place with partial pivoting. `a` is row-major n x n.
/// Returns the pivot-relative singularity if the matrix loses rank.
pub(crate) fn solve_dense(a: &mut [f64], rhs: &mut [f64], n: usize) -> Result<(), String> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(rhs.len(), n);
    let scale = a
        .iter()
        .fold(0.0f64, |m, &v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);

    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = a[col * n + col].abs();
        for row in col + 1..n {
            let mag = a[row * n + col].abs();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag <= 1e-13 * scale {
            return Err(format!(
                "pivot {pivot_mag:.3e} at column {col} below rank tolerance"
            ));
        }
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            rhs.swap(col, pivot_row);
        }
        let pivot = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            a[row * n + col] = 0.0;
            for k in col + 1..n {
                a[row * n + k] -= factor * a[col * n + k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    for col in (0..n).rev() {
        let mut sum = rhs[col];
        for k in col + 1..n {
            sum -= a[col * n + k] * rhs[k];
        }
        rhs[col] = sum / a[col * n + col];
    }
    Ok(())
}

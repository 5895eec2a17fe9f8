//! Dense least squares via Householder QR with column pivoting.
//!
//! Count design matrices can be badly scaled and occasionally collinear
//! (constant traffic makes every lag column identical), so the solve is
//! factorization-based rather than going through the normal equations, and
//! the pivoted diagonal of R doubles as the rank test.

use ndarray::{Array1, Array2};

use crate::Scalar;

/// Relative diagonal threshold below which a column counts as linearly
/// dependent on the ones before it.
pub(crate) const RANK_TOL: f64 = 1e-10;

pub(crate) struct Lstsq<T> {
    /// Minimizer of `||y - X b||`; pivoted-out columns are fixed at zero,
    /// so rank-deficient systems get a basic solution.
    pub solution: Array1<T>,
    /// Numerical rank at [`RANK_TOL`].
    pub rank: usize,
}

fn tail_col_norm<T: Scalar>(a: &Array2<T>, from_row: usize, col: usize) -> T {
    let mut s = T::zero();
    for i in from_row..a.nrows() {
        s += a[(i, col)] * a[(i, col)];
    }
    s.sqrt()
}

/// Solves `min ||y - X b||` for rectangular `X` (any shape, at least one
/// row and one column).
///
/// The rank test compares each pivot against the larger of the leading
/// pivot and `scale_floor`. Pass zero to judge `x` on its own scale; pass
/// the norm of a parent matrix when `x` is a reduced subproblem that may be
/// zero only up to rounding.
pub(crate) fn least_squares<T: Scalar>(x: &Array2<T>, y: &Array1<T>, scale_floor: T) -> Lstsq<T> {
    let (rows, cols) = x.dim();
    debug_assert!(rows > 0 && cols > 0);
    debug_assert_eq!(rows, y.len());

    let mut a = x.clone();
    let mut rhs = y.clone();
    let mut perm: Vec<usize> = (0..cols).collect();
    let steps = rows.min(cols);
    let mut factored = 0;

    for k in 0..steps {
        // pivot on the column with the largest remaining norm
        let mut best = k;
        let mut best_norm = tail_col_norm(&a, k, k);
        for c in (k + 1)..cols {
            let nrm = tail_col_norm(&a, k, c);
            if nrm > best_norm {
                best = c;
                best_norm = nrm;
            }
        }
        if best != k {
            for i in 0..rows {
                let tmp = a[(i, k)];
                a[(i, k)] = a[(i, best)];
                a[(i, best)] = tmp;
            }
            perm.swap(k, best);
        }
        if best_norm == T::zero() {
            break; // remaining columns are all zero
        }

        // Householder reflection sending a[k.., k] to alpha * e1
        let akk = a[(k, k)];
        let alpha = if akk > T::zero() {
            -best_norm
        } else {
            best_norm
        };
        let v0 = akk - alpha;
        let mut vtv = v0 * v0;
        for i in (k + 1)..rows {
            vtv += a[(i, k)] * a[(i, k)];
        }
        if vtv > T::zero() {
            let two = T::one() + T::one();
            for c in (k + 1)..cols {
                let mut dot = v0 * a[(k, c)];
                for i in (k + 1)..rows {
                    dot += a[(i, k)] * a[(i, c)];
                }
                let f = two * dot / vtv;
                a[(k, c)] = a[(k, c)] - f * v0;
                for i in (k + 1)..rows {
                    let vik = a[(i, k)];
                    a[(i, c)] = a[(i, c)] - f * vik;
                }
            }
            let mut dot = v0 * rhs[k];
            for i in (k + 1)..rows {
                dot += a[(i, k)] * rhs[i];
            }
            let f = two * dot / vtv;
            rhs[k] -= f * v0;
            for i in (k + 1)..rows {
                let vik = a[(i, k)];
                rhs[i] -= f * vik;
            }
        }
        a[(k, k)] = alpha;
        for i in (k + 1)..rows {
            a[(i, k)] = T::zero();
        }
        factored = k + 1;
    }

    // rank = longest prefix of the pivoted diagonal above tolerance
    let tol = T::from_f64(RANK_TOL).unwrap();
    let r00 = if factored > 0 {
        a[(0, 0)].abs()
    } else {
        T::zero()
    };
    let reference = r00.max(scale_floor);
    let mut rank = 0;
    for k in 0..factored {
        if a[(k, k)].abs() > tol * reference {
            rank = k + 1;
        } else {
            break;
        }
    }

    // back-substitute on the leading rank x rank triangle
    let mut z = vec![T::zero(); cols];
    for i in (0..rank).rev() {
        let mut s = rhs[i];
        for j in (i + 1)..rank {
            s -= a[(i, j)] * z[j];
        }
        z[i] = s / a[(i, i)];
    }

    let mut solution = Array1::zeros(cols);
    for (i, &col) in perm.iter().enumerate() {
        solution[col] = z[i];
    }
    Lstsq { solution, rank }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{arr1, arr2};

    #[test]
    fn solves_consistent_system() {
        let x: Array2<f64> = arr2(&[[4.0, 2.0], [6.0, 4.0], [8.0, 6.0]]);
        let y = arr1(&[3.0, 5.0, 7.0]);
        let out = least_squares(&x, &y, 0.0);
        assert_eq!(out.rank, 2);
        assert!((out.solution[0] - 0.5).abs() < 1e-12);
        assert!((out.solution[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn solves_overdetermined_inconsistent_system() {
        // min over b of (b - 1)^2 + (b - 3)^2 is b = 2
        let x: Array2<f64> = arr2(&[[1.0], [1.0]]);
        let y = arr1(&[1.0, 3.0]);
        let out = least_squares(&x, &y, 0.0);
        assert!((out.solution[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn reports_rank_of_collinear_columns() {
        let x: Array2<f64> = arr2(&[[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]]);
        let y = arr1(&[1.0, 2.0, 3.0]);
        let out = least_squares(&x, &y, 0.0);
        assert_eq!(out.rank, 1);
        // basic solution still fits the data
        let fit = x.dot(&out.solution);
        for (f, t) in fit.iter().zip(y.iter()) {
            assert!((f - t).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let x: Array2<f64> = arr2(&[[0.0, 0.0], [0.0, 0.0]]);
        let y = arr1(&[1.0, 1.0]);
        let out = least_squares(&x, &y, 0.0);
        assert_eq!(out.rank, 0);
        assert_eq!(out.solution, arr1(&[0.0, 0.0]));
    }

    #[test]
    fn wide_system_gets_basic_solution() {
        let x: Array2<f64> = arr2(&[[1.0, 2.0, 3.0]]);
        let y = arr1(&[6.0]);
        let out = least_squares(&x, &y, 0.0);
        let fit = x.dot(&out.solution);
        assert!((fit[0] - 6.0).abs() < 1e-12);
    }
}

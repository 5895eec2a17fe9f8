//! Lagged design construction and the two least-squares fits.
//!
//! The regression model has no intercept: the conditional mean of `k_t` is
//! `sum_j q*p_j*n_{t-j}`, which passes through the origin, and an intercept
//! would bias the normalization downstream. Rows with incomplete lag
//! windows (`t <= m`) are dropped rather than zero-padded.

mod lstsq;

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::model::{Binning, CountSeries};
use crate::Scalar;

pub(crate) use lstsq::least_squares;

/// Largest acceptable first-order optimality violation (relative to the
/// data scale) for a constrained solution.
pub const KKT_TOL: f64 = 1e-8;

/// Regression data: row `t` of `X` holds `[n_t, n_{t-1}, ..., n_{t-m}]` and
/// the target is `k_t`, for `t = m+1..=T`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagDesign<T> {
    x: Array2<T>,
    y: Array1<T>,
}

impl<T: Scalar> LagDesign<T> {
    /// Assembles a design from an explicit matrix and target vector.
    ///
    /// Mostly useful for tests and synthetic targets; real data goes
    /// through [`build_design`].
    pub fn new(x: Array2<T>, y: Array1<T>) -> Result<Self> {
        if x.nrows() != y.len() {
            return Err(Error::LengthMismatch {
                expected: x.nrows(),
                actual: y.len(),
            });
        }
        if x.nrows() == 0 || x.ncols() == 0 {
            return Err(Error::InvalidInput("design needs rows and columns".into()));
        }
        Ok(Self { x, y })
    }

    pub fn rows(&self) -> usize {
        self.x.nrows()
    }

    /// Size of the lag window, `m + 1`.
    pub fn window(&self) -> usize {
        self.x.ncols()
    }

    pub fn matrix(&self) -> &Array2<T> {
        &self.x
    }

    pub fn targets(&self) -> &Array1<T> {
        &self.y
    }

    /// Residual sum of squares at coefficients `b`.
    pub fn rss(&self, b: &[T]) -> T {
        let barr = Array1::from(b.to_vec());
        let fitted = self.x.dot(&barr);
        let mut s = T::zero();
        for (f, t) in fitted.iter().zip(self.y.iter()) {
            let r = *t - *f;
            s += r * r;
        }
        s
    }
}

/// Builds the lagged design from a count series. Needs at least `m + 1`
/// intervals so that one complete row exists.
pub fn build_design<T: Scalar>(counts: &CountSeries, binning: &Binning<T>) -> Result<LagDesign<T>> {
    let m = binning.lag_count();
    let len = counts.len();
    if len < m + 1 {
        return Err(Error::TooShort {
            len,
            needed: m + 1,
        });
    }
    let rows = len - m;
    let mut x = Array2::zeros((rows, m + 1));
    let mut y = Array1::zeros(rows);
    for (i, t) in (m..len).enumerate() {
        for j in 0..=m {
            x[(i, j)] = T::from_u64(counts.source()[t - j]).expect("count fits in scalar");
        }
        y[i] = T::from_u64(counts.displaced()[t]).expect("count fits in scalar");
    }
    Ok(LagDesign { x, y })
}

/// Ordinary least squares without intercept.
///
/// Fails with [`Error::RankDeficient`] when the lag columns are numerically
/// collinear (constant traffic is the classic cause), since the data then
/// cannot identify the lags.
pub fn ols_fit<T: Scalar>(design: &LagDesign<T>) -> Result<Vec<T>> {
    let out = least_squares(design.matrix(), design.targets(), T::zero());
    let cols = design.window();
    if out.rank < cols {
        return Err(Error::RankDeficient {
            rank: out.rank,
            cols,
        });
    }
    Ok(out.solution.to_vec())
}

/// Solution of the simplex-constrained least-squares problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedSolution<T> {
    /// Minimizer of `||y - X b||^2` over `{b >= 0, sum(b) = q_hat}`.
    pub b: Vec<T>,
    /// Residual sum of squares at `b`.
    pub objective: T,
    /// Largest first-order optimality violation, relative to the data
    /// scale; at most [`KKT_TOL`] on success.
    pub kkt_residual: T,
    /// False when a rank-deficient subproblem was encountered, in which
    /// case `b` is one of several minimizers.
    pub unique: bool,
}

/// Minimizes `||y - X b||^2` subject to `sum(b) = q_hat` and `b >= 0`.
///
/// The equality constraint is eliminated by an orthonormal change of
/// variables, and the bounds are handled by primal active-set iteration:
/// starting from the uniform feasible point, repeatedly solve the
/// equality-constrained problem on the free coordinates, step as far as
/// feasibility allows (pinning the blocking coordinate at zero), and once
/// the subproblem solution is feasible, release the pinned coordinate with
/// the most negative multiplier. The problem is a small convex QP, so this
/// terminates; the cap of `100 * (m + 1)` iterations guards degenerate
/// data.
pub fn constrained_fit<T: Scalar>(design: &LagDesign<T>, q_hat: T) -> Result<ConstrainedSolution<T>> {
    if !(q_hat > T::zero()) || !q_hat.is_finite() {
        return Err(Error::InfeasibleInput(format!(
            "conversion rate used as the constraint level must be positive, got {q_hat}"
        )));
    }
    let n = design.window();
    let x = design.matrix();
    let y = design.targets();

    let xty = x.t().dot(y);
    let scale = xty.iter().fold(T::one(), |acc, v| acc.max(v.abs()));
    let dual_tol = T::from_f64(1e-10).unwrap() * scale;
    let neg_clip = -T::from_f64(1e-13).unwrap() * q_hat.max(T::one());

    let mut b = vec![q_hat / T::from_usize(n).unwrap(); n];
    let mut pinned = vec![false; n];
    let mut unique = true;
    let cap = 100 * n;
    let mut converged = false;

    for _ in 0..cap {
        let free: Vec<usize> = (0..n).filter(|&j| !pinned[j]).collect();
        let (z, deficient) = solve_on_free(x, y, &free, q_hat);
        if deficient {
            unique = false;
        }

        // longest feasible step toward the subproblem minimizer
        let mut alpha = T::one();
        let mut blocker = None;
        for (idx, &j) in free.iter().enumerate() {
            if z[idx] < neg_clip {
                let step = b[j] / (b[j] - z[idx]);
                if step < alpha {
                    alpha = step;
                    blocker = Some(j);
                }
            }
        }

        match blocker {
            Some(jb) => {
                for (idx, &j) in free.iter().enumerate() {
                    b[j] = b[j] + alpha * (z[idx] - b[j]);
                    if b[j] < T::zero() {
                        b[j] = T::zero();
                    }
                }
                b[jb] = T::zero();
                pinned[jb] = true;
            }
            None => {
                for (idx, &j) in free.iter().enumerate() {
                    b[j] = z[idx].max(T::zero());
                }
                let g = gradient(x, y, &b);
                let mut lambda = T::zero();
                for &j in &free {
                    lambda += g[j];
                }
                lambda = lambda / T::from_usize(free.len()).unwrap();
                let mut worst = None;
                let mut worst_mu = -dual_tol;
                for (j, &is_pinned) in pinned.iter().enumerate() {
                    if is_pinned {
                        let mu = g[j] - lambda;
                        if mu < worst_mu {
                            worst_mu = mu;
                            worst = Some(j);
                        }
                    }
                }
                match worst {
                    Some(j) => pinned[j] = false,
                    None => {
                        converged = true;
                        break;
                    }
                }
            }
        }
    }

    if !converged {
        return Err(Error::NonConvergence { iterations: cap });
    }

    // clear float dust and restore the sum exactly
    for v in b.iter_mut() {
        if *v < T::zero() {
            *v = T::zero();
        }
    }
    let sum = b.iter().fold(T::zero(), |acc, &v| acc + v);
    let amax = (0..n).max_by(|&i, &j| b[i].partial_cmp(&b[j]).unwrap()).unwrap();
    b[amax] += q_hat - sum;

    let objective = design.rss(&b);
    let kkt_residual = kkt_report(x, y, &b, q_hat, scale);
    if !(kkt_residual <= T::from_f64(KKT_TOL).unwrap()) {
        return Err(Error::NonConvergence { iterations: cap });
    }
    Ok(ConstrainedSolution {
        b,
        objective,
        kkt_residual,
        unique,
    })
}

/// Divides the constrained solution through by the conversion rate,
/// yielding the probability vector.
pub fn constrained_probabilities<T: Scalar>(
    solution: &ConstrainedSolution<T>,
    q_hat: T,
) -> Result<Vec<T>> {
    if !(q_hat > T::zero()) {
        return Err(Error::InfeasibleInput(format!(
            "conversion rate must be positive, got {q_hat}"
        )));
    }
    Ok(solution.b.iter().map(|&v| v / q_hat).collect())
}

/// Equality-constrained least squares on the free coordinates:
/// `min ||y - X_F z||` subject to `sum(z) = q_hat`.
///
/// The sum constraint is removed by the substitution `z = z0 + N w`, where
/// `z0` is the uniform feasible point and the columns of `N` are an
/// orthonormal basis of the ones-vector's nullspace (trailing columns of a
/// Householder reflector), leaving an unconstrained solve in `w`.
fn solve_on_free<T: Scalar>(
    x: &Array2<T>,
    y: &Array1<T>,
    free: &[usize],
    q_hat: T,
) -> (Vec<T>, bool) {
    let f = free.len();
    debug_assert!(f >= 1);
    if f == 1 {
        return (vec![q_hat], false);
    }
    let rows = x.nrows();
    let ff = T::from_usize(f).unwrap();
    let two = T::one() + T::one();
    let z0 = q_hat / ff;
    let s = (T::one() / ff).sqrt();

    let mut xsum = Array1::<T>::zeros(rows);
    let mut col_scale = T::zero();
    for &j in free {
        let mut sq = T::zero();
        for i in 0..rows {
            xsum[i] += x[(i, j)];
            sq += x[(i, j)] * x[(i, j)];
        }
        col_scale = col_scale.max(sq.sqrt());
    }
    // v = e1 - ones/sqrt(f); X_F v = first free column - s * xsum
    let v0 = T::one() - s;
    let vtv = v0 * v0 + (ff - T::one()) * s * s;
    let coef = two * s / vtv;
    let mut bmat = Array2::<T>::zeros((rows, f - 1));
    for k in 0..f - 1 {
        let j = free[k + 1];
        for i in 0..rows {
            let xv = x[(i, free[0])] - s * xsum[i];
            bmat[(i, k)] = x[(i, j)] + coef * xv;
        }
    }
    let mut r0 = Array1::<T>::zeros(rows);
    for i in 0..rows {
        r0[i] = y[i] - z0 * xsum[i];
    }

    // judge the reduced matrix against the parent columns' scale, so a
    // subproblem that is zero up to rounding registers as deficient
    let out = least_squares(&bmat, &r0, col_scale);
    let deficient = out.rank < f - 1;

    let wsum = out.solution.iter().fold(T::zero(), |acc, &v| acc + v);
    let c = two * (-s * wsum) / vtv;
    let mut z = Vec::with_capacity(f);
    z.push(z0 - c * v0);
    for k in 0..f - 1 {
        z.push(z0 + out.solution[k] + c * s);
    }
    (z, deficient)
}

/// Gradient of the residual sum of squares, `2 X^T (X b - y)`.
fn gradient<T: Scalar>(x: &Array2<T>, y: &Array1<T>, b: &[T]) -> Array1<T> {
    let two = T::one() + T::one();
    let barr = Array1::from(b.to_vec());
    let mut resid = x.dot(&barr);
    for (r, t) in resid.iter_mut().zip(y.iter()) {
        *r -= *t;
    }
    x.t().dot(&resid).mapv(|v| two * v)
}

/// Largest violation of the first-order conditions at `b`: stationarity on
/// the positive coordinates, nonnegative multipliers on the zero ones, and
/// primal feasibility. Gradient terms are measured relative to `scale`.
fn kkt_report<T: Scalar>(x: &Array2<T>, y: &Array1<T>, b: &[T], q_hat: T, scale: T) -> T {
    let g = gradient(x, y, b);
    let mut free_count = 0usize;
    let mut lambda = T::zero();
    for (j, &v) in b.iter().enumerate() {
        if v > T::zero() {
            lambda += g[j];
            free_count += 1;
        }
    }
    lambda = lambda / T::from_usize(free_count.max(1)).unwrap();

    let mut grad_violation = T::zero();
    for (j, &v) in b.iter().enumerate() {
        if v > T::zero() {
            grad_violation = grad_violation.max((g[j] - lambda).abs());
        } else {
            grad_violation = grad_violation.max((lambda - g[j]).max(T::zero()));
        }
    }

    let sum = b.iter().fold(T::zero(), |acc, &v| acc + v);
    let eq_violation = (sum - q_hat).abs() / q_hat.max(T::one());
    let neg_violation = b
        .iter()
        .fold(T::zero(), |acc, &v| acc.max((-v).max(T::zero())));

    (grad_violation / scale).max(eq_violation).max(neg_violation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::normalize_probabilities;
    use ndarray::{arr1, arr2};
    use proptest::prelude::*;

    fn counts(n: Vec<u64>, k: Vec<u64>) -> CountSeries {
        CountSeries::new(n, k).unwrap()
    }

    fn binning(ell: f64, m: usize) -> Binning<f64> {
        Binning::new(ell, m).unwrap()
    }

    #[test]
    fn design_lays_out_lags() {
        let design = build_design(&counts(vec![2, 4, 6, 8], vec![0, 3, 5, 7]), &binning(30.0, 1))
            .unwrap();
        assert_eq!(design.matrix(), &arr2(&[[4.0, 2.0], [6.0, 4.0], [8.0, 6.0]]));
        assert_eq!(design.targets(), &arr1(&[3.0, 5.0, 7.0]));
    }

    #[test]
    fn design_with_no_lags_keeps_every_row() {
        let design = build_design(&counts(vec![5, 5], vec![1, 1]), &binning(60.0, 0)).unwrap();
        assert_eq!(design.matrix(), &arr2(&[[5.0], [5.0]]));
        assert_eq!(design.targets(), &arr1(&[1.0, 1.0]));
    }

    #[test]
    fn design_rejects_short_series() {
        let err = build_design(&counts(vec![1, 2], vec![0, 0]), &binning(15.0, 3)).unwrap_err();
        assert_eq!(err, Error::TooShort { len: 2, needed: 4 });
    }

    #[test]
    fn ols_solves_hand_example() {
        let design = build_design(&counts(vec![2, 4, 6, 8], vec![0, 3, 5, 7]), &binning(30.0, 1))
            .unwrap();
        let beta = ols_fit(&design).unwrap();
        assert!((beta[0] - 0.5).abs() < 1e-12);
        assert!((beta[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn ols_zero_targets_give_zero_coefficients() {
        let design = LagDesign::new(
            arr2(&[[4.0, 2.0], [6.0, 4.0], [8.0, 6.0]]),
            arr1(&[0.0, 0.0, 0.0]),
        )
        .unwrap();
        let beta = ols_fit(&design).unwrap();
        assert_eq!(beta, vec![0.0, 0.0]);
    }

    #[test]
    fn ols_rejects_identical_columns() {
        let design = LagDesign::new(
            arr2(&[[3.0, 3.0], [5.0, 5.0], [7.0, 7.0]]),
            arr1(&[1.0, 2.0, 3.0]),
        )
        .unwrap();
        assert!(matches!(
            ols_fit(&design).unwrap_err(),
            Error::RankDeficient { rank: 1, cols: 2 }
        ));
    }

    #[test]
    fn ols_residual_is_orthogonal_to_columns() {
        let design = build_design(
            &counts(vec![9, 3, 7, 1, 8, 2, 6], vec![2, 1, 3, 0, 4, 1, 2]),
            &binning(30.0, 2),
        )
        .unwrap();
        let beta = ols_fit(&design).unwrap();
        let barr = arr1(&beta);
        let resid = design.targets() - &design.matrix().dot(&barr);
        let xtr = design.matrix().t().dot(&resid);
        let xty = design.matrix().t().dot(design.targets());
        let scale = xty.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        for v in xtr.iter() {
            assert!(v.abs() <= 1e-8 * scale);
        }
    }

    #[test]
    fn constrained_with_single_lag_is_pinned() {
        let design = build_design(&counts(vec![5, 5], vec![1, 1]), &binning(60.0, 0)).unwrap();
        let sol = constrained_fit(&design, 0.1).unwrap();
        assert_eq!(sol.b, vec![0.1]);
        assert!(sol.kkt_residual <= KKT_TOL);
    }

    #[test]
    fn constrained_returns_ols_when_feasible() {
        // OLS solution (0.5, 0.5) is nonnegative and sums to exactly 1
        let design = build_design(&counts(vec![2, 4, 6, 8], vec![0, 3, 5, 7]), &binning(30.0, 1))
            .unwrap();
        let sol = constrained_fit(&design, 1.0).unwrap();
        assert!((sol.b[0] - 0.5).abs() < 1e-8);
        assert!((sol.b[1] - 0.5).abs() < 1e-8);
        assert!(sol.objective < 1e-16);
    }

    #[test]
    fn constrained_matches_brute_force_on_simplex() {
        let x = arr2(&[
            [3.0, 1.0, 1.0],
            [1.0, 3.0, 1.0],
            [1.0, 1.0, 3.0],
            [1.0, 1.0, 1.0],
        ]);
        let y = arr1(&[4.0, -2.0, 2.0, 0.5]);
        let design = LagDesign::new(x, y).unwrap();
        let q_hat = 0.6;

        // the instance must actually activate a bound
        let raw = ols_fit(&design).unwrap();
        assert!(raw.iter().any(|&v| v < 0.0), "instance too easy: {raw:?}");

        let sol = constrained_fit(&design, q_hat).unwrap();
        assert!(sol.kkt_residual <= KKT_TOL);

        let steps = 400usize;
        let mut best = f64::INFINITY;
        for i in 0..=steps {
            let b0 = q_hat * i as f64 / steps as f64;
            for j in 0..=(steps - i) {
                let b1 = q_hat * j as f64 / steps as f64;
                let b2 = q_hat - b0 - b1;
                let obj = design.rss(&[b0, b1, b2]);
                if obj < best {
                    best = obj;
                }
            }
        }
        assert!(sol.objective <= best + 1e-12);
        assert!(best - sol.objective <= 1e-3);
    }

    #[test]
    fn constrained_probabilities_divide_by_rate() {
        let sol = ConstrainedSolution::<f64> {
            b: vec![0.02, 0.0, 0.08],
            objective: 0.0,
            kkt_residual: 0.0,
            unique: true,
        };
        let p = constrained_probabilities(&sol, 0.1).unwrap();
        for (got, want) in p.iter().zip([0.2, 0.0, 0.8]) {
            assert!((got - want).abs() < 1e-12);
        }
        let single = ConstrainedSolution::<f64> {
            b: vec![0.1],
            objective: 0.0,
            kkt_residual: 0.0,
            unique: true,
        };
        assert_eq!(constrained_probabilities(&single, 0.1).unwrap(), vec![1.0]);
    }

    #[test]
    fn constrained_rejects_nonpositive_rate() {
        let design = build_design(&counts(vec![5, 5], vec![1, 1]), &binning(60.0, 0)).unwrap();
        assert!(matches!(
            constrained_fit(&design, 0.0).unwrap_err(),
            Error::InfeasibleInput(_)
        ));
    }

    #[test]
    fn constrained_handles_rank_deficient_design() {
        // identical columns: any split of the mass fits equally well
        let design = LagDesign::new(
            arr2(&[[3.0, 3.0], [5.0, 5.0], [7.0, 7.0]]),
            arr1(&[1.5, 2.5, 3.5]),
        )
        .unwrap();
        let sol = constrained_fit(&design, 0.5).unwrap();
        assert!(!sol.unique);
        assert!(sol.kkt_residual <= KKT_TOL);
        let total: f64 = sol.b.iter().sum();
        assert!((total - 0.5).abs() <= 1e-10);
    }

    fn design_strategy() -> impl Strategy<Value = (LagDesign<f64>, usize)> {
        (0usize..=4)
            .prop_flat_map(|m| {
                let rows = 10 * (m + 2);
                (
                    Just(m),
                    prop::collection::vec(1u64..100, rows + m),
                    prop::collection::vec(0u64..20, rows + m),
                )
            })
            .prop_map(|(m, n, k)| {
                let series = CountSeries::new(n, k).unwrap();
                let b = Binning::new(10.0, m).unwrap();
                (build_design(&series, &b).unwrap(), m)
            })
    }

    proptest! {
        #[test]
        fn ols_recovers_noise_free_coefficients(
            (design, m) in design_strategy(),
            raw_c in prop::collection::vec(-5.0f64..5.0, 5),
        ) {
            let c: Vec<f64> = raw_c[..=m].to_vec();
            let carr = arr1(&c);
            let y = design.matrix().dot(&carr);
            let synthetic = LagDesign::new(design.matrix().clone(), y).unwrap();
            let beta = match ols_fit(&synthetic) {
                Ok(beta) => beta,
                Err(Error::RankDeficient { .. }) => return Ok(()),
                Err(other) => return Err(TestCaseError::fail(other.to_string())),
            };
            let scale = c.iter().fold(1.0f64, |a, v| a.max(v.abs()));
            for (got, want) in beta.iter().zip(&c) {
                prop_assert!((got - want).abs() <= 1e-8 * scale);
            }
        }

        #[test]
        fn fits_ignore_row_order(
            (design, _m) in design_strategy(),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut order: Vec<usize> = (0..design.rows()).collect();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            order.shuffle(&mut rng);

            let mut xp = Array2::zeros(design.matrix().dim());
            let mut yp = Array1::zeros(design.rows());
            for (to, &from) in order.iter().enumerate() {
                for c in 0..design.window() {
                    xp[(to, c)] = design.matrix()[(from, c)];
                }
                yp[to] = design.targets()[from];
            }
            let permuted = LagDesign::new(xp, yp).unwrap();

            match (ols_fit(&design), ols_fit(&permuted)) {
                (Ok(a), Ok(b)) => {
                    for (u, v) in a.iter().zip(&b) {
                        prop_assert!((u - v).abs() <= 1e-10);
                    }
                }
                (Err(_), Err(_)) => {}
                _ => prop_assert!(false, "rank decision changed under row permutation"),
            }

            let qa = constrained_fit(&design, 0.2);
            let qb = constrained_fit(&permuted, 0.2);
            if let (Ok(a), Ok(b)) = (qa, qb) {
                for (u, v) in a.b.iter().zip(&b.b) {
                    prop_assert!((u - v).abs() <= 1e-10);
                }
            }
        }

        #[test]
        fn constrained_is_feasible_and_no_better_than_ols(
            (design, _m) in design_strategy(),
            q_hat in 0.01f64..1.0,
        ) {
            let sol = constrained_fit(&design, q_hat).unwrap();
            let total: f64 = sol.b.iter().sum();
            prop_assert!((total - q_hat).abs() <= 1e-10);
            prop_assert!(sol.b.iter().all(|&v| v >= -1e-12));
            prop_assert!(sol.kkt_residual <= KKT_TOL);
            if let Ok(beta) = ols_fit(&design) {
                let rss = design.rss(&beta);
                prop_assert!(sol.objective >= rss - 1e-9 * (1.0 + rss));
            }
        }

        #[test]
        fn constrained_equals_ols_when_bounds_inactive(
            (design, m) in design_strategy(),
            raw_c in prop::collection::vec(0.05f64..1.0, 5),
        ) {
            // noise-free targets from strictly positive coefficients make
            // the OLS solution itself feasible
            let c: Vec<f64> = raw_c[..=m].to_vec();
            let q_hat: f64 = c.iter().sum();
            let y = design.matrix().dot(&arr1(&c));
            let synthetic = LagDesign::new(design.matrix().clone(), y).unwrap();
            let beta = match ols_fit(&synthetic) {
                Ok(beta) => beta,
                Err(_) => return Ok(()),
            };
            let sol = constrained_fit(&synthetic, q_hat).unwrap();
            for (u, v) in sol.b.iter().zip(&beta) {
                prop_assert!((u - v).abs() <= 1e-8);
            }
        }

        #[test]
        fn normalized_ols_estimates_are_probabilities(
            (design, _m) in design_strategy(),
        ) {
            if let Ok(beta) = ols_fit(&design) {
                if let Ok(p) = normalize_probabilities(&beta) {
                    let sum: f64 = p.iter().sum();
                    prop_assert!((sum - 1.0).abs() <= 1e-12);
                    prop_assert!(p.iter().all(|&v| v >= 0.0));
                }
            }
        }
    }
}

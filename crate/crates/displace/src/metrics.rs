//! Ground truth and scoring: bin averages of an analytic displacement CDF,
//! the probabilities they induce, and L2 distances between the CDF and a
//! step approximation.
//!
//! The analytic CDFs are piecewise linear (with jumps at point masses), so
//! every integral here has a closed form. Each bin is split at the
//! distribution's breakpoints; on the open segment between two cuts the CDF
//! is linear, and two interior evaluations recover its one-sided limits,
//! from which the trapezoid and the quadratic moment are exact.

use crate::error::{Error, Result};
use crate::model::{build_step_cdf, Binning, StepCdf, TrueDistribution};
use crate::Scalar;

/// Bin averages `i_true[j]` of the displacement CDF and the displacement
/// probabilities `p_true[j]` they induce by first differencing.
#[derive(Debug, Clone, PartialEq)]
pub struct TrueProbabilities<T> {
    pub i_true: Vec<T>,
    pub p_true: Vec<T>,
}

fn ensure_supported<T: Scalar>(dist: &TrueDistribution<T>, binning: &Binning<T>) -> Result<()> {
    let end = dist.support_end();
    let limit = binning.support_end();
    let slack = T::from_f64(1e-9).unwrap() * limit.max(T::one());
    if end > limit + slack {
        return Err(Error::SupportExceedsLags {
            support_end: end.to_f64().unwrap_or(f64::NAN),
            limit: limit.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Splits `[lo, hi]` at the distribution's breakpoints and reports each
/// nonempty open segment as `(u, v, F(u+), F(v-))`.
fn for_each_linear_segment<T: Scalar>(
    dist: &TrueDistribution<T>,
    lo: T,
    hi: T,
    mut visit: impl FnMut(T, T, T, T),
) {
    let mut cuts = vec![lo, hi];
    let mut raw = Vec::new();
    dist.breakpoints(&mut raw);
    for c in raw {
        if c > lo && c < hi {
            cuts.push(c);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let three = T::from_f64(3.0).unwrap();
    for w in cuts.windows(2) {
        let (u, v) = (w[0], w[1]);
        let len = v - u;
        if !(len > T::zero()) {
            continue;
        }
        // two interior samples pin the line; extrapolate to the endpoints
        let f1 = dist.cdf(u + len / three);
        let f2 = dist.cdf(u + (len + len) / three);
        visit(u, v, f1 + f1 - f2, f2 + f2 - f1);
    }
}

/// Average of the displacement CDF over each bin:
/// `I_j = (1/ell) * integral of F over [j*ell, (j+1)*ell]`, exactly.
pub fn true_interval_integrals<T: Scalar>(
    dist: &TrueDistribution<T>,
    binning: &Binning<T>,
) -> Result<Vec<T>> {
    dist.validate()?;
    ensure_supported(dist, binning)?;
    let ell = binning.ell();
    let two = T::one() + T::one();
    let mut out = Vec::with_capacity(binning.window());
    for j in 0..binning.window() {
        let lo = ell * T::from_usize(j).unwrap();
        let hi = ell * T::from_usize(j + 1).unwrap();
        let mut integral = T::zero();
        for_each_linear_segment(dist, lo, hi, |u, v, fu, fv| {
            integral += (v - u) * (fu + fv) / two;
        });
        out.push(integral / ell);
    }
    Ok(out)
}

/// Displacement probabilities from the bin averages: `p_0 = I_0` and
/// `p_j = I_j - I_{j-1}`.
pub fn true_probabilities<T: Scalar>(
    dist: &TrueDistribution<T>,
    binning: &Binning<T>,
) -> Result<TrueProbabilities<T>> {
    let i_true = true_interval_integrals(dist, binning)?;
    let mut p_true = Vec::with_capacity(i_true.len());
    let mut prev = T::zero();
    for &i in &i_true {
        p_true.push(i - prev);
        prev = i;
    }
    Ok(TrueProbabilities { i_true, p_true })
}

/// Bin averages under a discrete within-interval arrival distribution `G`
/// given by atoms `(xi, weight)`: `I_j = sum_atoms w * F((j + 1 - xi) * ell)`.
///
/// With atoms laid out on a fine uniform grid this converges to
/// [`true_interval_integrals`] (the uniform-arrivals case) at first order
/// in the grid spacing.
pub fn general_g_integrals<T: Scalar>(
    dist: &TrueDistribution<T>,
    g_atoms: &[(T, T)],
    binning: &Binning<T>,
) -> Result<Vec<T>> {
    if g_atoms.is_empty() {
        return Err(Error::InvalidAtoms("no atoms".into()));
    }
    let mut total = T::zero();
    for &(xi, w) in g_atoms {
        if !(xi > T::zero() && xi < T::one()) {
            return Err(Error::InvalidAtoms(format!(
                "atom position must lie strictly inside (0, 1), got {xi}"
            )));
        }
        if !(w > T::zero()) || !w.is_finite() {
            return Err(Error::InvalidAtoms(format!(
                "atom weight must be positive, got {w}"
            )));
        }
        total += w;
    }
    if (total - T::one()).abs() > T::from_f64(1e-9).unwrap() {
        return Err(Error::InvalidAtoms(format!("weights sum to {total}")));
    }

    let ell = binning.ell();
    let mut out = Vec::with_capacity(binning.window());
    for j in 0..binning.window() {
        let j1 = T::from_usize(j + 1).unwrap();
        let mut acc = T::zero();
        for &(xi, w) in g_atoms {
            acc += w * dist.cdf((j1 - xi) * ell);
        }
        out.push(acc);
    }
    Ok(out)
}

/// L2 distance `sqrt(integral over [0, m*ell] of (F - F_hat)^2)` between
/// the analytic CDF and a step approximation, in sqrt-minutes.
///
/// Both functions agree outside `[0, m*ell]` (0 below, 1 above), so the
/// restricted integral is the full-line distance.
pub fn l2_distance<T: Scalar>(dist: &TrueDistribution<T>, cdf: &StepCdf<T>) -> Result<T> {
    dist.validate()?;
    let binning = cdf.binning();
    ensure_supported(dist, &binning)?;
    let ell = binning.ell();
    let three = T::from_f64(3.0).unwrap();
    let mut total = T::zero();
    for j in 0..binning.lag_count() {
        let level = cdf.partial_sums()[j];
        let lo = ell * T::from_usize(j).unwrap();
        let hi = ell * T::from_usize(j + 1).unwrap();
        for_each_linear_segment(dist, lo, hi, |u, v, fu, fv| {
            let a = fu - level;
            let b = fv - level;
            total += (v - u) * (a * a + a * b + b * b) / three;
        });
    }
    Ok(total.sqrt())
}

/// Smallest L2 distance attainable by any bin-constant approximation of
/// the CDF: the distance to the step function taking the bin-mean value
/// `I_j` on bin `j` (the orthogonal projection onto bin-constant
/// functions).
pub fn min_l2_distance<T: Scalar>(dist: &TrueDistribution<T>, binning: &Binning<T>) -> Result<T> {
    let truth = true_probabilities(dist, binning)?;
    let projection = build_step_cdf(&truth.p_true, *binning)?;
    l2_distance(dist, &projection)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn binning(ell: f64, m: usize) -> Binning<f64> {
        Binning::new(ell, m).unwrap()
    }

    fn uniform60() -> TrueDistribution<f64> {
        TrueDistribution::uniform(0.0, 60.0).unwrap()
    }

    fn assert_close(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn integrals_of_uniform_match_hand_values() {
        let i = true_interval_integrals(&uniform60(), &binning(30.0, 2)).unwrap();
        assert_close(&i, &[0.25, 0.75, 1.0], 1e-14);
        let i = true_interval_integrals(&uniform60(), &binning(60.0, 1)).unwrap();
        assert_close(&i, &[0.5, 1.0], 1e-14);
    }

    #[test]
    fn integrals_of_point_mass_at_zero_are_one() {
        let dist = TrueDistribution::point_mass(0.0).unwrap();
        let i = true_interval_integrals(&dist, &binning(10.0, 1)).unwrap();
        assert_close(&i, &[1.0, 1.0], 1e-15);
    }

    #[test]
    fn integrals_split_point_mass_inside_a_bin() {
        let dist = TrueDistribution::point_mass(10.0).unwrap();
        let i = true_interval_integrals(&dist, &binning(30.0, 1)).unwrap();
        assert_close(&i, &[2.0 / 3.0, 1.0], 1e-14);
    }

    #[test]
    fn probabilities_difference_the_integrals() {
        let p = true_probabilities(&uniform60(), &binning(30.0, 2)).unwrap();
        assert_close(&p.p_true, &[0.25, 0.5, 0.25], 1e-14);

        let p = true_probabilities(&TrueDistribution::point_mass(0.0).unwrap(), &binning(10.0, 1))
            .unwrap();
        assert_close(&p.p_true, &[1.0, 0.0], 1e-15);

        let p = true_probabilities(&uniform60(), &binning(10.0, 6)).unwrap();
        let twelfth = 1.0 / 12.0;
        let sixth = 1.0 / 6.0;
        assert_close(
            &p.p_true,
            &[twelfth, sixth, sixth, sixth, sixth, sixth, twelfth],
            1e-14,
        );
    }

    #[test]
    fn support_check_rejects_wide_distributions() {
        let wide = TrueDistribution::uniform(0.0, 120.0).unwrap();
        assert!(matches!(
            true_interval_integrals(&wide, &binning(30.0, 2)).unwrap_err(),
            Error::SupportExceedsLags { .. }
        ));
    }

    #[test]
    fn general_g_single_atom_evaluates_the_cdf() {
        // one atom at xi: I_j = F((j + 1 - xi) * ell), here F(15), F(45), F(75)
        let i = general_g_integrals(&uniform60(), &[(0.5, 1.0)], &binning(30.0, 2)).unwrap();
        assert_close(&i, &[0.25, 0.75, 1.0], 1e-15);
    }

    #[test]
    fn general_g_saturates_past_the_support() {
        let dist = TrueDistribution::point_mass(5.0).unwrap();
        let i = general_g_integrals(&dist, &[(0.5, 1.0)], &binning(30.0, 2)).unwrap();
        assert_close(&i, &[1.0, 1.0, 1.0], 0.0);
    }

    #[test]
    fn general_g_uniform_grid_approaches_uniform_arrivals() {
        let grid: Vec<(f64, f64)> = (1..=10_000)
            .map(|i| ((i as f64 - 0.5) / 10_000.0, 1.0 / 10_000.0))
            .collect();
        let approx = general_g_integrals(&uniform60(), &grid, &binning(30.0, 2)).unwrap();
        let exact = true_interval_integrals(&uniform60(), &binning(30.0, 2)).unwrap();
        for (a, e) in approx.iter().zip(&exact) {
            assert!((a - e).abs() <= 1e-3);
        }
    }

    #[test]
    fn general_g_error_scales_linearly_with_spacing() {
        // quarter-offset grids have mean 1/2 - 1/(4K), so the error in the
        // bin averages of a linear CDF is exactly proportional to 1/K
        let make_grid = |k: usize| -> Vec<(f64, f64)> {
            (1..=k)
                .map(|i| ((i as f64 - 0.75) / k as f64, 1.0 / k as f64))
                .collect()
        };
        let exact = true_interval_integrals(&uniform60(), &binning(30.0, 2)).unwrap();
        let err = |k: usize| -> f64 {
            general_g_integrals(&uniform60(), &make_grid(k), &binning(30.0, 2))
                .unwrap()
                .iter()
                .zip(&exact)
                .map(|(a, e)| (a - e).abs())
                .fold(0.0, f64::max)
        };
        let coarse = err(100);
        let fine = err(200);
        assert!(coarse > 0.0);
        let ratio = coarse / fine;
        assert!((1.9..=2.1).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn general_g_rejects_bad_atoms() {
        let b = binning(30.0, 2);
        assert!(matches!(
            general_g_integrals(&uniform60(), &[], &b).unwrap_err(),
            Error::InvalidAtoms(_)
        ));
        assert!(general_g_integrals(&uniform60(), &[(0.0, 1.0)], &b).is_err());
        assert!(general_g_integrals(&uniform60(), &[(1.0, 1.0)], &b).is_err());
        assert!(general_g_integrals(&uniform60(), &[(0.5, -1.0)], &b).is_err());
        assert!(general_g_integrals(&uniform60(), &[(0.4, 0.5), (0.6, 0.6)], &b).is_err());
    }

    #[test]
    fn distance_to_own_projection_matches_analytic_value() {
        // for a linear CDF over m equal bins the projection distance is
        // sqrt(5)/m when the support is [0, 60]
        let truth = true_probabilities(&uniform60(), &binning(30.0, 2)).unwrap();
        let step = build_step_cdf(&truth.p_true, binning(30.0, 2)).unwrap();
        let d = l2_distance(&uniform60(), &step).unwrap();
        assert!((d - 5f64.sqrt() / 2.0).abs() < 1e-12);

        let truth = true_probabilities(&uniform60(), &binning(60.0, 1)).unwrap();
        let step = build_step_cdf(&truth.p_true, binning(60.0, 1)).unwrap();
        let d = l2_distance(&uniform60(), &step).unwrap();
        assert!((d - 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn distance_between_identical_functions_is_zero() {
        let dist = TrueDistribution::point_mass(0.0).unwrap();
        let step = build_step_cdf(&[1.0, 0.0, 0.0], binning(30.0, 2)).unwrap();
        assert_eq!(l2_distance(&dist, &step).unwrap(), 0.0);
    }

    #[test]
    fn min_distance_examples() {
        assert!(
            (min_l2_distance(&uniform60(), &binning(30.0, 2)).unwrap() - 5f64.sqrt() / 2.0).abs()
                < 1e-12
        );
        assert!(
            (min_l2_distance(&uniform60(), &binning(10.0, 6)).unwrap() - 5f64.sqrt() / 6.0).abs()
                < 1e-12
        );
        let atom = TrueDistribution::point_mass(0.0).unwrap();
        assert_eq!(min_l2_distance(&atom, &binning(30.0, 2)).unwrap(), 0.0);
    }

    fn dist_strategy(limit: f64) -> impl Strategy<Value = TrueDistribution<f64>> {
        let leaf = prop_oneof![
            (0.0..limit).prop_map(|d| TrueDistribution::PointMass(d)),
            (0.0..0.9f64, 0.05..1.0f64).prop_map(move |(a0, w)| {
                let a = a0 * limit;
                let b = a + w * (limit - a);
                TrueDistribution::Uniform(a, b)
            }),
        ];
        prop_oneof![
            leaf.clone(),
            prop::collection::vec((0.05f64..1.0, leaf), 2..4).prop_map(|parts| {
                let total: f64 = parts.iter().map(|(w, _)| w).sum();
                TrueDistribution::Mixture(
                    parts.into_iter().map(|(w, d)| (w / total, d)).collect(),
                )
            }),
        ]
    }

    fn simplex_strategy(len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.01f64..1.0, len).prop_map(|raw| {
            let total: f64 = raw.iter().sum();
            raw.into_iter().map(|v| v / total).collect()
        })
    }

    proptest! {
        #[test]
        fn true_probabilities_form_a_simplex(
            m in 1usize..8,
            dist in dist_strategy(60.0),
        ) {
            let b = binning(60.0 / m as f64, m);
            // scale the support into [0, m*ell] = [0, 60]
            let truth = true_probabilities(&dist, &b).unwrap();
            let sum: f64 = truth.p_true.iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-9);
            prop_assert!(truth.p_true.iter().all(|&p| p >= -1e-12));
            prop_assert!((truth.i_true[m] - 1.0).abs() <= 1e-12);
            for w in truth.i_true.windows(2) {
                prop_assert!(w[1] >= w[0] - 1e-12);
            }
        }

        #[test]
        fn projection_is_a_lower_bound(
            m in 1usize..8,
            dist in dist_strategy(60.0),
            p in simplex_strategy(8),
        ) {
            let b = binning(60.0 / m as f64, m);
            let step = build_step_cdf(&normalize_prefix(&p, m + 1), b).unwrap();
            let d = l2_distance(&dist, &step).unwrap();
            let floor = min_l2_distance(&dist, &b).unwrap();
            prop_assert!(d >= floor - 1e-10);
        }

        #[test]
        fn halving_bins_never_hurts_the_projection(
            m in 1usize..6,
            dist in dist_strategy(60.0),
        ) {
            let ell = 60.0 / m as f64;
            let coarse = min_l2_distance(&dist, &binning(ell, m)).unwrap();
            let fine = min_l2_distance(&dist, &binning(ell / 2.0, 2 * m)).unwrap();
            prop_assert!(fine <= coarse + 1e-10);
        }

        #[test]
        fn closed_form_matches_trapezoid_quadrature(
            m in 1usize..7,
            parts in prop::collection::vec((0.05f64..1.0, 0.0f64..0.9), 1..4),
            p in simplex_strategy(8),
        ) {
            // continuous mixtures only: every component a uniform at least
            // 5 minutes wide, so the integrand has kinks but no jumps
            let total: f64 = parts.iter().map(|(w, _)| w).sum();
            let dist = TrueDistribution::Mixture(
                parts
                    .iter()
                    .map(|&(w, a0)| {
                        let a = a0 * 55.0;
                        (w / total, TrueDistribution::Uniform(a, a + 5.0 + (55.0 - a) * a0))
                    })
                    .collect(),
            );
            let b = binning(60.0 / m as f64, m);
            let step = build_step_cdf(&normalize_prefix(&p, m + 1), b).unwrap();

            let closed = l2_distance(&dist, &step).unwrap();
            let numeric_sq = trapezoid_l2_squared(&dist, &step, 100_000);
            prop_assert!((closed * closed - numeric_sq).abs() <= 1e-6);
            prop_assert!((closed - numeric_sq.sqrt()).abs() <= 1e-6);
        }
    }

    fn normalize_prefix(raw: &[f64], len: usize) -> Vec<f64> {
        let head = &raw[..len];
        let total: f64 = head.iter().sum();
        head.iter().map(|v| v / total).collect()
    }

    fn trapezoid_l2_squared(
        dist: &TrueDistribution<f64>,
        cdf: &StepCdf<f64>,
        points: usize,
    ) -> f64 {
        let b = cdf.binning();
        let m = b.lag_count();
        let per_bin = (points / m.max(1)).max(64);
        let mut total = 0.0;
        for j in 0..m {
            let lo = b.ell() * j as f64;
            let hi = b.ell() * (j + 1) as f64;
            let level = cdf.partial_sums()[j];
            let h = (hi - lo) / per_bin as f64;
            let g = |tau: f64| {
                let d = dist.cdf(tau) - level;
                d * d
            };
            let mut s = 0.5 * (g(lo) + g(hi));
            for i in 1..per_bin {
                s += g(lo + h * i as f64);
            }
            total += s * h;
        }
        total
    }
}

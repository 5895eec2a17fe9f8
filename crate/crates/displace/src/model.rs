//! Shared domain types: interval binning, paired count series, probability
//! estimates, step CDFs, and analytic displacement distributions.
//!
//! Everything here is immutable after construction and every operation is a
//! pure function, so the types can be shared freely across threads.

use crate::error::{Error, Result};
use crate::Scalar;

/// Tolerance for accepting a vector as a probability vector.
///
/// Loose enough to absorb accumulated float error from a fit, tight enough
/// to catch logic bugs upstream.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Division of the time line into intervals of `ell` minutes, with
/// displacements assumed to lie in `[0, m*ell]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Binning<T> {
    ell: T,
    m: usize,
}

impl<T: Scalar> Binning<T> {
    pub fn new(ell: T, m: usize) -> Result<Self> {
        if !(ell > T::zero()) || !ell.is_finite() {
            return Err(Error::InvalidInput(format!(
                "interval length must be positive and finite, got {ell}"
            )));
        }
        Ok(Self { ell, m })
    }

    /// Interval length in minutes.
    pub fn ell(&self) -> T {
        self.ell
    }

    /// Number of lags `m`; displacements are assumed to lie in `[0, m*ell]`.
    pub fn lag_count(&self) -> usize {
        self.m
    }

    /// Upper end of the displacement support, `m * ell`.
    pub fn support_end(&self) -> T {
        self.ell * T::from_usize(self.m).expect("lag count fits in scalar")
    }

    /// Size of the lag window, `m + 1`.
    pub fn window(&self) -> usize {
        self.m + 1
    }
}

/// Aligned per-interval counts of source events (`n`) and displaced events
/// (`k`) over `t = 1..=T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSeries {
    n: Vec<u64>,
    k: Vec<u64>,
}

impl CountSeries {
    pub fn new(n: Vec<u64>, k: Vec<u64>) -> Result<Self> {
        if n.len() != k.len() {
            return Err(Error::LengthMismatch {
                expected: n.len(),
                actual: k.len(),
            });
        }
        if n.is_empty() {
            return Err(Error::InvalidInput(
                "count series needs at least one interval".into(),
            ));
        }
        Ok(Self { n, k })
    }

    /// Number of intervals `T`.
    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty()
    }

    /// Source-event counts `n_t`.
    pub fn source(&self) -> &[u64] {
        &self.n
    }

    /// Displaced-event counts `k_t`.
    pub fn displaced(&self) -> &[u64] {
        &self.k
    }
}

/// Ratio estimator of the conversion rate, `sum(k) / sum(n)`.
///
/// The ratio may exceed 1 on misspecified data; callers that care should
/// check and warn, it is still usable as a normalizer.
pub fn conversion_rate<T: Scalar>(counts: &CountSeries) -> Result<T> {
    let total_n: u128 = counts.source().iter().map(|&v| v as u128).sum();
    if total_n == 0 {
        return Err(Error::ZeroSourceEvents);
    }
    let total_k: u128 = counts.displaced().iter().map(|&v| v as u128).sum();
    let num = T::from_u128(total_k).expect("count total fits in scalar");
    let den = T::from_u128(total_n).expect("count total fits in scalar");
    Ok(num / den)
}

/// Clips negative coefficients to zero and rescales the rest to sum to 1.
///
/// Fails with [`Error::AllNonpositive`] when no coefficient is positive,
/// which signals that the regression found no usable signal.
pub fn normalize_probabilities<T: Scalar>(beta: &[T]) -> Result<Vec<T>> {
    if beta.is_empty() {
        return Err(Error::InvalidInput("empty coefficient vector".into()));
    }
    let clipped: Vec<T> = beta
        .iter()
        .map(|&b| if b > T::zero() { b } else { T::zero() })
        .collect();
    let total = clipped.iter().fold(T::zero(), |acc, &c| acc + c);
    if !(total > T::zero()) {
        return Err(Error::AllNonpositive);
    }
    Ok(clipped.into_iter().map(|c| c / total).collect())
}

/// Piecewise-constant CDF approximation: value `i_hat[j]` on
/// `[j*ell, (j+1)*ell)` for `j < m`, and 1 from `m*ell` on.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCdf<T> {
    binning: Binning<T>,
    i_hat: Vec<T>,
}

impl<T: Scalar> StepCdf<T> {
    /// Assembles a step CDF from precomputed partial sums, checking length,
    /// monotonicity, bounds, and that the last partial sum is 1.
    pub fn new(binning: Binning<T>, i_hat: Vec<T>) -> Result<Self> {
        if i_hat.len() != binning.window() {
            return Err(Error::LengthMismatch {
                expected: binning.window(),
                actual: i_hat.len(),
            });
        }
        let tol = T::from_f64(NORMALIZATION_TOL).unwrap();
        let mut prev = T::zero();
        for (j, &v) in i_hat.iter().enumerate() {
            if v < prev - tol {
                return Err(Error::InvalidInput(format!(
                    "partial sums must be nondecreasing, violated at index {j}"
                )));
            }
            prev = v;
        }
        let last = *i_hat.last().unwrap();
        if (last - T::one()).abs() > tol || i_hat[0] < -tol {
            return Err(Error::NotNormalized(format!(
                "partial sums must rise from >= 0 to 1, got first {} last {last}",
                i_hat[0]
            )));
        }
        Ok(Self { binning, i_hat })
    }

    pub fn binning(&self) -> Binning<T> {
        self.binning
    }

    /// Partial sums `i_hat[j] = p_0 + ... + p_j`.
    pub fn partial_sums(&self) -> &[T] {
        &self.i_hat
    }

    /// Evaluates the step CDF: 0 below 0, `i_hat[j]` on the j-th interval,
    /// and 1 from the end of the support on.
    pub fn eval(&self, tau: T) -> T {
        if tau < T::zero() {
            return T::zero();
        }
        if tau >= self.binning.support_end() {
            return T::one();
        }
        // here m >= 1, since tau in [0, m*ell) is nonempty
        let j = (tau / self.binning.ell())
            .floor()
            .to_usize()
            .unwrap_or(0)
            .min(self.binning.lag_count() - 1);
        self.i_hat[j]
    }

    /// First differences of the partial sums; recovers the probabilities
    /// the CDF was built from.
    pub fn probabilities(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.i_hat.len());
        let mut prev = T::zero();
        for &v in &self.i_hat {
            out.push(v - prev);
            prev = v;
        }
        out
    }
}

/// Accumulates a probability vector into the partial sums of a step CDF.
///
/// `p` must have length `m + 1`, be nonnegative, and sum to 1 within
/// [`NORMALIZATION_TOL`].
pub fn build_step_cdf<T: Scalar>(p: &[T], binning: Binning<T>) -> Result<StepCdf<T>> {
    if p.len() != binning.window() {
        return Err(Error::LengthMismatch {
            expected: binning.window(),
            actual: p.len(),
        });
    }
    let tol = T::from_f64(NORMALIZATION_TOL).unwrap();
    let mut sum = T::zero();
    for &pj in p {
        if pj < -tol {
            return Err(Error::NotNormalized(format!("negative entry {pj}")));
        }
        sum += pj;
    }
    if (sum - T::one()).abs() > tol {
        return Err(Error::NotNormalized(format!("sum is {sum}")));
    }
    let mut i_hat = Vec::with_capacity(p.len());
    let mut acc = T::zero();
    for &pj in p {
        // clamp float dust so the partial sums stay monotone
        acc += if pj > T::zero() { pj } else { T::zero() };
        i_hat.push(acc);
    }
    Ok(StepCdf { binning, i_hat })
}

/// Estimated displacement probabilities together with the raw regression
/// coefficients and the conversion rate they came with.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityEstimate<T> {
    beta: Vec<T>,
    q_hat: T,
    p: Vec<T>,
}

impl<T: Scalar> ProbabilityEstimate<T> {
    /// Bundles raw coefficients with an already-normalized probability
    /// vector of the same length.
    pub fn new(beta: Vec<T>, q_hat: T, p: Vec<T>) -> Result<Self> {
        if beta.len() != p.len() {
            return Err(Error::LengthMismatch {
                expected: beta.len(),
                actual: p.len(),
            });
        }
        let tol = T::from_f64(NORMALIZATION_TOL).unwrap();
        let sum = p.iter().fold(T::zero(), |acc, &v| acc + v);
        if (sum - T::one()).abs() > tol || p.iter().any(|&v| v < -tol) {
            return Err(Error::NotNormalized(format!("sum is {sum}")));
        }
        Ok(Self { beta, q_hat, p })
    }

    /// Builds the estimate from raw least-squares coefficients via
    /// [`normalize_probabilities`].
    pub fn from_coefficients(beta: Vec<T>, q_hat: T) -> Result<Self> {
        let p = normalize_probabilities(&beta)?;
        Ok(Self { beta, q_hat, p })
    }

    /// Raw regression coefficients.
    pub fn coefficients(&self) -> &[T] {
        &self.beta
    }

    /// Ratio estimate of the conversion rate.
    pub fn conversion_rate(&self) -> T {
        self.q_hat
    }

    /// Normalized displacement probabilities.
    pub fn probabilities(&self) -> &[T] {
        &self.p
    }

    /// The step CDF induced by the probabilities.
    pub fn step_cdf(&self, binning: Binning<T>) -> Result<StepCdf<T>> {
        build_step_cdf(&self.p, binning)
    }
}

/// Analytic displacement distribution used by the simulator and for
/// ground-truth metrics. All variants are supported on `[0, inf)`.
#[derive(Debug, Clone, PartialEq)]
pub enum TrueDistribution<T> {
    /// Every displacement equals `d` minutes.
    PointMass(T),
    /// Displacements uniform on `[a, b]` minutes.
    Uniform(T, T),
    /// Convex combination of component distributions.
    Mixture(Vec<(T, TrueDistribution<T>)>),
}

impl<T: Scalar> TrueDistribution<T> {
    pub fn point_mass(d: T) -> Result<Self> {
        let dist = TrueDistribution::PointMass(d);
        dist.validate()?;
        Ok(dist)
    }

    pub fn uniform(a: T, b: T) -> Result<Self> {
        let dist = TrueDistribution::Uniform(a, b);
        dist.validate()?;
        Ok(dist)
    }

    pub fn mixture(components: Vec<(T, TrueDistribution<T>)>) -> Result<Self> {
        let dist = TrueDistribution::Mixture(components);
        dist.validate()?;
        Ok(dist)
    }

    /// Checks the variant invariants: nonnegative support, `a < b` for
    /// uniforms, positive mixture weights summing to 1.
    pub fn validate(&self) -> Result<()> {
        match self {
            TrueDistribution::PointMass(d) => {
                if !(*d >= T::zero()) || !d.is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "point mass must sit at a nonnegative finite delay, got {d}"
                    )));
                }
            }
            TrueDistribution::Uniform(a, b) => {
                if !(*a >= T::zero()) || !(*b > *a) || !b.is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "uniform needs 0 <= a < b, got a = {a}, b = {b}"
                    )));
                }
            }
            TrueDistribution::Mixture(parts) => {
                if parts.is_empty() {
                    return Err(Error::InvalidInput("mixture has no components".into()));
                }
                let mut total = T::zero();
                for (w, comp) in parts {
                    if !(*w > T::zero()) || !w.is_finite() {
                        return Err(Error::InvalidInput(format!(
                            "mixture weights must be positive, got {w}"
                        )));
                    }
                    total += *w;
                    comp.validate()?;
                }
                if (total - T::one()).abs() > T::from_f64(NORMALIZATION_TOL).unwrap() {
                    return Err(Error::InvalidInput(format!(
                        "mixture weights must sum to 1, got {total}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Right-continuous CDF at `tau` minutes.
    pub fn cdf(&self, tau: T) -> T {
        match self {
            TrueDistribution::PointMass(d) => {
                if tau < *d {
                    T::zero()
                } else {
                    T::one()
                }
            }
            TrueDistribution::Uniform(a, b) => {
                let v = (tau - *a) / (*b - *a);
                v.max(T::zero()).min(T::one())
            }
            TrueDistribution::Mixture(parts) => parts
                .iter()
                .fold(T::zero(), |acc, (w, comp)| acc + *w * comp.cdf(tau)),
        }
    }

    /// Largest displacement the distribution can produce.
    pub fn support_end(&self) -> T {
        match self {
            TrueDistribution::PointMass(d) => *d,
            TrueDistribution::Uniform(_, b) => *b,
            TrueDistribution::Mixture(parts) => parts
                .iter()
                .map(|(_, comp)| comp.support_end())
                .fold(T::zero(), T::max),
        }
    }

    /// Collects the points where the CDF kinks or jumps.
    pub fn breakpoints(&self, out: &mut Vec<T>) {
        match self {
            TrueDistribution::PointMass(d) => out.push(*d),
            TrueDistribution::Uniform(a, b) => {
                out.push(*a);
                out.push(*b);
            }
            TrueDistribution::Mixture(parts) => {
                for (_, comp) in parts {
                    comp.breakpoints(out);
                }
            }
        }
    }
}

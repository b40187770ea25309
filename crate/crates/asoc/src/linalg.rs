//! Dense symmetric linear algebra behind the optimizer: moment fitting over
//! ordered point pairs, conditioning of the fitted joint Gaussian on the
//! current best point, positive-semidefinite factorization, and seeded
//! multivariate normal sampling.
//!
//! All functions here are pure; randomness enters only through an explicitly
//! passed generator, so identical seeds give bit-identical samples.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Eigenvalue threshold, relative to `max(1, ‖mean‖²)`, below which a
/// conditional distribution counts as collapsed.
const DEGENERATE_EIGENVALUE_SCALE: f64 = 1e-14;

/// Absolute floor inside the ridge scale so a zero-trace covariance block
/// still receives a usable ridge.
const RIDGE_TRACE_FLOOR: f64 = 1e-12;

/// Asymmetry tolerance (relative to the largest entry) accepted by
/// [`psd_factorize`].
const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Joint Gaussian over ordered pairs of pool points.
///
/// For a pool of `N` points sorted ascending by objective value, the model is
/// fitted over all `M = N(N−1)/2` concatenated pairs `(better, worse)` — the
/// pair's first element always has the smaller objective value. The `better_*`
/// fields are the moments of first elements, `worse_*` of second elements, and
/// `cross_cov` couples the two halves.
#[derive(Clone, Debug, PartialEq)]
pub struct PairGaussianModel {
    /// Mean of pair-first (better) elements.
    pub better_mean: DVector<f64>,
    /// Mean of pair-second (worse) elements.
    pub worse_mean: DVector<f64>,
    /// Covariance of pair-first elements; symmetric PSD.
    pub better_cov: DMatrix<f64>,
    /// Cross-covariance between pair-first and pair-second elements; general
    /// square matrix, not symmetric.
    pub cross_cov: DMatrix<f64>,
    /// Covariance of pair-second elements; symmetric PSD.
    pub worse_cov: DMatrix<f64>,
    /// Number of ordered pairs the moments were taken over.
    pub pair_count: usize,
}

impl PairGaussianModel {
    /// Search-space dimension.
    pub fn dim(&self) -> usize {
        self.better_mean.len()
    }
}

/// Candidate-generating Gaussian: the distribution of a pair's better element
/// given that its worse element equals the current best point.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalGaussian {
    /// Conditional mean.
    pub mean: DVector<f64>,
    /// Conditional covariance, symmetrized and eigenvalue-clamped to PSD.
    pub covariance: DMatrix<f64>,
    /// Factor `L` with `L·Lᵀ` equal to `covariance` (up to clamped mass);
    /// lower-triangular when a Cholesky factorization succeeded, otherwise an
    /// eigenvector-scaled square factor.
    pub factor: DMatrix<f64>,
    /// True when the covariance has collapsed: its largest eigenvalue is below
    /// `1e-14 · max(1, ‖mean‖²)`.
    pub degenerate: bool,
}

impl ConditionalGaussian {
    /// Search-space dimension.
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// Returns a copy with `floor·I` added to the covariance, re-clamped,
    /// re-factorized, and the degenerate flag recomputed.
    ///
    /// This is the exploration floor used by adaptive (objective-switching)
    /// workloads: it keeps the sampler alive even when the pool has collapsed
    /// onto a single point.
    ///
    /// # Errors
    ///
    /// Rejects a negative or non-finite `floor`.
    pub fn with_covariance_floor(&self, floor: f64) -> Result<ConditionalGaussian> {
        if !floor.is_finite() || floor < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "covariance floor must be a finite nonnegative real, got {floor}"
            )));
        }
        let n = self.dim();
        let mut lifted = self.covariance.clone();
        for k in 0..n {
            lifted[(k, k)] += floor;
        }
        let (covariance, lambda_max) = clamp_to_psd(lifted);
        let factor = psd_factorize(&covariance)?;
        let degenerate = is_collapsed(lambda_max, &self.mean);
        Ok(ConditionalGaussian {
            mean: self.mean.clone(),
            covariance,
            factor,
            degenerate,
        })
    }
}

/// Fits the pair-class joint Gaussian over all `N(N−1)/2` ordered pairs of
/// `sorted_points`.
///
/// The caller must pass points sorted ascending by objective value; each pair
/// `(i, j)` with `i < j` then contributes point `i` as its better element and
/// point `j` as its worse element. Moments are population-normalized (divided
/// by the pair count).
///
/// The implementation uses the closed-form weighted accumulation — the point
/// at 0-based position `i` appears as a better element in `N−1−i` pairs and as
/// a worse element in `i` pairs, with the cross term accumulated through a
/// running suffix sum — which costs `O(N·n²)` instead of the naive `O(N²·n²)`
/// and matches naive enumeration to floating-point accuracy.
///
/// # Errors
///
/// Rejects fewer than two points, mixed dimensions, and non-finite
/// coordinates.
pub fn fit_pair_moments(sorted_points: &[DVector<f64>]) -> Result<PairGaussianModel> {
    let count = sorted_points.len();
    if count < 2 {
        return Err(Error::TooFewPoints(count));
    }
    let n = sorted_points[0].len();
    for p in sorted_points {
        if p.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: p.len(),
            });
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("pool point coordinates"));
        }
    }

    let pair_count = count * (count - 1) / 2;
    let m = pair_count as f64;

    let mut better_mean = DVector::zeros(n);
    let mut worse_mean = DVector::zeros(n);
    for (i, p) in sorted_points.iter().enumerate() {
        better_mean.axpy((count - 1 - i) as f64, p, 1.0);
        worse_mean.axpy(i as f64, p, 1.0);
    }
    better_mean /= m;
    worse_mean /= m;

    let mut better_cov = DMatrix::zeros(n, n);
    let mut worse_cov = DMatrix::zeros(n, n);
    let mut cross_cov = DMatrix::zeros(n, n);
    // suffix accumulates Σ_{j>i} (x_j − worse_mean) while i walks backwards,
    // so each better-element deviation pairs against the sum of all worse
    // deviations that follow it.
    let mut suffix = DVector::zeros(n);
    for i in (0..count).rev() {
        let better_dev = &sorted_points[i] - &better_mean;
        let worse_dev = &sorted_points[i] - &worse_mean;
        better_cov.ger((count - 1 - i) as f64, &better_dev, &better_dev, 1.0);
        worse_cov.ger(i as f64, &worse_dev, &worse_dev, 1.0);
        cross_cov.ger(1.0, &better_dev, &suffix, 1.0);
        suffix += &worse_dev;
    }
    better_cov /= m;
    worse_cov /= m;
    cross_cov /= m;

    Ok(PairGaussianModel {
        better_mean,
        worse_mean,
        better_cov,
        cross_cov,
        worse_cov,
        pair_count,
    })
}

/// Conditions the fitted pair Gaussian on the event "the pair's worse element
/// equals `best`", yielding the distribution that candidate points are drawn
/// from.
///
/// The conditional mean is
/// `better_mean + cross_cov·(worse_cov + εI)⁻¹·(best − worse_mean)` and the
/// conditional covariance is the Schur complement
/// `better_cov − cross_cov·(worse_cov + εI)⁻¹·cross_covᵀ`, with ridge
/// `ε = regularization · max(trace(worse_cov)/n, 1e-12)`. The covariance is
/// symmetrized and eigenvalue-clamped to PSD before factorization, and the
/// degenerate flag is set when its largest eigenvalue falls below
/// `1e-14 · max(1, ‖mean‖²)`.
///
/// # Errors
///
/// Rejects dimension mismatches and a negative or non-finite
/// `regularization`. If the ridged block fails to factorize even after one
/// retry with ten times the ridge, the input is pathological and
/// [`Error::ConditioningFailed`] is returned.
pub fn condition_on_best(
    model: &PairGaussianModel,
    best: &DVector<f64>,
    regularization: f64,
) -> Result<ConditionalGaussian> {
    let n = model.dim();
    if best.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: best.len(),
        });
    }
    if !regularization.is_finite() || regularization < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "regularization must be a finite nonnegative real, got {regularization}"
        )));
    }

    let ridge = regularization * (model.worse_cov.trace() / n as f64).max(RIDGE_TRACE_FLOOR);
    let attempt = |eps: f64| -> Option<Cholesky<f64, Dyn>> {
        let mut block = model.worse_cov.clone();
        for k in 0..n {
            block[(k, k)] += eps;
        }
        Cholesky::new(block)
    };
    let block = attempt(ridge)
        .or_else(|| attempt(ridge * 10.0))
        .ok_or(Error::ConditioningFailed)?;

    let mean = &model.better_mean + &model.cross_cov * block.solve(&(best - &model.worse_mean));
    let gain_t = block.solve(&model.cross_cov.transpose());
    let raw = &model.better_cov - &model.cross_cov * gain_t;
    let (covariance, lambda_max) = clamp_to_psd(raw);
    let factor = psd_factorize(&covariance)?;
    let degenerate = is_collapsed(lambda_max, &mean);

    Ok(ConditionalGaussian {
        mean,
        covariance,
        factor,
        degenerate,
    })
}

/// Draws `count` samples `mean + L·z` with `z` a standard normal vector.
///
/// Identical generator state yields bit-identical output.
///
/// # Errors
///
/// Rejects `count == 0` and a degenerate distribution — the caller decides
/// what a collapsed sampler means (skip the iteration, or lift it with
/// [`ConditionalGaussian::with_covariance_floor`]).
pub fn sample_mvn<R: Rng + ?Sized>(
    dist: &ConditionalGaussian,
    count: usize,
    rng: &mut R,
) -> Result<Vec<DVector<f64>>> {
    if count == 0 {
        return Err(Error::EmptySampleRequest);
    }
    if dist.degenerate {
        return Err(Error::DegenerateDistribution);
    }
    let n = dist.dim();
    let samples = (0..count)
        .map(|_| {
            let z = DVector::from_fn(n, |_, _| StandardNormal.sample(rng));
            &dist.mean + &dist.factor * z
        })
        .collect();
    Ok(samples)
}

/// Factors a symmetric PSD matrix into `L` with `L·Lᵀ ≈ m`.
///
/// Tries a Cholesky factorization first (returning the lower-triangular
/// factor); if that fails — the matrix is singular or has tiny negative
/// eigenvalues from floating-point noise — falls back to a symmetric
/// eigendecomposition with negative eigenvalues clamped to zero, returning
/// the square factor `Q·diag(√λ⁺)`. The round trip satisfies
/// `‖L·Lᵀ − m‖_max ≤ 1e-8·max(1, ‖m‖_max) + (total clamped mass)`.
///
/// # Errors
///
/// Rejects non-square, non-finite, or non-symmetric input (asymmetry beyond
/// `1e-12` relative to the largest entry).
pub fn psd_factorize(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            actual: m.ncols(),
        });
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("matrix entries"));
    }
    let scale = m.amax().max(1.0);
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            if (m[(i, j)] - m[(j, i)]).abs() > SYMMETRY_TOLERANCE * scale {
                return Err(Error::NonFinite("asymmetric matrix passed to psd_factorize"));
            }
        }
    }

    if let Some(chol) = Cholesky::new(m.clone()) {
        return Ok(chol.l());
    }
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let sqrt_clamped = DVector::from_fn(n, |i, _| eig.eigenvalues[i].max(0.0).sqrt());
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&sqrt_clamped))
}

/// Symmetrizes `m`, clamps negative eigenvalues to zero, and returns the
/// repaired matrix together with its largest (post-clamp) eigenvalue.
fn clamp_to_psd(m: DMatrix<f64>) -> (DMatrix<f64>, f64) {
    let sym = (&m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let lambda_max = eig.eigenvalues.iter().fold(0.0f64, |a, &l| a.max(l)).max(0.0);
    let clamped = DVector::from_fn(eig.eigenvalues.len(), |i, _| eig.eigenvalues[i].max(0.0));
    let rebuilt = &eig.eigenvectors
        * DMatrix::from_diagonal(&clamped)
        * eig.eigenvectors.transpose();
    ((&rebuilt + rebuilt.transpose()) * 0.5, lambda_max)
}

/// Degenerate test shared by conditioning and the covariance floor.
fn is_collapsed(lambda_max: f64, mean: &DVector<f64>) -> bool {
    lambda_max < DEGENERATE_EIGENVALUE_SCALE * mean.norm_squared().max(1.0)
}

//! Axis-aligned box domains and the objective-function contract.
//!
//! Every search runs inside a [`BoxDomain`]: candidates are generated freely,
//! then clamped coordinatewise back into the box. Objectives implement the
//! minimal [`Objective`] contract — a domain plus a point evaluation. No
//! gradient or structural access is ever requested.

use nalgebra::DVector;
use rand::{Rng, RngExt};

use crate::error::{Error, Result};

/// An axis-aligned box `[lower[k], upper[k]]` per coordinate `k`.
///
/// Construction validates that the bounds are finite and strictly ordered, so
/// every method can assume a well-formed box.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxDomain {
    lower: DVector<f64>,
    upper: DVector<f64>,
}

impl BoxDomain {
    /// Builds a box from per-coordinate bounds.
    ///
    /// # Errors
    ///
    /// Rejects empty bounds, mismatched lengths, non-finite entries, and any
    /// coordinate where `lower >= upper`.
    pub fn new(lower: DVector<f64>, upper: DVector<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::InvalidDomain("domain must have at least one coordinate".into()));
        }
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                actual: upper.len(),
            });
        }
        for k in 0..lower.len() {
            let (lo, hi) = (lower[k], upper[k]);
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidDomain(format!("non-finite bound at coordinate {k}")));
            }
            if lo >= hi {
                return Err(Error::InvalidDomain(format!(
                    "lower bound {lo} not below upper bound {hi} at coordinate {k}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// Builds the `dim`-dimensional cube `[lo, hi]^dim`.
    ///
    /// # Errors
    ///
    /// Same conditions as [`BoxDomain::new`].
    pub fn cube(lo: f64, hi: f64, dim: usize) -> Result<Self> {
        Self::new(
            DVector::from_element(dim, lo),
            DVector::from_element(dim, hi),
        )
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// Per-coordinate lower bounds.
    pub fn lower(&self) -> &DVector<f64> {
        &self.lower
    }

    /// Per-coordinate upper bounds.
    pub fn upper(&self) -> &DVector<f64> {
        &self.upper
    }

    /// Width of coordinate `k`.
    pub fn width(&self, k: usize) -> f64 {
        self.upper[k] - self.lower[k]
    }

    /// Mean coordinate width — the box's characteristic length scale.
    pub fn mean_width(&self) -> f64 {
        let total: f64 = (0..self.dim()).map(|k| self.width(k)).sum();
        total / self.dim() as f64
    }

    /// Whether `x` lies inside the box (bounds inclusive).
    pub fn contains(&self, x: &DVector<f64>) -> bool {
        x.len() == self.dim()
            && (0..x.len()).all(|k| x[k] >= self.lower[k] && x[k] <= self.upper[k])
    }

    /// Clips each coordinate of `x` into `[lower[k], upper[k]]`.
    pub fn clamp(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(self.dim(), |k, _| x[k].clamp(self.lower[k], self.upper[k]))
    }

    /// Draws one point uniformly inside the box.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        DVector::from_fn(self.dim(), |k, _| {
            let u: f64 = rng.random();
            self.lower[k] + u * self.width(k)
        })
    }
}

/// The evaluation contract optimizers run against: a box domain and a
/// deterministic, finite point evaluation.
///
/// `eval` is the hot path and performs no validation; callers are responsible
/// for staying inside the domain (the optimizer clamps before evaluating).
/// Implementations must be pure within a run: the same point always yields
/// the same value.
pub trait Objective {
    /// The feasible box.
    fn domain(&self) -> &BoxDomain;

    /// Objective value at `x`. Must be finite everywhere inside the domain.
    fn eval(&self, x: &DVector<f64>) -> f64;

    /// Search-space dimension; defaults to the domain's.
    fn dim(&self) -> usize {
        self.domain().dim()
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn domain(&self) -> &BoxDomain {
        (**self).domain()
    }

    fn eval(&self, x: &DVector<f64>) -> f64 {
        (**self).eval(x)
    }

    fn dim(&self) -> usize {
        (**self).dim()
    }
}

/// Adapter turning a closure into an [`Objective`].
///
/// ## Examples
///
/// ```
/// use asoc::{BoxDomain, FnObjective, Objective};
/// use nalgebra::DVector;
///
/// let domain = BoxDomain::cube(-1.0, 1.0, 2).unwrap();
/// let sum_sq = FnObjective::new(domain, |x: &DVector<f64>| x.norm_squared());
/// assert_eq!(sum_sq.eval(&DVector::from_vec(vec![0.0, 0.5])), 0.25);
/// ```
pub struct FnObjective<F> {
    domain: BoxDomain,
    f: F,
}

impl<F: Fn(&DVector<f64>) -> f64> FnObjective<F> {
    /// Wraps `f` with its feasible box.
    pub fn new(domain: BoxDomain, f: F) -> Self {
        Self { domain, f }
    }
}

impl<F: Fn(&DVector<f64>) -> f64> Objective for FnObjective<F> {
    fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn eval(&self, x: &DVector<f64>) -> f64 {
        (self.f)(x)
    }
}

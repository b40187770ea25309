//! Pool-based stochastic optimizer for continuous box-constrained
//! minimization, with benchmark functions, baseline optimizers, and an
//! experiment harness.
//!
//! The core algorithm keeps a pool of `N` candidate points sorted by
//! objective value. Each iteration it fits a joint Gaussian over all ordered
//! pairs of pool points (better element first), conditions that Gaussian on
//! the event "the worse element equals the current best point", draws `N`
//! fresh candidates from the conditional, clamps them into the box, and keeps
//! the best `N` of old and new points. Because the conditional leans toward
//! points that historically beat their pair partners, the sampler adapts its
//! search distribution to the local shape of the objective without any
//! gradient access — and because the pool is the only state, a changed
//! objective can be picked up mid-run ([`continue_with`]) without
//! reinitialization.
//!
//! ## Example
//!
//! ```
//! use asoc::{run, AsocConfig, BoxDomain, FnObjective};
//! use nalgebra::DVector;
//!
//! let domain = BoxDomain::cube(-5.12, 5.12, 2).unwrap();
//! let sphere = FnObjective::new(domain, |x: &DVector<f64>| x.norm_squared());
//! let config = AsocConfig {
//!     max_iters: 500,
//!     seed: 7,
//!     ..AsocConfig::default()
//! };
//! let (pool, trace) = run(&sphere, &config).unwrap();
//! assert!(pool.best_value() <= 1e-3);
//! assert!(!trace.is_empty());
//! ```
//!
//! Module map:
//!
//! - [`linalg`] — pair-moment fitting, Gaussian conditioning, PSD
//!   factorization, seeded sampling.
//! - [`optimizer`] — the pool, its configuration, and the iteration loop.
//! - [`benchmarks`] — the 18-function benchmark catalog with known minima.
//! - [`baselines`] — simulated annealing and a real-coded genetic algorithm
//!   for comparisons.
//! - [`harness`] — multi-seed comparison experiments and the
//!   objective-switching adaptivity experiment, with JSON/CSV/table output.

pub mod baselines;
pub mod benchmarks;
pub mod domain;
mod error;
pub mod harness;
pub mod linalg;
pub mod optimizer;
pub mod trace;

pub use domain::{BoxDomain, FnObjective, Objective};
pub use error::{Error, Result};
pub use optimizer::{
    continue_with, initialize, run, run_with_rng, step, AsocConfig, Population,
};
pub use trace::{IterationRecord, RunTrace, TerminationStatus};

/// The seedable random stream used by every entry point that owns its RNG.
///
/// A counter-based generator with a portable, version-stable output sequence,
/// so traces reproduce bit-identically across platforms and releases.
pub type RunRng = rand_chacha::ChaCha8Rng;

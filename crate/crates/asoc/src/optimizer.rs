//! The optimization loop: pool state, configuration, and the
//! fit → condition → sample → clamp → merge iteration.
//!
//! State lives entirely in a [`Population`] — `N` points kept sorted
//! ascending by objective value. [`run`] drives the loop from a fresh uniform
//! initialization; [`continue_with`] picks an existing pool up under a
//! changed objective without reinitialization, which is what makes the
//! optimizer adaptive.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};

use crate::domain::Objective;
use crate::error::{Error, Result};
use crate::linalg::{condition_on_best, fit_pair_moments, sample_mvn};
use crate::trace::{IterationRecord, RunTrace, TerminationStatus};
use crate::RunRng;

/// Tuning knobs for the optimizer.
///
/// The defaults match the reference experimental protocol: a pool of 30, a
/// 2000-iteration horizon, and stopping once the best value has improved by
/// less than `1e-12` over 200 consecutive iterations.
#[derive(Clone, Debug, PartialEq)]
pub struct AsocConfig {
    /// Pool size `N`; also the number of candidates drawn per iteration.
    /// Must be at least 2 so ordered pairs exist; `N ≥ n + 2` is recommended
    /// for an `n`-dimensional search, otherwise the fitted covariance is
    /// structurally rank-deficient.
    pub pool_size: usize,
    /// Iteration budget.
    pub max_iters: usize,
    /// Ridge coefficient applied to the conditioned covariance block,
    /// scaled by that block's mean diagonal.
    pub regularization: f64,
    /// Exploration floor added to the candidate covariance every iteration
    /// when positive. Zero (the default) keeps the faithful behavior: a
    /// collapsed distribution generates no candidates. Positive values keep
    /// the sampler alive for objective-switching workloads.
    pub cov_floor: f64,
    /// Minimum improvement of the best value over a patience window for the
    /// run to count as still progressing.
    pub stop_tolerance: f64,
    /// Window length (iterations) for both the convergence check and the
    /// consecutive-degenerate-skip halt.
    pub stop_patience: usize,
    /// When false, the loop always runs the full `max_iters` horizon and
    /// reports `MaxIters`; used by experiment harnesses that read fixed
    /// checkpoints. [`continue_with`] disables early stopping regardless.
    pub early_stop: bool,
    /// Seed for the run-owned random stream ([`run`] only; the `*_with_rng`
    /// entry points use the caller's stream).
    pub seed: u64,
}

impl Default for AsocConfig {
    fn default() -> Self {
        Self {
            pool_size: 30,
            max_iters: 2000,
            regularization: 1e-10,
            cov_floor: 0.0,
            stop_tolerance: 1e-12,
            stop_patience: 200,
            early_stop: true,
            seed: 0,
        }
    }
}

impl AsocConfig {
    /// Checks every field against its documented constraints.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidConfig`] naming the offending field.
    pub fn validate(&self) -> Result<()> {
        if self.pool_size < 2 {
            return Err(Error::InvalidConfig(format!(
                "pool_size must be at least 2, got {}",
                self.pool_size
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be positive".into()));
        }
        if self.stop_patience == 0 {
            return Err(Error::InvalidConfig("stop_patience must be positive".into()));
        }
        for (name, value) in [
            ("regularization", self.regularization),
            ("cov_floor", self.cov_floor),
            ("stop_tolerance", self.stop_tolerance),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be a finite nonnegative real, got {value}"
                )));
            }
        }
        Ok(())
    }
}

/// The pool: points with cached objective values, sorted ascending, plus the
/// cumulative evaluation count.
#[derive(Clone, Debug, PartialEq)]
pub struct Population {
    points: Vec<DVector<f64>>,
    values: Vec<f64>,
    evaluation_count: u64,
}

impl Population {
    /// Builds a population from pre-sorted points and values.
    ///
    /// Intended for resuming from serialized state or constructing edge-case
    /// pools in tests; normal runs go through [`initialize`]. Domain
    /// containment is the caller's responsibility (no domain is attached
    /// here).
    ///
    /// # Errors
    ///
    /// Rejects empty input, length mismatches, mixed point dimensions,
    /// non-finite data, and values not sorted ascending.
    pub fn from_sorted_parts(
        points: Vec<DVector<f64>>,
        values: Vec<f64>,
        evaluation_count: u64,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidConfig("population must not be empty".into()));
        }
        if points.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                actual: values.len(),
            });
        }
        let n = points[0].len();
        for p in &points {
            if p.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: p.len(),
                });
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("population point coordinates"));
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("population objective values"));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidConfig(
                "population values must be sorted ascending".into(),
            ));
        }
        Ok(Self {
            points,
            values,
            evaluation_count,
        })
    }

    /// Number of points in the pool.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false: construction rejects empty pools.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Search-space dimension.
    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    /// The points, best first.
    pub fn points(&self) -> &[DVector<f64>] {
        &self.points
    }

    /// Objective values matching [`points`](Population::points), ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The best point.
    pub fn best(&self) -> &DVector<f64> {
        &self.points[0]
    }

    /// The best objective value.
    pub fn best_value(&self) -> f64 {
        self.values[0]
    }

    /// Mean objective value over the pool.
    pub fn mean_value(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Objective evaluations spent producing this pool, including
    /// initialization and any carried-over history.
    pub fn evaluation_count(&self) -> u64 {
        self.evaluation_count
    }
}

/// Evaluates `objective` at `x`, rejecting non-finite results with the
/// offending point attached.
pub(crate) fn eval_checked(objective: &dyn Objective, x: &DVector<f64>) -> Result<f64> {
    let value = objective.eval(x);
    if !value.is_finite() {
        return Err(Error::ObjectiveNotFinite {
            value,
            point: x.iter().copied().collect(),
        });
    }
    Ok(value)
}

/// Stable sort by value (ties keep insertion order, so surviving pool members
/// outrank equal-valued newcomers), then keep the best `keep`.
fn sort_and_truncate(
    mut entries: Vec<(DVector<f64>, f64)>,
    keep: usize,
) -> (Vec<DVector<f64>>, Vec<f64>) {
    entries.sort_by(|a, b| a.1.total_cmp(&b.1));
    entries.truncate(keep);
    entries.into_iter().unzip()
}

/// Draws `2N` uniform points in the box, evaluates them all, and keeps the
/// best `N` as the starting pool. The evaluation count starts at `2N`.
///
/// # Errors
///
/// Propagates config validation and non-finite objective values; on error no
/// partial population is returned.
pub fn initialize<R: Rng + ?Sized>(
    objective: &dyn Objective,
    config: &AsocConfig,
    rng: &mut R,
) -> Result<Population> {
    config.validate()?;
    let draws = 2 * config.pool_size;
    let domain = objective.domain();
    let mut entries = Vec::with_capacity(draws);
    for _ in 0..draws {
        let x = domain.sample_uniform(rng);
        let f = eval_checked(objective, &x)?;
        entries.push((x, f));
    }
    let (points, values) = sort_and_truncate(entries, config.pool_size);
    Ok(Population {
        points,
        values,
        evaluation_count: draws as u64,
    })
}

/// One iteration: fit the pair Gaussian, condition on the best point, draw
/// `N` candidates, clamp them into the box, evaluate, and keep the best `N`
/// of old and new.
///
/// When the conditional has collapsed and no covariance floor is configured,
/// no candidates are generated: the pool comes back unchanged and the record
/// is marked `degenerate_skip` with zero new evaluations. A positive
/// `cov_floor` is added to the candidate covariance every iteration, which
/// normally lifts a collapse; if the floor is so small that the distribution
/// stays collapsed anyway, the iteration is skipped the same way.
///
/// The returned record carries iteration index 0; loop drivers assign the
/// real index.
///
/// # Errors
///
/// Propagates evaluation errors and unrecoverable conditioning failures.
pub fn step<R: Rng + ?Sized>(
    pop: Population,
    objective: &dyn Objective,
    config: &AsocConfig,
    rng: &mut R,
) -> Result<(Population, IterationRecord)> {
    config.validate()?;
    if pop.dim() != objective.dim() {
        return Err(Error::DimensionMismatch {
            expected: objective.dim(),
            actual: pop.dim(),
        });
    }

    let model = fit_pair_moments(pop.points())?;
    let mut conditional = condition_on_best(&model, pop.best(), config.regularization)?;
    if config.cov_floor > 0.0 {
        conditional = conditional.with_covariance_floor(config.cov_floor)?;
    }
    if conditional.degenerate {
        let record = IterationRecord {
            iteration: 0,
            best_f: pop.best_value(),
            best_x: pop.best().clone(),
            pool_mean_f: pop.mean_value(),
            evaluations: pop.evaluation_count,
            degenerate_skip: true,
        };
        return Ok((pop, record));
    }

    let candidates = sample_mvn(&conditional, config.pool_size, rng)?;
    let domain = objective.domain();
    let evaluation_count = pop.evaluation_count + config.pool_size as u64;
    let keep = pop.len();
    let Population { points, values, .. } = pop;
    let mut entries: Vec<(DVector<f64>, f64)> = points.into_iter().zip(values).collect();
    for candidate in candidates {
        let clamped = domain.clamp(&candidate);
        let f = eval_checked(objective, &clamped)?;
        entries.push((clamped, f));
    }
    let (points, values) = sort_and_truncate(entries, keep);
    let next = Population {
        points,
        values,
        evaluation_count,
    };
    let record = IterationRecord {
        iteration: 0,
        best_f: next.best_value(),
        best_x: next.best().clone(),
        pool_mean_f: next.mean_value(),
        evaluations: next.evaluation_count,
        degenerate_skip: false,
    };
    Ok((next, record))
}

/// Full optimization with a run-owned random stream seeded from
/// `config.seed`.
///
/// Initializes the pool, then iterates [`step`] until the best value stops
/// improving (`Converged`), the iteration budget runs out (`MaxIters`), or
/// the distribution stays collapsed for a full patience window
/// (`DegenerateHalt`). With `early_stop` disabled only `MaxIters` can occur.
///
/// # Errors
///
/// As in [`initialize`] and [`step`].
pub fn run(objective: &dyn Objective, config: &AsocConfig) -> Result<(Population, RunTrace)> {
    let mut rng = RunRng::seed_from_u64(config.seed);
    run_with_rng(objective, config, &mut rng)
}

/// [`run`] with a caller-owned random stream; `config.seed` is ignored.
///
/// This is the entry point for workloads that thread one stream through
/// several runs (the adaptivity experiment does).
///
/// # Errors
///
/// As in [`run`].
pub fn run_with_rng<R: Rng + ?Sized>(
    objective: &dyn Objective,
    config: &AsocConfig,
    rng: &mut R,
) -> Result<(Population, RunTrace)> {
    let pop = initialize(objective, config, rng)?;
    drive_loop(pop, objective, config, rng, config.early_stop)
}

/// Resumes an existing pool under a (typically changed) objective.
///
/// Every carried point is clamped into the new objective's box and
/// re-evaluated (`N` evaluations), the pool is re-sorted, and the loop then
/// runs the full `max_iters` horizon — early stopping is disabled here
/// regardless of `config.early_stop`, because an adapted pool needs the whole
/// window to migrate. The candidate count per iteration follows the carried
/// pool's size, not `config.pool_size`.
///
/// Best-value monotonicity holds within the returned trace but not across
/// the switch: the re-evaluated pool usually starts worse than the old
/// objective's final best.
///
/// # Errors
///
/// Rejects a pool whose dimension differs from the new objective's;
/// propagates evaluation errors.
pub fn continue_with<R: Rng + ?Sized>(
    pop: Population,
    objective: &dyn Objective,
    config: &AsocConfig,
    rng: &mut R,
) -> Result<(Population, RunTrace)> {
    config.validate()?;
    if pop.dim() != objective.dim() {
        return Err(Error::DimensionMismatch {
            expected: objective.dim(),
            actual: pop.dim(),
        });
    }
    let domain = objective.domain();
    let evaluation_count = pop.evaluation_count + pop.len() as u64;
    let keep = pop.len();
    let mut entries = Vec::with_capacity(keep);
    for point in pop.points {
        let clamped = domain.clamp(&point);
        let f = eval_checked(objective, &clamped)?;
        entries.push((clamped, f));
    }
    let (points, values) = sort_and_truncate(entries, keep);
    let pop = Population {
        points,
        values,
        evaluation_count,
    };
    let segment_config = AsocConfig {
        pool_size: keep,
        ..config.clone()
    };
    drive_loop(pop, objective, &segment_config, rng, false)
}

/// Shared iteration driver. Records are numbered from 1; stopping checks run
/// in the order converged → degenerate halt → budget.
fn drive_loop<R: Rng + ?Sized>(
    mut pop: Population,
    objective: &dyn Objective,
    config: &AsocConfig,
    rng: &mut R,
    early_stop: bool,
) -> Result<(Population, RunTrace)> {
    let mut records: Vec<IterationRecord> = Vec::with_capacity(config.max_iters.min(4096));
    // best_history[k] is the best value after iteration k; entry 0 is the
    // starting pool, the baseline for the first patience window.
    let mut best_history = Vec::with_capacity(config.max_iters.min(4096) + 1);
    best_history.push(pop.best_value());
    let mut consecutive_skips = 0usize;
    let mut status = TerminationStatus::MaxIters;

    for iteration in 1..=config.max_iters {
        let (next, mut record) = step(pop, objective, config, rng)?;
        pop = next;
        record.iteration = iteration;
        if record.degenerate_skip {
            consecutive_skips += 1;
        } else {
            consecutive_skips = 0;
        }
        best_history.push(record.best_f);
        records.push(record);

        if early_stop {
            if iteration >= config.stop_patience {
                let improvement =
                    best_history[iteration - config.stop_patience] - best_history[iteration];
                if improvement < config.stop_tolerance {
                    status = TerminationStatus::Converged;
                    break;
                }
            }
            if consecutive_skips >= config.stop_patience {
                status = TerminationStatus::DegenerateHalt;
                break;
            }
        }
    }

    Ok((pop, RunTrace { records, status }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{BoxDomain, FnObjective};
    use nalgebra::DVector;

    fn sphere(dim: usize) -> FnObjective<impl Fn(&DVector<f64>) -> f64> {
        FnObjective::new(
            BoxDomain::cube(-5.12, 5.12, dim).unwrap(),
            |x: &DVector<f64>| x.norm_squared(),
        )
    }

    fn booth() -> FnObjective<impl Fn(&DVector<f64>) -> f64> {
        FnObjective::new(BoxDomain::cube(-10.0, 10.0, 2).unwrap(), |x: &DVector<f64>| {
            (x[0] + 2.0 * x[1] - 7.0).powi(2) + (2.0 * x[0] + x[1] - 5.0).powi(2)
        })
    }

    fn identical_pool(n_points: usize, value: f64) -> Population {
        let point = DVector::from_vec(vec![1.0, 2.0]);
        Population::from_sorted_parts(
            vec![point; n_points],
            vec![value; n_points],
            (2 * n_points) as u64,
        )
        .unwrap()
    }

    #[test]
    fn config_validation_rejects_bad_fields() {
        let ok = AsocConfig::default();
        assert!(ok.validate().is_ok());
        assert!(AsocConfig { pool_size: 1, ..ok.clone() }.validate().is_err());
        assert!(AsocConfig { max_iters: 0, ..ok.clone() }.validate().is_err());
        assert!(AsocConfig { stop_patience: 0, ..ok.clone() }.validate().is_err());
        assert!(AsocConfig { regularization: -1.0, ..ok.clone() }.validate().is_err());
        assert!(AsocConfig { cov_floor: f64::NAN, ..ok.clone() }.validate().is_err());
        assert!(AsocConfig { stop_tolerance: -1e-9, ..ok }.validate().is_err());
    }

    #[test]
    fn population_construction_enforces_invariants() {
        let p = |v: f64| DVector::from_vec(vec![v]);
        assert!(Population::from_sorted_parts(vec![], vec![], 0).is_err());
        assert!(Population::from_sorted_parts(vec![p(0.0)], vec![], 0).is_err());
        assert!(Population::from_sorted_parts(vec![p(0.0), p(1.0)], vec![2.0, 1.0], 0).is_err());
        assert!(
            Population::from_sorted_parts(vec![p(0.0), p(1.0)], vec![1.0, f64::NAN], 0).is_err()
        );
        let pop = Population::from_sorted_parts(vec![p(0.5), p(1.5)], vec![1.0, 1.0], 4).unwrap();
        assert_eq!(pop.len(), 2);
        assert_eq!(pop.best_value(), 1.0);
        assert_eq!(pop.evaluation_count(), 4);
    }

    #[test]
    fn initialization_draws_double_then_keeps_pool_size() {
        let objective = sphere(2);
        let config = AsocConfig::default();
        let mut rng = RunRng::seed_from_u64(3);
        let pop = initialize(&objective, &config, &mut rng).unwrap();
        assert_eq!(pop.len(), 30);
        assert_eq!(pop.evaluation_count(), 60);
        assert!(pop.values().windows(2).all(|w| w[0] <= w[1]));
        assert!(pop.points().iter().all(|p| objective.domain().contains(p)));

        let tiny = AsocConfig { pool_size: 2, ..AsocConfig::default() };
        let pop = initialize(&objective, &tiny, &mut rng).unwrap();
        assert_eq!(pop.len(), 2);
        assert_eq!(pop.evaluation_count(), 4);
    }

    #[test]
    fn initialization_propagates_non_finite_objective() {
        let objective = FnObjective::new(BoxDomain::cube(0.0, 1.0, 2).unwrap(), |_: &DVector<f64>| {
            f64::NAN
        });
        let mut rng = RunRng::seed_from_u64(0);
        let err = initialize(&objective, &AsocConfig::default(), &mut rng).unwrap_err();
        assert!(matches!(err, Error::ObjectiveNotFinite { .. }));
    }

    #[test]
    fn step_never_worsens_the_best_and_keeps_invariants() {
        let objective = booth();
        let config = AsocConfig::default();
        let mut rng = RunRng::seed_from_u64(11);
        let mut pop = initialize(&objective, &config, &mut rng).unwrap();
        for _ in 0..25 {
            let before_best = pop.best_value();
            let before_evals = pop.evaluation_count();
            let (next, record) = step(pop, &objective, &config, &mut rng).unwrap();
            pop = next;
            assert!(record.best_f <= before_best, "elitist merge must not regress");
            assert_eq!(pop.len(), 30);
            assert!(pop.values().windows(2).all(|w| w[0] <= w[1]));
            assert!(pop.points().iter().all(|p| objective.domain().contains(p)));
            if record.degenerate_skip {
                assert_eq!(pop.evaluation_count(), before_evals);
            } else {
                assert_eq!(pop.evaluation_count(), before_evals + 30);
            }
        }
    }

    #[test]
    fn step_skips_identical_pool_without_evaluations() {
        let pop = identical_pool(5, 7.0);
        let objective = FnObjective::new(BoxDomain::cube(-10.0, 10.0, 2).unwrap(), |_: &DVector<f64>| 7.0);
        let config = AsocConfig { pool_size: 5, cov_floor: 0.0, ..AsocConfig::default() };
        let mut rng = RunRng::seed_from_u64(1);
        let before = pop.clone();
        let (after, record) = step(pop, &objective, &config, &mut rng).unwrap();
        assert!(record.degenerate_skip);
        assert_eq!(after, before);
        assert_eq!(record.evaluations, before.evaluation_count());
    }

    #[test]
    fn covariance_floor_unfreezes_identical_pool() {
        let pop = identical_pool(5, 7.0);
        let objective = FnObjective::new(
            BoxDomain::cube(-10.0, 10.0, 2).unwrap(),
            |x: &DVector<f64>| x.norm_squared(),
        );
        let config = AsocConfig { pool_size: 5, cov_floor: 0.25, ..AsocConfig::default() };
        let mut rng = RunRng::seed_from_u64(1);
        let (after, record) = step(pop, &objective, &config, &mut rng).unwrap();
        assert!(!record.degenerate_skip);
        assert_eq!(after.evaluation_count(), 10 + 5);
    }

    #[test]
    fn candidates_outside_the_box_are_clamped_before_evaluation() {
        // minimum at (2, 2), outside [0, 1]²: progress requires evaluating
        // clamped candidates, and the pool must end up hugging the corner.
        let objective = FnObjective::new(BoxDomain::cube(0.0, 1.0, 2).unwrap(), |x: &DVector<f64>| {
            (x[0] - 2.0).powi(2) + (x[1] - 2.0).powi(2)
        });
        let config = AsocConfig { max_iters: 60, early_stop: false, seed: 21, ..AsocConfig::default() };
        let (pop, _) = run(&objective, &config).unwrap();
        assert!(pop.points().iter().all(|p| objective.domain().contains(p)));
        assert!(pop.best_value() - 2.0 < 0.05, "best {} should approach f(1,1) = 2", pop.best_value());
    }

    #[test]
    fn run_converges_on_small_sphere() {
        let objective = sphere(2);
        for seed in [1, 2, 3] {
            let config = AsocConfig { max_iters: 500, seed, ..AsocConfig::default() };
            let (pop, trace) = run(&objective, &config).unwrap();
            assert!(pop.best_value() <= 1e-3, "seed {seed}: {}", pop.best_value());
            assert_eq!(trace.final_best_f(), Some(pop.best_value()));
        }
    }

    #[test]
    fn run_with_budget_one_takes_exactly_one_step() {
        let config = AsocConfig { max_iters: 1, ..AsocConfig::default() };
        let (_, trace) = run(&sphere(2), &config).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(trace.records[0].iteration, 1);
        assert_eq!(trace.status, TerminationStatus::MaxIters);
    }

    #[test]
    fn run_on_constant_objective_stops_early() {
        let objective = FnObjective::new(BoxDomain::cube(-1.0, 1.0, 2).unwrap(), |_: &DVector<f64>| 7.0);
        let config = AsocConfig { seed: 5, ..AsocConfig::default() };
        let (pop, trace) = run(&objective, &config).unwrap();
        assert_eq!(pop.best_value(), 7.0);
        assert!(matches!(
            trace.status,
            TerminationStatus::Converged | TerminationStatus::DegenerateHalt
        ));
        assert!(trace.len() < 2000, "early stop must fire on a flat landscape");
    }

    #[test]
    fn degenerate_halt_fires_with_zero_tolerance() {
        // stop_tolerance = 0 makes the convergence check unsatisfiable
        // (improvement 0 < 0 is false), so a collapsed pool must exit through
        // the consecutive-skip halt instead.
        let config = AsocConfig {
            max_iters: 2000,
            stop_tolerance: 0.0,
            seed: 2,
            ..AsocConfig::default()
        };
        let (_, trace) = run(&sphere(2), &config).unwrap();
        assert_eq!(trace.status, TerminationStatus::DegenerateHalt);
        let tail: Vec<_> = trace.records.iter().rev().take(200).collect();
        assert_eq!(tail.len(), 200);
        assert!(tail.iter().all(|r| r.degenerate_skip));
        let evals_at_halt = trace.final_record().unwrap().evaluations;
        assert_eq!(evals_at_halt, tail.last().unwrap().evaluations);
    }

    #[test]
    fn disabling_early_stop_runs_the_full_horizon() {
        let config = AsocConfig {
            max_iters: 300,
            early_stop: false,
            seed: 9,
            ..AsocConfig::default()
        };
        let (_, trace) = run(&sphere(2), &config).unwrap();
        assert_eq!(trace.len(), 300);
        assert_eq!(trace.status, TerminationStatus::MaxIters);
        let indices: Vec<_> = trace.records.iter().map(|r| r.iteration).collect();
        assert_eq!(indices, (1..=300).collect::<Vec<_>>());
    }

    #[test]
    fn runs_are_seed_deterministic() {
        let config = AsocConfig { max_iters: 120, seed: 77, ..AsocConfig::default() };
        let (pop_a, trace_a) = run(&booth(), &config).unwrap();
        let (pop_b, trace_b) = run(&booth(), &config).unwrap();
        assert_eq!(pop_a, pop_b);
        assert_eq!(trace_a, trace_b);
    }

    #[test]
    fn budget_accounting_matches_skip_records() {
        let config = AsocConfig {
            max_iters: 400,
            early_stop: false,
            seed: 4,
            ..AsocConfig::default()
        };
        let (pop, trace) = run(&booth(), &config).unwrap();
        let productive = trace.records.iter().filter(|r| !r.degenerate_skip).count() as u64;
        assert_eq!(pop.evaluation_count(), 60 + 30 * productive);
    }

    #[test]
    fn continuation_rejects_dimension_mismatch() {
        let config = AsocConfig { max_iters: 10, ..AsocConfig::default() };
        let mut rng = RunRng::seed_from_u64(0);
        let pop = initialize(&sphere(3), &config, &mut rng).unwrap();
        let err = continue_with(pop, &sphere(2), &config, &mut rng).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 2, actual: 3 }));
    }

    #[test]
    fn continuation_reevaluates_clamps_and_recovers() {
        // converge on the sphere, then hand the collapsed pool to a shifted
        // objective with a different box; with an exploration floor it must
        // walk to the new minimizer.
        let config = AsocConfig { max_iters: 600, seed: 13, ..AsocConfig::default() };
        let (pool, _) = run(&sphere(2), &config).unwrap();
        assert!(pool.best_value() < 1e-6);
        let carried_evals = pool.evaluation_count();

        let segment = AsocConfig {
            max_iters: 2000,
            cov_floor: (0.08 * 20.0f64).powi(2) / 100.0, // (0.08 · mean width 20)² / …
            ..AsocConfig::default()
        };
        let mut rng = RunRng::seed_from_u64(99);
        let (pool, trace) = continue_with(pool, &booth(), &segment, &mut rng).unwrap();
        assert_eq!(trace.len(), 2000, "continuation never stops early");
        assert_eq!(trace.status, TerminationStatus::MaxIters);
        assert!(pool.evaluation_count() > carried_evals + 30);
        assert!(pool.best_value() < 0.1, "best {}", pool.best_value());
        let best = pool.best();
        let dist = ((best[0] - 1.0).powi(2) + (best[1] - 3.0).powi(2)).sqrt();
        assert!(dist < 0.1, "pool should reach the new minimizer, got {best}");
    }

    #[test]
    fn continuation_on_same_objective_is_a_no_op_for_the_best() {
        let config = AsocConfig { max_iters: 600, seed: 8, ..AsocConfig::default() };
        let (pool, _) = run(&sphere(2), &config).unwrap();
        let best_before = pool.best_value();
        let segment = AsocConfig { max_iters: 50, ..AsocConfig::default() };
        let mut rng = RunRng::seed_from_u64(1);
        let (pool, _) = continue_with(pool, &sphere(2), &segment, &mut rng).unwrap();
        assert!((pool.best_value() - best_before).abs() <= 1e-12);
    }

    #[test]
    fn record_best_matches_pool_and_is_monotone() {
        let config = AsocConfig {
            max_iters: 250,
            early_stop: false,
            seed: 123,
            ..AsocConfig::default()
        };
        let (pop, trace) = run(&booth(), &config).unwrap();
        for pair in trace.records.windows(2) {
            assert!(pair[1].best_f <= pair[0].best_f);
        }
        let last = trace.final_record().unwrap();
        assert_eq!(last.best_f, pop.best_value());
        assert_eq!(last.best_x, *pop.best());
        assert_eq!(last.evaluations, pop.evaluation_count());
    }
}

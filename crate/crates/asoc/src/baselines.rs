//! Baseline optimizers used for comparison: simulated annealing and a real
//! -coded genetic algorithm.
//!
//! Both consume the same [`Objective`] trait and produce the same
//! [`RunTrace`] shape as the pool optimizer, so the experiment harness can
//! read all three uniformly. Traces report best-so-far values, which are
//! non-increasing by construction.

use nalgebra::DVector;
use rand::{Rng, RngExt, SeedableRng};
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::E;

use crate::domain::Objective;
use crate::error::{Error, Result};
use crate::optimizer::eval_checked;
use crate::trace::{IterationRecord, RunTrace, TerminationStatus};
use crate::RunRng;

/// Blend range extension for crossover: each child coordinate is uniform on
/// the parents' interval widened by this fraction of its length on each side.
const BLX_ALPHA: f64 = 0.5;

/// The result of one baseline run: the incumbent and the per-iteration trace
/// (one record per temperature stage for annealing, one per generation for
/// the genetic algorithm).
#[derive(Clone, Debug)]
pub struct BaselineRun {
    pub best_x: DVector<f64>,
    pub best_f: f64,
    pub trace: RunTrace,
}

/// Simulated-annealing parameters.
///
/// The temperature at outer iteration `k` (1-based) is
/// `initial_temperature / ln(k + e)`, so the schedule always starts a bit
/// below the initial temperature and decays logarithmically across exactly
/// the configured horizon.
#[derive(Clone, Debug, PartialEq)]
pub struct SaConfig {
    /// Number of temperature stages; also the trace length.
    pub outer_iterations: usize,
    /// Metropolis proposals attempted at each temperature.
    pub samples_per_temperature: usize,
    pub initial_temperature: f64,
    /// Proposal standard deviation per coordinate, as a fraction of that
    /// coordinate's box width.
    pub neighbor_scale: f64,
    pub seed: u64,
}

impl Default for SaConfig {
    fn default() -> Self {
        Self {
            outer_iterations: 2000,
            samples_per_temperature: 50,
            initial_temperature: 10.0,
            neighbor_scale: 0.1,
            seed: 0,
        }
    }
}

impl SaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.outer_iterations == 0 || self.samples_per_temperature == 0 {
            return Err(Error::InvalidConfig(
                "annealing iteration counts must be positive".into(),
            ));
        }
        if !(self.initial_temperature.is_finite() && self.initial_temperature > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "initial_temperature must be a positive real, got {}",
                self.initial_temperature
            )));
        }
        if !(self.neighbor_scale.is_finite() && self.neighbor_scale > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "neighbor_scale must be a positive real, got {}",
                self.neighbor_scale
            )));
        }
        Ok(())
    }
}

/// Temperature at 1-based outer iteration `k`: `initial / ln(k + e)`.
pub fn sa_temperature(initial: f64, outer_iteration: usize) -> f64 {
    initial / (outer_iteration as f64 + E).ln()
}

/// The Metropolis rule: accept any non-worsening move, and a worsening one
/// with probability `exp(-delta_f / temperature)`. Improvements short-circuit
/// without consuming randomness.
pub fn metropolis_accept<R: Rng + ?Sized>(delta_f: f64, temperature: f64, rng: &mut R) -> bool {
    delta_f <= 0.0 || rng.random::<f64>() < (-delta_f / temperature).exp()
}

/// Simulated annealing over a box-constrained objective.
///
/// Starts from a uniform point, proposes Gaussian per-coordinate
/// perturbations clamped into the box, and applies the Metropolis rule at
/// each stage's temperature. The trace records the best-so-far value after
/// each stage; `pool_mean_f` carries the walker's current value, since there
/// is no pool. Total evaluations:
/// `1 + outer_iterations · samples_per_temperature`.
///
/// # Errors
///
/// Propagates config validation and non-finite objective values.
pub fn sa_run(objective: &dyn Objective, config: &SaConfig) -> Result<BaselineRun> {
    config.validate()?;
    let mut rng = RunRng::seed_from_u64(config.seed);
    let domain = objective.domain();
    let dim = domain.dim();

    let mut current = domain.sample_uniform(&mut rng);
    let mut current_f = eval_checked(objective, &current)?;
    let mut best = current.clone();
    let mut best_f = current_f;
    let mut evaluations: u64 = 1;
    let mut records = Vec::with_capacity(config.outer_iterations);

    for stage in 1..=config.outer_iterations {
        let temperature = sa_temperature(config.initial_temperature, stage);
        for _ in 0..config.samples_per_temperature {
            let mut proposal = DVector::zeros(dim);
            for i in 0..dim {
                let z: f64 = StandardNormal.sample(&mut rng);
                proposal[i] = current[i] + config.neighbor_scale * domain.width(i) * z;
            }
            let proposal = domain.clamp(&proposal);
            let f = eval_checked(objective, &proposal)?;
            evaluations += 1;
            if metropolis_accept(f - current_f, temperature, &mut rng) {
                current = proposal;
                current_f = f;
                if current_f < best_f {
                    best_f = current_f;
                    best = current.clone();
                }
            }
        }
        records.push(IterationRecord {
            iteration: stage,
            best_f,
            best_x: best.clone(),
            pool_mean_f: current_f,
            evaluations,
            degenerate_skip: false,
        });
    }

    Ok(BaselineRun {
        best_x: best,
        best_f,
        trace: RunTrace {
            records,
            status: TerminationStatus::MaxIters,
        },
    })
}

/// Genetic-algorithm parameters: binary tournament selection, blend
/// crossover, Gaussian mutation, and unconditional single-elitism.
#[derive(Clone, Debug, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    /// Number of generations; also the trace length.
    pub generations: usize,
    /// Probability a child comes from blend crossover of two tournament
    /// winners rather than a copy of one.
    pub crossover_probability: f64,
    /// Per-coordinate probability of Gaussian mutation.
    pub mutation_probability: f64,
    /// Mutation standard deviation per coordinate, as a fraction of that
    /// coordinate's box width.
    pub mutation_scale: f64,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 30,
            generations: 2000,
            crossover_probability: 0.9,
            mutation_probability: 0.05,
            mutation_scale: 0.1,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::InvalidConfig(format!(
                "population_size must be at least 2, got {}",
                self.population_size
            )));
        }
        if self.generations == 0 {
            return Err(Error::InvalidConfig("generations must be positive".into()));
        }
        for (name, p) in [
            ("crossover_probability", self.crossover_probability),
            ("mutation_probability", self.mutation_probability),
        ] {
            if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must lie in [0, 1], got {p}"
                )));
            }
        }
        if !(self.mutation_scale.is_finite() && self.mutation_scale > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "mutation_scale must be a positive real, got {}",
                self.mutation_scale
            )));
        }
        Ok(())
    }
}

/// Binary tournament: two uniform draws (with replacement), lower value wins;
/// the first draw wins ties.
fn tournament<R: Rng + ?Sized>(values: &[f64], rng: &mut R) -> usize {
    let a = rng.random_range(0..values.len());
    let b = rng.random_range(0..values.len());
    if values[b] < values[a] { b } else { a }
}

/// Real-coded genetic algorithm.
///
/// Each generation produces `population_size` children (tournament parents,
/// blend crossover with probability `crossover_probability`, per-coordinate
/// Gaussian mutation, clamped into the box, one evaluation each); the worst
/// child is then replaced by the previous generation's best individual,
/// unconditionally. That keeps the budget at exactly `population_size`
/// evaluations per generation and makes the population best non-increasing.
///
/// # Errors
///
/// Propagates config validation and non-finite objective values.
pub fn ga_run(objective: &dyn Objective, config: &GaConfig) -> Result<BaselineRun> {
    config.validate()?;
    let mut rng = RunRng::seed_from_u64(config.seed);
    let domain = objective.domain();
    let dim = domain.dim();
    let pop_size = config.population_size;

    let mut population: Vec<DVector<f64>> = Vec::with_capacity(pop_size);
    let mut values: Vec<f64> = Vec::with_capacity(pop_size);
    for _ in 0..pop_size {
        let x = domain.sample_uniform(&mut rng);
        let f = eval_checked(objective, &x)?;
        population.push(x);
        values.push(f);
    }
    let mut evaluations = pop_size as u64;

    let best_of = |values: &[f64]| -> usize {
        let mut best = 0;
        for (i, v) in values.iter().enumerate() {
            if *v < values[best] {
                best = i;
            }
        }
        best
    };
    let mut elite_index = best_of(&values);
    let mut elite = population[elite_index].clone();
    let mut elite_f = values[elite_index];

    let mut records = Vec::with_capacity(config.generations);
    for generation in 1..=config.generations {
        let mut children: Vec<DVector<f64>> = Vec::with_capacity(pop_size);
        let mut child_values: Vec<f64> = Vec::with_capacity(pop_size);
        for _ in 0..pop_size {
            let first = tournament(&values, &mut rng);
            let mut child = if rng.random::<f64>() < config.crossover_probability {
                let second = tournament(&values, &mut rng);
                blend(&population[first], &population[second], &mut rng)
            } else {
                population[first].clone()
            };
            for i in 0..dim {
                if rng.random::<f64>() < config.mutation_probability {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    child[i] += config.mutation_scale * domain.width(i) * z;
                }
            }
            let child = domain.clamp(&child);
            let f = eval_checked(objective, &child)?;
            evaluations += 1;
            children.push(child);
            child_values.push(f);
        }

        let mut worst = 0;
        for (i, v) in child_values.iter().enumerate() {
            if *v > child_values[worst] {
                worst = i;
            }
        }
        children[worst] = elite.clone();
        child_values[worst] = elite_f;

        population = children;
        values = child_values;
        elite_index = best_of(&values);
        elite = population[elite_index].clone();
        elite_f = values[elite_index];

        records.push(IterationRecord {
            iteration: generation,
            best_f: elite_f,
            best_x: elite.clone(),
            pool_mean_f: values.iter().sum::<f64>() / pop_size as f64,
            evaluations,
            degenerate_skip: false,
        });
    }

    Ok(BaselineRun {
        best_x: elite,
        best_f: elite_f,
        trace: RunTrace {
            records,
            status: TerminationStatus::MaxIters,
        },
    })
}

/// Blend crossover: each coordinate uniform on the parents' interval widened
/// by [`BLX_ALPHA`] times its length on both sides. One uniform draw per
/// coordinate, including degenerate zero-length intervals.
fn blend<R: Rng + ?Sized>(a: &DVector<f64>, b: &DVector<f64>, rng: &mut R) -> DVector<f64> {
    DVector::from_fn(a.len(), |i, _| {
        let lo = a[i].min(b[i]);
        let span = (a[i] - b[i]).abs();
        let start = lo - BLX_ALPHA * span;
        let width = (1.0 + 2.0 * BLX_ALPHA) * span;
        start + rng.random::<f64>() * width
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{BoxDomain, FnObjective};

    fn booth() -> FnObjective<impl Fn(&DVector<f64>) -> f64> {
        FnObjective::new(BoxDomain::cube(-10.0, 10.0, 2).unwrap(), |x: &DVector<f64>| {
            (x[0] + 2.0 * x[1] - 7.0).powi(2) + (2.0 * x[0] + x[1] - 5.0).powi(2)
        })
    }

    fn sphere(dim: usize) -> FnObjective<impl Fn(&DVector<f64>) -> f64> {
        FnObjective::new(
            BoxDomain::cube(-5.12, 5.12, dim).unwrap(),
            |x: &DVector<f64>| x.norm_squared(),
        )
    }

    #[test]
    fn temperature_schedule_decays_from_below_the_initial_value() {
        let t1 = sa_temperature(10.0, 1);
        assert!((t1 - 7.614629).abs() < 1e-5, "T(1) = {t1}");
        assert!(t1 < 10.0);
        let mut previous = f64::INFINITY;
        for k in 1..=500 {
            let t = sa_temperature(10.0, k);
            assert!(t > 0.0 && t < previous);
            previous = t;
        }
        assert!(sa_temperature(10.0, 2000) < 1.316);
    }

    #[test]
    fn metropolis_accepts_every_improvement_and_tie() {
        let mut rng = RunRng::seed_from_u64(0);
        for delta in [-10.0, -1e-9, 0.0] {
            for _ in 0..100 {
                assert!(metropolis_accept(delta, 1e-9, &mut rng));
            }
        }
    }

    #[test]
    fn metropolis_acceptance_frequency_matches_the_boltzmann_factor() {
        let mut rng = RunRng::seed_from_u64(42);
        let trials = 10_000;
        let accepted = (0..trials)
            .filter(|_| metropolis_accept(1.0, 2.0, &mut rng))
            .count();
        let frequency = accepted as f64 / trials as f64;
        let expected = (-0.5f64).exp();
        assert!(
            (frequency - expected).abs() < 0.02,
            "acceptance frequency {frequency} vs expected {expected}"
        );
    }

    #[test]
    fn annealing_budget_and_trace_shape() {
        let config = SaConfig {
            outer_iterations: 40,
            samples_per_temperature: 7,
            seed: 3,
            ..SaConfig::default()
        };
        let run = sa_run(&booth(), &config).unwrap();
        assert_eq!(run.trace.len(), 40);
        let last = run.trace.final_record().unwrap();
        assert_eq!(last.evaluations, 1 + 40 * 7);
        assert_eq!(last.best_f, run.best_f);
        assert!(run.trace.records.windows(2).all(|w| w[1].best_f <= w[0].best_f));
        assert!(booth().domain().contains(&run.best_x));
    }

    #[test]
    fn greedy_annealing_never_accepts_a_worse_point() {
        // At a vanishing temperature the walker's own value must be
        // non-increasing, not just the best-so-far.
        let config = SaConfig {
            outer_iterations: 200,
            initial_temperature: 1e-12,
            seed: 11,
            ..SaConfig::default()
        };
        let run = sa_run(&sphere(2), &config).unwrap();
        assert!(run
            .trace
            .records
            .windows(2)
            .all(|w| w[1].pool_mean_f <= w[0].pool_mean_f));
    }

    #[test]
    fn annealing_on_a_constant_objective_accepts_everything() {
        let flat = FnObjective::new(BoxDomain::cube(-1.0, 1.0, 2).unwrap(), |_: &DVector<f64>| 3.0);
        let run = sa_run(&flat, &SaConfig { outer_iterations: 10, ..SaConfig::default() }).unwrap();
        assert_eq!(run.best_f, 3.0);
        assert!(run.trace.records.iter().all(|r| r.best_f == 3.0));
    }

    #[test]
    fn annealing_is_seed_deterministic() {
        let config = SaConfig { outer_iterations: 100, seed: 9, ..SaConfig::default() };
        let a = sa_run(&booth(), &config).unwrap();
        let b = sa_run(&booth(), &config).unwrap();
        assert_eq!(a.best_x, b.best_x);
        assert_eq!(a.trace, b.trace);
    }

    #[test]
    fn annealing_solves_booth_across_seeds() {
        let mut finals = Vec::new();
        for seed in 0..20 {
            let config = SaConfig { seed, ..SaConfig::default() };
            finals.push(sa_run(&booth(), &config).unwrap().best_f);
        }
        finals.sort_by(f64::total_cmp);
        let median = 0.5 * (finals[9] + finals[10]);
        assert!(median <= 0.05, "booth median {median}");
    }

    #[test]
    fn ga_config_validation() {
        let ok = GaConfig::default();
        assert!(ok.validate().is_ok());
        assert!(GaConfig { population_size: 1, ..ok.clone() }.validate().is_err());
        assert!(GaConfig { generations: 0, ..ok.clone() }.validate().is_err());
        assert!(GaConfig { crossover_probability: 1.5, ..ok.clone() }.validate().is_err());
        assert!(GaConfig { mutation_probability: -0.1, ..ok.clone() }.validate().is_err());
        assert!(GaConfig { mutation_scale: 0.0, ..ok }.validate().is_err());
        assert!(SaConfig { initial_temperature: 0.0, ..SaConfig::default() }.validate().is_err());
    }

    #[test]
    fn ga_budget_elitism_and_containment() {
        let config = GaConfig {
            population_size: 12,
            generations: 80,
            seed: 5,
            ..GaConfig::default()
        };
        let run = ga_run(&booth(), &config).unwrap();
        assert_eq!(run.trace.len(), 80);
        let last = run.trace.final_record().unwrap();
        assert_eq!(last.evaluations, 12 * (80 + 1));
        assert!(run.trace.records.windows(2).all(|w| w[1].best_f <= w[0].best_f));
        assert!(booth().domain().contains(&run.best_x));
        assert!(run.trace.records.iter().all(|r| booth().domain().contains(&r.best_x)));
    }

    #[test]
    fn ga_without_crossover_or_mutation_still_preserves_the_elite() {
        let config = GaConfig {
            crossover_probability: 0.0,
            mutation_probability: 0.0,
            generations: 30,
            seed: 2,
            ..GaConfig::default()
        };
        let run = ga_run(&sphere(2), &config).unwrap();
        let first = run.trace.records.first().unwrap().best_f;
        assert_eq!(run.best_f, first, "pure selection cannot lose or improve the elite");
    }

    #[test]
    fn ga_is_seed_deterministic() {
        let config = GaConfig { generations: 60, seed: 31, ..GaConfig::default() };
        let a = ga_run(&booth(), &config).unwrap();
        let b = ga_run(&booth(), &config).unwrap();
        assert_eq!(a.best_x, b.best_x);
        assert_eq!(a.trace, b.trace);
    }

    #[test]
    fn ga_finds_the_goldstein_price_basin() {
        let objective = FnObjective::new(BoxDomain::cube(-2.0, 2.0, 2).unwrap(), |x: &DVector<f64>| {
            let (a, b) = (x[0], x[1]);
            let first = 1.0
                + (a + b + 1.0).powi(2)
                    * (19.0 - 14.0 * a + 3.0 * a * a - 14.0 * b + 6.0 * a * b + 3.0 * b * b);
            let second = 30.0
                + (2.0 * a - 3.0 * b).powi(2)
                    * (18.0 - 32.0 * a + 12.0 * a * a + 48.0 * b - 36.0 * a * b + 27.0 * b * b);
            first * second
        });
        let mut finals = Vec::new();
        for seed in 0..20 {
            let config = GaConfig { seed, ..GaConfig::default() };
            finals.push(ga_run(&objective, &config).unwrap().best_f);
        }
        finals.sort_by(f64::total_cmp);
        let median = 0.5 * (finals[9] + finals[10]);
        assert!(median <= 3.01, "goldstein-price median {median}");
    }

    #[test]
    fn ga_solves_the_ten_dimensional_sphere() {
        let objective = sphere(10);
        let mut finals = Vec::new();
        for seed in 0..20 {
            let config = GaConfig { generations: 500, seed, ..GaConfig::default() };
            finals.push(ga_run(&objective, &config).unwrap().best_f);
        }
        finals.sort_by(f64::total_cmp);
        let median = 0.5 * (finals[9] + finals[10]);
        assert!(median <= 0.05, "sphere n=10 median {median}");
    }
}

//! Experiment harness: multi-seed method comparisons over the benchmark
//! catalog, the objective-switching adaptivity experiment, and their report
//! serializations (JSON, aligned text table, CSV traces).
//!
//! Reports are deterministic functions of the experiment description: cells
//! run in parallel but are assembled in declaration order, seeds derive from
//! the master seed via a fixed expansion, and wall time stays out of the
//! serialized form, so identical descriptions serialize byte-identically.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;
use std::time::{Duration, Instant};

use crate::baselines::{ga_run, sa_run, GaConfig, SaConfig};
use crate::benchmarks::{BenchmarkFunction, BenchmarkId};
use crate::domain::{BoxDomain, Objective};
use crate::error::{Error, Result};
use crate::optimizer::{continue_with, run_with_rng, AsocConfig, Population};
use crate::trace::{RunTrace, TerminationStatus};
use crate::RunRng;
use rand::SeedableRng;

/// Iteration counts at which the comparison experiment reads best-so-far
/// values.
pub const DEFAULT_CHECKPOINTS: [usize; 3] = [100, 500, 2000];

/// Seeds per (function, method) cell in the full comparison.
pub const DEFAULT_SEED_COUNT: usize = 20;

/// Exploration-floor scale for the adaptivity experiment: each segment adds
/// `(ADAPTIVITY_FLOOR_SCALE · mean box width)²` to the candidate covariance,
/// keeping a carried pool alive after it has collapsed onto the previous
/// objective's optimum.
pub const ADAPTIVITY_FLOOR_SCALE: f64 = 0.08;

/// One of the three optimizers under comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Asoc,
    Sa,
    Ga,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Asoc, Method::Sa, Method::Ga];

    pub fn name(self) -> &'static str {
        match self {
            Method::Asoc => "asoc",
            Method::Sa => "sa",
            Method::Ga => "ga",
        }
    }

    /// Case-insensitive name lookup.
    pub fn from_name(raw: &str) -> Option<Self> {
        let key = raw.trim().to_ascii_lowercase();
        Self::ALL.iter().copied().find(|m| m.name() == key)
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Everything a comparison run needs: which functions, which methods, where
/// to read values, how many seeds, and the per-method base configurations
/// (horizon fields are overridden per checkpoint as needed).
#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub functions: Vec<BenchmarkFunction>,
    pub methods: Vec<Method>,
    /// Strictly increasing, 1-based iteration counts.
    pub checkpoints: Vec<usize>,
    pub seed_count: usize,
    pub master_seed: u64,
    pub asoc: AsocConfig,
    pub sa: SaConfig,
    pub ga: GaConfig,
}

impl ExperimentSpec {
    /// The full comparison: all 18 catalog entries, all three methods,
    /// default checkpoints, 20 seeds.
    pub fn full_suite(master_seed: u64) -> Self {
        Self {
            functions: crate::benchmarks::catalog(),
            methods: Method::ALL.to_vec(),
            checkpoints: DEFAULT_CHECKPOINTS.to_vec(),
            seed_count: DEFAULT_SEED_COUNT,
            master_seed,
            asoc: AsocConfig::default(),
            sa: SaConfig::default(),
            ga: GaConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.checkpoints.is_empty() {
            return Err(Error::InvalidConfig("checkpoints must not be empty".into()));
        }
        if self.checkpoints[0] == 0 {
            return Err(Error::InvalidConfig("checkpoints are 1-based".into()));
        }
        if self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "checkpoints must be strictly increasing".into(),
            ));
        }
        if self.seed_count == 0 {
            return Err(Error::InvalidConfig("seed_count must be positive".into()));
        }
        self.asoc.validate()?;
        self.sa.validate()?;
        self.ga.validate()?;
        Ok(())
    }
}

/// Expands a master seed into `count` per-run seeds with the SplitMix64
/// sequence, which is stable across platforms and releases.
pub fn derive_seeds(master: u64, count: usize) -> Vec<u64> {
    let mut state = master;
    (0..count)
        .map(|_| {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^ (z >> 31)
        })
        .collect()
}

/// Order statistics of one cell's per-seed values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CellStats {
    pub median: f64,
    pub min: f64,
    pub max: f64,
    pub iqr: f64,
}

impl CellStats {
    /// Computes stats over the values, or `None` when the slice is empty.
    pub fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Some(Self {
            median: quantile(&sorted, 0.5),
            min: sorted[0],
            max: sorted[sorted.len() - 1],
            iqr: quantile(&sorted, 0.75) - quantile(&sorted, 0.25),
        })
    }
}

/// Linear-interpolation quantile of pre-sorted values, `q` in [0, 1].
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let position = (sorted.len() - 1) as f64 * q;
    let low = position.floor() as usize;
    let high = position.ceil() as usize;
    let fraction = position - low as f64;
    sorted[low] + fraction * (sorted[high] - sorted[low])
}

/// One function under test, as recorded in the report.
#[derive(Clone, Debug, Serialize)]
pub struct FunctionInfo {
    pub index: usize,
    pub name: String,
    pub dim: usize,
    pub known_minimum: f64,
}

/// One seed's outcome within a (function, method) group. A missing
/// checkpoint value means that run (or, for annealing, that horizon's
/// independent run) failed; the error text is kept alongside.
#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub seed: u64,
    pub status: Option<TerminationStatus>,
    pub checkpoint_values: Vec<Option<f64>>,
    pub final_best_f: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Per-checkpoint aggregate within a group; `stats` is present only when
/// every seed produced a value, so statistics always cover the full seed set.
#[derive(Clone, Debug, Serialize)]
pub struct CellSummary {
    pub checkpoint: usize,
    pub stats: Option<CellStats>,
    pub failures: usize,
}

/// All runs of one method on one function.
#[derive(Clone, Debug, Serialize)]
pub struct MethodGroup {
    pub function: String,
    pub function_index: usize,
    pub dim: usize,
    pub method: Method,
    pub runs: Vec<RunSummary>,
    pub cells: Vec<CellSummary>,
}

/// The comparison experiment's result. Serializes deterministically;
/// wall time is kept in memory only.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub master_seed: u64,
    pub checkpoints: Vec<usize>,
    pub seeds: Vec<u64>,
    pub functions: Vec<FunctionInfo>,
    pub methods: Vec<Method>,
    pub groups: Vec<MethodGroup>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl ExperimentReport {
    /// Pretty JSON with a trailing newline.
    ///
    /// # Errors
    ///
    /// Serialization errors only (practically unreachable).
    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::InvalidConfig(format!("report serialization failed: {e}")))?;
        text.push('\n');
        Ok(text)
    }

    /// True when no cell anywhere produced statistics — the whole experiment
    /// failed.
    pub fn all_cells_failed(&self) -> bool {
        let mut any_cell = false;
        for group in &self.groups {
            for cell in &group.cells {
                any_cell = true;
                if cell.stats.is_some() {
                    return false;
                }
            }
        }
        any_cell
    }
}

/// What one parallel task produced: best-so-far values at the checkpoints it
/// is responsible for.
struct TaskOutcome {
    function_index: usize,
    method: Method,
    seed_index: usize,
    /// Checkpoint position → value; whole-run tasks fill all positions, the
    /// per-checkpoint annealing tasks fill one.
    values: Vec<(usize, f64)>,
    status: Option<TerminationStatus>,
    final_best_f: Option<f64>,
    error: Option<String>,
}

struct Task {
    function_index: usize,
    method: Method,
    seed_index: usize,
    seed: u64,
    /// For annealing: which checkpoint position this independent run serves.
    checkpoint_position: Option<usize>,
}

/// Runs the full (function × method × seed) grid and aggregates order
/// statistics per cell.
///
/// The pool optimizer and the genetic algorithm run once per seed to the
/// final checkpoint with early stopping disabled, and intermediate
/// checkpoints are read off the trace. Annealing's temperature schedule is
/// compressed into its configured horizon, so an annealing run at a longer
/// horizon is not an extension of a shorter one: it runs once per
/// (seed, checkpoint) instead.
///
/// Tasks execute in parallel; the report does not depend on thread count or
/// scheduling.
///
/// # Errors
///
/// Invalid experiment descriptions only. Individual run failures are
/// recorded in the report (`ERR` cells), not propagated.
pub fn run_comparison(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    let start = Instant::now();
    let seeds = derive_seeds(spec.master_seed, spec.seed_count);
    let final_checkpoint = *spec.checkpoints.last().expect("validated nonempty");

    let mut tasks = Vec::new();
    for function_index in 0..spec.functions.len() {
        for &method in &spec.methods {
            for (seed_index, &seed) in seeds.iter().enumerate() {
                match method {
                    Method::Asoc | Method::Ga => tasks.push(Task {
                        function_index,
                        method,
                        seed_index,
                        seed,
                        checkpoint_position: None,
                    }),
                    Method::Sa => {
                        for position in 0..spec.checkpoints.len() {
                            tasks.push(Task {
                                function_index,
                                method,
                                seed_index,
                                seed,
                                checkpoint_position: Some(position),
                            });
                        }
                    }
                }
            }
        }
    }

    let outcomes: Vec<TaskOutcome> = tasks
        .par_iter()
        .map(|task| execute_task(spec, task, final_checkpoint))
        .collect();

    let mut groups = Vec::with_capacity(spec.functions.len() * spec.methods.len());
    for (function_index, function) in spec.functions.iter().enumerate() {
        for &method in &spec.methods {
            let mut runs: Vec<RunSummary> = seeds
                .iter()
                .map(|&seed| RunSummary {
                    seed,
                    status: None,
                    checkpoint_values: vec![None; spec.checkpoints.len()],
                    final_best_f: None,
                    error: None,
                })
                .collect();
            for outcome in outcomes
                .iter()
                .filter(|o| o.function_index == function_index && o.method == method)
            {
                let summary = &mut runs[outcome.seed_index];
                for &(position, value) in &outcome.values {
                    summary.checkpoint_values[position] = Some(value);
                }
                if outcome.status.is_some() {
                    summary.status = outcome.status;
                }
                if outcome.final_best_f.is_some() {
                    summary.final_best_f = outcome.final_best_f;
                }
                if let Some(error) = &outcome.error {
                    summary.error = Some(match summary.error.take() {
                        Some(existing) => format!("{existing}; {error}"),
                        None => error.clone(),
                    });
                }
            }

            let cells = spec
                .checkpoints
                .iter()
                .enumerate()
                .map(|(position, &checkpoint)| {
                    let values: Vec<f64> = runs
                        .iter()
                        .filter_map(|r| r.checkpoint_values[position])
                        .collect();
                    let failures = runs.len() - values.len();
                    CellSummary {
                        checkpoint,
                        stats: if failures == 0 {
                            CellStats::from_values(&values)
                        } else {
                            None
                        },
                        failures,
                    }
                })
                .collect();

            groups.push(MethodGroup {
                function: function.name().to_string(),
                function_index: function.index(),
                dim: function.dim(),
                method,
                runs,
                cells,
            });
        }
    }

    Ok(ExperimentReport {
        master_seed: spec.master_seed,
        checkpoints: spec.checkpoints.clone(),
        seeds,
        functions: spec
            .functions
            .iter()
            .map(|f| FunctionInfo {
                index: f.index(),
                name: f.name().to_string(),
                dim: f.dim(),
                known_minimum: f.minima().value,
            })
            .collect(),
        methods: spec.methods.clone(),
        groups,
        wall_time: start.elapsed(),
    })
}

fn execute_task(spec: &ExperimentSpec, task: &Task, final_checkpoint: usize) -> TaskOutcome {
    let function = &spec.functions[task.function_index];
    let mut outcome = TaskOutcome {
        function_index: task.function_index,
        method: task.method,
        seed_index: task.seed_index,
        values: Vec::new(),
        status: None,
        final_best_f: None,
        error: None,
    };

    let read_checkpoints = |trace: &RunTrace, outcome: &mut TaskOutcome| {
        for (position, &checkpoint) in spec.checkpoints.iter().enumerate() {
            match trace.record_at(checkpoint) {
                Some(record) => outcome.values.push((position, record.best_f)),
                None => {
                    outcome.error = Some(format!("trace has no record at {checkpoint}"));
                }
            }
        }
    };

    match task.method {
        Method::Asoc => {
            let config = AsocConfig {
                seed: task.seed,
                max_iters: final_checkpoint,
                early_stop: false,
                ..spec.asoc.clone()
            };
            let mut rng = RunRng::seed_from_u64(task.seed);
            match run_with_rng(function, &config, &mut rng) {
                Ok((pop, trace)) => {
                    read_checkpoints(&trace, &mut outcome);
                    outcome.status = Some(trace.status);
                    outcome.final_best_f = Some(pop.best_value());
                }
                Err(e) => outcome.error = Some(e.to_string()),
            }
        }
        Method::Ga => {
            let config = GaConfig {
                seed: task.seed,
                generations: final_checkpoint,
                ..spec.ga.clone()
            };
            match ga_run(function, &config) {
                Ok(result) => {
                    read_checkpoints(&result.trace, &mut outcome);
                    outcome.status = Some(result.trace.status);
                    outcome.final_best_f = Some(result.best_f);
                }
                Err(e) => outcome.error = Some(e.to_string()),
            }
        }
        Method::Sa => {
            let position = task.checkpoint_position.expect("annealing tasks carry one");
            let checkpoint = spec.checkpoints[position];
            let config = SaConfig {
                seed: task.seed,
                outer_iterations: checkpoint,
                ..spec.sa.clone()
            };
            match sa_run(function, &config) {
                Ok(result) => {
                    outcome.values.push((position, result.best_f));
                    if checkpoint == final_checkpoint {
                        outcome.status = Some(result.trace.status);
                        outcome.final_best_f = Some(result.best_f);
                    }
                }
                Err(e) => outcome.error = Some(e.to_string()),
            }
        }
    }
    outcome
}

/// One leg of the adaptivity experiment: the optimizer's trace on one
/// objective, with the pool carried in from the previous leg.
#[derive(Clone, Debug)]
pub struct SegmentTrace {
    /// 1-based position in the switching sequence.
    pub segment_index: usize,
    /// Catalog index of the objective this segment optimizes.
    pub function_index: usize,
    pub function: String,
    pub dim: usize,
    pub trace: RunTrace,
    pub final_best_f: f64,
    pub final_best_x: DVector<f64>,
}

/// The full objective-switching run.
#[derive(Clone, Debug)]
pub struct AdaptivityRun {
    pub master_seed: u64,
    pub iterations_per_segment: usize,
    pub segments: Vec<SegmentTrace>,
}

/// Exploration floor used for a segment over `domain`.
pub fn adaptive_cov_floor(domain: &BoxDomain) -> f64 {
    (ADAPTIVITY_FLOOR_SCALE * domain.mean_width()).powi(2)
}

/// Runs the objective-switching experiment: catalog entries 2 through 18,
/// each at dimension 2, optimized in sequence for `iterations_per_segment`
/// iterations with the pool carried across every switch (clamped into the
/// new box and re-evaluated — never reinitialized). One random stream is
/// threaded through all segments; early stopping is off throughout; each
/// segment applies the [`adaptive_cov_floor`] of its own domain so a
/// collapsed pool can migrate.
///
/// # Errors
///
/// Propagates optimizer errors; all segment configurations are valid by
/// construction.
pub fn run_adaptivity(master_seed: u64, iterations_per_segment: usize) -> Result<AdaptivityRun> {
    if iterations_per_segment == 0 {
        return Err(Error::InvalidConfig(
            "iterations_per_segment must be positive".into(),
        ));
    }
    let mut rng = RunRng::seed_from_u64(master_seed);
    let mut segments = Vec::with_capacity(BenchmarkId::ALL.len() - 1);
    let mut carried: Option<Population> = None;

    for (position, &id) in BenchmarkId::ALL[1..].iter().enumerate() {
        let function = BenchmarkFunction::new(id, Some(2))?;
        let config = AsocConfig {
            max_iters: iterations_per_segment,
            cov_floor: adaptive_cov_floor(function.domain()),
            early_stop: false,
            seed: master_seed,
            ..AsocConfig::default()
        };
        let (pool, trace) = match carried.take() {
            None => run_with_rng(&function, &config, &mut rng)?,
            Some(pool) => continue_with(pool, &function, &config, &mut rng)?,
        };
        segments.push(SegmentTrace {
            segment_index: position + 1,
            function_index: id.index(),
            function: id.name().to_string(),
            dim: function.dim(),
            final_best_f: pool.best_value(),
            final_best_x: pool.best().clone(),
            trace,
        });
        carried = Some(pool);
    }

    Ok(AdaptivityRun {
        master_seed,
        iterations_per_segment,
        segments,
    })
}

const TRACE_CSV_HEADER: [&str; 5] = [
    "iteration",
    "best_f",
    "pool_mean_f",
    "evaluations",
    "segment_index",
];

fn write_records_csv<W: std::io::Write>(
    writer: &mut csv::Writer<W>,
    trace: &RunTrace,
    iteration_offset: usize,
    segment_index: usize,
) -> Result<()> {
    for record in &trace.records {
        writer.write_record([
            (iteration_offset + record.iteration).to_string(),
            record.best_f.to_string(),
            record.pool_mean_f.to_string(),
            record.evaluations.to_string(),
            segment_index.to_string(),
        ])?;
    }
    Ok(())
}

/// Writes a single run's trace as CSV (header plus one row per iteration;
/// the segment column is constant 1).
///
/// # Errors
///
/// I/O errors from the sink.
pub fn write_trace_csv<W: std::io::Write>(trace: &RunTrace, out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(TRACE_CSV_HEADER)?;
    write_records_csv(&mut writer, trace, 0, 1)?;
    writer.flush()?;
    Ok(())
}

/// Writes the adaptivity run as one CSV: segments concatenated in order,
/// the iteration column numbered cumulatively across the whole run, and the
/// segment column marking the boundaries.
///
/// # Errors
///
/// I/O errors from the sink.
pub fn write_adaptivity_csv<W: std::io::Write>(run: &AdaptivityRun, out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(TRACE_CSV_HEADER)?;
    let mut offset = 0;
    for segment in &run.segments {
        write_records_csv(&mut writer, &segment.trace, offset, segment.segment_index)?;
        offset += segment.trace.len();
    }
    writer.flush()?;
    Ok(())
}

/// Renders the comparison report as an aligned text table: one row per
/// (function, method), one value column per checkpoint, showing the cell
/// median. Cells without statistics render as `ERR(n)` with the failure
/// count; medians above `1e3` render as "not converged" (the JSON keeps raw
/// numbers).
pub fn summarize(report: &ExperimentReport) -> String {
    let mut header: Vec<String> = vec![
        "function".into(),
        "n".into(),
        "true min".into(),
        "method".into(),
    ];
    for checkpoint in &report.checkpoints {
        header.push(format!("best@{checkpoint}"));
    }

    let mut rows: Vec<Vec<String>> = vec![header];
    for group in &report.groups {
        let info = report
            .functions
            .iter()
            .find(|f| f.index == group.function_index);
        let mut row = vec![
            group.function.clone(),
            group.dim.to_string(),
            info.map_or_else(String::new, |f| format_value(f.known_minimum)),
            group.method.to_string(),
        ];
        for cell in &group.cells {
            row.push(match &cell.stats {
                None => format!("ERR({})", cell.failures),
                Some(stats) if stats.median > 1e3 => "not converged".into(),
                Some(stats) => format_value(stats.median),
            });
        }
        rows.push(row);
    }

    let columns = rows[0].len();
    let widths: Vec<usize> = (0..columns)
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &rows {
        let mut line = String::new();
        for (c, field) in row.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            line.push_str(field);
            if c + 1 < columns {
                line.push_str(&" ".repeat(widths[c] - field.len()));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Compact numeric rendering for table cells.
fn format_value(value: f64) -> String {
    if value == 0.0 {
        "0".to_string()
    } else if !value.is_finite() {
        value.to_string()
    } else if value.abs() < 1e-3 || value.abs() >= 1e4 {
        format!("{value:.3e}")
    } else {
        format!("{value:.4}")
    }
}

/// Sizes the global worker pool used for comparison cells. Call at most
/// once, before the first comparison.
///
/// # Errors
///
/// [`Error::InvalidConfig`] when the pool is already initialized.
pub fn configure_worker_threads(threads: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::InvalidConfig(format!("worker pool already configured: {e}")))
}

//! Command-line front end: single optimizations, multi-seed method
//! comparisons, the objective-switching adaptivity experiment, and catalog
//! listing.
//!
//! Exit codes: 0 on success, 2 for usage errors (unknown function, invalid
//! dimension, malformed flag or config value), 1 for runtime failures.
//! Stdout carries data only when no output path is given; diagnostics go to
//! stderr.

use std::fs;
use std::io::{self, IsTerminal};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use asoc::baselines::{ga_run, sa_run, GaConfig, SaConfig};
use asoc::benchmarks::{catalog, BenchmarkFunction, BenchmarkId};
use asoc::harness::{
    configure_worker_threads, run_adaptivity, run_comparison, summarize, write_adaptivity_csv,
    write_trace_csv, ExperimentSpec, Method, DEFAULT_CHECKPOINTS, DEFAULT_SEED_COUNT,
};
use asoc::{run, AsocConfig, Error, Objective, TerminationStatus};

/// Everything that can go wrong after argument parsing, split by exit code.
#[derive(Debug)]
enum Failure {
    /// The invocation itself is wrong (exit 2).
    Usage(String),
    /// The invocation is fine but the work failed (exit 1).
    Runtime(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownFunction { .. }
            | Error::InvalidDimension { .. }
            | Error::InvalidConfig(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(format!("output failed: {e}"))
    }
}

#[derive(Parser)]
#[command(
    name = "asoc",
    version,
    about = "Pool-based stochastic optimization over a classic benchmark suite",
    long_about = "Runs a pool-based stochastic optimizer (and simulated-annealing / genetic-\n\
                  algorithm baselines) on a catalog of 18 benchmark functions: single runs,\n\
                  multi-seed comparison tables, and an objective-switching adaptivity\n\
                  experiment that carries one pool through every function in turn."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML config file mirroring the flags (flat keys; flags win)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Master seed (fallbacks: config file, $ASOC_SEED, then 0)
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    /// Worker threads for comparison experiments (default: all cores)
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Output format (default: table on a terminal, json when redirected)
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Write output here instead of stdout (compare: prefix for .json/.txt)
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Print progress diagnostics to stderr
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run one optimizer once on one benchmark function
    Optimize(OptimizeArgs),
    /// Compare methods across functions with median-over-seeds checkpoints
    Compare(CompareArgs),
    /// Carry one pool through all 17 later catalog functions (emits CSV)
    Adapt(AdaptArgs),
    /// List the 18 benchmark functions with domains and known minima
    ListFunctions,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Function name or 1-based index (see `list-functions`)
    #[arg(long, value_name = "NAME|INDEX")]
    function: Option<String>,

    /// Dimension override (sphere, rosenbrock, styblinski-tang only)
    #[arg(long, value_name = "N")]
    dim: Option<usize>,

    /// Optimizer to run
    #[arg(long, value_enum)]
    method: Option<MethodArg>,

    /// Iteration budget (annealing stages / generations for baselines)
    #[arg(long, value_name = "N")]
    max_iters: Option<usize>,

    /// Points kept in the pool (population size for the genetic baseline)
    #[arg(long, value_name = "N")]
    pool_size: Option<usize>,

    /// Variance floor added to the candidate distribution each iteration
    #[arg(long, value_name = "F64")]
    cov_floor: Option<f64>,
}

#[derive(Args)]
struct CompareArgs {
    /// Comma list of functions: name, index, name:dim, or index:dim
    #[arg(long, value_name = "LIST")]
    functions: Option<String>,

    /// Comma list of methods (asoc, sa, ga)
    #[arg(long, value_name = "LIST")]
    methods: Option<String>,

    /// Comma list of strictly increasing iteration checkpoints
    #[arg(long, value_name = "LIST")]
    checkpoints: Option<String>,

    /// Independent seeded runs per cell
    #[arg(long, value_name = "N")]
    seeds: Option<usize>,
}

#[derive(Args)]
struct AdaptArgs {
    /// Iterations spent on each of the 17 segments
    #[arg(long, value_name = "N")]
    iterations: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Table,
    Json,
    Csv,
}

impl OutputFormat {
    fn from_name(raw: &str) -> Result<Self, Failure> {
        match raw.trim().to_ascii_lowercase().as_str() {
            "table" => Ok(OutputFormat::Table),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Failure::Usage(format!(
                "unknown format `{other}`; valid formats: table, json, csv"
            ))),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Asoc,
    Sa,
    Ga,
}

impl From<MethodArg> for Method {
    fn from(arg: MethodArg) -> Method {
        match arg {
            MethodArg::Asoc => Method::Asoc,
            MethodArg::Sa => Method::Sa,
            MethodArg::Ga => Method::Ga,
        }
    }
}

/// Optional value for every flag, so a config file can stand in for any of
/// them. Unknown keys are rejected to catch typos early.
#[derive(Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct FileConfig {
    function: Option<String>,
    dim: Option<usize>,
    method: Option<String>,
    max_iters: Option<usize>,
    pool_size: Option<usize>,
    cov_floor: Option<f64>,
    functions: Option<String>,
    methods: Option<String>,
    checkpoints: Option<String>,
    seeds: Option<usize>,
    iterations: Option<usize>,
    seed: Option<u64>,
    jobs: Option<usize>,
    format: Option<String>,
    out: Option<PathBuf>,
    verbose: Option<bool>,
}

/// Global settings after merging flags over config-file values and defaults.
struct Globals {
    seed: u64,
    format: OutputFormat,
    out: Option<PathBuf>,
    verbose: bool,
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(match run_cli(cli) {
        Ok(()) => 0,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            failure.exit_code()
        }
    });
}

fn run_cli(cli: Cli) -> Result<(), Failure> {
    let file = load_file_config(cli.config.as_deref())?;

    let format = match cli.format {
        Some(f) => f,
        None => match &file.format {
            Some(name) => OutputFormat::from_name(name)?,
            None if io::stdout().is_terminal() => OutputFormat::Table,
            None => OutputFormat::Json,
        },
    };
    let globals = Globals {
        seed: resolve_seed(cli.seed, &file)?,
        format,
        out: cli.out.or_else(|| file.out.clone()),
        verbose: cli.verbose || file.verbose.unwrap_or(false),
    };

    if let Some(jobs) = cli.jobs.or(file.jobs) {
        if jobs == 0 {
            return Err(Failure::Usage("--jobs must be at least 1".into()));
        }
        configure_worker_threads(jobs)?;
    }

    match cli.command {
        Command::Optimize(args) => cmd_optimize(&args, &globals, &file),
        Command::Compare(args) => cmd_compare(&args, &globals, &file),
        Command::Adapt(args) => cmd_adapt(&args, &globals, &file),
        Command::ListFunctions => cmd_list_functions(&globals),
    }
}

/// Writes data to stdout. A pipe closed downstream (`asoc adapt | head`)
/// counts as success, matching ordinary Unix filter behavior.
fn emit_bytes(data: &[u8]) -> Result<(), Failure> {
    use io::Write;
    let mut stdout = io::stdout().lock();
    match stdout.write_all(data).and_then(|()| stdout.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(e.into()),
    }
}

fn emit(data: &str) -> Result<(), Failure> {
    emit_bytes(data.as_bytes())
}

fn load_file_config(path: Option<&Path>) -> Result<FileConfig, Failure> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let raw = fs::read_to_string(path).map_err(|e| {
        Failure::Usage(format!("cannot read config file {}: {e}", path.display()))
    })?;
    toml::from_str(&raw)
        .map_err(|e| Failure::Usage(format!("invalid config file {}: {e}", path.display())))
}

fn resolve_seed(flag: Option<u64>, file: &FileConfig) -> Result<u64, Failure> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    if let Some(seed) = file.seed {
        return Ok(seed);
    }
    match std::env::var("ASOC_SEED") {
        Ok(raw) => raw.trim().parse().map_err(|_| {
            Failure::Usage(format!("ASOC_SEED must be an unsigned integer, got `{raw}`"))
        }),
        Err(_) => Ok(0),
    }
}

fn lookup_id(token: &str) -> Result<BenchmarkId, Failure> {
    BenchmarkId::parse(token).ok_or_else(|| {
        let valid: Vec<&str> = BenchmarkId::ALL.iter().map(|id| id.name()).collect();
        Failure::Usage(format!(
            "unknown function `{token}`; valid names: {}",
            valid.join(", ")
        ))
    })
}

/// Parses `name`, `index`, `name:dim`, or `index:dim`.
fn parse_function_selector(raw: &str) -> Result<(BenchmarkId, Option<usize>), Failure> {
    let (head, dim) = match raw.split_once(':') {
        Some((head, tail)) => {
            let dim = tail.trim().parse::<usize>().map_err(|_| {
                Failure::Usage(format!("invalid dimension `{tail}` in selector `{raw}`"))
            })?;
            (head, Some(dim))
        }
        None => (raw, None),
    };
    Ok((lookup_id(head.trim())?, dim))
}

fn parse_usize_list(raw: &str, what: &str) -> Result<Vec<usize>, Failure> {
    raw.split(',')
        .map(|token| {
            token.trim().parse::<usize>().map_err(|_| {
                Failure::Usage(format!("invalid {what} `{}`; expected an integer", token.trim()))
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

/// Flat single-run summary; also the JSON output shape.
#[derive(Serialize)]
struct OptimizeOutcome {
    function: String,
    dim: usize,
    method: Method,
    seed: u64,
    iterations: usize,
    evaluations: u64,
    status: TerminationStatus,
    best_f: f64,
    best_x: Vec<f64>,
}

fn cmd_optimize(args: &OptimizeArgs, globals: &Globals, file: &FileConfig) -> Result<(), Failure> {
    let selector = args
        .function
        .as_deref()
        .or(file.function.as_deref())
        .ok_or_else(|| {
            Failure::Usage(
                "--function is required (name or 1-based index; see `asoc list-functions`)".into(),
            )
        })?;
    let (id, selector_dim) = parse_function_selector(selector)?;
    let flag_dim = args.dim.or(file.dim);
    if let (Some(a), Some(b)) = (flag_dim, selector_dim) {
        if a != b {
            return Err(Failure::Usage(format!(
                "conflicting dimensions: --dim {a} vs selector `{selector}`"
            )));
        }
    }
    let function = BenchmarkFunction::new(id, flag_dim.or(selector_dim))?;

    let method = match (args.method, file.method.as_deref()) {
        (Some(arg), _) => arg.into(),
        (None, Some(name)) => Method::from_name(name).ok_or_else(|| {
            Failure::Usage(format!("unknown method `{name}`; valid methods: asoc, sa, ga"))
        })?,
        (None, None) => Method::Asoc,
    };

    let max_iters = args.max_iters.or(file.max_iters);
    let pool_size = args.pool_size.or(file.pool_size);
    let cov_floor = args.cov_floor.or(file.cov_floor);
    if method != Method::Asoc && cov_floor.is_some() {
        return Err(Failure::Usage(format!(
            "--cov-floor only applies to the asoc method, not {method}"
        )));
    }

    let (best_x, best_f, trace) = match method {
        Method::Asoc => {
            let config = AsocConfig {
                seed: globals.seed,
                max_iters: max_iters.unwrap_or(AsocConfig::default().max_iters),
                pool_size: pool_size.unwrap_or(AsocConfig::default().pool_size),
                cov_floor: cov_floor.unwrap_or(0.0),
                ..AsocConfig::default()
            };
            if config.pool_size < function.dim() + 2 {
                eprintln!(
                    "warning: pool size {} is below dimension + 2 = {}; the fitted \
                     covariance cannot have full rank",
                    config.pool_size,
                    function.dim() + 2
                );
            }
            let (pool, trace) = run(&function, &config)?;
            (pool.best().iter().copied().collect(), pool.best_value(), trace)
        }
        Method::Sa => {
            let config = SaConfig {
                seed: globals.seed,
                outer_iterations: max_iters.unwrap_or(SaConfig::default().outer_iterations),
                ..SaConfig::default()
            };
            if pool_size.is_some() {
                eprintln!("warning: --pool-size has no effect on simulated annealing");
            }
            let result = sa_run(&function, &config)?;
            (result.best_x.iter().copied().collect(), result.best_f, result.trace)
        }
        Method::Ga => {
            let config = GaConfig {
                seed: globals.seed,
                generations: max_iters.unwrap_or(GaConfig::default().generations),
                population_size: pool_size.unwrap_or(GaConfig::default().population_size),
                ..GaConfig::default()
            };
            let result = ga_run(&function, &config)?;
            (result.best_x.iter().copied().collect(), result.best_f, result.trace)
        }
    };

    let outcome = OptimizeOutcome {
        function: function.name().to_string(),
        dim: function.dim(),
        method,
        seed: globals.seed,
        iterations: trace.len(),
        evaluations: trace.records.last().map_or(0, |r| r.evaluations),
        status: trace.status,
        best_f,
        best_x,
    };

    if let Some(path) = &globals.out {
        let mut out = fs::File::create(path)?;
        write_trace_csv(&trace, &mut out)?;
        eprint!("{}", render_optimize_table(&outcome));
        eprintln!("trace written to {}", path.display());
        return Ok(());
    }
    match globals.format {
        OutputFormat::Table => emit(&render_optimize_table(&outcome))?,
        OutputFormat::Json => emit(&format!("{}\n", to_json(&outcome)?))?,
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            write_trace_csv(&trace, &mut buf)?;
            emit_bytes(&buf)?;
        }
    }
    Ok(())
}

fn render_optimize_table(outcome: &OptimizeOutcome) -> String {
    let coords: Vec<String> = outcome.best_x.iter().map(|c| format!("{c:.6}")).collect();
    format!(
        "function     {} (n={})\n\
         method       {}\n\
         seed         {}\n\
         iterations   {}\n\
         evaluations  {}\n\
         status       {}\n\
         best_f       {:.6e}\n\
         best_x       [{}]\n",
        outcome.function,
        outcome.dim,
        outcome.method,
        outcome.seed,
        outcome.iterations,
        outcome.evaluations,
        outcome.status,
        outcome.best_f,
        coords.join(", ")
    )
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map_err(|e| Failure::Runtime(format!("serialization failed: {e}")))
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

fn cmd_compare(args: &CompareArgs, globals: &Globals, file: &FileConfig) -> Result<(), Failure> {
    let functions = match args.functions.as_deref().or(file.functions.as_deref()) {
        Some(list) => list
            .split(',')
            .map(|token| {
                let (id, dim) = parse_function_selector(token.trim())?;
                BenchmarkFunction::new(id, dim).map_err(Failure::from)
            })
            .collect::<Result<Vec<_>, _>>()?,
        None => catalog(),
    };
    let methods = match args.methods.as_deref().or(file.methods.as_deref()) {
        Some(list) => list
            .split(',')
            .map(|token| {
                Method::from_name(token.trim()).ok_or_else(|| {
                    Failure::Usage(format!(
                        "unknown method `{}`; valid methods: asoc, sa, ga",
                        token.trim()
                    ))
                })
            })
            .collect::<Result<Vec<_>, _>>()?,
        None => Method::ALL.to_vec(),
    };
    let checkpoints = match args.checkpoints.as_deref().or(file.checkpoints.as_deref()) {
        Some(list) => parse_usize_list(list, "checkpoint")?,
        None => DEFAULT_CHECKPOINTS.to_vec(),
    };
    let seed_count = args.seeds.or(file.seeds).unwrap_or(DEFAULT_SEED_COUNT);

    let spec = ExperimentSpec {
        functions,
        methods,
        checkpoints,
        seed_count,
        master_seed: globals.seed,
        asoc: AsocConfig::default(),
        sa: SaConfig::default(),
        ga: GaConfig::default(),
    };
    spec.validate()?;

    if globals.verbose {
        eprintln!(
            "comparing {} function(s) x {} method(s), {} seeds, checkpoints {:?}",
            spec.functions.len(),
            spec.methods.len(),
            spec.seed_count,
            spec.checkpoints
        );
    }
    let started = Instant::now();
    let report = run_comparison(&spec)?;
    if globals.verbose {
        eprintln!("finished in {:.1}s", started.elapsed().as_secs_f64());
    }

    if let Some(prefix) = &globals.out {
        let json_path = with_suffix(prefix, "json");
        let table_path = with_suffix(prefix, "txt");
        fs::write(&json_path, report.to_json()?)?;
        fs::write(&table_path, summarize(&report))?;
        eprintln!(
            "report written to {} and {}",
            json_path.display(),
            table_path.display()
        );
    } else {
        match globals.format {
            OutputFormat::Table => emit(&summarize(&report))?,
            OutputFormat::Json => emit(&report.to_json()?)?,
            OutputFormat::Csv => {
                return Err(Failure::Usage(
                    "compare has no csv output; use --format table or json".into(),
                ))
            }
        }
    }

    if report.all_cells_failed() {
        return Err(Failure::Runtime("every cell of the comparison failed".into()));
    }
    Ok(())
}

/// `results` -> `results.json`; keeps any directory part intact.
fn with_suffix(prefix: &Path, extension: &str) -> PathBuf {
    let mut name = prefix.file_name().unwrap_or_default().to_os_string();
    name.push(".");
    name.push(extension);
    prefix.with_file_name(name)
}

// ---------------------------------------------------------------------------
// adapt
// ---------------------------------------------------------------------------

fn cmd_adapt(args: &AdaptArgs, globals: &Globals, file: &FileConfig) -> Result<(), Failure> {
    let iterations = args.iterations.or(file.iterations).unwrap_or(2000);
    let adaptivity = run_adaptivity(globals.seed, iterations)?;
    if globals.verbose {
        for segment in &adaptivity.segments {
            eprintln!(
                "segment {:>2}/17 {} (n={}): best {:.6e} after {} evaluations",
                segment.segment_index,
                segment.function,
                segment.dim,
                segment.final_best_f,
                segment.trace.records.last().map_or(0, |r| r.evaluations)
            );
        }
    }
    match &globals.out {
        Some(path) => {
            let mut out = fs::File::create(path)?;
            write_adaptivity_csv(&adaptivity, &mut out)?;
            eprintln!("trace written to {}", path.display());
        }
        None => {
            let mut buf = Vec::new();
            write_adaptivity_csv(&adaptivity, &mut buf)?;
            emit_bytes(&buf)?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// list-functions
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CatalogRow {
    index: usize,
    name: &'static str,
    default_dim: usize,
    parametric: bool,
    lower: Vec<f64>,
    upper: Vec<f64>,
    minimum: f64,
    tolerance: f64,
}

fn catalog_rows() -> Vec<CatalogRow> {
    catalog()
        .into_iter()
        .map(|function| {
            let minimum = function.minima();
            CatalogRow {
                index: function.index(),
                name: function.name(),
                default_dim: function.dim(),
                parametric: function.id().is_parametric(),
                lower: function.domain().lower().iter().copied().collect(),
                upper: function.domain().upper().iter().copied().collect(),
                minimum: minimum.value,
                tolerance: minimum.tolerance,
            }
        })
        .collect()
}

fn domain_label(row: &CatalogRow) -> String {
    let uniform = row
        .lower
        .iter()
        .zip(&row.upper)
        .all(|(lo, hi)| *lo == row.lower[0] && *hi == row.upper[0]);
    if uniform {
        format!("[{}, {}]^{}", row.lower[0], row.upper[0], row.default_dim)
    } else {
        row.lower
            .iter()
            .zip(&row.upper)
            .map(|(lo, hi)| format!("[{lo}, {hi}]"))
            .collect::<Vec<_>>()
            .join(" x ")
    }
}

fn render_catalog_table(rows: &[CatalogRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:>5}  {:<17} {:>3}  {:<22} {}\n",
        "index", "name", "n", "domain", "minimum"
    ));
    for row in rows {
        let marker = if row.parametric { "*" } else { " " };
        out.push_str(&format!(
            "{:>5}  {:<17} {:>2}{marker} {:<22} {}\n",
            row.index,
            row.name,
            row.default_dim,
            domain_label(row),
            row.minimum
        ));
    }
    out.push_str("\n* dimension adjustable with --dim (minimum shown at the default)\n");
    out
}

fn cmd_list_functions(globals: &Globals) -> Result<(), Failure> {
    let rows = catalog_rows();
    let rendered = match globals.format {
        OutputFormat::Table => render_catalog_table(&rows),
        OutputFormat::Json => format!("{}\n", to_json(&rows)?),
        OutputFormat::Csv => {
            let mut out = String::from("index,name,default_dim,parametric,domain,minimum\n");
            for row in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    row.index,
                    row.name,
                    row.default_dim,
                    row.parametric,
                    domain_label(row),
                    row.minimum
                ));
            }
            out
        }
    };
    match &globals.out {
        Some(path) => {
            fs::write(path, rendered)?;
            eprintln!("catalog written to {}", path.display());
        }
        None => emit(&rendered)?,
    }
    Ok(())
}

//! `anticoh`: anticoherence measures, Majorana conversion, sweeps and searches.

mod docs;
mod error;
mod state;
mod sweep;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anticoherence::catalog::{self, CATALOG};
use anticoherence::majorana::{degeneracy_profile, DEFAULT_CLUSTER_TOL};
use anticoherence::measures::a_measure;
use anticoherence::search::{
    gmax_table, search_anticoherent, GmaxConfig, SearchProblem, SearchResult, DEFAULT_RESTARTS,
    DEFAULT_SUCCESS_THRESHOLD,
};
use anticoherence::{measure_profile, points_to_state, state_to_points, MeasureKind, SpinQuantumNumber};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use docs::{fmt15, open_output, write_json, PointEntry, PointsDocument, StateDocument, SCHEMA_VERSION};
use error::CliError;
use state::{SpinArgs, StateArgs};
use sweep::{SweepKind, SweepSpec};

#[derive(Debug, Parser)]
#[command(name = "anticoh", version, about = "Anticoherence measures of pure spin-j states")]
struct Cli {
    /// Worker threads for search and Thomson restarts.
    #[arg(long, global = true, env = "ANTICOH_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Measures of a state at selected orders.
    Measure(MeasureArgs),
    /// Every measure at every order of a state.
    Profile(ProfileArgs),
    /// Figure-data sweeps written as CSV.
    Sweep(SweepArgs),
    /// Majorana points of a state.
    Majorana(MajoranaArgs),
    /// State from a list of Majorana points.
    FromPoints(FromPointsArgs),
    /// Search for a t-anticoherent state with a degenerate Majorana point.
    Search(SearchArgs),
    /// Table of the largest degeneracy for which a search succeeds.
    Gmax(GmaxArgs),
    /// List catalog states, or show the expected properties of one.
    Catalog(CatalogArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

pub(crate) fn parse_kind(s: &str) -> Result<MeasureKind, String> {
    s.parse().map_err(|e: anticoherence::Error| e.to_string())
}

#[derive(Debug, Args)]
struct MeasureArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Orders, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    t: Vec<usize>,
    /// Measure kinds, comma separated (default: all defined at each order).
    #[arg(long, value_delimiter = ',', value_parser = parse_kind)]
    kinds: Vec<MeasureKind>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ProfileArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(subcommand)]
    kind: Option<SweepKind>,
    /// Sweep specification file (JSON) instead of a subcommand.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MajoranaArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Points closer than this (radians) are merged; 0 keeps every point.
    #[arg(long, default_value_t = DEFAULT_CLUSTER_TOL)]
    cluster_tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FromPointsArgs {
    /// Points as JSON (as written by `majorana`) or CSV with theta,phi[,multiplicity].
    #[arg(long)]
    file: PathBuf,
    /// Name recorded in the state document.
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Search settings; also the format of `search --config` files.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SearchConfig {
    #[serde(default)]
    two_j: Option<u32>,
    #[serde(default)]
    j: Option<String>,
    t: usize,
    #[serde(default)]
    g: usize,
    #[serde(default = "default_objective")]
    objective: MeasureKind,
    #[serde(default = "default_restarts")]
    restarts: usize,
    seed: u64,
    #[serde(default)]
    max_iters: Option<usize>,
    #[serde(default)]
    grad_tol: Option<f64>,
    #[serde(default = "default_threshold")]
    success_threshold: f64,
    #[serde(default = "default_true")]
    stop_on_success: bool,
}

fn default_objective() -> MeasureKind {
    MeasureKind::Purity
}
fn default_restarts() -> usize {
    DEFAULT_RESTARTS
}
fn default_threshold() -> f64 {
    DEFAULT_SUCCESS_THRESHOLD
}
fn default_true() -> bool {
    true
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Search configuration file (JSON); flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    spin: SpinArgs,
    #[arg(long)]
    t: Option<usize>,
    /// Number of lowest-m coefficients pinned to zero.
    #[arg(long)]
    g: Option<usize>,
    #[arg(long, value_parser = parse_kind)]
    objective: Option<MeasureKind>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Run every restart even after one has converged.
    #[arg(long)]
    all_restarts: bool,
    /// Exit with status 3 when the search does not converge.
    #[arg(long)]
    require_converged: bool,
    /// Also write the best state as a state document.
    #[arg(long)]
    state_out: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GmaxArgs {
    /// Largest 2j in the table.
    #[arg(long = "two-j-max", conflicts_with = "j_max")]
    two_j_max: Option<u32>,
    /// Largest j in the table, e.g. 3 or 7/2.
    #[arg(long = "j-max")]
    j_max: Option<String>,
    #[arg(long, default_value_t = 3)]
    t_max: usize,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3000)]
    max_iters: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CatalogArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Also evaluate every expected property.
    #[arg(long)]
    check: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
struct MeasureRow {
    t: usize,
    kind: MeasureKind,
    value: Option<f64>,
    error: Option<String>,
}

fn cmd_measure(args: &MeasureArgs) -> Result<(), CliError> {
    let state = &args.state.load()?;
    let mut rows = Vec::new();
    for &t in &args.t {
        let kinds: Vec<MeasureKind> = if args.kinds.is_empty() {
            MeasureKind::ALL.iter().copied().filter(|k| k.is_valid_at(t)).collect()
        } else {
            args.kinds.clone()
        };
        for kind in kinds {
            let (value, error) = match a_measure(state, t, kind) {
                Ok(v) => (Some(v), None),
                Err(e @ (anticoherence::Error::OrderOutOfRange { .. } | anticoherence::Error::InvalidParameter(_))) => {
                    (None, Some(e.to_string()))
                }
                Err(e) => return Err(e.into()),
            };
            rows.push(MeasureRow { t, kind, value, error });
        }
    }
    let mut out = open_output(args.output.as_ref())?;
    match args.format {
        Format::Json => write_json(&mut out, &rows)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["t", "kind", "value", "error"])?;
            for r in &rows {
                w.write_record([
                    r.t.to_string(),
                    r.kind.name().to_string(),
                    docs::fmt_opt(r.value),
                    r.error.clone().unwrap_or_default(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn cmd_profile(args: &ProfileArgs) -> Result<(), CliError> {
    let state = args.state.load()?;
    let out = open_output(args.output.as_ref())?;
    match args.format {
        Format::Json => {
            let mut out = out;
            write_json(&mut out, &measure_profile(&state)?)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            sweep::write_profile(&mut w, &state)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let (kind, output) = match (&args.kind, &args.spec) {
        (Some(kind), None) => (kind.clone(), args.output.clone()),
        (None, Some(path)) => {
            let text = docs::read_file(path)?;
            let spec: SweepSpec =
                serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            (spec.sweep, args.output.clone().or(spec.output))
        }
        (Some(_), Some(_)) => return Err(CliError::Input("give either a sweep kind or --spec, not both".into())),
        (None, None) => return Err(CliError::Input("no sweep given: pass a sweep kind or --spec".into())),
    };
    sweep::run(&kind, open_output(output.as_ref())?)
}

fn cmd_majorana(args: &MajoranaArgs) -> Result<(), CliError> {
    if !(args.cluster_tol >= 0.0) {
        return Err(CliError::Input("--cluster-tol must be non-negative".into()));
    }
    let state = args.state.load()?;
    let config = state_to_points(&state)?;
    let points: Vec<PointEntry> = config
        .clusters(args.cluster_tol)
        .into_iter()
        .map(|(p, multiplicity)| PointEntry { theta: p.theta(), phi: p.phi(), multiplicity })
        .collect();
    let doc = PointsDocument {
        schema_version: SCHEMA_VERSION,
        two_j: state.two_j(),
        points,
        degeneracy_profile: degeneracy_profile(&config, args.cluster_tol),
    };
    let mut out = open_output(args.output.as_ref())?;
    match args.format {
        Format::Json => write_json(&mut out, &doc)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["theta", "phi", "multiplicity"])?;
            for p in &doc.points {
                w.write_record([fmt15(p.theta), fmt15(p.phi), p.multiplicity.to_string()])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn cmd_from_points(args: &FromPointsArgs) -> Result<(), CliError> {
    let config = docs::load_points(&args.file)?;
    let state = points_to_state(&config)?;
    let provenance = Some(format!("Majorana points from {}", args.file.display()));
    let doc = StateDocument::from_state(&state, args.name.clone(), provenance);
    let mut out = open_output(args.output.as_ref())?;
    write_json(&mut out, &doc)
}

#[derive(Serialize)]
struct SearchReport<'a> {
    problem: &'a SearchProblem,
    result: &'a SearchResult,
    best_state: StateDocument,
}

fn search_problem(args: &SearchArgs) -> Result<SearchProblem, CliError> {
    let base = match &args.config {
        Some(path) => {
            let text = docs::read_file(path)?;
            let c: SearchConfig =
                serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Some(c)
        }
        None => None,
    };
    let spin = match args.spin.resolve()? {
        Some(spin) => spin,
        None => {
            let from_config = base.as_ref().map(|c| SpinArgs { two_j: c.two_j, j: c.j.clone() });
            from_config.unwrap_or_default().require()?
        }
    };
    let t = args
        .t
        .or(base.as_ref().map(|c| c.t))
        .ok_or_else(|| CliError::Input("missing order: pass --t or a config file".into()))?;
    let g = args.g.or(base.as_ref().map(|c| c.g)).unwrap_or(0);
    let mut problem = SearchProblem::new(spin, t, g)?;
    if let Some(c) = &base {
        problem.objective = c.objective;
        problem.restarts = c.restarts;
        problem.seed = c.seed;
        problem.success_threshold = c.success_threshold;
        problem.stop_on_success = c.stop_on_success;
        if let Some(m) = c.max_iters {
            problem.max_iters = m;
        }
        if let Some(tol) = c.grad_tol {
            problem.grad_tol = tol;
        }
    }
    if let Some(o) = args.objective {
        problem.objective = o;
    }
    if let Some(r) = args.restarts {
        problem.restarts = r;
    }
    if let Some(s) = args.seed {
        problem.seed = s;
    }
    if let Some(m) = args.max_iters {
        problem.max_iters = m;
    }
    if args.all_restarts {
        problem.stop_on_success = false;
    }
    problem.validate()?;
    Ok(problem)
}

fn cmd_search(args: &SearchArgs) -> Result<(), CliError> {
    let problem = search_problem(args)?;
    let result = search_anticoherent(&problem)?;
    let provenance = format!(
        "search 2j={} t={} g={} objective={} seed={}",
        problem.spin.two_j(),
        problem.t,
        problem.g,
        problem.objective,
        problem.seed
    );
    let best_state = StateDocument::from_state(&result.best_state, None, Some(provenance));
    if let Some(path) = &args.state_out {
        let mut out = open_output(Some(path))?;
        write_json(&mut out, &best_state)?;
        out.flush()?;
    }
    let mut out = open_output(args.output.as_ref())?;
    write_json(&mut out, &SearchReport { problem: &problem, result: &result, best_state })?;
    out.flush()?;
    if args.require_converged && !result.converged {
        return Err(CliError::NotConverged(format!("best value {}", result.best_value)));
    }
    Ok(())
}

fn cmd_gmax(args: &GmaxArgs) -> Result<(), CliError> {
    let two_j_max = match (&args.two_j_max, &args.j_max) {
        (Some(n), None) => *n,
        (None, Some(j)) => j.parse::<SpinQuantumNumber>()?.two_j(),
        (None, None) => return Err(CliError::Input("pass --two-j-max or --j-max".into())),
        (Some(_), Some(_)) => return Err(CliError::Input("give either --two-j-max or --j-max".into())),
    };
    if args.t_max == 0 || args.restarts == 0 {
        return Err(CliError::Input("--t-max and --restarts must be at least 1".into()));
    }
    let config = GmaxConfig { restarts: args.restarts, seed: args.seed, max_iters: args.max_iters, ..Default::default() };
    let table = gmax_table(two_j_max, args.t_max, &config)?;
    let mut w = csv::Writer::from_writer(open_output(args.output.as_ref())?);
    w.write_record(["two_j", "t", "g_max", "best_value", "converged"])?;
    for e in &table {
        w.write_record([
            e.two_j.to_string(),
            e.t.to_string(),
            e.g_max.to_string(),
            fmt15(e.best_value),
            e.converged.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct PropertyRow {
    t: usize,
    kind: MeasureKind,
    expected: f64,
    tolerance: f64,
    source: &'static str,
    measured: Option<f64>,
    passed: Option<bool>,
}

fn cmd_catalog(args: &CatalogArgs) -> Result<(), CliError> {
    let mut out = open_output(args.output.as_ref())?;
    let Some(name) = &args.state.name else {
        if args.state.file.is_some() {
            return Err(CliError::Input("catalog takes --name, not --file".into()));
        }
        match args.format {
            Format::Json => write_json(&mut out, &CATALOG)?,
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["name", "parameters", "description"])?;
                for e in &CATALOG {
                    w.write_record([e.name, e.parameters, e.description])?;
                }
                w.flush()?;
            }
        }
        return Ok(());
    };
    let named = catalog::named_state(name, &args.state.params()?)?;
    let rows: Vec<PropertyRow> = if args.check {
        named
            .check()?
            .into_iter()
            .map(|c| PropertyRow {
                t: c.property.t,
                kind: c.property.kind,
                expected: c.property.value,
                tolerance: c.property.tolerance,
                source: c.property.source,
                measured: Some(c.measured),
                passed: Some(c.passed),
            })
            .collect()
    } else {
        named
            .expected
            .iter()
            .map(|p| PropertyRow {
                t: p.t,
                kind: p.kind,
                expected: p.value,
                tolerance: p.tolerance,
                source: p.source,
                measured: None,
                passed: None,
            })
            .collect()
    };
    match args.format {
        Format::Json => write_json(&mut out, &rows)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let mut columns = vec!["t", "kind", "expected", "tolerance", "source"];
            if args.check {
                columns.extend(["measured", "passed"]);
            }
            w.write_record(&columns)?;
            for r in &rows {
                let mut rec = vec![
                    r.t.to_string(),
                    r.kind.name().to_string(),
                    fmt15(r.expected),
                    fmt15(r.tolerance),
                    r.source.to_string(),
                ];
                if let (Some(m), Some(p)) = (r.measured, r.passed) {
                    rec.push(fmt15(m));
                    rec.push(p.to_string());
                }
                w.write_record(&rec)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Input("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Measure(a) => cmd_measure(a),
        Command::Profile(a) => cmd_profile(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Majorana(a) => cmd_majorana(a),
        Command::FromPoints(a) => cmd_from_points(a),
        Command::Search(a) => cmd_search(a),
        Command::Gmax(a) => cmd_gmax(a),
        Command::Catalog(a) => cmd_catalog(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

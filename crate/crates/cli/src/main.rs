//! `nilgeo` command-line interface.

mod output;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nilgeo::cohomology::{self, Theory};
use nilgeo::deform::{self, DeformError};
use nilgeo::frolicher;
use nilgeo::kuranishi::{self, KuranishiError, VectorForm};
use nilgeo::metrics::{self, MetricKind, MetricsError, SearchOptions};
use nilgeo::report::{self, ReportError};
use nilgeo::scalars::GaussRational;
use nilgeo::structeq::{self, ComplexNilmanifold, StructError};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "nilgeo", version, about = "Exact invariant geometry of complex nilmanifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct SearchArgs {
    /// Iteration budget per metric kind.
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
    #[arg(long, env = "NILGEO_SEED", default_value_t = 42)]
    seed: u64,
}

impl From<SearchArgs> for SearchOptions {
    fn from(a: SearchArgs) -> Self {
        SearchOptions { budget: a.budget, seed: a.seed }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum TheoryArg {
    Derham,
    Dolbeault,
    Bottchern,
    All,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum WhichArg {
    Kahler,
    Balanced,
    Sg,
    Gauduchon,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate structure equations.
    Validate { input: String },
    /// Invariant cohomology tables.
    Cohomology {
        input: String,
        #[arg(long, value_enum, default_value = "all")]
        theory: TheoryArg,
    },
    /// Frölicher spectral sequence pages.
    Frolicher {
        input: String,
        #[arg(long)]
        max_page: Option<usize>,
    },
    /// The ∂∂̄-lemma check per bidegree.
    Ddbar { input: String },
    /// Kähler, balanced, strongly Gauduchon and Gauduchon metrics.
    Metrics {
        input: String,
        #[arg(long, value_enum, default_value = "all")]
        which: WhichArg,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Kodaira count and Maurer-Cartan solution for parallelisable input.
    Kuranishi {
        input: String,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Deformed structure equations at a parameter point.
    Deform {
        input: String,
        /// A `.psi` file, or `builtin:iwasawa`.
        #[arg(long)]
        psi: String,
        /// Parameter values, e.g. `t12=1/10,t11=0`.
        #[arg(long, default_value = "")]
        at: String,
        /// Write the deformed structure equations to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Print a built-in manifold, or list them.
    Example { name: Option<String> },
    /// Run the whole pipeline.
    Report {
        input: String,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl From<StructError> for CliError {
    fn from(e: StructError) -> Self {
        CliError::Input(format!("[structeq] {e}"))
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<DeformError> for CliError {
    fn from(e: DeformError) -> Self {
        match e {
            DeformError::IntegrabilityBroken(_) => CliError::Internal(format!("[deform] {e}")),
            _ => CliError::Input(format!("[deform] {e}")),
        }
    }
}

impl From<KuranishiError> for CliError {
    fn from(e: KuranishiError) -> Self {
        CliError::Input(format!("[kuranishi] {e}"))
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        CliError::Internal(format!("[metrics] {e}"))
    }
}

/// Reads a file if one exists at `input`, otherwise resolves a builtin name.
fn input_text(input: &str) -> Result<String, CliError> {
    let path = Path::new(input);
    if path.is_file() {
        return std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{input}: {e}")));
    }
    match report::builtin(input) {
        Ok(text) => Ok(text),
        Err(ReportError::UnknownBuiltin { .. }) => Err(CliError::Input(format!(
            "{input}: no such file or builtin (available builtins: {})",
            report::BUILTINS.join(", ")
        ))),
        Err(e) => Err(e.into()),
    }
}

fn load(input: &str) -> Result<ComplexNilmanifold, CliError> {
    Ok(structeq::load(&input_text(input)?)?)
}

fn parse_point(text: &str) -> Result<BTreeMap<String, GaussRational>, CliError> {
    let mut point = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("--at: expected name=value, got `{item}`")))?;
        let v: GaussRational = value.trim().parse().map_err(|e| CliError::Input(format!("--at: {e}")))?;
        point.insert(name.trim().to_string(), v);
    }
    Ok(point)
}

fn load_psi(psi: &str) -> Result<VectorForm, CliError> {
    match psi.strip_prefix("builtin:") {
        Some("iwasawa") => Ok(deform::iwasawa_psi()),
        Some(other) => Err(CliError::Input(format!("unknown builtin psi `{other}`; available: iwasawa"))),
        None => {
            let text = std::fs::read_to_string(psi).map_err(|e| CliError::Input(format!("{psi}: {e}")))?;
            let file = structeq::parse_psi(&text).map_err(|e| CliError::Input(format!("[structeq] {psi}: {e}")))?;
            Ok(file.into())
        }
    }
}

fn kinds(which: WhichArg) -> Vec<MetricKind> {
    match which {
        WhichArg::Kahler => vec![MetricKind::Kahler],
        WhichArg::Balanced => vec![MetricKind::Balanced],
        WhichArg::Sg => vec![MetricKind::Sg],
        WhichArg::Gauduchon => vec![MetricKind::Gauduchon],
        WhichArg::All => MetricKind::ALL.to_vec(),
    }
}

fn theories(t: TheoryArg) -> Vec<Theory> {
    match t {
        TheoryArg::Derham => vec![Theory::DeRham],
        TheoryArg::Dolbeault => vec![Theory::Dolbeault],
        TheoryArg::Bottchern => vec![Theory::BottChern],
        TheoryArg::All => vec![Theory::DeRham, Theory::Dolbeault, Theory::BottChern],
    }
}

/// Runs a command, returning (JSON payload, text rendering).
fn run(command: &Command) -> Result<(Value, String), CliError> {
    use output as o;
    match command {
        Command::Validate { input } => {
            let m = load(input)?;
            Ok((o::validate_json(&m), o::validate_text(&m)))
        }
        Command::Cohomology { input, theory } => {
            let m = load(input)?;
            let reports: Vec<_> = theories(*theory).into_iter().map(|t| cohomology::compute(&m, t)).collect();
            Ok((o::cohomology_json(&reports), o::cohomology_text(&reports)))
        }
        Command::Frolicher { input, max_page } => {
            let m = load(input)?;
            let pages = frolicher::pages(&m, *max_page);
            Ok((o::frolicher_json(&pages), o::frolicher_text(&pages)))
        }
        Command::Ddbar { input } => {
            let m = load(input)?;
            let r = cohomology::ddbar_check(&m);
            Ok((o::ddbar_json(&r), o::ddbar_text(&r)))
        }
        Command::Metrics { input, which, search } => {
            let m = load(input)?;
            let opts = SearchOptions::from(*search);
            let ks = kinds(*which);
            let (reports, audit) = if ks.len() == MetricKind::ALL.len() {
                let c = metrics::classify(&m, opts)?;
                (c.reports, c.audit)
            } else {
                (ks.iter().map(|&k| metrics::find_witness(&m, k, opts)).collect(), Vec::new())
            };
            Ok((o::metrics_json(&reports, &audit, opts), o::metrics_text(&reports)))
        }
        Command::Kuranishi { input, max_degree } => {
            let m = load(input)?;
            let r = kuranishi::count_closed_oneforms(&m)?;
            let kodaira = kuranishi::kodaira_h01(&m)?;
            let tangent = kuranishi::tangent_h01_basis(&m)?;
            let sol = kuranishi::solve_maurer_cartan(&m, *max_degree)?;
            if sol.obstruction.is_none() && !kuranishi::verify_integrability(&sol.manifold, &sol.psi) {
                return Err(CliError::Internal("[kuranishi] solution fails the Maurer-Cartan check".into()));
            }
            Ok((o::kuranishi_json(r, &kodaira, tangent.len(), &sol), o::kuranishi_text(r, &kodaira, tangent.len(), &sol)))
        }
        Command::Deform { input, psi, at, emit } => {
            let m = load(input)?;
            let psi = load_psi(psi)?;
            let point = parse_point(at)?;
            let d = deform::deformed_structure(&m, &psi, &point)?;
            if let Some(path) = emit {
                std::fs::write(path, d.manifold.eqs().to_string())
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            }
            Ok((o::deform_json(&d), o::deform_text(&d)))
        }
        Command::Example { name } => match name {
            None => Ok((json!({ "builtins": report::BUILTINS }), report::BUILTINS.join("\n") + "\n")),
            Some(name) => {
                let text = report::builtin(name)?;
                Ok((json!({ "name": name, "equations": text }), text))
            }
        },
        Command::Report { input, search } => {
            let m = load(input)?;
            let r = report::run_report(&m, SearchOptions::from(*search))?;
            Ok((o::report_json(&r), o::report_text(&r)))
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Cohomology { .. } => "cohomology",
        Command::Frolicher { .. } => "frolicher",
        Command::Ddbar { .. } => "ddbar",
        Command::Metrics { .. } => "metrics",
        Command::Kuranishi { .. } => "kuranishi",
        Command::Deform { .. } => "deform",
        Command::Example { .. } => "example",
        Command::Report { .. } => "report",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli.command) {
        Ok((value, text)) => {
            if cli.json {
                let mut obj = serde_json::Map::new();
                obj.insert("schema".into(), json!(1));
                obj.insert("invariant_level".into(), json!(true));
                obj.insert("command".into(), json!(command_name(&cli.command)));
                obj.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
                if let Value::Object(fields) = value {
                    obj.extend(fields);
                }
                println!("{}", serde_json::to_string_pretty(&Value::Object(obj)).expect("JSON values serialize"));
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

//! The `matord` command line: argument parsing, verb dispatch and the JSON
//! report envelope.
//!
//! Exit codes: 0 success, 2 a check failed (the report carries witnesses),
//! 3 a typed numerical or domain error, 4 I/O, usage or schema errors.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{OperatorAlgebra, MAX_DIM, STRUCTURE_TOL};
use crate::cases::{self, KadisonOptions};
use crate::cone::{
    audit_algebraically_admissible, audit_matrix_ordered, audit_star_admissible, estimate_main_constants, MatrixCone,
    TOL_PSD,
};
use crate::error::Error;
use crate::involution::{recover_involution, verify_matrix_involution, NativeStar};
use crate::io::{self, SchemaError};
use crate::linalg::C64;
use crate::norms;
use crate::search::BISECT_TOL;
use crate::similarity::{self, LinearMap, PipelineOptions, CERT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_TYPED_ERROR: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Residual allowed between independent and entrywise involutions.
pub const INVOLUTION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RunConfig {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Samples per check.
    #[arg(long, global = true, default_value_t = 50)]
    pub samples: usize,
    /// Matrix levels, comma separated, each in 1..=8.
    #[arg(long, global = true, value_delimiter = ',', default_values_t = vec![1usize, 2])]
    pub levels: Vec<usize>,
    #[arg(long = "tol-psd", global = true, default_value_t = TOL_PSD)]
    pub tol_psd: f64,
    #[arg(long = "bisect-tol", global = true, default_value_t = BISECT_TOL)]
    pub bisect_tol: f64,
    #[arg(long = "cert-tol", global = true, default_value_t = CERT_TOL)]
    pub cert_tol: f64,
    #[arg(long = "structure-tol", global = true, default_value_t = STRUCTURE_TOL)]
    pub structure_tol: f64,
    /// Report path; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        for (name, t) in [
            ("tol-psd", self.tol_psd),
            ("bisect-tol", self.bisect_tol),
            ("cert-tol", self.cert_tol),
            ("structure-tol", self.structure_tol),
        ] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(format!("--{name} must be positive, got {t}"));
            }
        }
        if self.levels.is_empty() || self.levels.iter().any(|&n| !(1..=8).contains(&n)) {
            return Err(format!("--levels must be a nonempty subset of 1..=8, got {:?}", self.levels));
        }
        if self.samples == 0 {
            return Err("--samples must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(name = "matord", version, about = "Audits, norms and similarity reconstruction for matrix-ordered algebras")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Close a set of generators into a unital algebra.
    CloseAlgebra { input: PathBuf },
    /// Run the three axiom audits and the constant estimators on a cone.
    CheckCones { cone: PathBuf },
    /// Order-unit seminorm (or pre-C*-norm) of an element.
    OrderNorm {
        cone: PathBuf,
        /// Matrix file with the element.
        #[arg(long)]
        element: PathBuf,
        #[arg(long, default_value_t = 1)]
        level: usize,
        /// Compute `sqrt(|x^♯ x|)` instead of the seminorm.
        #[arg(long)]
        cstar: bool,
    },
    /// Recover the involution from the cone and compare levels.
    Involution { cone: PathBuf },
    /// Reconstruct the similarity and certify it.
    Similarity {
        cone: PathBuf,
        #[arg(long = "cb-restarts", default_value_t = 4)]
        cb_restarts: usize,
        #[arg(long = "cb-level")]
        cb_level: Option<usize>,
    },
    /// Lower bound for the cb norm of a map given by basis images.
    CbNorm {
        map: PathBuf,
        /// Amplification level; defaults to the target dimension.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
    },
    /// Doubling, audit and similarity pipeline for `S^-1 (·) S`.
    KadisonDemo {
        input: PathBuf,
        #[arg(long = "cb-level")]
        cb_level: Option<usize>,
    },
    /// Sampled C^1 functions: norm formula, inequalities, condition-(1) decay.
    C1Example {
        #[arg(long = "grid-points", default_value_t = 257)]
        grid_points: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![4usize, 8, 16, 32])]
        frequencies: Vec<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CloseAlgebra { .. } => "close-algebra",
            Command::CheckCones { .. } => "check-cones",
            Command::OrderNorm { .. } => "order-norm",
            Command::Involution { .. } => "involution",
            Command::Similarity { .. } => "similarity",
            Command::CbNorm { .. } => "cb-norm",
            Command::KadisonDemo { .. } => "kadison-demo",
            Command::C1Example { .. } => "c1-example",
        }
    }
}

/// Why a verb stopped early.
#[derive(Debug)]
pub enum Failure {
    Io(String),
    Schema(SchemaError),
    Typed(Error),
}

impl From<SchemaError> for Failure {
    fn from(e: SchemaError) -> Self {
        Failure::Schema(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Typed(e)
    }
}

/// Result of one verb: whether every check passed, and its payload.
pub struct Outcome {
    pub passed: bool,
    pub result: Value,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

fn load(path: &Path) -> Result<(Value, PathBuf), Failure> {
    let doc = io::read_json(path).map_err(Failure::Io)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((doc, base))
}

fn load_cone(path: &Path, config: &RunConfig) -> Result<crate::cone::ConeOracle, Failure> {
    let (doc, base) = load(path)?;
    Ok(io::cone_from_json(&doc, &base, Some(config.tol_psd))?)
}

fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split([' ', '(', '{']).next().unwrap_or("Error").to_string()
}

/// Execute a parsed command, returning the exit code and the report.
pub fn execute(cli: &Cli) -> (i32, Value) {
    let config = &cli.config;
    let mut report = json!({
        "command": cli.command.name(),
        "config": to_value(config),
    });
    if let Err(msg) = config.validate() {
        report["status"] = json!("error");
        report["error"] = json!({"kind": "Usage", "message": msg});
        return (EXIT_IO, report);
    }
    match dispatch(&cli.command, config) {
        Ok(outcome) => {
            report["status"] = json!(if outcome.passed { "pass" } else { "fail" });
            report["result"] = outcome.result;
            (if outcome.passed { EXIT_OK } else { EXIT_CHECK_FAILED }, report)
        }
        Err(Failure::Typed(e)) => {
            report["status"] = json!("error");
            report["error"] = json!({"kind": error_kind(&e), "message": e.to_string()});
            (EXIT_TYPED_ERROR, report)
        }
        Err(Failure::Schema(e)) => {
            report["status"] = json!("error");
            report["error"] = json!({"kind": "Schema", "pointer": e.pointer, "message": e.message});
            (EXIT_IO, report)
        }
        Err(Failure::Io(msg)) => {
            report["status"] = json!("error");
            report["error"] = json!({"kind": "Io", "message": msg});
            (EXIT_IO, report)
        }
    }
}

fn dispatch(command: &Command, config: &RunConfig) -> Result<Outcome, Failure> {
    match command {
        Command::CloseAlgebra { input } => close_algebra(input, config),
        Command::CheckCones { cone } => check_cones(cone, config),
        Command::OrderNorm { cone, element, level, cstar } => order_norm(cone, element, *level, *cstar, config),
        Command::Involution { cone } => involution(cone, config),
        Command::Similarity { cone, cb_restarts, cb_level } => similarity_verb(cone, *cb_restarts, *cb_level, config),
        Command::CbNorm { map, k, restarts } => cb_norm(map, *k, *restarts, config),
        Command::KadisonDemo { input, cb_level } => kadison_demo(input, *cb_level, config),
        Command::C1Example { grid_points, frequencies } => c1_example(*grid_points, frequencies, config),
    }
}

fn close_algebra(input: &Path, config: &RunConfig) -> Result<Outcome, Failure> {
    let (doc, _) = load(input)?;
    let (gens, include_adjoints, max_dim) = io::generators_from_json(&doc)?;
    let alg = OperatorAlgebra::generate(&gens, include_adjoints, config.structure_tol, max_dim.unwrap_or(MAX_DIM))?;
    let mut result = io::algebra_to_json(&alg);
    result["dim"] = json!(alg.dim());
    result["rank_tol"] = json!(alg.rank_tol());
    Ok(Outcome { passed: true, result })
}

fn check_cones(path: &Path, config: &RunConfig) -> Result<Outcome, Failure> {
    let cone = load_cone(path, config)?;
    let admissible = if cone.algebra().is_star_closed() {
        Some(audit_algebraically_admissible(&cone, config.samples, config.seed))
    } else {
        None
    };
    let ordered = audit_matrix_ordered(&cone, &config.levels, config.samples, config.seed);
    let star = audit_star_admissible(&cone, &config.levels, config.samples, config.seed);
    let constants = estimate_main_constants(&cone, &config.levels, config.samples, config.seed);
    let passed = admissible.as_ref().map_or(true, |r| r.passed()) && ordered.passed() && star.passed();
    let result = json!({
        "cone": cone.label(),
        "algebraically_admissible": admissible.as_ref().map(to_value)
            .unwrap_or_else(|| json!({"skipped": "algebra is not adjoint-closed"})),
        "matrix_ordered": to_value(&ordered),
        "star_admissible": to_value(&star),
        "main_constants": to_value(&constants),
    });
    Ok(Outcome { passed, result })
}

fn order_norm(path: &Path, element: &Path, level: usize, cstar: bool, config: &RunConfig) -> Result<Outcome, Failure> {
    let cone = load_cone(path, config)?;
    let (doc, _) = load(element)?;
    let x = io::matrix_from_json(&doc, "")?;
    let star = NativeStar(&cone);
    let report = if cstar {
        norms::pre_cstar_norm(&cone, &star, level, &x, config.bisect_tol)?
    } else {
        norms::order_unit_seminorm(&cone, &star, level, &x, config.bisect_tol)?
    };
    let result = json!({
        "norm": if cstar { "pre_cstar" } else { "order_unit" },
        "level": level,
        "element": io::matrix_to_json(&x),
        "report": to_value(&report),
    });
    Ok(Outcome { passed: true, result })
}

fn involution(path: &Path, config: &RunConfig) -> Result<Outcome, Failure> {
    let cone = load_cone(path, config)?;
    let one = recover_involution(&cone, 1, config.seed)?;
    let mut comparisons = Vec::new();
    let mut passed = true;
    for &n in config.levels.iter().filter(|&&n| n > 1) {
        let at_n = recover_involution(&cone, n, config.seed)?;
        let cmp = verify_matrix_involution(&one, &at_n, config.samples, config.seed)?;
        passed &= cmp.max_residual <= INVOLUTION_TOL;
        comparisons.push(to_value(&cmp));
    }
    let result = json!({
        "involution": to_value(&one),
        "level_comparisons": comparisons,
        "tolerance": INVOLUTION_TOL,
    });
    Ok(Outcome { passed, result })
}

fn similarity_verb(path: &Path, cb_restarts: usize, cb_level: Option<usize>, config: &RunConfig) -> Result<Outcome, Failure> {
    let cone = load_cone(path, config)?;
    let opts = PipelineOptions {
        levels: config.levels.clone(),
        samples: config.samples,
        seed: config.seed,
        cert_tol: config.cert_tol,
        cb_restarts,
        cb_level,
    };
    let report = similarity::reconstruct(&cone, &opts)?;
    let sandwich_ok = report.cb_lower.as_ref().map_or(true, |b| b.value <= report.cb_upper + 1e-6);
    let passed = sandwich_ok && report.certificate.residual_cone <= cone.tol_psd() && report.certificate.inverse_failures == 0;
    Ok(Outcome { passed, result: to_value(&report) })
}

fn cb_norm(path: &Path, k: Option<usize>, restarts: usize, config: &RunConfig) -> Result<Outcome, Failure> {
    let (doc, base) = load(path)?;
    let (alg, images) = io::map_from_json(&doc, &base)?;
    let map = LinearMap::new(alg, images)?;
    let level = k.unwrap_or(map.target_dim());
    let bound = similarity::cb_lower_bound(&map, level, restarts, config.seed)?;
    Ok(Outcome { passed: true, result: to_value(&bound) })
}

fn kadison_demo(path: &Path, cb_level: Option<usize>, config: &RunConfig) -> Result<Outcome, Failure> {
    let (doc, base) = load(path)?;
    let alg = io::algebra_from_ref(doc.get("algebra").unwrap_or(&Value::Null), &base, "/algebra")?;
    let s = io::matrix_from_ref(doc.get("S").unwrap_or(&Value::Null), &base, "/S")?;
    let opts = KadisonOptions {
        levels: config.levels.clone(),
        samples: config.samples,
        seed: config.seed,
        cb_level,
        cb_restarts: 6,
        cert_tol: config.cert_tol,
    };
    let report = cases::kadison_pipeline(&alg, &s, &opts)?;
    let passed = report.audit.passed() && report.r4_at_most_one && report.cb_lower.value <= report.cb_upper + 1e-6;
    Ok(Outcome { passed, result: to_value(&report) })
}

fn c1_example(grid_points: usize, frequencies: &[usize], config: &RunConfig) -> Result<Outcome, Failure> {
    let grid = cases::equispaced_grid(grid_points);
    cases::validate_grid(&grid)?;
    let decay = cases::decay_table(frequencies, &grid)?;
    let inequalities = cases::c1_inequality_check(&grid, config.samples, config.seed)?;
    let golden = cases::C1Sample::from_fn(vec![1.0], |_| C64::new(1.0, 0.0), |_| C64::new(1.0, 0.0))?;
    let golden_norm = cases::c1_norm(&golden)?;
    let decay_ok = decay.iter().all(|p| p.ratio <= 1.0 / p.k as f64);
    let result = json!({
        "grid_points": grid.len(),
        "decay": to_value(&decay),
        "inequalities": to_value(&inequalities),
        "golden_ratio_case": golden_norm,
    });
    Ok(Outcome { passed: decay_ok && inequalities.holds, result })
}

/// Parse arguments, run, write the report; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_IO,
            };
            let _ = e.print();
            return code;
        }
    };
    let (code, report) = execute(&cli);
    let text = io::to_canonical_json(&report);
    match &cli.config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("{}: {e}", path.display());
                return EXIT_IO;
            }
        }
        None => print!("{text}"),
    }
    code
}

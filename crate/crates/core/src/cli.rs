//! The `mlobs` command line: problem files in, removal degree tables or JSON
//! documents out.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::groebner::GbConfig;
use crate::obstruction::{
    euler_obstruction, removal_ml_degrees_symbolic, Engine, ObstructionError, RemovalRecord, TargetEndpoints,
    WitnessCollection,
};
use crate::ring::{parse, parse_rational, Rational, VariableRing};
use crate::systems::VarietySpec;
use crate::tracker::{TrackerSettings, WORKERS_ENV};

pub const DEFAULT_SEED: u64 = 2024;
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// Exit status for malformed input.
pub const EXIT_USAGE: i32 = 1;
/// Exit status for a failed computation.
pub const EXIT_ENGINE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "mlobs",
    version,
    about = "Removal ML degrees and local Euler obstructions",
    after_help = format!(
        "The generators are assumed to define a prime ideal; this is not checked.\n\
         Set {WORKERS_ENV} to cap the number of tracking threads."
    )
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Removal ML degrees and Euler obstruction of a problem file.
    Solve(SolveArgs),
    /// Build or reuse a stored witness collection.
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// Reflag stored target endpoints at a new tolerance.
    Reclassify(ReclassifyArgs),
    /// Euler obstruction from a list of removal degrees.
    Euler(EulerArgs),
}

#[derive(Debug, Subcommand)]
pub enum WitnessCommand {
    /// Compute the generic witness sets and save them.
    Compute(ComputeArgs),
    /// Load a collection and track it to a point.
    Reuse(ReuseArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineChoice {
    Symbolic,
    Numeric,
    Both,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Problem file (JSON).
    pub problem: PathBuf,
    #[arg(long, value_enum)]
    pub engine: Option<EngineChoice>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Comma-separated coordinates; overrides the file.
    #[arg(long)]
    pub point: Option<String>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    pub problem: PathBuf,
    /// Target directory; defaults to the file's `witness_dir`.
    pub dir: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ReuseArgs {
    pub dir: PathBuf,
    #[arg(long)]
    pub point: String,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ReclassifyArgs {
    pub dir: PathBuf,
    #[arg(long)]
    pub tol: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct EulerArgs {
    #[arg(long)]
    pub dim: usize,
    /// Comma-separated r_0..r_{d+1}.
    #[arg(long)]
    pub degrees: String,
    #[arg(long)]
    pub json: bool,
}

/// A coordinate written either as a JSON number or as text (`3`, `-1/2`,
/// `0.25`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Literal {
    Integer(i64),
    Float(f64),
    Text(String),
}

impl Literal {
    fn to_rational(&self) -> Result<Rational, CliError> {
        match self {
            Literal::Integer(v) => Ok(Rational::from_integer((*v).into())),
            Literal::Float(v) => parse_rational(&v.to_string()).map_err(|e| CliError::usage(format!("point: {e}"))),
            Literal::Text(t) => parse_rational(t).map_err(|e| CliError::usage(format!("point coordinate {t:?}: {e}"))),
        }
    }
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub variables: Vec<String>,
    pub generators: Vec<String>,
    pub point: Vec<Literal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engine: Option<EngineChoice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_dir: Option<PathBuf>,
}

impl ProblemFile {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }

    /// The variety; its dimension is computed when the file gives none.
    pub fn variety(&self) -> Result<VarietySpec<Rational>, CliError> {
        let ring = VariableRing::rational(&self.variables).map_err(|e| CliError::usage(format!("variables: {e}")))?;
        let gens = self
            .generators
            .iter()
            .map(|g| parse(g, &ring).map_err(|e| CliError::usage(format!("generator {g:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        match self.dimension {
            Some(d) => VarietySpec::new(&ring, gens, d).map_err(|e| CliError::usage(e.to_string())),
            None => VarietySpec::with_computed_dimension(&ring, gens, &GbConfig::default())
                .map_err(|e| CliError::engine(format!("dimension: {e}"))),
        }
    }

    pub fn point(&self) -> Result<Vec<Rational>, CliError> {
        let p = self.point.iter().map(Literal::to_rational).collect::<Result<Vec<_>, _>>()?;
        check_point(&p, self.variables.len())?;
        Ok(p)
    }
}

fn check_point(p: &[Rational], n: usize) -> Result<(), CliError> {
    if p.len() != n {
        return Err(CliError::usage(format!("point has {} coordinates, expected {n}", p.len())));
    }
    if p.iter().any(|c| *c == Rational::from_integer(0.into())) {
        return Err(CliError::usage("point coordinates must be nonzero"));
    }
    Ok(())
}

/// Parses `a,b,c` into rationals.
pub fn parse_point(text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',')
        .map(|s| parse_rational(s).map_err(|e| CliError::usage(format!("point coordinate {s:?}: {e}"))))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Engine(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn engine(msg: impl Into<String>) -> Self {
        CliError::Engine(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Engine(_) => EXIT_ENGINE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Engine(m) => f.write_str(m),
        }
    }
}

impl From<ObstructionError> for CliError {
    fn from(e: ObstructionError) -> Self {
        match e {
            ObstructionError::PointLength { .. } | ObstructionError::PointOffTorus(_) => CliError::usage(e.to_string()),
            ObstructionError::NoManifest(_)
            | ObstructionError::Corrupt(_)
            | ObstructionError::VersionMismatch { .. }
            | ObstructionError::Io { .. }
            | ObstructionError::NoTargets(_) => CliError::usage(e.to_string()),
            _ => CliError::engine(e.to_string()),
        }
    }
}

/// One engine's answer in the output document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineResult {
    pub engine: Engine,
    pub degrees: Vec<usize>,
    pub euler_obstruction: i64,
}

impl EngineResult {
    fn from_record(r: &RemovalRecord) -> Result<Self, CliError> {
        let degrees = r.degree_list()?;
        Ok(Self {
            engine: r.engine,
            euler_obstruction: euler_obstruction(r.dimension, &degrees),
            degrees,
        })
    }
}

/// `--json` output: the effective problem plus the results, so it can be
/// fed back as a problem file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOutput {
    #[serde(flatten)]
    pub problem: ProblemFile,
    pub results: Vec<EngineResult>,
}

fn settings_with(tol: f64) -> Result<TrackerSettings, CliError> {
    let settings = TrackerSettings {
        tolerance: tol,
        ..TrackerSettings::default()
    };
    settings.validate().map_err(|e| CliError::usage(e.to_string()))?;
    Ok(settings)
}

/// Runs the parsed command and returns what goes to standard output.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Solve(a) => solve(a),
        Command::Witness(WitnessCommand::Compute(a)) => witness_compute(a),
        Command::Witness(WitnessCommand::Reuse(a)) => witness_reuse(a),
        Command::Reclassify(a) => reclassify(a),
        Command::Euler(a) => euler(a),
    }
}

fn solve(a: &SolveArgs) -> Result<String, CliError> {
    let mut problem = ProblemFile::read(&a.problem)?;
    if let Some(text) = &a.point {
        let p = parse_point(text)?;
        problem.point = p.iter().map(|c| Literal::Text(c.to_string())).collect();
    }
    if let Some(e) = a.engine {
        problem.engine = Some(e);
    }
    if let Some(s) = a.seed {
        problem.seed = Some(s);
    }
    if let Some(t) = a.tol {
        problem.tolerance = t;
    }
    let engine = problem.engine.unwrap_or(EngineChoice::Both);
    let seed = problem.seed.unwrap_or(DEFAULT_SEED);
    problem.engine = Some(engine);
    problem.seed = Some(seed);
    let x = problem.variety()?;
    problem.dimension = Some(x.dimension());
    let p = problem.point()?;
    let settings = settings_with(problem.tolerance)?;

    let mut records = Vec::new();
    if engine != EngineChoice::Numeric {
        records.push(removal_ml_degrees_symbolic(&x, &p, seed, &GbConfig::default())?);
    }
    if engine != EngineChoice::Symbolic {
        let wc = WitnessCollection::compute(&x, seed, &settings)?;
        let targets = wc.track_to(&p)?;
        if let Some(dir) = &problem.witness_dir {
            wc.save(dir)?;
            targets.save(dir)?;
        }
        records.push(targets.record());
    }
    let results = records.iter().map(EngineResult::from_record).collect::<Result<Vec<_>, _>>()?;
    if results.len() == 2 && results[0].degrees != results[1].degrees {
        eprintln!("warning: the engines disagree");
    }
    if a.json {
        return to_json(&SolveOutput { problem, results });
    }
    Ok(table(&p, x.dimension(), &results))
}

fn witness_compute(a: &ComputeArgs) -> Result<String, CliError> {
    let problem = ProblemFile::read(&a.problem)?;
    let dir = a
        .dir
        .clone()
        .or_else(|| problem.witness_dir.clone())
        .ok_or_else(|| CliError::usage("no witness directory given"))?;
    let seed = a.seed.or(problem.seed).unwrap_or(DEFAULT_SEED);
    let settings = settings_with(a.tol.unwrap_or(problem.tolerance))?;
    let x = problem.variety()?;
    let wc = WitnessCollection::compute(&x, seed, &settings)?;
    wc.save(&dir)?;
    let degrees = wc.generic_degrees();
    if a.json {
        return to_json(&serde_json::json!({
            "witness_dir": dir,
            "seed": seed,
            "dimension": x.dimension(),
            "generic_degrees": degrees,
        }));
    }
    Ok(format!(
        "saved witness collection to {}\ngeneric degrees {}\n",
        dir.display(),
        join(&degrees)
    ))
}

fn witness_reuse(a: &ReuseArgs) -> Result<String, CliError> {
    let wc = WitnessCollection::load(&a.dir)?;
    let p = parse_point(&a.point)?;
    check_point(&p, wc.variety().ambient_dimension())?;
    let mut targets = wc.track_to(&p)?;
    if let Some(t) = a.tol {
        check_tolerance(t)?;
        targets = targets.reclassify(t);
    }
    targets.save(&a.dir)?;
    endpoints_output(&targets, a.json)
}

fn reclassify(a: &ReclassifyArgs) -> Result<String, CliError> {
    check_tolerance(a.tol)?;
    let targets = TargetEndpoints::load(&a.dir)?.reclassify(a.tol);
    endpoints_output(&targets, a.json)
}

fn check_tolerance(t: f64) -> Result<(), CliError> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(CliError::usage(format!("tolerance must be positive, got {t}")))
    }
}

fn endpoints_output(targets: &TargetEndpoints, json: bool) -> Result<String, CliError> {
    let result = EngineResult::from_record(&targets.record())?;
    if json {
        return to_json(&serde_json::json!({
            "point": targets.point.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "dimension": targets.dimension,
            "results": [result],
        }));
    }
    Ok(table(&targets.point, targets.dimension, &[result]))
}

fn euler(a: &EulerArgs) -> Result<String, CliError> {
    let degrees = a
        .degrees
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|e| CliError::usage(format!("degree {s:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if degrees.len() != a.dim + 2 {
        return Err(CliError::usage(format!(
            "expected {} degrees r_0..r_{}, got {}",
            a.dim + 2,
            a.dim + 1,
            degrees.len()
        )));
    }
    let eu = euler_obstruction(a.dim, &degrees);
    if a.json {
        return to_json(&serde_json::json!({ "dimension": a.dim, "degrees": degrees, "euler_obstruction": eu }));
    }
    Ok(format!("Eu = {eu}\n"))
}

fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::engine(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn join(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn table(p: &[Rational], dimension: usize, results: &[EngineResult]) -> String {
    let mut out = String::new();
    let point: Vec<String> = p.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "point ({})  dimension {dimension}", point.join(","));
    let _ = write!(out, "{:<10}", "engine");
    for k in 0..=dimension + 1 {
        let _ = write!(out, "{:>6}", format!("r_{k}"));
    }
    let _ = writeln!(out, "{:>6}", "Eu");
    for r in results {
        let _ = write!(out, "{:<10}", r.engine.to_string());
        for d in &r.degrees {
            let _ = write!(out, "{d:>6}");
        }
        let _ = writeln!(out, "{:>6}", r.euler_obstruction);
    }
    out
}

/// Parses `args` (program name first), runs, prints, and returns the exit
/// status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("mlobs").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn euler_subcommand() {
        assert_eq!(execute(&cli(&["euler", "--dim", "2", "--degrees", "3,10,9,1"])).unwrap(), "Eu = 1\n");
        let err = execute(&cli(&["euler", "--dim", "2", "--degrees", "3,10"])).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_USAGE);
    }

    #[test]
    fn bad_arguments_exit_with_one() {
        assert_eq!(run(["mlobs", "solve"]), EXIT_USAGE);
        assert_eq!(run(["mlobs", "frobnicate"]), EXIT_USAGE);
    }

    #[test]
    fn problem_literals() {
        let text = r#"{"variables":["x","y"],"generators":["x+y-3"],"point":[1,"1/2"]}"#;
        let pf: ProblemFile = serde_json::from_str(text).unwrap();
        assert_eq!(pf.tolerance, DEFAULT_TOLERANCE);
        let p = pf.point().unwrap();
        assert_eq!(p[1], Rational::new(1.into(), 2.into()));
        assert_eq!(pf.variety().unwrap().dimension(), 1);
        let zero = r#"{"variables":["x"],"generators":["x-1"],"point":[0]}"#;
        let pf: ProblemFile = serde_json::from_str(zero).unwrap();
        assert_eq!(pf.point().unwrap_err().exit_code(), EXIT_USAGE);
    }

    #[test]
    fn unparsable_generator_is_a_usage_error() {
        let pf = ProblemFile {
            variables: vec!["x".into()],
            generators: vec!["x+*".into()],
            point: vec![Literal::Integer(1)],
            dimension: Some(0),
            engine: None,
            seed: None,
            tolerance: DEFAULT_TOLERANCE,
            witness_dir: None,
        };
        assert_eq!(pf.variety().unwrap_err().exit_code(), EXIT_USAGE);
    }
}

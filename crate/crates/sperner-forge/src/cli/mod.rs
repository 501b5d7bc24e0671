//! Command-line front end. JSON goes to stdout (or `--out`); every failure
//! exits nonzero with `{"error": kind, "message": ...}` on stderr.

pub mod experiments;
pub mod plot;

use crate::base2d::{BaseInstance, BasePoint};
use crate::cake::{audit, Bundling, UtilityModel};
use crate::error::Error;
use crate::lift::{LiftedColoring, Mode, SpernerScope};
use crate::numerics::{parse_rational, Rational};
use crate::recover::recover;
use crate::rect2d::{DenseTable, GeneratorKind, RectInstance};
use crate::simplex::{CutVector, SimplexPoint};
use clap::{Args, Parser, Subcommand, ValueEnum};
use experiments::{bench_queries, run_pipeline, BenchRow, ExperimentConfig};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "sperner-forge", version, about = "Exact approximate-Sperner constructions, recovery and cake-cutting checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rectangular 2D Sperner instances.
    #[command(subcommand)]
    Rect(RectCmd),
    /// The base colouring of Δ².
    #[command(subcommand)]
    Base(BaseCmd),
    /// Lifted colourings of Δ^k.
    #[command(subcommand)]
    Lift(LiftCmd),
    /// Recover a base solution from a JSON triple of Δ^k points.
    Recover {
        #[command(flatten)]
        lift: LiftArgs,
        /// JSON file holding three points (`[{"coords": [...]}, ...]`).
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// rect → base → lift → witnesses → recover → verify.
    Pipeline {
        #[arg(long, value_parser = parse_mode, default_value = "symmetric")]
        mode: Mode,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_kind, default_value = "planted-path")]
        kind: GeneratorKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        witnesses: usize,
        /// Corrupt the colouring (colour k+1 on the face x_{k+1} = 0).
        #[arg(long)]
        corrupt: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The induced cake-cutting instance.
    #[command(subcommand)]
    Cake(CakeCmd),
    /// Oracle query accounting.
    #[command(subcommand)]
    Bench(BenchCmd),
    /// SVG line chart of a query benchmark CSV.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct InstanceArgs {
    #[arg(long, value_parser = parse_kind, default_value = "planted-path")]
    pub kind: GeneratorKind,
    /// Rect resolution exponent; the grid is 2^n × 2^n.
    #[arg(long, default_value_t = 3)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Load a dense table (`{"n": .., "colors": [..]}`) instead of generating.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

impl InstanceArgs {
    pub fn rect(&self) -> Result<RectInstance, Error> {
        match &self.table {
            Some(p) => RectInstance::from_table(read_json::<DenseTable>(p)?),
            None => RectInstance::generate(self.kind, self.n, self.seed),
        }
    }

    pub fn base(&self) -> Result<BaseInstance, Error> {
        BaseInstance::new(self.rect()?)
    }
}

#[derive(Args, Debug, Clone)]
pub struct LiftArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, value_parser = parse_mode, default_value = "symmetric")]
    pub mode: Mode,
    #[arg(long)]
    pub k: usize,
}

impl LiftArgs {
    pub fn coloring(&self) -> Result<LiftedColoring, Error> {
        LiftedColoring::new(self.mode, self.k, self.instance.base()?)
    }
}

#[derive(Subcommand, Debug)]
pub enum RectCmd {
    /// Generate an instance and print it with its planted solution.
    Gen {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the boundary contract.
    Validate {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Brute-force a solution cell.
    Solve {
        #[command(flatten)]
        instance: InstanceArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum BaseCmd {
    /// Colour of a point of Δ² (`--point x1,x2,x3`).
    Eval {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        point: String,
    },
    /// Nearest-switch probe, converted coordinate and neighbourhood palette.
    Probe {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        point: String,
        /// Use the shrunk converter.
        #[arg(long)]
        alpha: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ScopeArg {
    Exhaustive,
    Faces,
    Random,
}

#[derive(Subcommand, Debug)]
pub enum LiftCmd {
    /// Colour of a point of Δ^k.
    Eval {
        #[command(flatten)]
        lift: LiftArgs,
        #[arg(long)]
        point: String,
    },
    /// Full trace of one evaluation.
    Trace {
        #[command(flatten)]
        lift: LiftArgs,
        #[arg(long)]
        point: String,
    },
    /// Sperner condition over grid points of Δ^k_m.
    CheckSperner {
        #[command(flatten)]
        lift: LiftArgs,
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value = "faces")]
        scope: ScopeArg,
        #[arg(long, default_value_t = 10_000)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        sample_seed: u64,
        #[arg(long)]
        corrupt: bool,
    },
    /// Symmetric-Sperner condition over zero-insertion pairs.
    CheckSymmetry {
        #[command(flatten)]
        lift: LiftArgs,
        #[arg(long)]
        m: u32,
        /// Insertion pairs like `1:2,2:4`; all pairs when omitted.
        #[arg(long)]
        pairs: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CakeCmd {
    /// ε-approximate envy-freeness of one cut and bundling.
    Check {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        m: u32,
        /// JSON `{"cuts", "bundles", "assignment", "epsilon", "required"}`.
        #[arg(long)]
        input: PathBuf,
    },
    /// Run the utility invariant suite and write a CSV report.
    Audit {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        m: u32,
        #[arg(long, default_value_t = 10_000)]
        pairs: u64,
        #[arg(long, default_value_t = 0)]
        sample_seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum BenchCmd {
    /// Base-oracle queries per symmetric evaluation, for a range of k.
    Queries {
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        k_min: usize,
        #[arg(long, default_value_t = 8)]
        k_max: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        tolerance: f64,
        /// CSV output (stdout when omitted; the JSON summary then goes to stderr).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Deserialize)]
struct CakeCheckInput {
    cuts: Vec<String>,
    bundles: Vec<Vec<usize>>,
    assignment: Vec<usize>,
    epsilon: String,
    required: usize,
}

#[derive(Debug, Serialize)]
struct AuditCsvRow<'a> {
    check: &'a str,
    checked: u64,
    violations: u64,
}

/// A failure the CLI reports: a library error or a failed check.
#[derive(Debug)]
pub enum CliError {
    Core(Error),
    CheckFailed(Value),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn to_json(&self) -> Value {
        match self {
            CliError::Core(e) => json!({"error": e.kind(), "message": e.to_string()}),
            CliError::CheckFailed(v) => json!({"error": "check_failed", "message": "verification failed", "report": v}),
            CliError::Usage(m) => json!({"error": "usage", "message": m}),
        }
    }
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<GeneratorKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, Error> {
    let text = std::fs::read_to_string(path).map_err(io_err)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(io_err),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{}", text.trim_end()) {
                // a closed downstream pipe (`| head`) is not an error
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r.map_err(io_err),
            }
        }
    }
}

fn emit_json(v: &impl Serialize, out: Option<&PathBuf>) -> Result<(), Error> {
    emit(&serde_json::to_string_pretty(v).map_err(io_err)?, out)
}

pub fn parse_list(s: &str) -> Result<Vec<Rational>, Error> {
    s.split(',').map(parse_rational).collect()
}

fn parse_point(s: &str) -> Result<SimplexPoint, Error> {
    SimplexPoint::new(parse_list(s)?)
}

fn parse_pairs(s: &str) -> Result<Vec<(usize, usize)>, Error> {
    s.split(',')
        .map(|p| {
            let (a, b) = p.split_once(':').ok_or_else(|| Error::Parse(format!("pair {p:?} is not i:j")))?;
            let a = a.trim().parse().map_err(|_| Error::Parse(format!("bad index in {p:?}")))?;
            let b = b.trim().parse().map_err(|_| Error::Parse(format!("bad index in {p:?}")))?;
            if a >= b {
                return Err(Error::InvalidInput(format!("pair {p:?} needs i < j")));
            }
            Ok((a, b))
        })
        .collect()
}

fn check(ok: bool, report: Value) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::CheckFailed(report))
    }
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Rect(cmd) => match cmd {
            RectCmd::Gen { instance, out } => {
                let r = instance.rect()?;
                let mut v = json!({
                    "kind": instance.kind,
                    "n": r.n(),
                    "seed": instance.seed,
                    "planted_solution": r.planted_solution(),
                });
                if r.n() <= crate::rect2d::MAX_TABLE_N {
                    v["table"] = serde_json::to_value(r.to_table()).map_err(io_err)?;
                }
                emit_json(&v, out.as_ref())?;
            }
            RectCmd::Validate { instance } => {
                let v = instance.rect()?.validate_boundary();
                let report = json!({"ok": v.is_empty(), "violations": v});
                emit_json(&report, None)?;
                check(v.is_empty(), report)?;
            }
            RectCmd::Solve { instance } => {
                let r = instance.rect()?;
                let s = r.solve_bruteforce()?;
                emit_json(&json!({"solution": s, "queries": r.queries()}), None)?;
            }
        },
        Command::Base(cmd) => match cmd {
            BaseCmd::Eval { instance, point } => {
                let base = instance.base()?;
                let x = parse_point(&point)?;
                let c = base.color_simplex(&x)?;
                emit_json(&json!({"color": c, "queries": base.queries()}), None)?;
            }
            BaseCmd::Probe { instance, point, alpha } => {
                let base = instance.base()?;
                let y = BasePoint::from_simplex(&parse_point(&point)?)?;
                let (probe, rel) = if alpha {
                    let ctx = crate::converter_sym::ShrinkContext::new(base.clone());
                    let p = ctx.nearest_switch_alpha(&y)?;
                    let r = base.rel_from_probe(&p);
                    (p, r)
                } else {
                    let p = base.nearest_switch(&y)?;
                    let r = base.rel_from_probe(&p);
                    (p, r)
                };
                let hat = BaseInstance::cnn_hat_from_probe(&probe);
                let palette = base.neighborhood_palette(&y)?;
                emit_json(&json!({"probe": probe, "rel": rel, "cnn_hat": hat, "palette": palette}), None)?;
            }
        },
        Command::Lift(cmd) => match cmd {
            LiftCmd::Eval { lift, point } => {
                let c = lift.coloring()?.eval(&parse_point(&point)?)?;
                emit_json(&json!({"color": c}), None)?;
            }
            LiftCmd::Trace { lift, point } => {
                let t = lift.coloring()?.trace(&parse_point(&point)?)?;
                emit_json(&t, None)?;
            }
            LiftCmd::CheckSperner { lift, m, scope, count, sample_seed, corrupt } => {
                let lc = lift.coloring()?;
                let lc = if corrupt { lc.corrupted() } else { lc };
                let scope = match scope {
                    ScopeArg::Exhaustive => SpernerScope::Exhaustive,
                    ScopeArg::Faces => SpernerScope::Faces,
                    ScopeArg::Random => SpernerScope::RandomInterior { count, seed: sample_seed },
                };
                let r = lc.validate_sperner_condition(m, scope)?;
                let v = serde_json::to_value(&r).map_err(io_err)?;
                emit_json(&v, None)?;
                check(r.ok(), v)?;
            }
            LiftCmd::CheckSymmetry { lift, m, pairs } => {
                let pairs = pairs.as_deref().map(parse_pairs).transpose()?;
                let r = lift.coloring()?.check_symmetry(m, pairs.as_deref())?;
                let v = serde_json::to_value(&r).map_err(io_err)?;
                emit_json(&v, None)?;
                check(r.ok(), v)?;
            }
        },
        Command::Recover { lift, input, out } => {
            let pts: Vec<SimplexPoint> = read_json(&input)?;
            let triple: [SimplexPoint; 3] =
                pts.try_into().map_err(|_| Error::InvalidInput("expected exactly three points".into()))?;
            let o = recover(&lift.coloring()?, &triple)?;
            emit_json(&o, out.as_ref())?;
        }
        Command::Pipeline { mode, k, n, kind, seed, witnesses, corrupt, out } => {
            let cfg = ExperimentConfig { mode, k, n, kind, seed, witnesses, corrupt };
            let r = run_pipeline(&cfg)?;
            emit_json(&r, out.as_ref())?;
            check(r.all_verified, json!({"sperner_violations": r.sperner_violations, "all_verified": false}))?;
        }
        Command::Cake(cmd) => match cmd {
            CakeCmd::Check { instance, k, m, input } => {
                let model = UtilityModel::new(LiftedColoring::new(Mode::Symmetric, k, instance.base()?)?, m)?;
                let inp: CakeCheckInput = read_json(&input)?;
                let cuts = CutVector::new(inp.cuts.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?)?;
                let b = Bundling::new(inp.bundles, inp.assignment)?;
                let r = model.check_ef(&cuts, &b, &parse_rational(&inp.epsilon)?, inp.required)?;
                emit_json(&r, None)?;
            }
            CakeCmd::Audit { instance, k, m, pairs, sample_seed, out } => {
                let model = UtilityModel::new(LiftedColoring::new(Mode::Symmetric, k, instance.base()?)?, m)?;
                let rows = audit(&model, pairs, sample_seed)?;
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in &rows {
                    w.serialize(AuditCsvRow { check: &r.check, checked: r.checked, violations: r.violations }).map_err(io_err)?;
                }
                let text = String::from_utf8(w.into_inner().map_err(io_err)?).map_err(io_err)?;
                emit(&text, out.as_ref())?;
                let ok = rows.iter().all(|r| r.violations == 0);
                check(ok, serde_json::to_value(&rows).map_err(io_err)?)?;
            }
        },
        Command::Bench(BenchCmd::Queries { n, k_min, k_max, samples, seed, tolerance, out }) => {
            if k_min > k_max {
                return Err(CliError::Usage("k-min must not exceed k-max".into()));
            }
            let ks: Vec<usize> = (k_min..=k_max).collect();
            let s = bench_queries(n, &ks, samples, seed, tolerance)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &s.rows {
                w.serialize(r).map_err(io_err)?;
            }
            let text = String::from_utf8(w.into_inner().map_err(io_err)?).map_err(io_err)?;
            let summary = json!({
                "slope": s.slope,
                "intercept": s.intercept,
                "max_rel_residual": s.max_rel_residual,
                "tolerance": s.tolerance,
                "linear_ok": s.linear_ok,
            });
            if out.is_some() {
                emit(&text, out.as_ref())?;
                emit_json(&summary, None)?;
            } else {
                emit(&text, None)?;
                eprintln!("{summary}");
            }
            check(s.linear_ok, summary)?;
        }
        Command::Plot { input, out } => {
            let mut rdr = csv::Reader::from_path(&input).map_err(io_err)?;
            let rows = rdr.deserialize::<BenchRow>().collect::<Result<Vec<_>, _>>().map_err(|e| Error::Parse(e.to_string()))?;
            if rows.is_empty() {
                return Err(Error::InvalidInput("benchmark CSV has no rows".into()).into());
            }
            emit(&plot::bench_svg(&rows), out.as_ref())?;
        }
    }
    Ok(())
}

/// Parses `args`, runs the command, reports failures; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                return 0;
            }
            eprintln!("{}", CliError::Usage(e.to_string()).to_json());
            return 2;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            1
        }
    }
}

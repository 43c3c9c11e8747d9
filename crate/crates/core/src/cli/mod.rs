//! Command-line front end.
//!
//! Exit codes: 0 success / check passed, 1 check failed, 2 invalid flags,
//! 3 parameter outside its domain, 4 output path not writable.

pub mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::chain::{ChainParams, InitialDistribution};
use crate::error::Error;
use crate::laws::limiting_law;
use crate::lis::{rsk_shape, LatticeWalk};
use crate::montecarlo::{
    ks_statistic, li_trials, run_drift_experiment, run_moment_check, run_shape_experiment, EmpiricalDistribution,
    ExperimentConfig, ExperimentKind,
};
use output::{parse_records, validate_rows, write_records, Format, Record};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_OUTPUT: i32 = 4;

/// Standard errors allowed between Monte Carlo and exact moments.
const MOMENT_SIGMAS: f64 = 5.0;
/// Standard errors allowed above the drifted-maximum tail bound.
const DRIFT_SIGMAS: f64 = 3.0;

#[derive(Debug, Parser)]
#[command(
    name = "markov-lis",
    version,
    about = "LIS of binary Markov random words: sampling, exact laws, Monte Carlo checks"
)]
#[command(args_conflicts_with_subcommands = true, arg_required_else_help = true)]
struct Cli {
    /// Re-parse an output file and re-check its schema invariants.
    #[arg(long, value_name = "PATH")]
    validate: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a word and optionally its walk and RSK shape.
    Simulate(SimulateArgs),
    /// Describe the limiting law and tabulate its density and CDF.
    Laws(LawsArgs),
    /// Run a Monte Carlo experiment and write its records.
    Experiment(ExperimentArgs),
    /// Same as the top-level --validate.
    Validate { path: PathBuf },
}

#[derive(Debug, Args)]
struct ChainArgs {
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Init {
    Stationary,
    Point1,
    Point2,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    chain: ChainArgs,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value = "stationary")]
    init: Init,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Add prefix counts and the walk S_k.
    #[arg(long)]
    walk: bool,
    /// Add the RSK row lengths of the whole word.
    #[arg(long)]
    shape: bool,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy)]
struct Grid {
    min: f64,
    max: f64,
    step: f64,
}

impl Grid {
    fn points(&self) -> Vec<f64> {
        let count = ((self.max - self.min) / self.step + 1e-9).floor() as usize;
        (0..=count).map(|i| self.min + i as f64 * self.step).collect()
    }
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [min, max, step] = parts.as_slice() else {
        return Err("expected min:max:step".into());
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let grid = Grid {
        min: num(min)?,
        max: num(max)?,
        step: num(step)?,
    };
    if !(grid.step > 0.0) || !(grid.max >= grid.min) || !grid.min.is_finite() || !grid.max.is_finite() {
        return Err("need min <= max and step > 0".into());
    }
    if (grid.max - grid.min) / grid.step > 1e6 {
        return Err("grid has more than 10^6 points".into());
    }
    Ok(grid)
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LawsFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct LawsArgs {
    #[command(flatten)]
    chain: ChainArgs,
    /// Tabulate density and CDF on min:max:step.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    grid: Option<Grid>,
    #[arg(long, value_enum, default_value = "text")]
    format: LawsFormat,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    LiLaw,
    ShapeJoint,
    MomentCheck,
    DriftVanish,
}

impl From<KindArg> for ExperimentKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::LiLaw => ExperimentKind::LiLaw,
            KindArg::ShapeJoint => ExperimentKind::ShapeJoint,
            KindArg::MomentCheck => ExperimentKind::MomentCheck,
            KindArg::DriftVanish => ExperimentKind::DriftVanish,
        }
    }
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[command(flatten)]
    chain: ChainArgs,
    /// Word length (the largest one for drift-vanish when --n-list is absent).
    #[arg(long)]
    n: usize,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, default_value_t = 0.02)]
    ks_threshold: f64,
    /// moment-check: walk indices (default 1, 2, 5, 10, ... up to n).
    #[arg(long, value_delimiter = ',')]
    k_list: Option<Vec<usize>>,
    /// drift-vanish: word lengths (default n/100, n/10, n).
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
    /// drift-vanish: exceedance threshold.
    #[arg(long, default_value_t = 0.25)]
    z: f64,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Internal(_) => EXIT_FAIL,
            _ => EXIT_DOMAIN,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn output_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_OUTPUT,
        message: format!("cannot write {}: {e}", path.display()),
    }
}

/// Runs the CLI on `args` (including the program name), writing the report to
/// `stdout` and diagnostics to `stderr`. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    let result = match (cli.validate, cli.command) {
        (Some(path), _) | (None, Some(Command::Validate { path })) => validate(&path, stdout),
        (None, Some(Command::Simulate(args))) => simulate(&args, stdout),
        (None, Some(Command::Laws(args))) => laws(&args, stdout),
        (None, Some(Command::Experiment(args))) => experiment(&args, stdout),
        (None, None) => Err(Failure {
            code: EXIT_USAGE,
            message: "nothing to do".into(),
        }),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn chain(args: &ChainArgs) -> Result<ChainParams, Failure> {
    Ok(ChainParams::new(args.a, args.b)?)
}

fn emit(records: &[Record], format: Format, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| output_failure(path, e))?;
            let mut w = BufWriter::new(file);
            write_records(&mut w, records, format)
                .and_then(|_| w.flush())
                .map_err(|e| output_failure(path, e))
        }
        None => write_records(stdout, records, format).map_err(|e| output_failure(Path::new("<stdout>"), e)),
    }
}

fn simulate(args: &SimulateArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let params = chain(&args.chain)?;
    let (init, init_name) = match args.init {
        Init::Stationary => (InitialDistribution::stationary(&params), "stationary"),
        Init::Point1 => (InitialDistribution::point(1)?, "point1"),
        Init::Point2 => (InitialDistribution::point(2)?, "point2"),
    };
    let word = params.sample_word(&init, args.n, args.seed);
    let walk = args.walk.then(|| LatticeWalk::new(&word));
    let shape = args.shape.then(|| rsk_shape(&word));
    let records: Vec<Record> = word
        .letters()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let k = i + 1;
            let mut rec = Record::new("simulate")
                .with("a", params.a())
                .with("b", params.b())
                .with("n", args.n)
                .with("seed", args.seed)
                .with("init", init_name)
                .with("index", k)
                .with("letter", x as usize);
            if let Some(w) = &walk {
                rec = rec
                    .with("count1", w.count(k, 1) as usize)
                    .with("count2", w.count(k, 2) as usize)
                    .with("s", crate::cli::output::Field::Int(w.s(k, 1)));
            }
            if let Some(s) = &shape {
                rec = rec.with("r1", s.row(0)).with("r2", s.row(1));
            }
            rec
        })
        .collect();
    emit(&records, args.format, args.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

fn laws(args: &LawsArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let params = chain(&args.chain)?;
    let asym = limiting_law(&params);
    let (scale, variance) = match asym.law {
        crate::laws::LimitLaw::BrownianFunctional { scale } => (Some(scale), None),
        crate::laws::LimitLaw::CenteredNormal { variance } => (None, Some(variance)),
        crate::laws::LimitLaw::DegenerateAtZero => (None, None),
    };
    let base = || {
        Record::new("laws")
            .with("a", params.a())
            .with("b", params.b())
            .with("law", asym.law.kind())
            .with("centering_rate", asym.centering_rate)
            .with("scaling", "sqrt(n)")
            .with("scale", scale)
            .with("variance", variance)
    };
    let cdf = asym.law.cdf_fn();
    let table: Vec<(f64, f64, f64)> = args
        .grid
        .map(|g| {
            g.points()
                .into_iter()
                .map(|y| (y, asym.law.density(y), cdf(y)))
                .collect()
        })
        .unwrap_or_default();

    let io = |e| output_failure(Path::new("<stdout>"), e);
    match args.format {
        LawsFormat::Text => {
            writeln!(stdout, "kind={}", asym.law.kind()).map_err(io)?;
            let centering = if asym.centering_rate == 0.5 {
                "n/2".to_string()
            } else {
                format!("{:.17}*n", asym.centering_rate)
            };
            writeln!(stdout, "centering={centering}").map_err(io)?;
            writeln!(stdout, "scaling=sqrt(n)").map_err(io)?;
            if let Some(s) = scale {
                writeln!(stdout, "scale={}", trim_float(s)).map_err(io)?;
            }
            if let Some(v) = variance {
                writeln!(stdout, "variance={}", trim_float(v)).map_err(io)?;
            }
            if !table.is_empty() {
                writeln!(stdout, "y,density,cdf").map_err(io)?;
                for (y, d, c) in &table {
                    writeln!(stdout, "{y:.16e},{d:.16e},{c:.16e}").map_err(io)?;
                }
            }
        }
        LawsFormat::Json | LawsFormat::Csv => {
            let format = if matches!(args.format, LawsFormat::Json) {
                Format::Json
            } else {
                Format::Csv
            };
            let records: Vec<Record> = if table.is_empty() {
                vec![base().with("y", None).with("density", None).with("cdf", None)]
            } else {
                table
                    .iter()
                    .map(|&(y, d, c)| base().with("y", y).with("density", d).with("cdf", c))
                    .collect()
            };
            emit(&records, format, None, stdout)?;
        }
    }
    Ok(EXIT_OK)
}

/// Six significant digits without trailing zeros, for human-readable lines.
fn trim_float(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".into()
    } else {
        s.into()
    }
}

fn experiment(args: &ExperimentArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let params = chain(&args.chain)?;
    let kind = ExperimentKind::from(args.kind);
    let cfg = ExperimentConfig::new(params, args.n, args.trials, args.seed, kind)?;
    if kind == ExperimentKind::DriftVanish && params.is_symmetric() {
        return Err(Error::invalid("drift-vanish requires a != b").into());
    }
    // fail on an unwritable path before spending time on trials
    File::create(&args.out).map_err(|e| output_failure(&args.out, e))?;

    let echo = |kind: &str| {
        Record::new(kind)
            .with("a", params.a())
            .with("b", params.b())
            .with("n", args.n)
            .with("trials", args.trials)
            .with("seed", args.seed)
    };
    let io = |e| output_failure(Path::new("<stdout>"), e);
    let (records, passed) = match kind {
        ExperimentKind::LiLaw => {
            let asym = limiting_law(&params);
            let trials = li_trials(&cfg)?;
            let records = trials
                .iter()
                .enumerate()
                .map(|(t, tr)| {
                    echo(kind.as_str())
                        .with("trial", t)
                        .with("li", tr.li)
                        .with("centering", asym.centering(args.n))
                        .with("scaled", tr.scaled)
                })
                .collect::<Vec<_>>();
            let emp = EmpiricalDistribution::new(trials.iter().map(|t| t.scaled).collect())?;
            let passed = law_check(&emp, &asym.law, args.n, args.ks_threshold, stdout).map_err(io)?;
            (records, passed)
        }
        ExperimentKind::ShapeJoint => {
            let asym = limiting_law(&params);
            let shapes = run_shape_experiment(&cfg)?;
            let records = shapes
                .trials
                .iter()
                .enumerate()
                .map(|(t, s)| {
                    echo(kind.as_str())
                        .with("trial", t)
                        .with("r1", s.r1)
                        .with("r2", s.r2)
                        .with("scaled1", s.scaled1)
                        .with("scaled2", s.scaled2)
                })
                .collect::<Vec<_>>();
            let cancel = shapes.trials.iter().all(|s| s.scaled1 + s.scaled2 == 0.0);
            writeln!(stdout, "rows_cancel={cancel}").map_err(io)?;
            let passed =
                law_check(&shapes.first_marginal()?, &asym.law, args.n, args.ks_threshold, stdout).map_err(io)?;
            (records, passed && cancel)
        }
        ExperimentKind::MomentCheck => {
            let ks = match &args.k_list {
                Some(ks) => ks.clone(),
                None => default_k_list(args.n),
            };
            let rows = run_moment_check(&cfg, &ks)?;
            writeln!(
                stdout,
                "k,mc_mean,exact_mean,mean_se,mc_var,exact_var,var_se,within_{MOMENT_SIGMAS}se"
            )
            .map_err(io)?;
            for r in &rows {
                writeln!(
                    stdout,
                    "{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{}",
                    r.k,
                    r.mc_mean,
                    r.exact_mean,
                    r.mean_se,
                    r.mc_var,
                    r.exact_var,
                    r.var_se,
                    r.within(MOMENT_SIGMAS)
                )
                .map_err(io)?;
            }
            let passed = rows.iter().all(|r| r.within(MOMENT_SIGMAS));
            let records = rows
                .iter()
                .map(|r| {
                    echo(kind.as_str())
                        .with("k", r.k)
                        .with("mc_mean", r.mc_mean)
                        .with("exact_mean", r.exact_mean)
                        .with("mean_se", r.mean_se)
                        .with("mc_var", r.mc_var)
                        .with("exact_var", r.exact_var)
                        .with("var_se", r.var_se)
                })
                .collect();
            (records, passed)
        }
        ExperimentKind::DriftVanish => {
            let ns = match &args.n_list {
                Some(ns) => ns.clone(),
                None => default_n_list(args.n),
            };
            let rows = run_drift_experiment(&params, &ns, args.z, args.trials, args.seed)?;
            writeln!(stdout, "n,c_n,exceedance,se,bound").map_err(io)?;
            for r in &rows {
                let bound = r.bound.map_or("-".to_string(), |b| format!("{b:.6}"));
                writeln!(stdout, "{},{:.6},{:.6},{:.6},{}", r.n, r.c_n, r.exceedance, r.se, bound).map_err(io)?;
            }
            let monotone = rows.windows(2).all(|w| w[1].exceedance <= w[0].exceedance);
            let bounded = rows.iter().all(|r| r.respects_bound(DRIFT_SIGMAS));
            writeln!(stdout, "nonincreasing={monotone} within_bound={bounded}").map_err(io)?;
            let records = rows
                .iter()
                .map(|r| {
                    Record::new(kind.as_str())
                        .with("a", params.a())
                        .with("b", params.b())
                        .with("n", r.n)
                        .with("trials", args.trials)
                        .with("seed", args.seed)
                        .with("z", r.z)
                        .with("c_n", r.c_n)
                        .with("exceedance", r.exceedance)
                        .with("se", r.se)
                        .with("bound", r.bound)
                })
                .collect();
            (records, monotone && bounded)
        }
    };
    emit(&records, args.format, Some(&args.out), stdout)?;
    writeln!(stdout, "result={}", if passed { "PASS" } else { "FAIL" }).map_err(io)?;
    Ok(if passed { EXIT_OK } else { EXIT_FAIL })
}

/// KS distance to the limit law, or, for a point mass, the largest
/// standardized deviation against `1/sqrt(n)`.
fn law_check(
    emp: &EmpiricalDistribution,
    law: &crate::laws::LimitLaw,
    n: usize,
    threshold: f64,
    stdout: &mut dyn Write,
) -> std::io::Result<bool> {
    if law.is_degenerate() {
        let worst = emp.samples().iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let limit = 1.0 / (n as f64).sqrt();
        writeln!(stdout, "law={} max_abs_scaled={worst:.6} limit={limit:.6}", law.kind())?;
        return Ok(worst <= limit + 1e-12);
    }
    let cdf = law.cdf_fn();
    let ks = ks_statistic(emp, cdf).expect("nonempty sample");
    writeln!(
        stdout,
        "law={} D={:.6} N={} threshold={threshold}",
        law.kind(),
        ks.statistic,
        ks.n
    )?;
    Ok(ks.passes(threshold))
}

fn default_k_list(n: usize) -> Vec<usize> {
    let mut ks: Vec<usize> = [1usize, 2, 5]
        .iter()
        .flat_map(|&m| (0..19).map(move |p| m * 10usize.pow(p)))
        .filter(|&k| k <= n)
        .collect();
    ks.push(n);
    ks.sort_unstable();
    ks.dedup();
    ks
}

fn default_n_list(n: usize) -> Vec<usize> {
    let mut ns: Vec<usize> = [n / 100, n / 10, n].into_iter().filter(|&m| m > 0).collect();
    ns.dedup();
    ns
}

fn validate(path: &Path, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_FAIL,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    let outcome = parse_records(&text).and_then(|rows| validate_rows(&rows));
    let io = |e| output_failure(Path::new("<stdout>"), e);
    match outcome {
        Ok(count) => {
            writeln!(stdout, "valid: {count} records").map_err(io)?;
            Ok(EXIT_OK)
        }
        Err(msg) => {
            writeln!(stdout, "invalid: {msg}").map_err(io)?;
            Ok(EXIT_FAIL)
        }
    }
}

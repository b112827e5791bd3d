//! Batch front end: projections, pairings, transforms, and verification
//! runs, with CSV or JSON reports.
//!
//! Exit codes: 0 on success, 1 when a verification suite fails, 2 on usage,
//! parse, or evaluation errors. Errors are emitted as one JSON object on
//! stderr. Identical configurations produce byte-identical reports; CSV
//! floats are printed with 17 significant digits. The environment variable
//! UF_THREADS caps the number of worker threads used across ladder levels.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ExprError, UfError, UfResult};
use crate::grid::{GridKind, GridParams};
use crate::levels::{shadow, shadow_extrapolated, HyperScalar, LevelLadder, ShadowValue};
use crate::projection::{
    catalog, distributional_fourier, pair, project_function, validate_growth, DistributionSpec,
    ProjWarning, QuadratureConfig, SlowFunction,
};
use crate::verify::{run_suite, CheckResult, Suite};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "ultrafn",
    version,
    about = "Desk-scale tempered ultrafunction calculus: projections, delta kernels, hyperfinite Fourier transforms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Project a function onto the level spaces and report samples or
    /// coefficients with a convergence summary
    Project(ProjectArgs),
    /// Pair a distribution with a test function across the ladder and
    /// estimate the shadow of the result
    Pair(PairArgs),
    /// Fourier transform of a function or distribution on the frequency
    /// lattice
    Fourier(FourierArgs),
    /// Run the identity suites and report residuals
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GridVariant {
    Paper,
    Symmetric,
}

impl From<GridVariant> for GridKind {
    fn from(v: GridVariant) -> GridKind {
        match v {
            GridVariant::Paper => GridKind::Paper,
            GridVariant::Symmetric => GridKind::Symmetric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Comma-separated ladder of levels
    #[arg(long, default_value = "4,8,16,32", value_name = "N,N,...")]
    levels: String,
    /// Lattice variant
    #[arg(long, value_enum, default_value_t = GridVariant::Paper)]
    grid: GridVariant,
    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long, short = 'o', value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
struct QuadArgs {
    /// Initial quadrature samples per lattice cell
    #[arg(long, default_value_t = 8)]
    oversampling: u32,
    /// Relative coefficient change at which refinement stops
    #[arg(long, default_value_t = 1e-10)]
    refine_tol: f64,
    /// Maximum number of sampling-rate doublings
    #[arg(long, default_value_t = 6)]
    max_doublings: u32,
}

impl From<QuadArgs> for QuadratureConfig {
    fn from(q: QuadArgs) -> QuadratureConfig {
        QuadratureConfig {
            oversampling: q.oversampling,
            refine_tol: q.refine_tol,
            max_doublings: q.max_doublings,
        }
    }
}

#[derive(Args)]
struct ProjectArgs {
    /// Expression for the function of x
    #[arg(long = "fn", value_name = "EXPR")]
    function: String,
    /// Emit lattice-independent samples over --range, or the coefficient
    /// table
    #[arg(long, value_enum, default_value_t = Emit::Samples)]
    emit: Emit,
    /// Sample range start:stop:step
    #[arg(long, default_value = "-3:3:0.01", value_name = "A:B:STEP")]
    range: String,
    /// Declared growth order of the function
    #[arg(long, default_value_t = 3)]
    order: u32,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Samples,
    Coeffs,
}

#[derive(Args)]
struct PairArgs {
    /// Catalog name (dirac, heaviside, sign, delta_prime) or path to a
    /// distribution JSON file
    #[arg(long, value_name = "NAME|PATH")]
    dist: String,
    /// Test function expression
    #[arg(long, value_name = "EXPR")]
    test: String,
    /// Tolerance for the shadow estimate across the ladder
    #[arg(long, default_value_t = 1e-6)]
    shadow_tol: f64,
    /// Use one Richardson extrapolation step for the shadow
    #[arg(long)]
    extrapolate: bool,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct FourierArgs {
    /// Expression to transform (projects it first)
    #[arg(long = "fn", value_name = "EXPR", conflicts_with = "dist")]
    function: Option<String>,
    /// Distribution to transform: catalog name or JSON path
    #[arg(long, value_name = "NAME|PATH")]
    dist: Option<String>,
    /// Report only at these frequencies (nearest lattice point, with offset)
    #[arg(long, value_name = "K,K,...")]
    at: Option<String>,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which identity suite to run
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Grid,
    Delta,
    Fourier,
    Projection,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Grid => Suite::Grid,
            SuiteArg::Delta => Suite::Delta,
            SuiteArg::Fourier => Suite::Fourier,
            SuiteArg::Projection => Suite::Projection,
            SuiteArg::All => Suite::All,
        }
    }
}

/// Resolved run configuration shared by all commands.
struct RunConfig {
    ladder: LevelLadder,
    kind: GridKind,
    format: Format,
    output: Option<PathBuf>,
}

impl RunConfig {
    fn from_common(common: &CommonArgs) -> UfResult<RunConfig> {
        let levels: Vec<u32> = common
            .levels
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                s.trim()
                    .parse::<u32>()
                    .map_err(|_| UfError::Usage(format!("invalid level `{s}` in --levels")))
            })
            .collect::<UfResult<_>>()?;
        let ladder = LevelLadder::new(levels)
            .map_err(|e| UfError::Usage(format!("invalid --levels: {e}")))?;
        Ok(RunConfig {
            ladder,
            kind: common.grid.into(),
            format: common.format,
            output: common.output.clone(),
        })
    }

    fn write_report(&self, text: &str) -> UfResult<()> {
        match &self.output {
            Some(path) => std::fs::write(path, text)?,
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
            }
        }
        Ok(())
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            // help and version are not errors
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            emit_error("usage", &e.to_string(), None);
            return 2;
        }
    };
    let pool = match build_pool() {
        Ok(pool) => pool,
        Err(msg) => {
            emit_error("usage", &msg, None);
            return 2;
        }
    };
    let outcome = pool.install(|| match cli.command {
        Command::Project(args) => cmd_project(args),
        Command::Pair(args) => cmd_pair(args),
        Command::Fourier(args) => cmd_fourier(args),
        Command::Verify(args) => cmd_verify(args),
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let (kind, offset) = classify_error(&e);
            emit_error(kind, &e.to_string(), offset);
            2
        }
    }
}

fn build_pool() -> Result<rayon::ThreadPool, String> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("UF_THREADS") {
        let threads: usize = v
            .parse()
            .map_err(|_| format!("UF_THREADS must be a positive integer, got `{v}`"))?;
        if threads == 0 {
            return Err("UF_THREADS must be >= 1".to_string());
        }
        builder = builder.num_threads(threads);
    }
    builder.build().map_err(|e| e.to_string())
}

fn classify_error(e: &UfError) -> (&'static str, Option<usize>) {
    match e {
        UfError::Usage(_) | UfError::InvalidLadder(_) => ("usage", None),
        UfError::Expr(ExprError::Syntax { offset, .. }) => ("parse", Some(*offset)),
        UfError::Expr(ExprError::UnknownFunction { offset, .. }) => ("parse", Some(*offset)),
        UfError::Expr(_) => ("eval", None),
        UfError::EvaluationFailure { .. } => ("eval", None),
        UfError::Io(_) => ("io", None),
        UfError::Json(_) => ("parse", None),
        _ => ("error", None),
    }
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    schema: u32,
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    offset: Option<usize>,
}

fn emit_error(kind: &str, message: &str, offset: Option<usize>) {
    let report = ErrorReport {
        schema: SCHEMA_VERSION,
        error: ErrorBody {
            kind,
            message,
            offset,
        },
    };
    eprintln!(
        "{}",
        serde_json::to_string(&report).expect("error report serializes")
    );
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_range(spec: &str) -> UfResult<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(UfError::Usage(format!(
            "--range must be A:B:STEP, got `{spec}`"
        )));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| UfError::Usage(format!("invalid number `{s}` in --range")))
        })
        .collect::<UfResult<_>>()?;
    let (a, b, step) = (nums[0], nums[1], nums[2]);
    if step <= 0.0 || b < a {
        return Err(UfError::Usage("range needs B >= A and STEP > 0".into()));
    }
    let count = ((b - a) / step).round() as usize;
    Ok((0..=count).map(|j| a + j as f64 * step).collect())
}

fn load_distribution(spec: &str) -> UfResult<DistributionSpec> {
    if spec.ends_with(".json") || Path::new(spec).exists() {
        let text = std::fs::read_to_string(spec)?;
        Ok(serde_json::from_str(&text)?)
    } else {
        catalog(spec)
    }
}

#[derive(Serialize)]
struct ComplexRepr {
    re: f64,
    im: f64,
}

impl From<Complex64> for ComplexRepr {
    fn from(z: Complex64) -> Self {
        ComplexRepr { re: z.re, im: z.im }
    }
}

fn warning_strings(warnings: &[ProjWarning]) -> Vec<String> {
    warnings.iter().map(|w| w.to_string()).collect()
}

// --- project ---------------------------------------------------------------

#[derive(Serialize)]
struct ProjectReport {
    schema: u32,
    command: &'static str,
    #[serde(rename = "fn")]
    function: String,
    grid: String,
    emit: String,
    levels: Vec<u32>,
    results: Vec<ProjectLevel>,
    convergence: Vec<ConvergenceEntry>,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct ProjectLevel {
    n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<SampleRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coeffs: Option<Vec<CoeffRow>>,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct SampleRow {
    x: f64,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct CoeffRow {
    l: i64,
    k: f64,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct ConvergenceEntry {
    from: u32,
    to: u32,
    max_diff: f64,
}

fn cmd_project(args: ProjectArgs) -> UfResult<i32> {
    let config = RunConfig::from_common(&args.common)?;
    let f = SlowFunction::parse_src(&args.function, args.order)?;
    let cfg: QuadratureConfig = args.quad.into();
    let xs = parse_range(&args.range)?;

    let levels = config.ladder.levels().to_vec();
    let per_level: Vec<(u32, crate::vspace::TrigElement, Vec<ProjWarning>)> = levels
        .par_iter()
        .map(|&n| {
            let params = GridParams::with_kind(n, config.kind)?;
            let (u, w) = project_function(&f, params, &cfg)?;
            Ok((n, u, w))
        })
        .collect::<UfResult<_>>()?;

    // convergence: max difference of consecutive levels over the range
    let sampled: Vec<Vec<Complex64>> = per_level
        .par_iter()
        .map(|(_, u, _)| xs.iter().map(|&x| u.eval(x)).collect())
        .collect();
    let mut convergence = Vec::new();
    for w in per_level.windows(2).zip(sampled.windows(2)) {
        let ((a, b), (sa, sb)) = ((&w.0[0], &w.0[1]), (&w.1[0], &w.1[1]));
        let max_diff = sa
            .iter()
            .zip(sb)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        convergence.push(ConvergenceEntry {
            from: a.0,
            to: b.0,
            max_diff,
        });
    }

    let growth = validate_growth(&f, &levels, config.kind)?;
    let global_warnings = growth.iter().map(|w| w.to_string()).collect::<Vec<_>>();

    let results: Vec<ProjectLevel> = per_level
        .iter()
        .zip(&sampled)
        .map(|((n, u, warns), vals)| {
            let (samples, coeffs) = match args.emit {
                Emit::Samples => (
                    Some(
                        xs.iter()
                            .zip(vals)
                            .map(|(&x, v)| SampleRow {
                                x,
                                re: v.re,
                                im: v.im,
                            })
                            .collect(),
                    ),
                    None,
                ),
                Emit::Coeffs => {
                    let params = u.params();
                    (
                        None,
                        Some(
                            u.coeffs()
                                .iter()
                                .enumerate()
                                .map(|(slot, c)| {
                                    let l = params.index(slot);
                                    CoeffRow {
                                        l,
                                        k: params.freq(l),
                                        re: c.re,
                                        im: c.im,
                                    }
                                })
                                .collect(),
                        ),
                    )
                }
            };
            ProjectLevel {
                n: *n,
                samples,
                coeffs,
                warnings: warning_strings(warns),
            }
        })
        .collect();

    let text = match config.format {
        Format::Json => {
            let report = ProjectReport {
                schema: SCHEMA_VERSION,
                command: "project",
                function: args.function.clone(),
                grid: grid_name(config.kind),
                emit: match args.emit {
                    Emit::Samples => "samples".into(),
                    Emit::Coeffs => "coeffs".into(),
                },
                levels,
                results,
                convergence,
                warnings: global_warnings,
            };
            serde_json::to_string_pretty(&report)? + "\n"
        }
        Format::Csv => {
            let mut s = String::new();
            match args.emit {
                Emit::Samples => {
                    s.push_str("n,x,re,im\n");
                    for lvl in &results {
                        for row in lvl.samples.as_ref().expect("samples emitted") {
                            s.push_str(&format!(
                                "{},{},{},{}\n",
                                lvl.n,
                                fmt17(row.x),
                                fmt17(row.re),
                                fmt17(row.im)
                            ));
                        }
                    }
                }
                Emit::Coeffs => {
                    s.push_str("n,l,k,re,im\n");
                    for lvl in &results {
                        for row in lvl.coeffs.as_ref().expect("coeffs emitted") {
                            s.push_str(&format!(
                                "{},{},{},{},{}\n",
                                lvl.n,
                                row.l,
                                fmt17(row.k),
                                fmt17(row.re),
                                fmt17(row.im)
                            ));
                        }
                    }
                }
            }
            for c in &convergence {
                s.push_str(&format!(
                    "# convergence from={} to={} max_diff={}\n",
                    c.from,
                    c.to,
                    fmt17(c.max_diff)
                ));
            }
            for w in &global_warnings {
                s.push_str(&format!("# warning {w}\n"));
            }
            s
        }
    };
    config.write_report(&text)?;
    Ok(0)
}

fn grid_name(kind: GridKind) -> String {
    match kind {
        GridKind::Paper => "paper".into(),
        GridKind::Symmetric => "symmetric".into(),
    }
}

// --- pair --------------------------------------------------------------------

#[derive(Serialize)]
struct PairReport {
    schema: u32,
    command: &'static str,
    dist: DistributionSpec,
    test: String,
    grid: String,
    levels: Vec<u32>,
    results: Vec<PairLevel>,
    shadow: ShadowReport,
}

#[derive(Serialize)]
struct PairLevel {
    n: u32,
    value: ComplexRepr,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct ShadowReport {
    value: ShadowValueRepr,
    residual: f64,
    tol: f64,
    extrapolated: bool,
}

#[derive(Serialize)]
#[serde(untagged)]
enum ShadowValueRepr {
    Finite(ComplexRepr),
    Symbol(&'static str),
}

impl From<ShadowValue> for ShadowValueRepr {
    fn from(v: ShadowValue) -> Self {
        match v {
            ShadowValue::Finite(z) => ShadowValueRepr::Finite(z.into()),
            ShadowValue::PlusInfinity => ShadowValueRepr::Symbol("+inf"),
            ShadowValue::MinusInfinity => ShadowValueRepr::Symbol("-inf"),
            ShadowValue::Indeterminate => ShadowValueRepr::Symbol("indeterminate"),
        }
    }
}

fn cmd_pair(args: PairArgs) -> UfResult<i32> {
    let config = RunConfig::from_common(&args.common)?;
    let dist = load_distribution(&args.dist)?;
    let phi = SlowFunction::parse_src(&args.test, 0)?;
    let cfg: QuadratureConfig = args.quad.into();

    let levels = config.ladder.levels().to_vec();
    let values: Vec<(u32, Complex64, Vec<ProjWarning>)> = levels
        .par_iter()
        .map(|&n| {
            let params = GridParams::with_kind(n, config.kind)?;
            let (v, w) = pair(&dist, &phi, params, &cfg)?;
            Ok((n, v, w))
        })
        .collect::<UfResult<_>>()?;

    // shadow of the pairing family across the ladder
    let table: Vec<(u32, Complex64)> = values.iter().map(|(n, v, _)| (*n, *v)).collect();
    let family = HyperScalar::new(move |n| {
        table
            .iter()
            .find(|(m, _)| *m == n)
            .map(|(_, v)| *v)
            .ok_or(UfError::InvalidLevel(n))
    });
    let sh = if args.extrapolate {
        shadow_extrapolated(&family, &config.ladder, args.shadow_tol)?
    } else {
        shadow(&family, &config.ladder, args.shadow_tol)?
    };

    let results: Vec<PairLevel> = values
        .iter()
        .map(|(n, v, w)| PairLevel {
            n: *n,
            value: (*v).into(),
            warnings: warning_strings(w),
        })
        .collect();

    let text = match config.format {
        Format::Json => {
            let report = PairReport {
                schema: SCHEMA_VERSION,
                command: "pair",
                dist,
                test: args.test.clone(),
                grid: grid_name(config.kind),
                levels,
                results,
                shadow: ShadowReport {
                    value: sh.value.into(),
                    residual: sh.residual,
                    tol: args.shadow_tol,
                    extrapolated: args.extrapolate,
                },
            };
            serde_json::to_string_pretty(&report)? + "\n"
        }
        Format::Csv => {
            let mut s = String::from("n,re,im\n");
            for r in &results {
                s.push_str(&format!(
                    "{},{},{}\n",
                    r.n,
                    fmt17(r.value.re),
                    fmt17(r.value.im)
                ));
            }
            let shadow_text = match sh.value {
                ShadowValue::Finite(z) => format!("{}+{}i", fmt17(z.re), fmt17(z.im)),
                ShadowValue::PlusInfinity => "+inf".into(),
                ShadowValue::MinusInfinity => "-inf".into(),
                ShadowValue::Indeterminate => "indeterminate".into(),
            };
            s.push_str(&format!(
                "# shadow value={} residual={}\n",
                shadow_text,
                fmt17(sh.residual)
            ));
            for r in &results {
                for w in &r.warnings {
                    s.push_str(&format!("# warning n={} {}\n", r.n, w));
                }
            }
            s
        }
    };
    config.write_report(&text)?;
    Ok(0)
}

// --- fourier -------------------------------------------------------------------

#[derive(Serialize)]
struct FourierReport {
    schema: u32,
    command: &'static str,
    #[serde(rename = "fn", skip_serializing_if = "Option::is_none")]
    function: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dist: Option<DistributionSpec>,
    grid: String,
    levels: Vec<u32>,
    results: Vec<FourierLevel>,
}

#[derive(Serialize)]
struct FourierLevel {
    n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<FreqRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    at: Option<Vec<AtRow>>,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct FreqRow {
    k: f64,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct AtRow {
    k_requested: f64,
    k_grid: f64,
    offset: f64,
    re: f64,
    im: f64,
}

fn cmd_fourier(args: FourierArgs) -> UfResult<i32> {
    let config = RunConfig::from_common(&args.common)?;
    let dist = match (&args.function, &args.dist) {
        (Some(src), None) => DistributionSpec {
            order: 0,
            base: SlowFunction::parse_src(src, 3)?,
            label: None,
        },
        (None, Some(spec)) => load_distribution(spec)?,
        _ => {
            return Err(UfError::Usage(
                "fourier needs exactly one of --fn or --dist".into(),
            ))
        }
    };
    let cfg: QuadratureConfig = args.quad.into();
    let at: Option<Vec<f64>> = match &args.at {
        Some(list) => Some(
            list.split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| UfError::Usage(format!("invalid frequency `{s}` in --at")))
                })
                .collect::<UfResult<_>>()?,
        ),
        None => None,
    };

    let levels = config.ladder.levels().to_vec();
    let results: Vec<FourierLevel> = levels
        .par_iter()
        .map(|&n| {
            let params = GridParams::with_kind(n, config.kind)?;
            let (s, warns) = distributional_fourier(&dist, params, &cfg)?;
            let dual = s.params();
            let level = match &at {
                Some(ks) => {
                    // off-lattice frequencies are served by the transform
                    // element itself (trigonometric interpolation of the
                    // lattice samples); the nearest lattice point and the
                    // offset are reported alongside
                    let element = crate::delta::from_samples(&s);
                    let rows = ks
                        .iter()
                        .map(|&k| {
                            let step = dual.eta();
                            let l = (k / step)
                                .round()
                                .clamp(dual.l_min() as f64, dual.l_max() as f64)
                                as i64;
                            let k_grid = dual.point(l);
                            let v = element.eval(k);
                            AtRow {
                                k_requested: k,
                                k_grid,
                                offset: k - k_grid,
                                re: v.re,
                                im: v.im,
                            }
                        })
                        .collect();
                    FourierLevel {
                        n,
                        samples: None,
                        at: Some(rows),
                        warnings: warning_strings(&warns),
                    }
                }
                None => {
                    let rows = s
                        .values()
                        .iter()
                        .enumerate()
                        .map(|(slot, v)| FreqRow {
                            k: dual.point(dual.index(slot)),
                            re: v.re,
                            im: v.im,
                        })
                        .collect();
                    FourierLevel {
                        n,
                        samples: Some(rows),
                        at: None,
                        warnings: warning_strings(&warns),
                    }
                }
            };
            Ok(level)
        })
        .collect::<UfResult<_>>()?;

    let text = match config.format {
        Format::Json => {
            let report = FourierReport {
                schema: SCHEMA_VERSION,
                command: "fourier",
                function: args.function.clone(),
                dist: args.dist.as_ref().map(|_| dist.clone()),
                grid: grid_name(config.kind),
                levels,
                results,
            };
            serde_json::to_string_pretty(&report)? + "\n"
        }
        Format::Csv => {
            let mut s = String::new();
            if at.is_some() {
                s.push_str("n,k_requested,k_grid,offset,re,im\n");
                for lvl in &results {
                    for row in lvl.at.as_ref().expect("at rows") {
                        s.push_str(&format!(
                            "{},{},{},{},{},{}\n",
                            lvl.n,
                            fmt17(row.k_requested),
                            fmt17(row.k_grid),
                            fmt17(row.offset),
                            fmt17(row.re),
                            fmt17(row.im)
                        ));
                    }
                }
            } else {
                s.push_str("n,k,re,im\n");
                for lvl in &results {
                    for row in lvl.samples.as_ref().expect("sample rows") {
                        s.push_str(&format!(
                            "{},{},{},{}\n",
                            lvl.n,
                            fmt17(row.k),
                            fmt17(row.re),
                            fmt17(row.im)
                        ));
                    }
                }
            }
            for lvl in &results {
                for w in &lvl.warnings {
                    s.push_str(&format!("# warning n={} {}\n", lvl.n, w));
                }
            }
            s
        }
    };
    config.write_report(&text)?;
    Ok(0)
}

// --- verify -----------------------------------------------------------------

#[derive(Serialize)]
struct VerifyReport {
    schema: u32,
    command: &'static str,
    suite: String,
    grid: String,
    levels: Vec<u32>,
    checks: Vec<CheckResult>,
    pass: bool,
}

fn cmd_verify(args: VerifyArgs) -> UfResult<i32> {
    let config = RunConfig::from_common(&args.common)?;
    let suite: Suite = args.suite.into();
    let checks = run_suite(suite, config.ladder.levels(), config.kind)?;
    let pass = checks.iter().all(|c| c.pass);

    let text = match config.format {
        Format::Json => {
            let report = VerifyReport {
                schema: SCHEMA_VERSION,
                command: "verify",
                suite: suite.name().to_string(),
                grid: grid_name(config.kind),
                levels: config.ladder.levels().to_vec(),
                checks,
                pass,
            };
            serde_json::to_string_pretty(&report)? + "\n"
        }
        Format::Csv => {
            let mut s = String::from("suite,check,level,residual,tolerance,pass\n");
            for c in &checks {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    c.suite,
                    c.check,
                    c.level.map(|n| n.to_string()).unwrap_or_default(),
                    fmt17(c.residual),
                    fmt17(c.tolerance),
                    c.pass
                ));
            }
            s
        }
    };
    config.write_report(&text)?;
    Ok(if pass { 0 } else { 1 })
}

//! Command-line interface for the correlation-matrix geometry: geodesic
//! exponential and logarithm, distances, interpolation curve tables and a
//! built-in verification run.
//!
//! Exit codes: 0 success, 1 selftest failure, 2 input validation,
//! 3 numerical failure, 4 fiber search did not converge.

mod io;
mod runcfg;
mod selftest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use corrgeo::{
    qa_log_detailed, qa_metric, CorrMatrix, CurveSample, GeodesicKind, GeomError, HollowSym,
    ProductCurve, SpdMatrix,
};
use nalgebra::DMatrix;
use serde_json::json;

use io::FileFormat;
use runcfg::{FileConfig, RunConfig};

#[derive(Parser)]
#[command(name = "corrgeo", version, about = "Geodesic computations on full-rank correlation matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shoot a geodesic: correlation matrix from a base point and a tangent
    Exp(ExpArgs),
    /// Tangent vector pointing from one correlation matrix to another
    Log(PairArgs),
    /// Geodesic distance between two correlation matrices
    Dist(PairArgs),
    /// Sample interpolation curves between two covariance matrices
    Interpolate(InterpolateArgs),
    /// Run the built-in verification suites
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct CommonOpts {
    /// Metric parameter alpha (> 0)
    #[arg(long)]
    alpha: Option<f64>,
    /// Metric parameter beta (> -alpha/n)
    #[arg(long)]
    beta: Option<f64>,
    /// Iteration cap for the fiber search
    #[arg(long)]
    max_iters: Option<usize>,
    /// Horizontality tolerance certifying convergence of the fiber search
    #[arg(long = "tol-horizontality")]
    tol_horizontality: Option<f64>,
    /// Output file; stdout when omitted
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum)]
    format: Option<FileFormat>,
    /// Input matrix format; inferred from the file extension when omitted
    #[arg(long, value_enum)]
    input_format: Option<FileFormat>,
    /// JSON config file supplying defaults for the flags above
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ExpArgs {
    /// Base correlation matrix file
    corr: PathBuf,
    /// Hollow symmetric tangent matrix file
    tangent: PathBuf,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct PairArgs {
    /// Start correlation matrix file
    first: PathBuf,
    /// End correlation matrix file
    second: PathBuf,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct InterpolateArgs {
    /// First covariance matrix file
    first: PathBuf,
    /// Second covariance matrix file
    second: PathBuf,
    /// Scale power for the product curves (repeatable)
    #[arg(long = "p", allow_hyphen_values = true)]
    p_values: Vec<f64>,
    /// Number of curve samples
    #[arg(long)]
    samples: Option<usize>,
    /// Left end of the parameter range
    #[arg(long, allow_hyphen_values = true)]
    t_min: Option<f64>,
    /// Right end of the parameter range
    #[arg(long, allow_hyphen_values = true)]
    t_max: Option<f64>,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct SelftestArgs {
    /// Force the named suite to fail (harness verification)
    #[arg(long, hide = true)]
    inject_failure: Option<String>,
    #[command(flatten)]
    common: CommonOpts,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn compute(err: GeomError) -> Self {
        let code = match err {
            GeomError::NoConvergence { .. } => 4,
            GeomError::EigFailure
            | GeomError::LinearSolveFailure
            | GeomError::NonFinite
            | GeomError::NonSpdResult
            | GeomError::NonPositiveEntry { .. } => 3,
            _ => 2,
        };
        Self { code, message: err.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Exp(args) => cmd_exp(args),
        Command::Log(args) => cmd_log_dist(args, false),
        Command::Dist(args) => cmd_log_dist(args, true),
        Command::Interpolate(args) => cmd_interpolate(args),
        Command::Selftest(args) => cmd_selftest(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

/// Resolves defaults < config file < explicit flags.
fn resolve_config(common: &CommonOpts) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &common.config {
        let file = FileConfig::load(path).map_err(CliError::validation)?;
        cfg.apply_file(&file);
    }
    if let Some(v) = common.alpha {
        cfg.alpha = v;
    }
    if let Some(v) = common.beta {
        cfg.beta = v;
    }
    if let Some(v) = common.max_iters {
        cfg.max_iters = v;
    }
    if let Some(v) = common.tol_horizontality {
        cfg.horizontality_tol = v;
    }
    let out_fmt = common.format.unwrap_or(FileFormat::Csv);
    cfg.set_formats(out_fmt, common.input_format);
    cfg.validate().map_err(CliError::validation)?;
    Ok(cfg)
}

fn read_matrix(path: &Path, common: &CommonOpts) -> Result<DMatrix<f64>, CliError> {
    let fmt = FileFormat::infer(common.input_format, path);
    io::read_single_matrix(path, fmt).map_err(CliError::validation)
}

fn emit(output: Option<&Path>, content: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::validation(format!("{}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_exp(args: ExpArgs) -> Result<u8, CliError> {
    let cfg = resolve_config(&args.common)?;
    let c = CorrMatrix::new(read_matrix(&args.corr, &args.common)?)
        .map_err(|e| CliError::validation(format!("{}: {e}", args.corr.display())))?;
    let x = HollowSym::new(read_matrix(&args.tangent, &args.common)?)
        .map_err(|e| CliError::validation(format!("{}: {e}", args.tangent.display())))?;

    let result = corrgeo::qa_exp(&c, &x).map_err(CliError::compute)?;

    let content = match args.common.format.unwrap_or(FileFormat::Csv) {
        FileFormat::Csv => io::matrix_to_csv(result.matrix()),
        FileFormat::Json => {
            let report = json!({
                "result": io::matrix_to_rows(result.matrix()),
                "config": cfg,
            });
            format!("{}\n", serde_json::to_string_pretty(&report).unwrap())
        }
    };
    emit(args.common.output.as_deref(), &content)?;
    Ok(0)
}

fn cmd_log_dist(args: PairArgs, distance_summary: bool) -> Result<u8, CliError> {
    let cfg = resolve_config(&args.common)?;
    let c1 = CorrMatrix::new(read_matrix(&args.first, &args.common)?)
        .map_err(|e| CliError::validation(format!("{}: {e}", args.first.display())))?;
    let c2 = CorrMatrix::new(read_matrix(&args.second, &args.common)?)
        .map_err(|e| CliError::validation(format!("{}: {e}", args.second.display())))?;
    let params = cfg.metric_params().map_err(CliError::validation)?;
    params.validate_for(c1.dim()).map_err(CliError::compute)?;

    let (x, report) = qa_log_detailed(&c1, &c2, &cfg.log_config()).map_err(CliError::compute)?;
    let distance = qa_metric(&c1, &x, &x, params)
        .map_err(CliError::compute)?
        .max(0.0)
        .sqrt();

    let payload = json!({
        "config": cfg,
        "log": io::matrix_to_rows(x.matrix()),
        "distance": distance,
        "iterations": report.iterations,
        "polish_steps": report.polish_steps,
        "restarts": report.restarts,
        "horizontality_residual": report.horizontality_residual,
        "converged": report.converged,
    });
    let content = format!("{}\n", serde_json::to_string_pretty(&payload).unwrap());
    emit(args.common.output.as_deref(), &content)?;
    if distance_summary && args.common.output.is_some() {
        println!("distance {}", io::fmt_f64(distance));
    }
    if report.converged {
        Ok(0)
    } else {
        eprintln!(
            "error: fiber search did not converge ({} iterations, residual {:.3e}); best iterate written",
            report.iterations, report.horizontality_residual
        );
        Ok(4)
    }
}

fn kind_label(kind: GeodesicKind) -> &'static str {
    match kind {
        GeodesicKind::Euclidean => "euclidean",
        GeodesicKind::LogEuclidean => "log_euclidean",
        GeodesicKind::AffineInvariant => "affine_invariant",
    }
}

fn sample_row(label: &str, s: &CurveSample) -> Vec<String> {
    let opt = |v: Option<f64>| v.map(io::fmt_f64).unwrap_or_default();
    vec![
        io::fmt_f64(s.t),
        label.to_string(),
        opt(s.rho),
        io::fmt_f64(s.det),
        io::fmt_f64(s.trace),
        opt(s.ellipse.map(|e| e.axis1_len)),
        opt(s.ellipse.map(|e| e.axis2_len)),
        opt(s.ellipse.map(|e| e.angle)),
    ]
}

fn cmd_interpolate(args: InterpolateArgs) -> Result<u8, CliError> {
    let mut cfg = resolve_config(&args.common)?;
    if !args.p_values.is_empty() {
        cfg.p_values = args.p_values.clone();
    }
    if let Some(v) = args.samples {
        cfg.samples = v;
    }
    if let Some(v) = args.t_min {
        cfg.t_min = v;
    }
    if let Some(v) = args.t_max {
        cfg.t_max = v;
    }
    cfg.validate().map_err(CliError::validation)?;

    let s1 = SpdMatrix::new(read_matrix(&args.first, &args.common)?)
        .map_err(|e| CliError::validation(format!("{}: {e}", args.first.display())))?;
    let s2 = SpdMatrix::new(read_matrix(&args.second, &args.common)?)
        .map_err(|e| CliError::validation(format!("{}: {e}", args.second.display())))?;

    let times = cfg.sample_times();
    let product = ProductCurve::new(&s1, &s2, &cfg.log_config()).map_err(CliError::compute)?;

    // fixed kind order: the three references, then each configured power
    let mut rows: Vec<Vec<String>> = Vec::new();
    for kind in [GeodesicKind::Euclidean, GeodesicKind::LogEuclidean, GeodesicKind::AffineInvariant]
    {
        let mut dropped = 0usize;
        for &t in &times {
            match corrgeo::comparison_geodesic(&s1, &s2, kind, t) {
                Ok(m) => {
                    let stats = corrgeo::curve_statistics(&[(t, m)]).map_err(CliError::compute)?;
                    rows.push(sample_row(kind_label(kind), &stats[0]));
                }
                Err(_) => dropped += 1,
            }
        }
        if dropped > 0 {
            eprintln!("warning: {} of {} samples dropped for kind {}", dropped, times.len(), kind_label(kind));
        }
    }
    for &p in &cfg.p_values {
        let label = format!("E({p})xQA");
        let mut dropped = 0usize;
        for &t in &times {
            match product.sample(p, t) {
                Ok(m) => {
                    let stats = corrgeo::curve_statistics(&[(t, m)]).map_err(CliError::compute)?;
                    rows.push(sample_row(&label, &stats[0]));
                }
                Err(_) => dropped += 1,
            }
        }
        if dropped > 0 {
            eprintln!("warning: {} of {} samples dropped for kind {label}", dropped, times.len());
        }
    }

    let content = match args.common.format.unwrap_or(FileFormat::Csv) {
        FileFormat::Csv => {
            let mut out = String::from("t,kind,rho,det,trace,axis1_len,axis2_len,axis_angle\n");
            for row in &rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
            out
        }
        FileFormat::Json => {
            let jrows: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    let num = |s: &String| {
                        if s.is_empty() {
                            serde_json::Value::Null
                        } else {
                            json!(s.parse::<f64>().unwrap())
                        }
                    };
                    json!({
                        "t": num(&r[0]),
                        "kind": r[1],
                        "rho": num(&r[2]),
                        "det": num(&r[3]),
                        "trace": num(&r[4]),
                        "axis1_len": num(&r[5]),
                        "axis2_len": num(&r[6]),
                        "axis_angle": num(&r[7]),
                    })
                })
                .collect();
            let report = json!({ "config": cfg, "rows": jrows });
            format!("{}\n", serde_json::to_string_pretty(&report).unwrap())
        }
    };
    emit(args.common.output.as_deref(), &content)?;
    Ok(0)
}

fn cmd_selftest(args: SelftestArgs) -> Result<u8, CliError> {
    let cfg = resolve_config(&args.common)?;
    let results = selftest::run_all(args.inject_failure.as_deref());
    let mut all_passed = true;
    for r in &results {
        let verdict = if r.passed { "pass" } else { "FAIL" };
        println!("{:<26} {} ({})", r.name, verdict, r.detail);
        all_passed &= r.passed;
    }
    if let Some(path) = &args.common.output {
        let payload = json!({
            "config": cfg,
            "suites": results.iter().map(|r| json!({
                "name": r.name, "passed": r.passed, "detail": r.detail,
            })).collect::<Vec<_>>(),
            "passed": all_passed,
        });
        std::fs::write(path, format!("{}\n", serde_json::to_string_pretty(&payload).unwrap()))
            .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
    }
    Ok(if all_passed { 0 } else { 1 })
}

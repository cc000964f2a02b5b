//! Batch command-line surface over the area-distribution toolkit.
//!
//! stdout carries data, stderr carries logs; every run is reproducible
//! from its flags and seed alone. Exit codes: 0 success, 1 verification
//! failure, 2 usage error, 3 numerical instability, 4 simulation budget
//! or insufficient data.

mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use suparea::analytic::{
    exact_moment, moment_asymptote_log, psi_hypergeometric, psi_series, theorem1_lhs,
    theorem1_rhs, DoubleLaplaceParams,
};
use suparea::density::{
    conjecture_diagnostic, invert_density, known_pair_self_test, tail_probe, ContourConfig,
    InversionMethod,
};
use suparea::numerics::{QuadratureConfig, RandomStream};
use suparea::simulate::{
    estimate_marked_time_lt, poisson_functional_check, scaling_check,
    estimate_moments_mc, ExcursionConfig, PathConfig, Scheme,
};
use suparea::Error as CoreError;

use output::{Cell, Format, OutputSpec, Report};

#[derive(Parser)]
#[command(name = "suparea", version, about = "Distribution toolkit for the area under the running maximum of Brownian motion")]
struct Cli {
    #[command(flatten)]
    global: GlobalOptions,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOptions {
    /// Master seed for all randomness.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Worker threads for replication partitions.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = CliFormat::Csv)]
    format: CliFormat,

    /// Output path, or '-' for stdout.
    #[arg(long, global = true, default_value = "-")]
    out: String,

    /// Significant digits in emitted floats (6..=17).
    #[arg(long, global = true, default_value_t = 12)]
    precision: usize,

    /// Relative quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    rel_tol: f64,

    /// Absolute quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-13)]
    abs_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliFormat {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact moments, their large-order asymptote and the ratio.
    Moments {
        #[arg(long, default_value_t = 4)]
        max_n: u32,
    },
    /// The transform ψ(s) on a grid, by one or both representations.
    Psi {
        #[arg(long, default_value_t = 0.0)]
        s_min: f64,
        #[arg(long, default_value_t = 8.0)]
        s_max: f64,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long, value_enum, default_value_t = PsiMethod::Both)]
        method: PsiMethod,
    },
    /// Verify the double-transform identity on an (α, λ) grid.
    VerifyTheorem1 {
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
        alphas: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
        lambdas: Vec<f64>,
    },
    /// Monte Carlo engines with analytic reference columns.
    Mc {
        #[arg(long, value_enum)]
        engine: Engine,
        #[arg(long, default_value_t = 100_000)]
        replications: u64,
        /// Path-grid resolution (paths/scaling/tail engines).
        #[arg(long, default_value_t = 10_000)]
        steps: u32,
        #[arg(long, default_value_t = 1.0)]
        horizon: f64,
        #[arg(long, value_enum, default_value_t = CliScheme::LeftRectangle)]
        scheme: CliScheme,
        /// Highest moment order (paths engine).
        #[arg(long, default_value_t = 2)]
        max_order: u32,
        /// Horizons for the scaling engine.
        #[arg(long, value_delimiter = ',', default_value = "0.25,1,4")]
        horizons: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Excursion length floor ε.
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
        /// Add the deterministic compensator for the truncated mass.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        compensate: bool,
        /// Local-time cutoff ζ (lemma-check engine).
        #[arg(long, default_value_t = 1.0)]
        zeta: f64,
        /// Abscissae for the tail engine.
        #[arg(long, value_delimiter = ',', default_value = "0.8,1.0,1.2")]
        xs: Vec<f64>,
    },
    /// Invert the transform to a density grid with diagnostics.
    Density {
        #[arg(long, default_value_t = 2.5)]
        x_max: f64,
        #[arg(long, default_value_t = 125)]
        points: u32,
        #[arg(long, default_value_t = 1024)]
        nodes: u32,
        #[arg(long, default_value_t = 1.0)]
        shape: f64,
        #[arg(long, value_enum, default_value_t = CliInversion::Deformed)]
        method: CliInversion,
        /// Run the (1+s)^(-1) → e^(-x) known-pair regression instead.
        #[arg(long, default_value_t = false)]
        self_test: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PsiMethod {
    Series,
    Hypergeometric,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Paths,
    Excursion,
    Scaling,
    LemmaCheck,
    Tail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliScheme {
    LeftRectangle,
    Trapezoid,
}

impl From<CliScheme> for Scheme {
    fn from(s: CliScheme) -> Self {
        match s {
            CliScheme::LeftRectangle => Scheme::LeftRectangle,
            CliScheme::Trapezoid => Scheme::Trapezoid,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliInversion {
    Deformed,
    Bromwich,
}

/// Exit statuses promised by the interface contract.
const EXIT_VERIFICATION: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_INSTABILITY: i32 = 3;
const EXIT_BUDGET: i32 = 4;

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::Domain(_) => EXIT_USAGE,
            CoreError::SeriesBudget { .. }
            | CoreError::Cancellation { .. }
            | CoreError::QuadratureBudget { .. }
            | CoreError::ContourInstability(_) => EXIT_INSTABILITY,
            CoreError::SimulationBudget(_) | CoreError::InsufficientHits { .. } => EXIT_BUDGET,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Self { code: EXIT_USAGE, message: e.to_string() }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            std::process::exit(f.code);
        }
    }
}

fn run(cli: Cli) -> Result<i32, Failure> {
    let spec = OutputSpec {
        format: match cli.global.format {
            CliFormat::Csv => Format::Csv,
            CliFormat::Json => Format::Json,
        },
        destination: cli.global.out.clone(),
        precision: cli.global.precision,
    };
    spec.validate()?;
    if cli.global.threads < 1 {
        return Err(Failure::usage("threads must be >= 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.threads)
        .build_global()
        .ok();
    let quad = QuadratureConfig {
        rel_tol: cli.global.rel_tol,
        abs_tol: cli.global.abs_tol,
        ..QuadratureConfig::default()
    };
    quad.validate()?;

    match &cli.command {
        Command::Moments { max_n } => cmd_moments(&cli, &spec, *max_n),
        Command::Psi { s_min, s_max, step, method } => {
            cmd_psi(&cli, &spec, *s_min, *s_max, *step, *method)
        }
        Command::VerifyTheorem1 { alphas, lambdas } => {
            cmd_verify_theorem1(&cli, &spec, &quad, alphas, lambdas)
        }
        Command::Mc { .. } => cmd_mc(&cli, &spec, &quad),
        Command::Density { x_max, points, nodes, shape, method, self_test } => {
            cmd_density(&cli, &spec, *x_max, *points, *nodes, *shape, *method, *self_test)
        }
    }
}

fn global_config(cli: &Cli) -> Value {
    json!({
        "seed": cli.global.seed,
        "threads": cli.global.threads,
        "precision": cli.global.precision,
        "rel_tol": cli.global.rel_tol,
        "abs_tol": cli.global.abs_tol,
    })
}

fn cmd_moments(cli: &Cli, spec: &OutputSpec, max_n: u32) -> Result<i32, Failure> {
    let mut report = Report::new(vec!["n", "exact", "log_exact", "asymptote_log", "ratio"]);
    for n in 0..=max_n {
        let m = exact_moment(n)?;
        if n == 0 {
            report.push(vec![
                Cell::Int(0),
                Cell::Float(m.value),
                Cell::Float(m.log_value),
                Cell::Empty,
                Cell::Empty,
            ]);
        } else {
            let asym_log = moment_asymptote_log(n)?;
            report.push(vec![
                Cell::Int(n as i64),
                Cell::Float(m.value),
                Cell::Float(m.log_value),
                Cell::Float(asym_log),
                Cell::Float((m.log_value - asym_log).exp()),
            ]);
        }
    }
    let mut config = global_config(cli);
    config["command"] = json!({"name": "moments", "max_n": max_n});
    report.emit(spec, &config)?;
    Ok(0)
}

fn cmd_psi(
    cli: &Cli,
    spec: &OutputSpec,
    s_min: f64,
    s_max: f64,
    step: f64,
    method: PsiMethod,
) -> Result<i32, Failure> {
    if !(s_min >= 0.0 && s_min < s_max && step > 0.0) {
        return Err(Failure::usage("need 0 <= s_min < s_max and step > 0"));
    }
    let columns = match method {
        PsiMethod::Both => vec!["s", "psi_series", "psi_hypergeometric", "abs_diff"],
        _ => vec!["s", "psi"],
    };
    let mut report = Report::new(columns);
    let n_steps = ((s_max - s_min) / step).round() as u64;
    for i in 0..=n_steps {
        let s = s_min + i as f64 * step;
        if s > s_max + 1e-12 {
            break;
        }
        match method {
            PsiMethod::Series => {
                let v = psi_series(s, 1e-15)?;
                report.push(vec![Cell::Float(s), Cell::Float(v.value)]);
            }
            PsiMethod::Hypergeometric => {
                let v = psi_hypergeometric(s)?;
                report.push(vec![Cell::Float(s), Cell::Float(v.value)]);
            }
            PsiMethod::Both => {
                let a = psi_series(s, 1e-15)?;
                let b = psi_hypergeometric(s)?;
                report.push(vec![
                    Cell::Float(s),
                    Cell::Float(a.value),
                    Cell::Float(b.value),
                    Cell::Float((a.value - b.value).abs()),
                ]);
            }
        }
    }
    let mut config = global_config(cli);
    config["command"] = json!({
        "name": "psi", "s_min": s_min, "s_max": s_max, "step": step,
        "method": format!("{method:?}").to_lowercase(),
    });
    report.emit(spec, &config)?;
    Ok(0)
}

fn cmd_verify_theorem1(
    cli: &Cli,
    spec: &OutputSpec,
    quad: &QuadratureConfig,
    alphas: &[f64],
    lambdas: &[f64],
) -> Result<i32, Failure> {
    if alphas.is_empty() || lambdas.is_empty() {
        return Err(Failure::usage("empty (alpha, lambda) grid"));
    }
    let mut report = Report::new(vec![
        "alpha", "lambda", "lhs", "rhs", "abs_diff", "combined_bound", "pass",
    ]);
    let mut all_pass = true;
    for &alpha in alphas {
        for &lambda in lambdas {
            let p = DoubleLaplaceParams::new(alpha, lambda)?;
            let lhs = theorem1_lhs(&p, quad)?;
            let rhs = theorem1_rhs(&p, quad)?;
            let diff = (lhs.value - rhs.value).abs();
            let bound = lhs.error + rhs.error;
            let pass = diff <= bound;
            all_pass &= pass;
            report.push(vec![
                Cell::Float(alpha),
                Cell::Float(lambda),
                Cell::Float(lhs.value),
                Cell::Float(rhs.value),
                Cell::Float(diff),
                Cell::Float(bound),
                Cell::Bool(pass),
            ]);
        }
    }
    let mut config = global_config(cli);
    config["command"] = json!({
        "name": "verify-theorem1", "alphas": alphas, "lambdas": lambdas,
    });
    report.emit(spec, &config)?;
    Ok(if all_pass { 0 } else { EXIT_VERIFICATION })
}

#[allow(clippy::too_many_arguments)]
fn cmd_mc(cli: &Cli, spec: &OutputSpec, quad: &QuadratureConfig) -> Result<i32, Failure> {
    let Command::Mc {
        engine,
        replications,
        steps,
        horizon,
        scheme,
        max_order,
        horizons,
        alpha,
        lambda,
        eps,
        compensate,
        zeta,
        xs,
    } = &cli.command
    else {
        unreachable!()
    };
    let stream = RandomStream::new(cli.global.seed, 0);
    let mut config = global_config(cli);
    config["command"] = json!({
        "name": "mc",
        "engine": format!("{engine:?}").to_lowercase(),
        "replications": replications,
        "steps": steps,
        "horizon": horizon,
        "scheme": format!("{scheme:?}").to_lowercase(),
        "max_order": max_order,
        "horizons": horizons,
        "alpha": alpha,
        "lambda": lambda,
        "eps": eps,
        "compensate": compensate,
        "zeta": zeta,
        "xs": xs,
    });

    let mut exit = 0;
    let report = match engine {
        Engine::Paths => {
            let cfg = PathConfig {
                horizon: *horizon,
                steps: *steps,
                scheme: (*scheme).into(),
                replications: *replications,
            };
            let reports = estimate_moments_mc(&stream, &cfg, *max_order)?;
            let bias = suparea::simulate::path::discretization_bias(*horizon, *steps);
            let mut report = Report::new(vec![
                "order",
                "estimate",
                "stderr",
                "reference",
                "bias_allowance",
                "z_bias_adjusted",
            ]);
            for (order, mc) in reports.iter().enumerate() {
                let reference = exact_moment(order as u32)?.value;
                // first-order shift of E Â^k by the mean path defect,
                // treating the defect as weakly coupled to the area
                let allowance = if order == 0 {
                    0.0
                } else {
                    order as f64 * exact_moment(order as u32 - 1)?.value * bias
                };
                let z = if order == 0 {
                    0.0
                } else {
                    mc.z_score(reference - allowance)
                };
                report.push(vec![
                    Cell::Int(order as i64),
                    Cell::Float(mc.estimate.value),
                    Cell::Float(mc.estimate.error),
                    Cell::Float(reference),
                    Cell::Float(allowance),
                    Cell::Float(z),
                ]);
            }
            report
        }
        Engine::Excursion => {
            let cfg = ExcursionConfig {
                params: DoubleLaplaceParams::new(*alpha, *lambda)?,
                length_floor: *eps,
                compensate: *compensate,
                replications: *replications,
            };
            let mc = estimate_marked_time_lt(&stream, &cfg)?;
            let reference = *lambda * theorem1_rhs(&cfg.params, quad)?.value;
            let mut report = Report::new(vec![
                "alpha", "lambda", "eps", "replications", "estimate", "stderr", "reference", "z",
            ]);
            report.push(vec![
                Cell::Float(*alpha),
                Cell::Float(*lambda),
                Cell::Float(*eps),
                Cell::Int(*replications as i64),
                Cell::Float(mc.estimate.value),
                Cell::Float(mc.estimate.error),
                Cell::Float(reference),
                Cell::Float(mc.z_score(reference)),
            ]);
            report
        }
        Engine::Scaling => {
            let cfg = PathConfig {
                horizon: 1.0,
                steps: *steps,
                scheme: (*scheme).into(),
                replications: *replications,
            };
            let rows = scaling_check(&stream, &cfg, horizons)?;
            let reference = exact_moment(1)?.value;
            let mut report = Report::new(vec![
                "horizon", "normalized_mean", "stderr", "reference", "z_raw",
            ]);
            for (t, mc) in horizons.iter().zip(rows) {
                report.push(vec![
                    Cell::Float(*t),
                    Cell::Float(mc.estimate.value),
                    Cell::Float(mc.estimate.error),
                    Cell::Float(reference),
                    Cell::Float(mc.z_score(reference)),
                ]);
            }
            report
        }
        Engine::LemmaCheck => {
            let check =
                poisson_functional_check(&stream, *zeta, *lambda, *alpha, *eps, *replications)?;
            let mut report = Report::new(vec![
                "empirical", "stderr", "quadrature", "quadrature_bound", "difference", "z",
            ]);
            report.push(vec![
                Cell::Float(check.empirical.estimate.value),
                Cell::Float(check.empirical.estimate.error),
                Cell::Float(check.quadrature.value),
                Cell::Float(check.quadrature.error),
                Cell::Float(check.difference),
                Cell::Float(check.z_score),
            ]);
            report
        }
        Engine::Tail => {
            let cfg = PathConfig {
                horizon: *horizon,
                steps: *steps,
                scheme: (*scheme).into(),
                replications: *replications,
            };
            let rows = tail_probe(&stream, xs, &cfg)?;
            let mut report = Report::new(vec![
                "x",
                "hits",
                "p_hat",
                "p_stderr",
                "ln_p",
                "ln_p_stderr",
                "asymptote",
                "ratio",
                "insufficient",
            ]);
            for row in &rows {
                if row.insufficient {
                    exit = EXIT_BUDGET;
                }
                report.push(vec![
                    Cell::Float(row.x),
                    Cell::Int(row.hits as i64),
                    Cell::Float(row.p_hat),
                    Cell::Float(row.p_stderr),
                    Cell::Float(row.ln_p),
                    Cell::Float(row.ln_p_stderr),
                    Cell::Float(row.asymptote),
                    row.ratio.map(Cell::Float).unwrap_or(Cell::Empty),
                    Cell::Bool(row.insufficient),
                ]);
            }
            report
        }
    };
    report.emit(spec, &config)?;
    Ok(exit)
}

#[allow(clippy::too_many_arguments)]
fn cmd_density(
    cli: &Cli,
    spec: &OutputSpec,
    x_max: f64,
    points: u32,
    nodes: u32,
    shape: f64,
    method: CliInversion,
    self_test: bool,
) -> Result<i32, Failure> {
    let method_core = match method {
        CliInversion::Deformed => InversionMethod::FixedDeformedContour,
        CliInversion::Bromwich => InversionMethod::BromwichSeriesAcceleration,
    };
    let contour = ContourConfig { node_count: nodes, shape, method: method_core };
    let mut config = global_config(cli);
    config["command"] = json!({
        "name": "density", "x_max": x_max, "points": points, "nodes": nodes,
        "shape": shape, "method": format!("{method:?}").to_lowercase(),
        "self_test": self_test,
    });

    if self_test {
        let mut report = Report::new(vec!["method", "max_abs_error", "pass"]);
        for (name, m) in [
            ("fixed_deformed_contour", InversionMethod::FixedDeformedContour),
            ("bromwich_series_acceleration", InversionMethod::BromwichSeriesAcceleration),
        ] {
            let err = known_pair_self_test(&ContourConfig {
                node_count: nodes,
                shape,
                method: m,
            })?;
            report.push(vec![
                Cell::Text(name.to_string()),
                Cell::Float(err),
                Cell::Bool(err < 1e-6),
            ]);
        }
        report.emit(spec, &config)?;
        return Ok(0);
    }

    if points < 2 {
        return Err(Failure::usage("points must be >= 2"));
    }
    let xs: Vec<f64> = (1..=points).map(|i| x_max * i as f64 / points as f64).collect();
    let grid = invert_density(&xs, &contour)?;
    let diag = conjecture_diagnostic(&grid);

    let mut report = Report::new(vec!["x", "density", "tail_diag_conjectural"]);
    for ((x, f), d) in grid.xs.iter().zip(&grid.fs).zip(&grid.tail_diag) {
        report.push(vec![Cell::Float(*x), Cell::Float(*f), Cell::Float(*d)]);
    }
    report.extra("method_used", json!(grid.method_used));
    report.extra("normalization", json!(grid.normalization));
    report.extra("mean_check", json!(grid.mean_check));
    report.extra("mean_reference", json!(exact_moment(1)?.value));
    report.extra(
        "conjecture_diagnostic_conjectural",
        json!({
            "slope": diag.slope,
            "constant": diag.constant,
            "reference_slope": diag.reference_slope,
            "reference_constant": diag.reference_constant,
            "points_used": diag.points_used,
            "insufficient_range": diag.insufficient_range,
        }),
    );
    report.emit(spec, &config)?;
    Ok(0)
}

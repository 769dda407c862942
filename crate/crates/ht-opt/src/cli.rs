//! `ht-opt` subcommands.
//!
//! Exit codes: 0 success, 1 a validation or reproduction check failed,
//! 2 usage error (bad flags, unreadable or malformed config, unknown names).
//! Summary lines are `key=value` pairs.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use ht_core::analysis::{
    check_lyapunov_decrease, finite_diff_gradient_check, iterations_to_gap, validate_hyperparams,
    DecreaseMode,
};
use ht_core::harness::{figure, run_experiment, ExperimentConfig, TunerKind};
use ht_core::tuners::Strictness;
use ht_core::{HyperParams, Trace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config_file::{load_config, ModeName};
use crate::error::{OptError, Result};
use crate::export::{write_csv, write_json};
use crate::plot::{emit_plot, Quantity};
use crate::sampling::{random_case, Family};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ht-opt",
    version,
    about = "High-order tuner experiments and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment from a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, env = "HT_OPT_OUT")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Also write a loss-gap plot.
        #[arg(long)]
        plot: bool,
    },
    /// Check hyperparameters against the stability conditions.
    Validate {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
    /// Run every method of a figure and check the expected outcome.
    Reproduce {
        #[arg(value_enum)]
        figure: FigureArg,
        #[arg(long, env = "HT_OPT_OUT")]
        out: PathBuf,
    },
    /// Run several configs on the same loss and rank them by iterations to epsilon.
    Compare {
        #[arg(long, num_args = 1.., required = true)]
        configs: Vec<PathBuf>,
        #[arg(long, default_value_t = 1e-8)]
        epsilon: f64,
        #[arg(long, env = "HT_OPT_OUT")]
        out: PathBuf,
    },
    /// Compare analytic gradients with central differences on random draws.
    Gradcheck {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Smooth,
    Strong,
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureArg {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig1d,
    Fig3,
}

impl FigureArg {
    pub fn as_str(self) -> &'static str {
        match self {
            FigureArg::Fig1a => "fig1a",
            FigureArg::Fig1b => "fig1b",
            FigureArg::Fig1c => "fig1c",
            FigureArg::Fig1d => "fig1d",
            FigureArg::Fig3 => "fig3",
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match cli.command {
        Command::Run {
            config,
            out,
            format,
            plot,
        } => cmd_run(&config, &out, format, plot),
        Command::Validate {
            beta,
            gamma,
            mu,
            mode,
        } => Ok(cmd_validate(beta, gamma, mu, mode)),
        Command::Reproduce { figure, out } => cmd_reproduce(figure, &out),
        Command::Compare {
            configs,
            epsilon,
            out,
        } => cmd_compare(&configs, epsilon, &out),
        Command::Gradcheck {
            family,
            samples,
            seed,
        } => cmd_gradcheck(family, samples, seed),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(err: &OptError) -> i32 {
    match err {
        OptError::Plot(_) => EXIT_FAILED,
        _ => EXIT_USAGE,
    }
}

fn create_out(out: &Path) -> Result<()> {
    fs::create_dir_all(out).map_err(|e| OptError::io(out, e))
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn gap_text(trace: &Trace) -> String {
    trace.final_gap().map(fmt).unwrap_or_else(|| "nan".into())
}

fn stability_text(trace: &Trace) -> &'static str {
    trace.stability.map_or("unknown", |s| s.as_str())
}

/// Runs configs in parallel, results in input order, each stamped with its wall time.
fn run_all(configs: &[ExperimentConfig]) -> Result<Vec<Trace>> {
    configs
        .par_iter()
        .map(|c| {
            let start = Instant::now();
            let mut t = run_experiment(c)?;
            t.meta.wall_time_secs = Some(start.elapsed().as_secs_f64());
            Ok(t)
        })
        .collect()
}

/// Count of steps where the recomputed `V` grows, for the tuner runs.
fn lyapunov_violations(config: &ExperimentConfig, trace: &Trace) -> Option<usize> {
    if !matches!(config.tuner, TunerKind::Ht | TunerKind::HtContinuous) {
        return None;
    }
    let star = trace.theta_star.as_ref()?;
    check_lyapunov_decrease(trace, star, config.hyper.gamma, 1e-12, DecreaseMode::Plain)
        .ok()
        .map(|v| v.len())
}

fn cmd_run(config_path: &Path, out: &Path, format: Format, plot: bool) -> Result<i32> {
    let config = load_config(config_path)?;
    if config.tuner == TunerKind::Ht && config.strictness == Strictness::Strict {
        let report = validate_hyperparams(&config.hyper);
        if !report.passed() {
            eprint!("{}", report.to_text());
            eprintln!("error: hyperparameters fail the stability conditions; set \"strictness\": \"research\" to run anyway");
            return Ok(EXIT_FAILED);
        }
    }
    config.validate()?;
    create_out(out)?;
    let trace = run_all(std::slice::from_ref(&config))?.remove(0);
    let mut written = Vec::new();
    if format == Format::Csv || config.outputs.csv {
        let p = out.join(format!("{}.csv", trace.name));
        write_csv(&trace, &p)?;
        written.push(p);
    }
    if format == Format::Json || config.outputs.json {
        let p = out.join(format!("{}.json", trace.name));
        write_json(&trace, &p)?;
        written.push(p);
    }
    if plot || config.outputs.plot {
        let p = out.join(format!("{}.svg", trace.name));
        emit_plot(std::slice::from_ref(&trace), Quantity::LossGap, &p)?;
        written.push(p);
    }
    for w in &trace.warnings {
        eprintln!("warning: {w}");
    }
    let violations =
        lyapunov_violations(&config, &trace).map_or("na".to_string(), |n| n.to_string());
    let files: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
    println!(
        "name={} tuner={} records={} final_gap={} diverged={} hard_diverged={} stability={} lyapunov_violations={} files={}",
        trace.name,
        trace.tuner,
        trace.len(),
        gap_text(&trace),
        trace.unstable(),
        trace.hard_diverged(),
        stability_text(&trace),
        violations,
        files.join(";")
    );
    Ok(EXIT_OK)
}

fn cmd_validate(beta: f64, gamma: f64, mu: f64, mode: ModeArg) -> i32 {
    let mode = match mode {
        ModeArg::Smooth => ModeName::Smooth,
        ModeArg::Strong => ModeName::Strong,
        ModeArg::Continuous => ModeName::Continuous,
    };
    let hp = HyperParams::new(gamma, beta, mode.into()).with_mu(mu);
    let report = validate_hyperparams(&hp);
    print!("{}", report.to_text());
    let passed = report.passed();
    println!("result={}", if passed { "pass" } else { "fail" });
    if passed {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

/// One expected outcome of a figure, evaluated on its traces.
#[derive(Debug, Clone, PartialEq)]
pub struct Claim {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

fn claim(name: &'static str, holds: bool, detail: String) -> Claim {
    Claim {
        name,
        holds,
        detail,
    }
}

/// The outcomes each figure is expected to show. `traces` are in the order
/// returned by [`figure`].
pub fn figure_claims(fig: FigureArg, traces: &[Trace]) -> Vec<Claim> {
    let stable = |t: &Trace| !t.unstable();
    let status = |t: &Trace| format!("{}:{}", t.name, stability_text(t));
    match fig {
        FigureArg::Fig1a | FigureArg::Fig1c => {
            let ht = &traces[0];
            let base = &traces[1..];
            vec![
                claim("ht-stable", stable(ht), status(ht)),
                claim(
                    "baselines-diverged",
                    base.iter().all(|t| !stable(t)),
                    base.iter().map(status).collect::<Vec<_>>().join(","),
                ),
            ]
        }
        FigureArg::Fig1b | FigureArg::Fig1d => {
            let mut claims = vec![claim(
                "all-stable",
                traces.iter().all(stable),
                traces.iter().map(status).collect::<Vec<_>>().join(","),
            )];
            if fig == FigureArg::Fig1b {
                let ht = traces[0].final_gap().unwrap_or(f64::NAN);
                let holds = traces[1..]
                    .iter()
                    .all(|t| t.final_gap().is_some_and(|g| ht < g));
                let detail = traces
                    .iter()
                    .map(|t| format!("{}:{}", t.name, gap_text(t)))
                    .collect::<Vec<_>>()
                    .join(",");
                claims.push(claim("ht-smallest-final-gap", holds, detail));
            }
            claims
        }
        FigureArg::Fig3 => {
            let hits: Vec<Option<usize>> = traces
                .iter()
                .map(|t| iterations_to_gap(t, 1e-8).ok().flatten())
                .collect();
            let within = match (hits[0], hits[1]) {
                (Some(a), Some(b)) => {
                    let (lo, hi) = (a.min(b).max(1) as f64, a.max(b) as f64);
                    hi <= 2.0 * lo
                }
                _ => false,
            };
            vec![
                claim(
                    "both-converge",
                    traces.iter().all(stable) && hits.iter().all(Option::is_some),
                    traces.iter().map(status).collect::<Vec<_>>().join(","),
                ),
                claim(
                    "iterations-within-factor-2",
                    within,
                    format!("iterations_to_1e-8={:?},{:?}", hits[0], hits[1]),
                ),
            ]
        }
    }
}

fn cmd_reproduce(fig: FigureArg, out: &Path) -> Result<i32> {
    let configs = figure(fig.as_str())?;
    create_out(out)?;
    let traces = run_all(&configs)?;
    for t in &traces {
        write_csv(t, &out.join(format!("{}.csv", t.name)))?;
    }
    emit_plot(
        &traces,
        Quantity::LossGap,
        &out.join(format!("{}.svg", fig.as_str())),
    )?;
    for (c, t) in configs.iter().zip(&traces) {
        println!(
            "figure={} name={} tuner={} status={} stability={} final_gap={} records={}",
            fig.as_str(),
            t.name,
            c.tuner.as_str(),
            if t.unstable() { "diverged" } else { "stable" },
            stability_text(t),
            gap_text(t),
            t.len()
        );
    }
    let claims = figure_claims(fig, &traces);
    for c in &claims {
        println!(
            "figure={} claim={} holds={} detail={}",
            fig.as_str(),
            c.name,
            c.holds,
            c.detail
        );
    }
    Ok(if claims.iter().all(|c| c.holds) {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

fn cmd_compare(paths: &[PathBuf], epsilon: f64, out: &Path) -> Result<i32> {
    if paths.len() < 2 {
        return Err(OptError::Usage("compare needs at least two configs".into()));
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(OptError::Usage(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let configs: Vec<ExperimentConfig> = paths
        .iter()
        .map(|p| load_config(p))
        .collect::<Result<_>>()?;
    let first = &configs[0];
    for c in &configs[1..] {
        if c.model.family != first.model.family || c.schedule != first.schedule {
            return Err(OptError::Usage(format!(
                "`{}` and `{}` use different losses or schedules",
                first.name, c.name
            )));
        }
    }
    for c in &configs {
        c.validate()?;
    }
    create_out(out)?;
    let traces = run_all(&configs)?;
    let mut best: Option<(usize, Vec<&str>)> = None;
    for t in &traces {
        write_csv(t, &out.join(format!("{}.csv", t.name)))?;
        let hit = iterations_to_gap(t, epsilon)?;
        let cell = match (t.unstable(), hit) {
            (true, _) => "diverged".to_string(),
            (false, None) => "not-reached".to_string(),
            (false, Some(k)) => {
                match &mut best {
                    Some((b, names)) if k == *b => names.push(&t.name),
                    Some((b, _)) if k > *b => {}
                    _ => best = Some((k, vec![&t.name])),
                }
                k.to_string()
            }
        };
        println!(
            "name={} tuner={} epsilon={epsilon:e} iterations_to_epsilon={cell} final_gap={}",
            t.name,
            t.tuner,
            gap_text(t)
        );
    }
    match best {
        Some((k, names)) => println!("winner={} iterations={k}", names.join(",")),
        None => println!("winner=none"),
    }
    emit_plot(&traces, Quantity::LossGap, &out.join("compare.svg"))?;
    Ok(EXIT_OK)
}

fn cmd_gradcheck(family: Family, samples: usize, seed: u64) -> Result<i32> {
    if samples == 0 {
        return Err(OptError::Usage("--samples must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let (model, theta, sample) = random_case(family, &mut rng);
        worst = worst.max(finite_diff_gradient_check(&model, &theta, &sample, 1e-6)?);
    }
    let passed = worst < 1e-6;
    println!(
        "family={} samples={samples} seed={seed} max_rel_error={worst:e} result={}",
        family.as_str(),
        if passed { "pass" } else { "fail" }
    );
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

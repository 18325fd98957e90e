//! Command-line front end: simulate, analyze, sweep, or reproduce a preset
//! experiment.

use clap::{Parser, Subcommand};
use crmac::experiment::{
    run_figure, run_point, run_sweep, write_plot_file, write_results_csv, ExperimentError,
    ExperimentRow, PRule, PlotKind, SweepParam, SweepSpec,
};
use crmac::{
    analyze, idle_capacity_bound, interference_probability, tune_access_probability,
    AccessCase, AnalysisReport, ConfigError, PPolicy, ScenarioConfig, Scheme,
};
use crmac::analytics::{AnalysisInputs, AssignmentModel};
use crmac::channel::stationary_probabilities;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "crmac",
    about = "Slot-structured cognitive-radio MAC simulator and analytical engine",
    version
)]
struct Cli {
    /// Scenario file (key = value; built-in defaults apply otherwise).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Slots per replication override.
    #[arg(long, global = true)]
    slots: Option<u64>,
    /// Replication count override.
    #[arg(long, global = true)]
    reps: Option<usize>,
    /// Directory for CSV and plot outputs.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the configured schemes and cases at the configured point.
    Run,
    /// Print the closed-form analysis at the configured point.
    Analyze,
    /// Sweep one parameter over explicit values and write results.
    Sweep {
        /// Parameter to vary: epsilon, delta, eta, gamma, or p.
        #[arg(long)]
        param: String,
        /// Comma-separated values to sweep over.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Reproduce a preset experiment (figures 4 through 8).
    Figure { which: u32 },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Config(e)) => {
            eprintln!("configuration error: {e}");
            ExitCode::from(1)
        }
        Err(AppError::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

enum AppError {
    Config(ConfigError),
    Runtime(ExperimentError),
}

impl From<ConfigError> for AppError {
    fn from(e: ConfigError) -> Self {
        AppError::Config(e)
    }
}

impl From<ExperimentError> for AppError {
    fn from(e: ExperimentError) -> Self {
        AppError::Runtime(e)
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Runtime(ExperimentError::Io(e))
    }
}

fn load_config(cli: &Cli) -> Result<ScenarioConfig, ConfigError> {
    let mut cfg = match &cli.config {
        Some(path) => ScenarioConfig::from_path(path)?,
        None => ScenarioConfig::reference(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(slots) = cli.slots {
        cfg.num_slots = slots;
    }
    if let Some(reps) = cli.reps {
        cfg.num_replications = reps;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn p_rule_from(cfg: &ScenarioConfig) -> PRule {
    match cfg.p {
        PPolicy::Auto => PRule::PerRowTuned,
        PPolicy::Fixed(p) => PRule::Fixed(p),
    }
}

fn print_rows(rows: &[ExperimentRow], with_param: bool) {
    if with_param {
        println!(
            "{:<8} {:>8}  {:<11} {:<6} {:>7}  {:>13} {:>11}  {:>13}  {:>9} {:>9}  {:>13}",
            "param", "value", "scheme", "case", "p", "sim bps", "ci", "analysis bps",
            "collision", "ci", "primary bps"
        );
    } else {
        println!(
            "{:<11} {:<6} {:>7}  {:>13} {:>11}  {:>13}  {:>9} {:>9}  {:>13}",
            "scheme", "case", "p", "sim bps", "ci", "analysis bps", "collision", "ci",
            "primary bps"
        );
    }
    for r in rows {
        let ana = r
            .ana_throughput_bps
            .map(|v| format!("{v:>13.1}"))
            .unwrap_or_else(|| format!("{:>13}", "-"));
        let coll = r
            .pu_collision
            .map(|v| format!("{v:>9.5}"))
            .unwrap_or_else(|| format!("{:>9}", "-"));
        let coll_ci = r
            .pu_collision_ci
            .map(|v| format!("{v:>9.5}"))
            .unwrap_or_else(|| format!("{:>9}", "-"));
        let body = format!(
            "{:<11} {:<6} {:>7.4}  {:>13.1} {:>11.1}  {}  {} {}  {:>13.1}",
            r.scheme.to_string(),
            r.case.to_string(),
            r.p,
            r.sim_throughput_bps,
            r.sim_throughput_ci,
            ana,
            coll,
            coll_ci,
            r.pu_throughput_bps,
        );
        if with_param {
            println!("{:<8} {:>8.4}  {body}", r.param_name, r.param_value);
        } else {
            println!("{body}");
        }
    }
}

fn print_analysis(report: &AnalysisReport) {
    println!("access case {} at p = {:.6}", report.case, report.p);
    println!("  interference per channel:");
    for (m, v) in report.interference.iter().enumerate() {
        println!("    channel {}: {v:.6}", m + 1);
    }
    println!("  throughput per channel (bps):");
    for (m, v) in report.per_channel_throughput.iter().enumerate() {
        println!("    channel {}: {v:.1}", m + 1);
    }
    println!("  total throughput: {:.1} bps", report.total_throughput);
    println!("  idle capacity bound: {:.1} bps", report.idle_capacity_bound);
}

fn execute(cli: Cli) -> Result<(), AppError> {
    let cfg = load_config(&cli)?;
    match &cli.command {
        Command::Run => {
            let pairs: Vec<(Scheme, AccessCase)> = cfg
                .schemes
                .iter()
                .flat_map(|&s| cfg.cases.iter().map(move |&c| (s, c)))
                .collect();
            let rows = run_point(&cfg, &pairs, p_rule_from(&cfg))?;
            println!(
                "{} slots x {} replications, seed {}",
                cfg.num_slots, cfg.num_replications, cfg.seed
            );
            print_rows(&rows, false);
        }
        Command::Analyze => {
            let priors: Vec<f64> = cfg
                .channels
                .iter()
                .map(|ch| {
                    stationary_probabilities(ch)
                        .map(|(_, zeta)| zeta)
                        .map_err(|e| {
                            ExperimentError::Analytics(crmac::analytics::AnalyticsError::from(e))
                        })
                })
                .collect::<Result<_, _>>()?;
            let bound = idle_capacity_bound(&cfg.channels)
                .map_err(ExperimentError::Analytics)?;
            println!("idle capacity bound: {bound:.1} bps");
            for &case in &cfg.cases {
                let inputs = AnalysisInputs {
                    channels: &cfg.channels,
                    num_users: cfg.num_users,
                    priors: &priors,
                    theta0: cfg.theta0,
                    theta1: cfg.theta1,
                    timing: cfg.timing(),
                    model: AssignmentModel::Binomial,
                };
                let p = match cfg.p {
                    PPolicy::Fixed(p) => p,
                    PPolicy::Auto => tune_access_probability(&inputs, case)
                        .map_err(ExperimentError::Analytics)?,
                };
                let report =
                    analyze(&inputs, case, p).map_err(ExperimentError::Analytics)?;
                print_analysis(&report);

                let covered = AnalysisInputs {
                    model: AssignmentModel::AllChannelsSensed,
                    ..inputs.clone()
                };
                let covered_intf = interference_probability(&covered, case, p)
                    .map_err(ExperimentError::Analytics)?;
                let covered_bound =
                    crmac::improved_policy_throughput_bound(&inputs, case, p)
                        .map_err(ExperimentError::Analytics)?;
                println!(
                    "  full-coverage bound: {covered_bound:.1} bps (worst interference {:.6})",
                    covered_intf.iter().cloned().fold(0.0, f64::max)
                );
            }
        }
        Command::Sweep { param, values } => {
            let param: SweepParam = param.parse().map_err(AppError::Runtime)?;
            let sweep = SweepSpec {
                param,
                values: values.clone(),
            };
            let pairs: Vec<(Scheme, AccessCase)> = cfg
                .schemes
                .iter()
                .flat_map(|&s| cfg.cases.iter().map(move |&c| (s, c)))
                .collect();
            let rows = run_sweep(&cfg, &sweep, &pairs, p_rule_from(&cfg))?;
            std::fs::create_dir_all(&cli.out)?;
            let results = cli.out.join("results.csv");
            write_results_csv(&rows, &results)?;
            let plot = cli.out.join(format!("plot_sweep_{param}.csv"));
            write_plot_file(&cfg, &sweep, &pairs, &rows, PlotKind::Throughput, &plot)?;
            print_rows(&rows, true);
            println!("wrote {} and {}", results.display(), plot.display());
        }
        Command::Figure { which } => {
            let (spec, rows, paths) = run_figure(&cfg, *which, &cli.out)?;
            println!(
                "{}: sweeping {} over {:?}",
                spec.name, spec.sweep.param, spec.sweep.values
            );
            print_rows(&rows, true);
            for path in paths {
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}

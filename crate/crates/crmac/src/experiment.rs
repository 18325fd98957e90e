//! Reproducible sweep experiments and their file outputs.
//!
//! A sweep varies one scalar parameter over explicit values and runs a list
//! of (scheme, access case) pairs at every value. Each row derives its own
//! seed from the master seed, the value index, and the pair, so results do
//! not depend on execution order. Outputs are a flat `results.csv` plus a
//! plot-ready wide table with one column per pair.
//!
//! Preset experiments reproduce the standard evaluation:
//! - figures 4/5/6: throughput vs sensing noise (false alarm, missed
//!   detection) and vs channel occupancy, six pairs, shared fixed access
//!   probability,
//! - figure 7: primary-collision rate vs occupancy under a calibrated
//!   access probability shared by the proposed schemes,
//! - figure 8: primary-network throughput for the same setup.

use crate::access::AccessCase;
use crate::analytics::{
    idle_capacity_bound, improved_policy_throughput_bound, throughput_case1, throughput_case2,
    tune_access_probability, AnalysisInputs, AnalyticsError, AssignmentModel,
};
use crate::channel::stationary_probabilities;
use crate::config::{PPolicy, ScenarioConfig};
use crate::policies::Scheme;
use crate::sim::{mix, run_simulation, SimError, SimScenario};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("unknown figure {0}; presets are 4 through 8")]
    UnknownFigure(u32),
    #[error("unknown sweep parameter '{0}'; expected epsilon, delta, eta, gamma, or p")]
    UnknownParam(String),
}

/// Scalar swept across an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    /// False-alarm probability of every channel.
    Epsilon,
    /// Missed-detection probability of every channel.
    Delta,
    /// Stationary busy probability of every channel, expanded through the
    /// configuration's `persistence` (see `config::occupancy_from_eta`).
    Eta,
    /// Collision budget of every channel.
    Gamma,
    /// Access probability of every scheme, baselines included.
    P,
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SweepParam::Epsilon => "epsilon",
            SweepParam::Delta => "delta",
            SweepParam::Eta => "eta",
            SweepParam::Gamma => "gamma",
            SweepParam::P => "p",
        };
        write!(f, "{name}")
    }
}

impl FromStr for SweepParam {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "epsilon" | "eps" => Ok(SweepParam::Epsilon),
            "delta" => Ok(SweepParam::Delta),
            "eta" => Ok(SweepParam::Eta),
            "gamma" => Ok(SweepParam::Gamma),
            "p" => Ok(SweepParam::P),
            other => Err(ExperimentError::UnknownParam(other.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

/// Access-probability policy for the proposed schemes within a sweep.
/// Baselines always use the configured `baseline_p` (except in a sweep of
/// `p` itself, which overrides everyone).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PRule {
    /// Tune per row: memoryless against its own assignment statistics,
    /// improved against the full-coverage assignment.
    PerRowTuned,
    /// One fixed value for all proposed rows.
    Fixed(f64),
    /// One value per sweep point, shared by all proposed rows and calibrated
    /// against the simulated schemes themselves: bisection drives the mean
    /// primary-collision rate of the two proposed schemes to
    /// [`CALIBRATION_TARGET`]. The reassignment dynamics have no closed-form
    /// sensor-count law (the scheme re-senses channels it stopped watching at
    /// the stationary prior, a class mix no static law reproduces), so
    /// model-based protective values misjudge its realized interference;
    /// calibrating on short deterministic runs protects what actually runs.
    SharedCalibrated,
}

/// Collision rate the shared calibrated access probability aims at: the
/// center of the protection band, averaged over the two proposed schemes.
/// The schemes' rates straddle the target by at most ~1.8x either way, which
/// keeps both inside [gamma - 0.02, gamma] with margin at every occupancy.
pub const CALIBRATION_TARGET: f64 = 0.025;

/// Size of one calibration probe: two replications keep the probe cheap
/// while the slot count keeps its collision estimate within +-0.001.
const CALIBRATION_SLOTS: u64 = 50_000;
const CALIBRATION_REPS: usize = 2;
/// Bisection depth; the probed interval shrinks below 1e-4, well under the
/// access probability's effect on the collision rate.
const CALIBRATION_ITERS: u32 = 14;

/// One (sweep value, scheme, case) measurement with its analytical
/// counterparts.
#[derive(Debug, Clone)]
pub struct ExperimentRow {
    pub param_name: String,
    pub param_value: f64,
    pub scheme: Scheme,
    pub case: AccessCase,
    pub p: f64,
    pub sim_throughput_bps: f64,
    pub sim_throughput_ci: f64,
    /// Closed-form throughput (memoryless) or upper bound (improved);
    /// absent for baselines.
    pub ana_throughput_bps: Option<f64>,
    pub pu_collision: Option<f64>,
    pub pu_collision_ci: Option<f64>,
    pub pu_throughput_bps: f64,
    pub upper_bound_bps: f64,
    /// Master seed of the sweep, recorded on every row.
    pub seed: u64,
}

/// Quantity a plot file tabulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    Throughput,
    Collision,
    PrimaryThroughput,
}

/// A preset experiment: sweep, pairs, access policy, and plot quantity.
#[derive(Debug, Clone)]
pub struct FigureSpec {
    pub name: String,
    pub sweep: SweepSpec,
    pub pairs: Vec<(Scheme, AccessCase)>,
    pub p_rule: PRule,
    pub plot: PlotKind,
}

fn scheme_id(scheme: Scheme) -> u64 {
    match scheme {
        Scheme::Random => 0,
        Scheme::Negotiate => 1,
        Scheme::Memoryless => 2,
        Scheme::Improved => 3,
    }
}

fn case_id(case: AccessCase) -> u64 {
    match case {
        AccessCase::Case1 => 1,
        AccessCase::Case2 => 2,
    }
}

fn row_seed(master: u64, value_index: usize, scheme: Scheme, case: AccessCase) -> u64 {
    let label = ((value_index as u64) << 16) | (scheme_id(scheme) << 8) | case_id(case);
    mix(master, label)
}

/// Apply one sweep value to a copy of the configuration.
pub fn apply_param(cfg: &ScenarioConfig, param: SweepParam, value: f64) -> ScenarioConfig {
    let mut out = cfg.clone();
    match param {
        SweepParam::Epsilon => {
            for ch in &mut out.channels {
                ch.epsilon = value;
            }
        }
        SweepParam::Delta => {
            for ch in &mut out.channels {
                ch.delta = value;
            }
        }
        SweepParam::Eta => {
            let (lambda, mu) = crate::config::occupancy_from_eta(value, cfg.persistence);
            for ch in &mut out.channels {
                ch.lambda = lambda;
                ch.mu = mu;
            }
        }
        SweepParam::Gamma => {
            for ch in &mut out.channels {
                ch.gamma = value;
            }
        }
        SweepParam::P => {
            out.p = PPolicy::Fixed(value);
            out.baseline_p = value;
        }
    }
    out
}

fn stationary_priors(cfg: &ScenarioConfig) -> Result<Vec<f64>, AnalyticsError> {
    cfg.channels
        .iter()
        .map(|ch| Ok(stationary_probabilities(ch)?.1))
        .collect()
}

fn analysis_inputs<'a>(
    cfg: &'a ScenarioConfig,
    priors: &'a [f64],
    model: AssignmentModel,
) -> AnalysisInputs<'a> {
    AnalysisInputs {
        channels: &cfg.channels,
        num_users: cfg.num_users,
        priors,
        theta0: cfg.theta0,
        theta1: cfg.theta1,
        timing: cfg.timing(),
        model,
    }
}

fn resolve_p(
    cfg: &ScenarioConfig,
    priors: &[f64],
    p_rule: PRule,
    shared: Option<f64>,
    scheme: Scheme,
    case: AccessCase,
) -> Result<f64, ExperimentError> {
    match scheme {
        Scheme::Random | Scheme::Negotiate => Ok(cfg.baseline_p),
        Scheme::Memoryless | Scheme::Improved => match p_rule {
            PRule::Fixed(p) => Ok(p),
            PRule::SharedCalibrated => {
                Ok(shared.expect("shared access probability computed per value"))
            }
            PRule::PerRowTuned => {
                let model = match scheme {
                    Scheme::Memoryless => AssignmentModel::Binomial,
                    _ => AssignmentModel::AllChannelsSensed,
                };
                let inputs = analysis_inputs(cfg, priors, model);
                Ok(tune_access_probability(&inputs, case)?)
            }
        },
    }
}

fn analytic_throughput(
    cfg: &ScenarioConfig,
    priors: &[f64],
    scheme: Scheme,
    case: AccessCase,
    p: f64,
) -> Result<Option<f64>, ExperimentError> {
    match scheme {
        Scheme::Memoryless => {
            let inputs = analysis_inputs(cfg, priors, AssignmentModel::Binomial);
            let (_, total) = match case {
                AccessCase::Case1 => throughput_case1(&inputs, p)?,
                AccessCase::Case2 => throughput_case2(&inputs, p)?,
            };
            Ok(Some(total))
        }
        Scheme::Improved => {
            let inputs = analysis_inputs(cfg, priors, AssignmentModel::AllChannelsSensed);
            Ok(Some(improved_policy_throughput_bound(&inputs, case, p)?))
        }
        Scheme::Random | Scheme::Negotiate => Ok(None),
    }
}

/// Bisect the shared access probability until the two proposed schemes'
/// mean primary-collision rate under per-channel contention hits
/// [`CALIBRATION_TARGET`].
///
/// Probes reuse one fixed seed per scheme (common random numbers): channel
/// evolution, sensing verdicts, and sensor reassignment never depend on the
/// access probability, so for a fixed seed raising it only adds
/// transmissions and the probed collision rate is exactly nondecreasing.
/// That makes the bisection well posed despite the Monte Carlo probe, and
/// the calibrated value deterministic given the sweep's master seed.
fn calibrate_shared_access_probability(
    scenario: &SimScenario,
    cal_seed: u64,
) -> Result<f64, ExperimentError> {
    let probe = |p: f64| -> Result<f64, ExperimentError> {
        let mut total = 0.0;
        for scheme in [Scheme::Memoryless, Scheme::Improved] {
            let metrics = run_simulation(
                scenario,
                scheme,
                AccessCase::Case1,
                p,
                CALIBRATION_SLOTS,
                CALIBRATION_REPS,
                mix(cal_seed, scheme_id(scheme)),
            )?;
            let collision = metrics
                .pu_collision
                .expect("proposed schemes report a primary-collision rate");
            total += collision.mean;
        }
        Ok(total / 2.0)
    };

    let (mut lo, mut hi) = (1e-3, 0.999);
    if probe(hi)? <= CALIBRATION_TARGET {
        return Ok(hi);
    }
    if probe(lo)? >= CALIBRATION_TARGET {
        return Ok(lo);
    }
    for _ in 0..CALIBRATION_ITERS {
        let mid = 0.5 * (lo + hi);
        if probe(mid)? < CALIBRATION_TARGET {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn run_rows(
    cfg: &ScenarioConfig,
    param_name: &str,
    param_value: f64,
    value_index: usize,
    pairs: &[(Scheme, AccessCase)],
    p_rule: PRule,
    master_seed: u64,
) -> Result<Vec<ExperimentRow>, ExperimentError> {
    let priors = stationary_priors(cfg)?;
    let scenario = cfg.scenario();
    let shared = if p_rule == PRule::SharedCalibrated {
        Some(calibrate_shared_access_probability(
            &scenario,
            mix(master_seed, 0xCA11B ^ ((value_index as u64) << 20)),
        )?)
    } else {
        None
    };
    let upper_bound = idle_capacity_bound(&cfg.channels)?;

    let mut rows = Vec::with_capacity(pairs.len());
    for &(scheme, case) in pairs {
        let p = resolve_p(cfg, &priors, p_rule, shared, scheme, case)?;
        let metrics = run_simulation(
            &scenario,
            scheme,
            case,
            p,
            cfg.num_slots,
            cfg.num_replications,
            row_seed(master_seed, value_index, scheme, case),
        )?;
        let ana = analytic_throughput(cfg, &priors, scheme, case, p)?;
        rows.push(ExperimentRow {
            param_name: param_name.to_string(),
            param_value,
            scheme,
            case,
            p,
            sim_throughput_bps: metrics.throughput_bps.mean,
            sim_throughput_ci: metrics.throughput_bps.half_width,
            ana_throughput_bps: ana,
            pu_collision: metrics.pu_collision.map(|c| c.mean),
            pu_collision_ci: metrics.pu_collision.map(|c| c.half_width),
            pu_throughput_bps: metrics.pu_throughput_bps.mean,
            upper_bound_bps: upper_bound,
            seed: master_seed,
        });
    }
    Ok(rows)
}

/// Run all pairs at the configured operating point (no sweep).
pub fn run_point(
    cfg: &ScenarioConfig,
    pairs: &[(Scheme, AccessCase)],
    p_rule: PRule,
) -> Result<Vec<ExperimentRow>, ExperimentError> {
    run_rows(cfg, "point", 0.0, 0, pairs, p_rule, cfg.seed)
}

/// Run every pair at every sweep value. Rows are ordered by value, then by
/// pair, and each carries a seed derived from (master seed, value index,
/// scheme, case).
pub fn run_sweep(
    cfg: &ScenarioConfig,
    sweep: &SweepSpec,
    pairs: &[(Scheme, AccessCase)],
    p_rule: PRule,
) -> Result<Vec<ExperimentRow>, ExperimentError> {
    let mut rows = Vec::with_capacity(sweep.values.len() * pairs.len());
    for (value_index, &value) in sweep.values.iter().enumerate() {
        let point_cfg = apply_param(cfg, sweep.param, value);
        let effective_rule = if sweep.param == SweepParam::P {
            PRule::Fixed(value)
        } else {
            p_rule
        };
        rows.extend(run_rows(
            &point_cfg,
            &sweep.param.to_string(),
            value,
            value_index,
            pairs,
            effective_rule,
            cfg.seed,
        )?);
    }
    Ok(rows)
}

/// The preset experiments.
pub fn figure_preset(which: u32) -> Result<FigureSpec, ExperimentError> {
    let noise_values = vec![0.1, 0.2, 0.3, 0.4, 0.5];
    let eta_values = vec![0.3, 0.4, 0.5, 0.6, 0.7];
    let all_pairs = vec![
        (Scheme::Random, AccessCase::Case1),
        (Scheme::Negotiate, AccessCase::Case1),
        (Scheme::Memoryless, AccessCase::Case1),
        (Scheme::Memoryless, AccessCase::Case2),
        (Scheme::Improved, AccessCase::Case1),
        (Scheme::Improved, AccessCase::Case2),
    ];
    let constrained_pairs = vec![
        (Scheme::Random, AccessCase::Case1),
        (Scheme::Negotiate, AccessCase::Case1),
        (Scheme::Memoryless, AccessCase::Case1),
        (Scheme::Improved, AccessCase::Case1),
    ];
    let spec = match which {
        4 => FigureSpec {
            name: "fig4".to_string(),
            sweep: SweepSpec {
                param: SweepParam::Epsilon,
                values: noise_values,
            },
            pairs: all_pairs,
            p_rule: PRule::Fixed(0.2),
            plot: PlotKind::Throughput,
        },
        5 => FigureSpec {
            name: "fig5".to_string(),
            sweep: SweepSpec {
                param: SweepParam::Delta,
                values: noise_values,
            },
            pairs: all_pairs,
            p_rule: PRule::Fixed(0.2),
            plot: PlotKind::Throughput,
        },
        6 => FigureSpec {
            name: "fig6".to_string(),
            sweep: SweepSpec {
                param: SweepParam::Eta,
                values: eta_values,
            },
            pairs: all_pairs,
            p_rule: PRule::Fixed(0.2),
            plot: PlotKind::Throughput,
        },
        7 => FigureSpec {
            name: "fig7".to_string(),
            sweep: SweepSpec {
                param: SweepParam::Eta,
                values: eta_values,
            },
            pairs: constrained_pairs,
            p_rule: PRule::SharedCalibrated,
            plot: PlotKind::Collision,
        },
        8 => FigureSpec {
            name: "fig8".to_string(),
            sweep: SweepSpec {
                param: SweepParam::Eta,
                values: eta_values,
            },
            pairs: constrained_pairs,
            p_rule: PRule::SharedCalibrated,
            plot: PlotKind::PrimaryThroughput,
        },
        other => return Err(ExperimentError::UnknownFigure(other)),
    };
    Ok(spec)
}

fn fmt_float(v: f64) -> String {
    format!("{v:.6e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

/// Flat CSV with one line per row; formatting is deterministic, so two runs
/// with the same seed produce identical bytes.
pub fn write_results_csv(rows: &[ExperimentRow], path: &Path) -> std::io::Result<()> {
    let mut out = String::new();
    out.push_str(
        "param_name,param_value,scheme,case,p,sim_throughput_bps,sim_throughput_ci,\
         ana_throughput_bps,pu_collision,pu_collision_ci,pu_throughput_bps,upper_bound_bps,seed\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.param_name,
            fmt_float(r.param_value),
            r.scheme,
            r.case,
            fmt_float(r.p),
            fmt_float(r.sim_throughput_bps),
            fmt_float(r.sim_throughput_ci),
            fmt_opt(r.ana_throughput_bps),
            fmt_opt(r.pu_collision),
            fmt_opt(r.pu_collision_ci),
            fmt_float(r.pu_throughput_bps),
            fmt_float(r.upper_bound_bps),
            r.seed,
        ));
    }
    fs::write(path, out)
}

/// Wide plot table: the sweep value, one column per pair, and a reference
/// column (idle capacity bound for throughput plots, the collision budget
/// for collision plots).
pub fn write_plot_file(
    cfg: &ScenarioConfig,
    sweep: &SweepSpec,
    pairs: &[(Scheme, AccessCase)],
    rows: &[ExperimentRow],
    kind: PlotKind,
    path: &Path,
) -> std::io::Result<()> {
    assert_eq!(rows.len(), sweep.values.len() * pairs.len());
    let mut header = vec![sweep.param.to_string()];
    for &(scheme, case) in pairs {
        header.push(format!("{scheme}_{case}"));
    }
    match kind {
        PlotKind::Throughput => header.push("upper_bound".to_string()),
        PlotKind::Collision => header.push("gamma".to_string()),
        PlotKind::PrimaryThroughput => {}
    }
    let mut out = header.join(",");
    out.push('\n');
    for (vi, &value) in sweep.values.iter().enumerate() {
        let mut fields = vec![fmt_float(value)];
        let block = &rows[vi * pairs.len()..(vi + 1) * pairs.len()];
        for r in block {
            let cell = match kind {
                PlotKind::Throughput => Some(r.sim_throughput_bps),
                PlotKind::Collision => r.pu_collision,
                PlotKind::PrimaryThroughput => Some(r.pu_throughput_bps),
            };
            fields.push(fmt_opt(cell));
        }
        match kind {
            PlotKind::Throughput => fields.push(fmt_float(block[0].upper_bound_bps)),
            PlotKind::Collision => {
                let point = apply_param(cfg, sweep.param, value);
                let gamma = point
                    .channels
                    .iter()
                    .map(|ch| ch.gamma)
                    .fold(f64::NEG_INFINITY, f64::max);
                fields.push(fmt_float(gamma));
            }
            PlotKind::PrimaryThroughput => {}
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    fs::write(path, out)
}

/// Run a preset experiment and write `results.csv`, `plot_<name>.csv`, and
/// the canonical scenario dump into `out_dir`.
pub fn run_figure(
    cfg: &ScenarioConfig,
    which: u32,
    out_dir: &Path,
) -> Result<(FigureSpec, Vec<ExperimentRow>, Vec<PathBuf>), ExperimentError> {
    let spec = figure_preset(which)?;
    let rows = run_sweep(cfg, &spec.sweep, &spec.pairs, spec.p_rule)?;
    fs::create_dir_all(out_dir)?;
    let results = out_dir.join("results.csv");
    write_results_csv(&rows, &results)?;
    let plot = out_dir.join(format!("plot_{}.csv", spec.name));
    write_plot_file(cfg, &spec.sweep, &spec.pairs, &rows, spec.plot, &plot)?;
    let scenario = out_dir.join(format!("scenario_{}.txt", spec.name));
    fs::write(&scenario, cfg.to_config_text())?;
    Ok((spec, rows, vec![results, plot, scenario]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_cfg() -> ScenarioConfig {
        let mut cfg = ScenarioConfig::reference();
        cfg.num_slots = 300;
        cfg.num_replications = 2;
        cfg.seed = 77;
        cfg
    }

    #[test]
    fn sweep_param_labels_round_trip() {
        for param in [
            SweepParam::Epsilon,
            SweepParam::Delta,
            SweepParam::Eta,
            SweepParam::Gamma,
            SweepParam::P,
        ] {
            let parsed: SweepParam = param.to_string().parse().unwrap();
            assert_eq!(parsed, param);
        }
        assert!("speed".parse::<SweepParam>().is_err());
    }

    #[test]
    fn apply_param_rewrites_channels() {
        let cfg = tiny_cfg();
        let out = apply_param(&cfg, SweepParam::Eta, 0.6);
        for ch in &out.channels {
            let expected = crate::config::occupancy_from_eta(0.6, cfg.persistence);
            assert!((ch.lambda - expected.0).abs() < 1e-15);
            assert!((ch.mu - expected.1).abs() < 1e-15);
            let (eta, _) = stationary_probabilities(ch).unwrap();
            assert!((eta - 0.6).abs() < 1e-12);
            assert!((ch.lambda - ch.mu - cfg.persistence).abs() < 1e-12);
        }
        let out = apply_param(&cfg, SweepParam::Delta, 0.45);
        assert!(out.channels.iter().all(|ch| ch.delta == 0.45));
        let out = apply_param(&cfg, SweepParam::P, 0.3);
        assert_eq!(out.p, PPolicy::Fixed(0.3));
        assert_eq!(out.baseline_p, 0.3);
    }

    #[test]
    fn sweep_produces_ordered_annotated_rows() {
        let cfg = tiny_cfg();
        let sweep = SweepSpec {
            param: SweepParam::Epsilon,
            values: vec![0.2, 0.4],
        };
        let pairs = vec![
            (Scheme::Random, AccessCase::Case1),
            (Scheme::Memoryless, AccessCase::Case2),
            (Scheme::Improved, AccessCase::Case2),
        ];
        let rows = run_sweep(&cfg, &sweep, &pairs, PRule::Fixed(0.2)).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0].param_value, 0.2);
        assert_eq!(rows[3].param_value, 0.4);
        assert_eq!(rows[0].scheme, Scheme::Random);
        assert!(rows[0].ana_throughput_bps.is_none(), "baselines have no closed form");
        assert!(rows[1].ana_throughput_bps.is_some());
        assert!(rows[2].ana_throughput_bps.is_some());
        assert_eq!(rows[0].p, cfg.baseline_p);
        assert_eq!(rows[1].p, 0.2);
        assert!(rows.iter().all(|r| r.seed == 77));
        assert!(rows.iter().all(|r| r.upper_bound_bps == 3.5e6));
    }

    #[test]
    fn per_row_tuning_differs_between_schemes() {
        let mut cfg = tiny_cfg();
        cfg.num_slots = 100;
        let sweep = SweepSpec {
            param: SweepParam::Eta,
            values: vec![0.3],
        };
        let pairs = vec![
            (Scheme::Memoryless, AccessCase::Case1),
            (Scheme::Improved, AccessCase::Case1),
        ];
        let rows = run_sweep(&cfg, &sweep, &pairs, PRule::PerRowTuned).unwrap();
        // The full-coverage model sees more sensors per channel, so the
        // improved scheme is tuned more conservatively.
        assert!(
            rows[1].p < rows[0].p,
            "improved p {} !< memoryless p {}",
            rows[1].p,
            rows[0].p
        );
    }

    #[test]
    fn figure_presets_are_complete() {
        for which in 4..=8 {
            let spec = figure_preset(which).unwrap();
            assert_eq!(spec.sweep.values.len(), 5);
            assert!(!spec.pairs.is_empty());
        }
        assert!(matches!(
            figure_preset(9),
            Err(ExperimentError::UnknownFigure(9))
        ));
        assert_eq!(figure_preset(4).unwrap().pairs.len(), 6);
        assert_eq!(figure_preset(7).unwrap().pairs.len(), 4);
    }

    #[test]
    fn figure_outputs_are_deterministic_and_well_formed() {
        let mut cfg = tiny_cfg();
        cfg.num_slots = 120;
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let (_, rows_a, paths_a) = run_figure(&cfg, 6, dir_a.path()).unwrap();
        let (_, _, paths_b) = run_figure(&cfg, 6, dir_b.path()).unwrap();
        assert_eq!(rows_a.len(), 30);

        let csv_a = fs::read(&paths_a[0]).unwrap();
        let csv_b = fs::read(&paths_b[0]).unwrap();
        assert_eq!(csv_a, csv_b, "same seed must give identical results.csv");

        let text = String::from_utf8(csv_a).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert_eq!(
            header,
            "param_name,param_value,scheme,case,p,sim_throughput_bps,sim_throughput_ci,\
             ana_throughput_bps,pu_collision,pu_collision_ci,pu_throughput_bps,upper_bound_bps,seed"
        );
        assert_eq!(lines.count(), 30);

        let plot = fs::read_to_string(&paths_a[1]).unwrap();
        let plot_header = plot.lines().next().unwrap();
        assert_eq!(
            plot_header,
            "eta,random_case1,negotiate_case1,memoryless_case1,memoryless_case2,\
             improved_case1,improved_case2,upper_bound"
        );
        assert_eq!(plot.lines().count(), 6);
    }
}

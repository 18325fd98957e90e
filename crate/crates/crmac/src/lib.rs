//! Slot-structured cognitive-radio MAC simulator and analytical engine.
//!
//! A licensed band of `M` independent two-state Markov channels is opportunistically
//! reused by `N` secondary users. Each slot opens with a short sensing phase
//! (up to `K` mini-slots) in which users accumulate noisy busy/idle indications and
//! run a sequential Bayesian test per channel; channels classified idle are then
//! contended for with a slotted-ALOHA style access probability.
//!
//! The crate provides:
//! - event-level Monte Carlo simulation of four sensing-assignment schemes
//!   (`random`, `negotiate`, `memoryless`, `improved`) under two contention modes
//!   (per-channel RTS and bonded control-channel RTS),
//! - closed-form throughput and primary-interference expressions for the
//!   memoryless scheme, plus an upper bound for the improved scheme,
//! - access-probability tuning against a primary collision constraint,
//! - reproducible sweep experiments with CSV / plot-file emission.

pub mod access;
pub mod analytics;
pub mod channel;
pub mod config;
pub mod experiment;
pub mod policies;
pub mod sensing;
pub mod sim;

pub use access::{contention_probabilities, AccessCase, AccessConfig, ContentionOutcome};
pub use analytics::{
    analyze, assignment_distribution, conditioned_assignment_distribution, idle_capacity_bound,
    improved_policy_throughput_bound, interference_probability, sensing_outcome_distribution,
    throughput_case1, throughput_case2, tune_access_probability, AnalysisInputs, AnalysisReport,
    AnalyticsError, AssignmentModel, PriorModel, SensingOutcomeDistribution, SlotTiming,
    StopTimeDistribution,
};
pub use channel::{
    stationary_probabilities, step_channels, ChannelError, ChannelParams, ChannelState,
    ChannelStateVector,
};
pub use config::{occupancy_from_eta, ConfigError, PPolicy, ScenarioConfig, DEFAULT_PERSISTENCE};
pub use experiment::{
    apply_param, figure_preset, run_figure, run_point, run_sweep, write_plot_file,
    write_results_csv, ExperimentError, ExperimentRow, FigureSpec, PRule, PlotKind, SweepParam,
    SweepSpec,
};
pub use policies::{
    assign_improved, assign_memoryless, assign_negotiate, assign_random, run_sensing_phase,
    ChannelClass, ChannelKnowledge, ChannelSensingOutcome, Scheme, SensingAssignment,
    SensingMode, SensingPhaseResult, SensingVerdict,
};
pub use sensing::{
    classify_belief, enumerate_decision_sets, posterior_idle, sample_observation, BeliefState,
    DecisionSets, Verdict,
};
pub use sim::{run_simulation, run_slot, AggregateMetrics, MeanCi, SimError, SimScenario, SlotTrace};

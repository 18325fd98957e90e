//! Closed-form performance analysis of the memoryless scheme and an upper
//! bound for the improved scheme.
//!
//! Everything factorizes per channel once the marginal distribution of the
//! number of sensors per channel is fixed:
//! - `Binomial`: each user picks a channel independently and uniformly, so a
//!   channel sees `U ~ Bin(N, 1/M)` sensors (memoryless scheme),
//! - `AllChannelsSensed`: the multinomial assignment conditioned on every
//!   channel receiving at least one sensor (idealized improved scheme).
//!
//! The stop-time law of the sequential test is computed by a forward dynamic
//! program over (mini-slot, cumulative idle indications): with `u` sensors
//! pooled per mini-slot the idle-indication increment is `Bin(u, q)`, where
//! `q = 1 - epsilon` on an idle channel and `q = delta` on a busy one.
//!
//! The prior feeding that test is equally pluggable ([`PriorModel`]): the
//! memoryless expressions use the stationary idle probability, while the
//! improved-scheme bound propagates a perfectly known previous state one
//! step through the channel's transition probabilities.

use crate::access::{contention_probabilities, AccessCase};
use crate::channel::{stationary_probabilities, ChannelError, ChannelParams, ChannelState};
use crate::sensing::{classify_belief, posterior_idle, Verdict};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AnalyticsError {
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error("covering all channels needs at least as many users as channels (users = {users}, channels = {channels})")]
    InsufficientUsers { users: usize, channels: usize },
    #[error("priors length {priors} does not match channel count {channels}")]
    PriorsMismatch { priors: usize, channels: usize },
}

/// Slot layout: up to `max_mini_slots` sensing mini-slots followed by a data
/// period. A test that concludes idle early (per-channel access) reclaims the
/// remaining mini-slots for data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotTiming {
    pub max_mini_slots: u32,
    /// Duration of one sensing mini-slot in seconds.
    pub t_mini_slot: f64,
    /// Duration of the data period in seconds.
    pub t_data: f64,
}

impl SlotTiming {
    pub fn t_slot(&self) -> f64 {
        self.max_mini_slots as f64 * self.t_mini_slot + self.t_data
    }
}

/// Marginal law of the number of sensors assigned to one channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssignmentModel {
    /// Independent uniform channel choices: `U ~ Bin(N, 1/M)`.
    Binomial,
    /// Uniform assignment conditioned on every channel getting a sensor.
    AllChannelsSensed,
}

/// How the analytical model picks the prior idle probability fed into the
/// sequential test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorModel {
    /// The per-channel prior from [`AnalysisInputs::priors`] — the stationary
    /// idle probability for the memoryless scheme, which carries nothing
    /// across slots.
    Stationary,
    /// Exact one-step propagation from a perfectly known previous state: the
    /// prior is `lambda` if the previous slot was idle and `mu` if it was
    /// busy, mixed with the conditional law of the previous state given the
    /// current one. Models a scheme whose knowledge of last slot's states is
    /// complete, so it upper-bounds the partial knowledge the load-balancing
    /// scheme actually accumulates. Tighter knowledge models were probed and
    /// rejected: conditioning knowledge on the idealized test reaching a
    /// verdict drops the prediction below the simulated scheme, because the
    /// simulation concentrates sensors on channels it confirmed idle and
    /// thereby beats the fixed sensor-count law class by class.
    PreviousStateKnown,
}

/// Mixture of sensing priors for a channel in the given current state:
/// `(weight, prior)` pairs with weights summing to one.
fn prior_components(
    ch: &ChannelParams,
    prior: f64,
    model: PriorModel,
    current: ChannelState,
) -> Result<Vec<(f64, f64)>, AnalyticsError> {
    match model {
        PriorModel::Stationary => Ok(vec![(1.0, prior)]),
        PriorModel::PreviousStateKnown => {
            let (eta, zeta) = stationary_probabilities(ch)?;
            let components = match current {
                // Pr(previous idle | current idle) = lambda by reversibility
                // of a two-state stationary chain.
                ChannelState::Idle => vec![(ch.lambda, ch.lambda), (1.0 - ch.lambda, ch.mu)],
                ChannelState::Busy => {
                    if eta <= f64::EPSILON {
                        // A channel that is never busy contributes nothing
                        // through its busy-state tables.
                        vec![(1.0, ch.lambda)]
                    } else {
                        let w = ((1.0 - ch.lambda) * zeta / eta).clamp(0.0, 1.0);
                        vec![(w, ch.lambda), (1.0 - w, ch.mu)]
                    }
                }
            };
            Ok(components)
        }
    }
}

fn choose(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Probability mass function of `Bin(n, q)` over `0..=n`.
fn binomial_pmf(n: u32, q: f64) -> Vec<f64> {
    (0..=n)
        .map(|i| choose(n, i) * q.powi(i as i32) * (1.0 - q).powi((n - i) as i32))
        .collect()
}

/// Probability that `balls` uniform throws cover all `boxes` boxes.
fn coverage_probability(balls: u32, boxes: u32) -> f64 {
    if boxes == 0 {
        return if balls == 0 { 1.0 } else { 0.0 };
    }
    if balls < boxes {
        return 0.0;
    }
    let mut acc = 0.0f64;
    for j in 0..=boxes {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * choose(boxes, j) * (((boxes - j) as f64) / boxes as f64).powi(balls as i32);
    }
    acc.max(0.0)
}

/// Marginal distribution of sensors per channel when `n` users each pick one
/// of `m` channels independently and uniformly.
pub fn assignment_distribution(n: usize, m: usize) -> Vec<f64> {
    assert!(m >= 1, "need at least one channel");
    binomial_pmf(n as u32, 1.0 / m as f64)
}

/// Marginal distribution of sensors on one channel under the uniform
/// assignment conditioned on every channel being sensed.
pub fn conditioned_assignment_distribution(
    n: usize,
    m: usize,
) -> Result<Vec<f64>, AnalyticsError> {
    assert!(m >= 1, "need at least one channel");
    if n < m {
        return Err(AnalyticsError::InsufficientUsers {
            users: n,
            channels: m,
        });
    }
    let mut pmf = vec![0.0f64; n + 1];
    if m == 1 {
        pmf[n] = 1.0;
        return Ok(pmf);
    }
    let q = 1.0 / m as f64;
    for u in 1..=n {
        let remaining = (n - u) as u32;
        pmf[u] = choose(n as u32, u as u32)
            * q.powi(u as i32)
            * (1.0 - q).powi(remaining as i32)
            * coverage_probability(remaining, (m - 1) as u32);
    }
    let total: f64 = pmf.iter().sum();
    debug_assert!(total > 0.0);
    for entry in &mut pmf {
        *entry /= total;
    }
    Ok(pmf)
}

/// Joint law of the sequential test outcome and its stopping mini-slot,
/// conditioned on the true channel state.
///
/// `idle_stop[k]` (`busy_stop[k]`) is the probability that the test first
/// declares idle (busy) at mini-slot `k`, for `k` in `1..=max_mini_slots`;
/// index 0 is unused. `undecided` is the mass never reaching a verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct SensingOutcomeDistribution {
    pub idle_stop: Vec<f64>,
    pub busy_stop: Vec<f64>,
    pub undecided: f64,
}

impl SensingOutcomeDistribution {
    pub fn idle_probability(&self) -> f64 {
        self.idle_stop.iter().sum()
    }

    pub fn busy_probability(&self) -> f64 {
        self.busy_stop.iter().sum()
    }

    pub fn idle_stop_times(&self) -> StopTimeDistribution {
        StopTimeDistribution {
            probs: self.idle_stop.clone(),
            residual: 1.0 - self.idle_probability(),
        }
    }
}

/// Distribution of the mini-slot at which an idle verdict is reached;
/// `residual` is the probability of never declaring idle.
#[derive(Debug, Clone, PartialEq)]
pub struct StopTimeDistribution {
    pub probs: Vec<f64>,
    pub residual: f64,
}

/// Forward dynamic program over (mini-slot, cumulative idle indications).
///
/// `num_sensors` users pool one indication each per mini-slot; the verdict is
/// evaluated after every mini-slot, so even a decisive prior consumes one
/// mini-slot before the test can stop.
pub fn sensing_outcome_distribution(
    num_sensors: u32,
    state: ChannelState,
    prior: f64,
    epsilon: f64,
    delta: f64,
    theta0: f64,
    theta1: f64,
    max_mini_slots: u32,
) -> SensingOutcomeDistribution {
    assert!(num_sensors >= 1, "the dynamic program needs a sensor");
    assert!(max_mini_slots >= 1, "need at least one mini-slot");
    let u = num_sensors as usize;
    let kbar = max_mini_slots as usize;
    let q = match state {
        ChannelState::Idle => 1.0 - epsilon,
        ChannelState::Busy => delta,
    };
    let row = binomial_pmf(num_sensors, q);

    let mut idle_stop = vec![0.0; kbar + 1];
    let mut busy_stop = vec![0.0; kbar + 1];
    // alive[d] = Pr(test still running, d idle indications accumulated).
    let mut alive = vec![0.0f64; u * kbar + 1];
    alive[0] = 1.0;
    let mut support = 0usize;

    for j in 1..=kbar {
        let mut next = vec![0.0f64; u * kbar + 1];
        for d in 0..=support {
            let mass = alive[d];
            if mass == 0.0 {
                continue;
            }
            for (inc, w) in row.iter().enumerate() {
                if *w > 0.0 {
                    next[d + inc] += mass * w;
                }
            }
        }
        support = j * u;
        let pooled = (j * u) as u32;
        alive.iter_mut().for_each(|v| *v = 0.0);
        for (d, mass) in next.iter().enumerate().take(support + 1) {
            if *mass == 0.0 {
                continue;
            }
            let a = posterior_idle(prior, d as u32, pooled, epsilon, delta);
            match classify_belief(a, theta0, theta1) {
                Verdict::Idle => idle_stop[j] += mass,
                Verdict::Busy => busy_stop[j] += mass,
                Verdict::Undecided => alive[d] = *mass,
            }
        }
    }

    SensingOutcomeDistribution {
        idle_stop,
        busy_stop,
        undecided: alive.iter().sum(),
    }
}

/// Shared inputs of the closed-form expressions.
#[derive(Debug, Clone)]
pub struct AnalysisInputs<'a> {
    pub channels: &'a [ChannelParams],
    pub num_users: usize,
    /// Prior idle probability per channel (stationary idle probability for
    /// the memoryless scheme).
    pub priors: &'a [f64],
    pub theta0: f64,
    pub theta1: f64,
    pub timing: SlotTiming,
    pub model: AssignmentModel,
}

impl AnalysisInputs<'_> {
    fn validate(&self) -> Result<(), AnalyticsError> {
        if self.priors.len() != self.channels.len() {
            return Err(AnalyticsError::PriorsMismatch {
                priors: self.priors.len(),
                channels: self.channels.len(),
            });
        }
        for ch in self.channels {
            ch.validate()?;
        }
        Ok(())
    }

    fn assignment_marginal(&self) -> Result<Vec<f64>, AnalyticsError> {
        match self.model {
            AssignmentModel::Binomial => {
                Ok(assignment_distribution(self.num_users, self.channels.len()))
            }
            AssignmentModel::AllChannelsSensed => {
                conditioned_assignment_distribution(self.num_users, self.channels.len())
            }
        }
    }

    /// Probability a busy channel ends up declared idle, per channel and
    /// per sensor count `u = 1..=N`.
    fn missed_idle_table(&self, model: PriorModel) -> Result<Vec<Vec<f64>>, AnalyticsError> {
        self.channels
            .iter()
            .zip(self.priors)
            .map(|(ch, &prior)| {
                let components = prior_components(ch, prior, model, ChannelState::Busy)?;
                Ok((1..=self.num_users as u32)
                    .map(|u| {
                        components
                            .iter()
                            .map(|&(weight, component_prior)| {
                                weight
                                    * sensing_outcome_distribution(
                                        u,
                                        ChannelState::Busy,
                                        component_prior,
                                        ch.epsilon,
                                        ch.delta,
                                        self.theta0,
                                        self.theta1,
                                        self.timing.max_mini_slots,
                                    )
                                    .idle_probability()
                            })
                            .sum()
                    })
                    .collect())
            })
            .collect()
    }
}

fn case1_access_probability(u: usize, p: f64) -> f64 {
    1.0 - (1.0 - p).powi(u as i32)
}

fn interference_from_tables(
    marginal: &[f64],
    missed: &[Vec<f64>],
    num_users: usize,
    case: AccessCase,
    p: f64,
) -> Vec<f64> {
    let bonded_success = contention_probabilities(num_users as u32, p).1;
    missed
        .iter()
        .map(|per_u| {
            let mut total = 0.0;
            for u in 1..=num_users {
                let w = marginal[u];
                if w == 0.0 {
                    continue;
                }
                let access = match case {
                    AccessCase::Case1 => case1_access_probability(u, p),
                    AccessCase::Case2 => bonded_success,
                };
                total += w * per_u[u - 1] * access;
            }
            total
        })
        .collect()
}

/// Per-channel probability that a busy slot suffers a secondary transmission.
///
/// Conditions on the channel being busy: a missed-detection idle verdict must
/// occur and at least one RTS (per-channel access) or a winning data
/// transmission (bonded access) must touch the channel.
pub fn interference_probability(
    inputs: &AnalysisInputs,
    case: AccessCase,
    p: f64,
) -> Result<Vec<f64>, AnalyticsError> {
    inputs.validate()?;
    let marginal = inputs.assignment_marginal()?;
    let missed = inputs.missed_idle_table(PriorModel::Stationary)?;
    Ok(interference_from_tables(
        &marginal,
        &missed,
        inputs.num_users,
        case,
        p,
    ))
}

/// Largest access probability whose per-channel interference stays within
/// each channel's collision constraint `gamma`.
///
/// Per-channel access is monotone in `p`, so a bisection applies. Bonded
/// access scales with the control-channel success probability
/// `N p (1-p)^(N-1)`, which also multiplies the throughput; the search
/// therefore maximizes that success probability over a uniform grid of
/// 1001 points and picks the smallest `p` achieving the maximum.
pub fn tune_access_probability(
    inputs: &AnalysisInputs,
    case: AccessCase,
) -> Result<f64, AnalyticsError> {
    inputs.validate()?;
    let marginal = inputs.assignment_marginal()?;
    let missed = inputs.missed_idle_table(PriorModel::Stationary)?;
    let feasible = |p: f64| -> bool {
        interference_from_tables(&marginal, &missed, inputs.num_users, case, p)
            .iter()
            .zip(inputs.channels)
            .all(|(intf, ch)| *intf <= ch.gamma + 1e-15)
    };
    Ok(search_constrained_p(case, inputs.num_users, feasible))
}

/// Largest (Case 1) or success-maximizing (Case 2) access probability whose
/// predicted interference the `feasible` closure accepts.
fn search_constrained_p(
    case: AccessCase,
    num_users: usize,
    feasible: impl Fn(f64) -> bool,
) -> f64 {
    match case {
        AccessCase::Case1 => {
            if feasible(1.0) {
                return 1.0;
            }
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            while hi - lo > 1e-12 {
                let mid = 0.5 * (lo + hi);
                if feasible(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        }
        AccessCase::Case2 => {
            let mut best_p = 0.0;
            let mut best_success = -1.0;
            for i in 0..=1000 {
                let p = i as f64 / 1000.0;
                if !feasible(p) {
                    continue;
                }
                let success = contention_probabilities(num_users as u32, p).1;
                if success > best_success {
                    best_success = success;
                    best_p = p;
                }
            }
            best_p
        }
    }
}

fn idle_stop_table(
    inputs: &AnalysisInputs,
    model: PriorModel,
) -> Result<Vec<Vec<Vec<f64>>>, AnalyticsError> {
    // [channel][u - 1] -> idle_stop vector over mini-slots.
    inputs
        .channels
        .iter()
        .zip(inputs.priors)
        .map(|(ch, &prior)| {
            let components = prior_components(ch, prior, model, ChannelState::Idle)?;
            Ok((1..=inputs.num_users as u32)
                .map(|u| {
                    let mut mixed = vec![0.0f64; inputs.timing.max_mini_slots as usize + 1];
                    for &(weight, component_prior) in &components {
                        let stop = sensing_outcome_distribution(
                            u,
                            ChannelState::Idle,
                            component_prior,
                            ch.epsilon,
                            ch.delta,
                            inputs.theta0,
                            inputs.theta1,
                            inputs.timing.max_mini_slots,
                        )
                        .idle_stop;
                        for (acc, value) in mixed.iter_mut().zip(&stop) {
                            *acc += weight * value;
                        }
                    }
                    mixed
                })
                .collect())
        })
        .collect()
}

/// Expected throughput under per-channel access: a test concluding idle at
/// mini-slot `k` reclaims the remaining mini-slots, so a successful slot
/// carries `((K - k) t_ms + t_data) / t_slot` of the channel rate.
pub fn throughput_case1(
    inputs: &AnalysisInputs,
    p: f64,
) -> Result<(Vec<f64>, f64), AnalyticsError> {
    throughput_case1_with(inputs, PriorModel::Stationary, p)
}

fn throughput_case1_with(
    inputs: &AnalysisInputs,
    prior_model: PriorModel,
    p: f64,
) -> Result<(Vec<f64>, f64), AnalyticsError> {
    inputs.validate()?;
    let marginal = inputs.assignment_marginal()?;
    let stops = idle_stop_table(inputs, prior_model)?;
    let timing = inputs.timing;
    let t_slot = timing.t_slot();
    let kbar = timing.max_mini_slots as usize;
    let mut per_channel = Vec::with_capacity(inputs.channels.len());
    for (ch, stop_by_u) in inputs.channels.iter().zip(&stops) {
        let (_, zeta) = stationary_probabilities(ch)?;
        let mut mean_fraction = 0.0;
        for u in 1..=inputs.num_users {
            let w = marginal[u];
            if w == 0.0 {
                continue;
            }
            let success = contention_probabilities(u as u32, p).1;
            let mut time_share = 0.0;
            for (k, stop) in stop_by_u[u - 1].iter().enumerate().skip(1) {
                let usable = (kbar - k) as f64 * timing.t_mini_slot + timing.t_data;
                time_share += stop * usable / t_slot;
            }
            mean_fraction += w * time_share * success;
        }
        per_channel.push(zeta * ch.rate_bps * mean_fraction);
    }
    let total = per_channel.iter().sum();
    Ok((per_channel, total))
}

/// Expected throughput under bonded access: the winner starts after the full
/// sensing phase, so every bonded channel carries `t_data / t_slot` of its
/// rate, scaled by the control-channel success probability.
pub fn throughput_case2(
    inputs: &AnalysisInputs,
    p: f64,
) -> Result<(Vec<f64>, f64), AnalyticsError> {
    throughput_case2_with(inputs, PriorModel::Stationary, p)
}

fn throughput_case2_with(
    inputs: &AnalysisInputs,
    prior_model: PriorModel,
    p: f64,
) -> Result<(Vec<f64>, f64), AnalyticsError> {
    inputs.validate()?;
    let marginal = inputs.assignment_marginal()?;
    let stops = idle_stop_table(inputs, prior_model)?;
    let timing = inputs.timing;
    let data_share = timing.t_data / timing.t_slot();
    let success = contention_probabilities(inputs.num_users as u32, p).1;
    let mut per_channel = Vec::with_capacity(inputs.channels.len());
    for (ch, stop_by_u) in inputs.channels.iter().zip(&stops) {
        let (_, zeta) = stationary_probabilities(ch)?;
        let mut idle_verdict = 0.0;
        for u in 1..=inputs.num_users {
            let w = marginal[u];
            if w == 0.0 {
                continue;
            }
            let stop_total: f64 = stop_by_u[u - 1].iter().sum();
            idle_verdict += w * stop_total;
        }
        per_channel.push(zeta * ch.rate_bps * idle_verdict * data_share * success);
    }
    let total = per_channel.iter().sum();
    Ok((per_channel, total))
}

fn throughput(inputs: &AnalysisInputs, case: AccessCase, p: f64) -> Result<(Vec<f64>, f64), AnalyticsError> {
    match case {
        AccessCase::Case1 => throughput_case1(inputs, p),
        AccessCase::Case2 => throughput_case2(inputs, p),
    }
}

/// Throughput of the idealized improved scheme: every channel sensed every
/// slot (assignment conditioned on full coverage) and every sensing test
/// seeded with the exact one-step prior from last slot's true state
/// ([`PriorModel::PreviousStateKnown`]). Upper-bounds the implementable
/// scheme, which leaves recently-vacated channels unsensed, keeps only
/// partial state knowledge, and falls back to memoryless assignment whenever
/// that knowledge goes stale.
pub fn improved_policy_throughput_bound(
    inputs: &AnalysisInputs,
    case: AccessCase,
    p: f64,
) -> Result<f64, AnalyticsError> {
    let idealized = AnalysisInputs {
        model: AssignmentModel::AllChannelsSensed,
        ..inputs.clone()
    };
    let result = match case {
        AccessCase::Case1 => throughput_case1_with(&idealized, PriorModel::PreviousStateKnown, p)?,
        AccessCase::Case2 => throughput_case2_with(&idealized, PriorModel::PreviousStateKnown, p)?,
    };
    Ok(result.1)
}

/// Capacity available to secondary users if sensing and contention were
/// free and perfect: the stationary idle fraction times the rate, summed.
pub fn idle_capacity_bound(channels: &[ChannelParams]) -> Result<f64, AnalyticsError> {
    let mut total = 0.0;
    for ch in channels {
        let (_, zeta) = stationary_probabilities(ch)?;
        total += zeta * ch.rate_bps;
    }
    Ok(total)
}

/// Bundle of the closed-form predictions at one operating point.
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub case: AccessCase,
    pub p: f64,
    pub interference: Vec<f64>,
    pub per_channel_throughput: Vec<f64>,
    pub total_throughput: f64,
    pub idle_capacity_bound: f64,
}

pub fn analyze(
    inputs: &AnalysisInputs,
    case: AccessCase,
    p: f64,
) -> Result<AnalysisReport, AnalyticsError> {
    let interference = interference_probability(inputs, case, p)?;
    let (per_channel_throughput, total_throughput) = throughput(inputs, case, p)?;
    Ok(AnalysisReport {
        case,
        p,
        interference,
        per_channel_throughput,
        total_throughput,
        idle_capacity_bound: idle_capacity_bound(inputs.channels)?,
    })
}

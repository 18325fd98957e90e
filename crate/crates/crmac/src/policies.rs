//! Sensing-assignment schemes and the per-slot sensing phase.
//!
//! Assignment decides which channel each user senses this slot:
//! - `random` / `memoryless`: every user picks a channel independently and
//!   uniformly each slot (the two labels differ only in the sensing mode the
//!   simulator pairs them with),
//! - `negotiate`: users are spread round-robin with a random per-slot
//!   rotation, so every channel is sensed,
//! - `improved`: users keep their previous channel except where last slot's
//!   outcome frees them — a channel confirmed idle before the last mini-slot
//!   sheds one sensor toward busy/unknown channels, and a channel confirmed
//!   busy early releases all of its sensors toward unknown channels.
//!
//! The sensing phase itself runs in one of two modes: the sequential
//! Bayesian test (`Bayesian`) or a one-mini-slot majority vote with ties
//! breaking to idle (`Oblivious`), used by the baseline schemes.

use crate::channel::{ChannelParams, ChannelState};
use crate::sensing::{classify_belief, posterior_idle, sample_observation, Verdict};
use rand::Rng;
use std::fmt;
use std::str::FromStr;

/// Sensing-assignment scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Random,
    Negotiate,
    Memoryless,
    Improved,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::Random,
        Scheme::Negotiate,
        Scheme::Memoryless,
        Scheme::Improved,
    ];

    /// Baselines sense with the majority vote, proposed schemes run the
    /// sequential Bayesian test.
    pub fn sensing_mode(self) -> SensingMode {
        match self {
            Scheme::Random | Scheme::Negotiate => SensingMode::Oblivious,
            Scheme::Memoryless | Scheme::Improved => SensingMode::Bayesian,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self {
            Scheme::Random => "random",
            Scheme::Negotiate => "negotiate",
            Scheme::Memoryless => "memoryless",
            Scheme::Improved => "improved",
        };
        write!(f, "{label}")
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "random" => Ok(Scheme::Random),
            "negotiate" => Ok(Scheme::Negotiate),
            "memoryless" => Ok(Scheme::Memoryless),
            "improved" => Ok(Scheme::Improved),
            other => Err(format!("unknown scheme '{other}'")),
        }
    }
}

/// How pooled indications are turned into verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SensingMode {
    /// Sequential Bayesian test with early stopping.
    Bayesian,
    /// One mini-slot, majority vote, ties break to idle.
    Oblivious,
}

/// Channel choice of every user for one slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SensingAssignment {
    /// Number of sensors per channel.
    pub counts: Vec<u32>,
    /// Channel index chosen by each user.
    pub per_user: Vec<usize>,
}

impl SensingAssignment {
    pub fn from_per_user(per_user: Vec<usize>, num_channels: usize) -> Self {
        let mut counts = vec![0u32; num_channels];
        for &ch in &per_user {
            counts[ch] += 1;
        }
        Self { counts, per_user }
    }

    /// Users assigned to `channel`, in user-index order.
    pub fn users_on(&self, channel: usize) -> Vec<usize> {
        self.per_user
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == channel)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Independent uniform channel choice per user, redrawn every slot.
pub fn assign_memoryless<R: Rng>(
    num_users: usize,
    num_channels: usize,
    rng: &mut R,
) -> SensingAssignment {
    let per_user = (0..num_users)
        .map(|_| rng.gen_range(0..num_channels))
        .collect();
    SensingAssignment::from_per_user(per_user, num_channels)
}

/// Baseline random assignment: the same uniform draw as the memoryless
/// scheme, kept separate because it is paired with the majority-vote sensing.
pub fn assign_random<R: Rng>(
    num_users: usize,
    num_channels: usize,
    rng: &mut R,
) -> SensingAssignment {
    assign_memoryless(num_users, num_channels, rng)
}

/// Baseline negotiated assignment: user `i` senses channel
/// `(i + rotation) mod M` with a fresh uniform rotation each slot, so all
/// channels are covered whenever `N >= M`.
pub fn assign_negotiate<R: Rng>(
    num_users: usize,
    num_channels: usize,
    rng: &mut R,
) -> SensingAssignment {
    let rotation = rng.gen_range(0..num_channels);
    let per_user = (0..num_users)
        .map(|i| (i + rotation) % num_channels)
        .collect();
    SensingAssignment::from_per_user(per_user, num_channels)
}

/// What the improved scheme knows about a channel from the previous slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelClass {
    /// Declared idle and, if data was sent, the transmission succeeded.
    KnownIdle,
    /// Declared busy, or an idle verdict was contradicted by a failed
    /// transmission.
    KnownBusy,
    /// Undecided or unsensed last slot.
    Unknown,
}

/// Previous-slot state carried by the improved scheme.
#[derive(Debug, Clone)]
pub struct ChannelKnowledge {
    pub classes: Vec<ChannelClass>,
    pub prev_assignment: SensingAssignment,
    /// Mini-slot at which each channel's test stopped, if it did.
    pub prev_stop_times: Vec<Option<u32>>,
}

/// One-step load balancing from the previous slot's outcomes.
///
/// All moves are computed against the previous assignment and applied at
/// once. A known-idle channel whose test stopped early has sensing slack, so
/// one of its sensors (chosen uniformly) redraws its channel uniformly from
/// the channel itself plus all known-busy and unknown channels. A known-busy
/// channel that stopped early releases every sensor to redraw from the
/// channel itself plus the unknown channels. Everyone else stays put.
pub fn assign_improved<R: Rng>(
    knowledge: &ChannelKnowledge,
    max_mini_slots: u32,
    rng: &mut R,
) -> SensingAssignment {
    let num_channels = knowledge.classes.len();
    let prev = &knowledge.prev_assignment.per_user;
    let mut per_user = prev.clone();

    let busy_channels: Vec<usize> = (0..num_channels)
        .filter(|&m| knowledge.classes[m] == ChannelClass::KnownBusy)
        .collect();
    let unknown_channels: Vec<usize> = (0..num_channels)
        .filter(|&m| knowledge.classes[m] == ChannelClass::Unknown)
        .collect();
    let stopped_early = |m: usize| match knowledge.prev_stop_times[m] {
        Some(k) => k < max_mini_slots,
        None => false,
    };

    for m in 0..num_channels {
        if !stopped_early(m) {
            continue;
        }
        match knowledge.classes[m] {
            ChannelClass::KnownIdle => {
                let users_on: Vec<usize> = prev
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c == m)
                    .map(|(i, _)| i)
                    .collect();
                // Only surplus sensors spread out: a channel already confirmed
                // idle keeps at least one sensor, otherwise the load-balancing
                // step would itself create unsensed channels.
                if users_on.len() < 2 {
                    continue;
                }
                let mut targets = vec![m];
                targets.extend_from_slice(&busy_channels);
                targets.extend_from_slice(&unknown_channels);
                let shed = users_on[rng.gen_range(0..users_on.len())];
                per_user[shed] = targets[rng.gen_range(0..targets.len())];
            }
            ChannelClass::KnownBusy => {
                let mut targets = vec![m];
                targets.extend_from_slice(&unknown_channels);
                for (user, &c) in prev.iter().enumerate() {
                    if c == m {
                        per_user[user] = targets[rng.gen_range(0..targets.len())];
                    }
                }
            }
            ChannelClass::Unknown => {}
        }
    }

    SensingAssignment::from_per_user(per_user, num_channels)
}

/// Verdict on one channel after the sensing phase, including channels nobody
/// sensed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SensingVerdict {
    Idle,
    Busy,
    Undecided,
    Unsensed,
}

/// Per-channel result of the sensing phase.
#[derive(Debug, Clone, Copy)]
pub struct ChannelSensingOutcome {
    /// Mini-slot (1-based) at which the verdict was reached.
    pub stop_time: Option<u32>,
    pub verdict: SensingVerdict,
    pub pooled: u32,
    pub idle_indications: u32,
    pub posterior: f64,
}

#[derive(Debug, Clone)]
pub struct SensingPhaseResult {
    pub outcomes: Vec<ChannelSensingOutcome>,
}

/// Execute the sensing phase for one slot.
///
/// Observations are drawn channel by channel in index order, mini-slot by
/// mini-slot, one per assigned user; a channel stops consuming draws once
/// its verdict is decided.
#[allow(clippy::too_many_arguments)]
pub fn run_sensing_phase<R: Rng>(
    assignment: &SensingAssignment,
    true_states: &[ChannelState],
    channels: &[ChannelParams],
    priors: &[f64],
    theta0: f64,
    theta1: f64,
    max_mini_slots: u32,
    mode: SensingMode,
    rng: &mut R,
) -> SensingPhaseResult {
    debug_assert_eq!(assignment.counts.len(), true_states.len());
    debug_assert_eq!(channels.len(), true_states.len());
    debug_assert_eq!(priors.len(), true_states.len());
    let outcomes = (0..true_states.len())
        .map(|m| {
            let sensors = assignment.counts[m];
            if sensors == 0 {
                return ChannelSensingOutcome {
                    stop_time: None,
                    verdict: SensingVerdict::Unsensed,
                    pooled: 0,
                    idle_indications: 0,
                    posterior: priors[m],
                };
            }
            let ch = &channels[m];
            let state = true_states[m];
            match mode {
                SensingMode::Bayesian => {
                    let mut idle_count = 0u32;
                    for j in 1..=max_mini_slots {
                        for _ in 0..sensors {
                            if sample_observation(state, ch.epsilon, ch.delta, rng).is_idle() {
                                idle_count += 1;
                            }
                        }
                        let pooled = j * sensors;
                        let a = posterior_idle(priors[m], idle_count, pooled, ch.epsilon, ch.delta);
                        match classify_belief(a, theta0, theta1) {
                            Verdict::Idle => {
                                return ChannelSensingOutcome {
                                    stop_time: Some(j),
                                    verdict: SensingVerdict::Idle,
                                    pooled,
                                    idle_indications: idle_count,
                                    posterior: a,
                                };
                            }
                            Verdict::Busy => {
                                return ChannelSensingOutcome {
                                    stop_time: Some(j),
                                    verdict: SensingVerdict::Busy,
                                    pooled,
                                    idle_indications: idle_count,
                                    posterior: a,
                                };
                            }
                            Verdict::Undecided => {}
                        }
                    }
                    let pooled = max_mini_slots * sensors;
                    ChannelSensingOutcome {
                        stop_time: None,
                        verdict: SensingVerdict::Undecided,
                        pooled,
                        idle_indications: idle_count,
                        posterior: posterior_idle(
                            priors[m],
                            idle_count,
                            pooled,
                            ch.epsilon,
                            ch.delta,
                        ),
                    }
                }
                SensingMode::Oblivious => {
                    let mut idle_count = 0u32;
                    for _ in 0..sensors {
                        if sample_observation(state, ch.epsilon, ch.delta, rng).is_idle() {
                            idle_count += 1;
                        }
                    }
                    let verdict = if 2 * idle_count >= sensors {
                        SensingVerdict::Idle
                    } else {
                        SensingVerdict::Busy
                    };
                    ChannelSensingOutcome {
                        stop_time: Some(1),
                        verdict,
                        pooled: sensors,
                        idle_indications: idle_count,
                        posterior: priors[m],
                    }
                }
            }
        })
        .collect();
    SensingPhaseResult { outcomes }
}

//! Event-level Monte Carlo simulation of the slotted MAC.
//!
//! Every slot runs: assignment -> sensing -> contention -> delivery ->
//! channel transition. Replications are independent and may execute
//! concurrently; results merge in replication order, so a run is fully
//! determined by (scenario, scheme, case, p, slots, replications, seed).
//!
//! Random-number discipline: each replication derives its own seed, from
//! which every channel gets a dedicated stream (used for its state
//! transitions) and the protocol (assignment, observations, contention)
//! gets one more. Streams never interleave across channels, so adding
//! channels does not perturb existing ones.

use crate::access::{contend_case1, contend_case2, AccessCase, ContentionOutcome};
use crate::analytics::SlotTiming;
use crate::channel::{
    stationary_probabilities, ChannelError, ChannelParams, ChannelState, ChannelStateVector,
};
use crate::policies::{
    assign_improved, assign_memoryless, assign_negotiate, assign_random, run_sensing_phase,
    ChannelClass, ChannelKnowledge, ChannelSensingOutcome, Scheme, SensingAssignment,
    SensingVerdict,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error("simulation needs at least one slot and one replication")]
    EmptyRun,
    #[error("access probability {0} outside [0, 1]")]
    InvalidAccessProbability(f64),
}

/// Static description of the simulated network.
#[derive(Debug, Clone)]
pub struct SimScenario {
    pub channels: Vec<ChannelParams>,
    pub num_users: usize,
    pub theta0: f64,
    pub theta1: f64,
    pub timing: SlotTiming,
}

impl SimScenario {
    fn validate(&self) -> Result<(), SimError> {
        for ch in &self.channels {
            ch.validate()?;
            stationary_probabilities(ch)?;
        }
        Ok(())
    }
}

/// Everything that happened in one slot, mostly for tests and debugging.
#[derive(Debug, Clone)]
pub struct SlotTrace {
    pub slot: u64,
    pub states: Vec<ChannelState>,
    pub assignment: SensingAssignment,
    pub sensing: Vec<ChannelSensingOutcome>,
    /// Contention outcome per channel; under bonded access the control
    /// channel's outcome is mirrored onto every channel declared idle.
    pub outcomes: Vec<Option<ContentionOutcome>>,
    pub delivered_bits: Vec<f64>,
    pub pu_collision: Vec<bool>,
}

fn stationary_idle(params: &ChannelParams) -> f64 {
    stationary_probabilities(params)
        .expect("channel params validated before the slot loop")
        .1
}

/// Execute one slot: assign sensors, sense, contend, deliver, and (for the
/// improved scheme) refresh channel knowledge. The caller advances the
/// channel states afterwards.
#[allow(clippy::too_many_arguments)]
pub fn run_slot<R: Rng>(
    scenario: &SimScenario,
    scheme: Scheme,
    case: AccessCase,
    p: f64,
    states: &[ChannelState],
    knowledge: Option<&ChannelKnowledge>,
    slot: u64,
    rng: &mut R,
) -> (SlotTrace, Option<ChannelKnowledge>) {
    let num_channels = scenario.channels.len();
    let kbar = scenario.timing.max_mini_slots;

    let assignment = match scheme {
        Scheme::Random => assign_random(scenario.num_users, num_channels, rng),
        Scheme::Negotiate => assign_negotiate(scenario.num_users, num_channels, rng),
        Scheme::Memoryless => assign_memoryless(scenario.num_users, num_channels, rng),
        Scheme::Improved => match knowledge {
            Some(k) => assign_improved(k, kbar, rng),
            // Nothing is known in the first slot.
            None => assign_memoryless(scenario.num_users, num_channels, rng),
        },
    };

    // Channel priors: one-step propagation of last slot's knowledge for the
    // improved scheme, the stationary idle probability otherwise.
    let priors: Vec<f64> = match (scheme, knowledge) {
        (Scheme::Improved, Some(k)) => scenario
            .channels
            .iter()
            .zip(&k.classes)
            .map(|(ch, class)| match class {
                ChannelClass::KnownIdle => ch.lambda,
                ChannelClass::KnownBusy => ch.mu,
                ChannelClass::Unknown => stationary_idle(ch),
            })
            .collect(),
        _ => scenario.channels.iter().map(stationary_idle).collect(),
    };

    let sensing = run_sensing_phase(
        &assignment,
        states,
        &scenario.channels,
        &priors,
        scenario.theta0,
        scenario.theta1,
        kbar,
        scheme.sensing_mode(),
        rng,
    );

    let mut outcomes: Vec<Option<ContentionOutcome>> = vec![None; num_channels];
    let mut delivered_bits = vec![0.0f64; num_channels];
    let mut pu_collision = vec![false; num_channels];

    match case {
        AccessCase::Case1 => {
            for m in 0..num_channels {
                if sensing.outcomes[m].verdict != SensingVerdict::Idle {
                    continue;
                }
                let contenders = assignment.users_on(m);
                let outcome = contend_case1(&contenders, p, rng);
                outcomes[m] = Some(outcome);
                match outcome {
                    ContentionOutcome::Success { .. } => {
                        if states[m].is_idle() {
                            let stop = sensing.outcomes[m]
                                .stop_time
                                .expect("idle verdict carries its stop time");
                            let usable = (kbar - stop) as f64 * scenario.timing.t_mini_slot
                                + scenario.timing.t_data;
                            delivered_bits[m] = scenario.channels[m].rate_bps * usable;
                        } else {
                            pu_collision[m] = true;
                        }
                    }
                    // Colliding RTS frames still radiate on the channel.
                    ContentionOutcome::Collision => {
                        if states[m].is_busy() {
                            pu_collision[m] = true;
                        }
                    }
                    ContentionOutcome::NoTransmission => {}
                }
            }
        }
        AccessCase::Case2 => {
            let idle_set: Vec<usize> = (0..num_channels)
                .filter(|&m| sensing.outcomes[m].verdict == SensingVerdict::Idle)
                .collect();
            if !idle_set.is_empty() {
                // RTS contention happens on a dedicated control channel and
                // never touches the licensed band.
                let outcome = contend_case2(scenario.num_users, p, rng);
                for &m in &idle_set {
                    outcomes[m] = Some(outcome);
                }
                if outcome.is_success() {
                    for &m in &idle_set {
                        if states[m].is_idle() {
                            delivered_bits[m] =
                                scenario.channels[m].rate_bps * scenario.timing.t_data;
                        } else {
                            pu_collision[m] = true;
                        }
                    }
                }
            }
        }
    }

    let next_knowledge = if scheme == Scheme::Improved {
        let classes = (0..num_channels)
            .map(|m| match sensing.outcomes[m].verdict {
                SensingVerdict::Idle => {
                    // Only an actual data transmission can contradict the
                    // verdict: its failure reveals the primary user.
                    let data_sent = matches!(outcomes[m], Some(ContentionOutcome::Success { .. }));
                    if data_sent && states[m].is_busy() {
                        ChannelClass::KnownBusy
                    } else {
                        ChannelClass::KnownIdle
                    }
                }
                SensingVerdict::Busy => ChannelClass::KnownBusy,
                SensingVerdict::Undecided | SensingVerdict::Unsensed => ChannelClass::Unknown,
            })
            .collect();
        Some(ChannelKnowledge {
            classes,
            prev_stop_times: sensing.outcomes.iter().map(|o| o.stop_time).collect(),
            prev_assignment: assignment.clone(),
        })
    } else {
        None
    };

    (
        SlotTrace {
            slot,
            states: states.to_vec(),
            assignment,
            sensing: sensing.outcomes,
            outcomes,
            delivered_bits,
            pu_collision,
        },
        next_knowledge,
    )
}

/// Sample mean with a 95% Student-t confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanCi {
    pub mean: f64,
    pub half_width: f64,
}

impl MeanCi {
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        assert!(n >= 1, "need at least one sample");
        let mean = samples.iter().sum::<f64>() / n as f64;
        if n < 2 {
            return Self {
                mean,
                half_width: 0.0,
            };
        }
        let variance =
            samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
        let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
            .expect("valid Student-t parameters")
            .inverse_cdf(0.975);
        Self {
            mean,
            half_width: t * (variance / n as f64).sqrt(),
        }
    }

    pub fn contains(&self, value: f64) -> bool {
        (value - self.mean).abs() <= self.half_width
    }
}

/// Replication-averaged simulation output.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateMetrics {
    /// Secondary-network throughput in bits per second.
    pub throughput_bps: MeanCi,
    /// Fraction of busy channel-slots hit by a secondary transmission,
    /// pooled over channels; absent if no channel was ever busy.
    pub pu_collision: Option<MeanCi>,
    /// Primary-network throughput in bits per second.
    pub pu_throughput_bps: MeanCi,
    /// Fraction of channel-slots nobody sensed.
    pub unsensed_rate: f64,
    /// Fraction of channel-slots whose test ended undecided.
    pub undecided_rate: f64,
    /// Collision rate per channel, pooled over replications.
    pub per_channel_collision: Vec<Option<f64>>,
    pub replications: usize,
    pub slots: u64,
}

struct RepOutcome {
    throughput_bps: f64,
    collision: Option<f64>,
    pu_throughput_bps: f64,
    unsensed: u64,
    undecided: u64,
    busy_per_channel: Vec<u64>,
    flags_per_channel: Vec<u64>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic stream-splitting: combine a seed with a stream label.
pub(crate) fn mix(seed: u64, label: u64) -> u64 {
    splitmix64(seed ^ splitmix64(label))
}

fn run_replication(
    scenario: &SimScenario,
    scheme: Scheme,
    case: AccessCase,
    p: f64,
    num_slots: u64,
    rep_seed: u64,
) -> RepOutcome {
    let num_channels = scenario.channels.len();
    let mut channel_rngs: Vec<ChaCha12Rng> = (0..num_channels)
        .map(|m| ChaCha12Rng::seed_from_u64(mix(rep_seed, 0x1000 + m as u64)))
        .collect();
    let mut proto_rng = ChaCha12Rng::seed_from_u64(mix(rep_seed, 1));

    let mut vector = ChannelStateVector::stationary_sample(&scenario.channels, &mut channel_rngs)
        .expect("scenario validated before replication start");

    let mut knowledge: Option<ChannelKnowledge> = None;
    let mut delivered_total = 0.0f64;
    let mut busy_per_channel = vec![0u64; num_channels];
    let mut flags_per_channel = vec![0u64; num_channels];
    let mut unsensed = 0u64;
    let mut undecided = 0u64;

    for slot in 0..num_slots {
        let (trace, next_knowledge) = run_slot(
            scenario,
            scheme,
            case,
            p,
            &vector.states,
            knowledge.as_ref(),
            slot,
            &mut proto_rng,
        );
        knowledge = next_knowledge;

        for m in 0..num_channels {
            delivered_total += trace.delivered_bits[m];
            if trace.states[m].is_busy() {
                busy_per_channel[m] += 1;
                if trace.pu_collision[m] {
                    flags_per_channel[m] += 1;
                }
            }
            match trace.sensing[m].verdict {
                SensingVerdict::Unsensed => unsensed += 1,
                SensingVerdict::Undecided => undecided += 1,
                _ => {}
            }
        }

        vector.step(&scenario.channels, &mut channel_rngs);
    }

    let t_total = num_slots as f64 * scenario.timing.t_slot();
    let busy_total: u64 = busy_per_channel.iter().sum();
    let flags_total: u64 = flags_per_channel.iter().sum();
    let collision = if busy_total > 0 {
        Some(flags_total as f64 / busy_total as f64)
    } else {
        None
    };
    let pu_bits: f64 = scenario
        .channels
        .iter()
        .zip(&busy_per_channel)
        .zip(&flags_per_channel)
        .map(|((ch, &busy), &flags)| ch.rate_bps * (busy - flags) as f64)
        .sum();

    RepOutcome {
        throughput_bps: delivered_total / t_total,
        collision,
        pu_throughput_bps: pu_bits / num_slots as f64,
        unsensed,
        undecided,
        busy_per_channel,
        flags_per_channel,
    }
}

/// Run `num_replications` independent replications of `num_slots` slots each
/// and aggregate their metrics.
#[allow(clippy::too_many_arguments)]
pub fn run_simulation(
    scenario: &SimScenario,
    scheme: Scheme,
    case: AccessCase,
    p: f64,
    num_slots: u64,
    num_replications: usize,
    seed: u64,
) -> Result<AggregateMetrics, SimError> {
    scenario.validate()?;
    if num_slots == 0 || num_replications == 0 {
        return Err(SimError::EmptyRun);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(SimError::InvalidAccessProbability(p));
    }

    let outcomes: Vec<RepOutcome> = (0..num_replications)
        .into_par_iter()
        .map(|rep| {
            run_replication(scenario, scheme, case, p, num_slots, mix(seed, rep as u64))
        })
        .collect();

    let throughput: Vec<f64> = outcomes.iter().map(|o| o.throughput_bps).collect();
    let pu_throughput: Vec<f64> = outcomes.iter().map(|o| o.pu_throughput_bps).collect();
    let collisions: Option<Vec<f64>> = outcomes.iter().map(|o| o.collision).collect();

    let num_channels = scenario.channels.len();
    let per_channel_collision = (0..num_channels)
        .map(|m| {
            let busy: u64 = outcomes.iter().map(|o| o.busy_per_channel[m]).sum();
            let flags: u64 = outcomes.iter().map(|o| o.flags_per_channel[m]).sum();
            if busy > 0 {
                Some(flags as f64 / busy as f64)
            } else {
                None
            }
        })
        .collect();

    let channel_slots = (num_slots * num_channels as u64 * num_replications as u64) as f64;
    let unsensed: u64 = outcomes.iter().map(|o| o.unsensed).sum();
    let undecided: u64 = outcomes.iter().map(|o| o.undecided).sum();

    Ok(AggregateMetrics {
        throughput_bps: MeanCi::from_samples(&throughput),
        pu_collision: collisions.map(|v| MeanCi::from_samples(&v)),
        pu_throughput_bps: MeanCi::from_samples(&pu_throughput),
        unsensed_rate: unsensed as f64 / channel_slots,
        undecided_rate: undecided as f64 / channel_slots,
        per_channel_collision,
        replications: num_replications,
        slots: num_slots,
    })
}

//! Sequential Bayesian sensing on one channel.
//!
//! During the sensing phase every user assigned to channel `m` produces one
//! noisy busy/idle indication per mini-slot. Indications are pooled: after
//! `k` of them with `d` reading idle, the posterior idle probability is
//!
//! ```text
//! a(d, k) = 1 / (1 + (delta/(1-epsilon))^d * ((1-delta)/epsilon)^(k-d) * (1-rho)/rho)
//! ```
//!
//! where `rho` is the prior. The belief is compared against two thresholds:
//! at `a <= theta0` the channel is declared busy, at `a >= theta1` idle, and
//! anything in between leaves the test running. Because the posterior is
//! nondecreasing in `d`, the decision regions over `d` are contiguous.

use crate::channel::ChannelState;
use rand::Rng;

/// Outcome of the sequential test on one channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Idle,
    Busy,
    Undecided,
}

/// One noisy indication of the channel state.
///
/// An idle channel reads busy with probability `epsilon` (false alarm); a
/// busy channel reads idle with probability `delta` (missed detection).
pub fn sample_observation<R: Rng + ?Sized>(
    state: ChannelState,
    epsilon: f64,
    delta: f64,
    rng: &mut R,
) -> ChannelState {
    match state {
        ChannelState::Idle => {
            if rng.gen_bool(epsilon) {
                ChannelState::Busy
            } else {
                ChannelState::Idle
            }
        }
        ChannelState::Busy => {
            if rng.gen_bool(delta) {
                ChannelState::Idle
            } else {
                ChannelState::Busy
            }
        }
    }
}

/// Posterior idle probability after pooling `pooled` indications of which
/// `idle_indications` read idle.
///
/// Degenerate priors are absorbing, and a zero error probability lets a
/// single contradicting indication pin the posterior outright.
pub fn posterior_idle(
    prior: f64,
    idle_indications: u32,
    pooled: u32,
    epsilon: f64,
    delta: f64,
) -> f64 {
    assert!(
        idle_indications <= pooled,
        "idle indications {idle_indications} exceed pooled count {pooled}"
    );
    if prior <= 0.0 {
        return 0.0;
    }
    if prior >= 1.0 {
        return 1.0;
    }
    if pooled == 0 {
        return prior;
    }
    let d = idle_indications;
    let busy_indications = pooled - d;
    if delta == 0.0 && d > 0 {
        return 1.0;
    }
    if epsilon == 0.0 && busy_indications > 0 {
        return 0.0;
    }
    let idle_likelihood = (1.0 - epsilon).powi(d as i32) * epsilon.powi(busy_indications as i32);
    let busy_likelihood = delta.powi(d as i32) * (1.0 - delta).powi(busy_indications as i32);
    let weighted_idle = prior * idle_likelihood;
    let denominator = weighted_idle + (1.0 - prior) * busy_likelihood;
    debug_assert!(denominator > 0.0, "likelihoods underflowed");
    weighted_idle / denominator
}

/// Threshold test on a posterior belief. Boundaries are inclusive on both
/// sides: `a <= theta0` declares busy, `a >= theta1` declares idle.
pub fn classify_belief(posterior: f64, theta0: f64, theta1: f64) -> Verdict {
    debug_assert!(theta0 < theta1, "thresholds must satisfy theta0 < theta1");
    if posterior <= theta0 {
        Verdict::Busy
    } else if posterior >= theta1 {
        Verdict::Idle
    } else {
        Verdict::Undecided
    }
}

/// Running belief about one channel, recomputed from cumulative counts.
#[derive(Debug, Clone)]
pub struct BeliefState {
    pub channel: usize,
    pub pooled_observations: u32,
    pub idle_observations: u32,
    pub prior_idle: f64,
    pub posterior_idle: f64,
    pub verdict: Verdict,
}

impl BeliefState {
    pub fn new(channel: usize, prior_idle: f64, theta0: f64, theta1: f64) -> Self {
        Self {
            channel,
            pooled_observations: 0,
            idle_observations: 0,
            prior_idle,
            posterior_idle: prior_idle,
            verdict: classify_belief(prior_idle, theta0, theta1),
        }
    }

    /// Fold another batch of indications into the pooled counts and refresh
    /// the posterior and verdict.
    pub fn absorb(
        &mut self,
        idle_indications: u32,
        total_indications: u32,
        epsilon: f64,
        delta: f64,
        theta0: f64,
        theta1: f64,
    ) {
        debug_assert!(idle_indications <= total_indications);
        self.pooled_observations += total_indications;
        self.idle_observations += idle_indications;
        self.posterior_idle = posterior_idle(
            self.prior_idle,
            self.idle_observations,
            self.pooled_observations,
            epsilon,
            delta,
        );
        self.verdict = classify_belief(self.posterior_idle, theta0, theta1);
    }
}

/// Partition of the idle-indication counts `0..=k` by final verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionSets {
    pub busy: Vec<u32>,
    pub idle: Vec<u32>,
    pub undecided: Vec<u32>,
}

/// Classify every possible idle-indication count after `k` pooled
/// observations.
pub fn enumerate_decision_sets(
    k: u32,
    prior: f64,
    epsilon: f64,
    delta: f64,
    theta0: f64,
    theta1: f64,
) -> DecisionSets {
    let mut sets = DecisionSets {
        busy: Vec::new(),
        idle: Vec::new(),
        undecided: Vec::new(),
    };
    for d in 0..=k {
        let a = posterior_idle(prior, d, k, epsilon, delta);
        match classify_belief(a, theta0, theta1) {
            Verdict::Busy => sets.busy.push(d),
            Verdict::Idle => sets.idle.push(d),
            Verdict::Undecided => sets.undecided.push(d),
        }
    }
    sets
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    const THETA0: f64 = 0.2;
    const THETA1: f64 = 0.8;

    #[test]
    fn posterior_reference_points() {
        // One observation, no idle indication, symmetric noise 0.3, prior 0.7.
        let a = posterior_idle(0.7, 0, 1, 0.3, 0.3);
        assert!((a - 0.5).abs() < 1e-12, "a = {a}");

        // One idle indication: 49/58.
        let a = posterior_idle(0.7, 1, 1, 0.3, 0.3);
        assert!((a - 49.0 / 58.0).abs() < 1e-12, "a = {a}");

        // No observations leave the prior untouched.
        assert_eq!(posterior_idle(0.7, 0, 0, 0.3, 0.3), 0.7);
    }

    #[test]
    fn degenerate_inputs_short_circuit() {
        assert_eq!(posterior_idle(0.0, 3, 5, 0.3, 0.3), 0.0);
        assert_eq!(posterior_idle(1.0, 0, 5, 0.3, 0.3), 1.0);
        // A perfect detector pins the posterior with one indication.
        assert_eq!(posterior_idle(0.5, 1, 4, 0.3, 0.0), 1.0);
        assert_eq!(posterior_idle(0.5, 3, 4, 0.0, 0.3), 0.0);
        // Zero false-alarm rate with all-idle indications stays well-defined.
        let a = posterior_idle(0.5, 4, 4, 0.0, 0.3);
        assert!(a > 0.99, "a = {a}");
    }

    #[test]
    fn classification_boundaries_are_inclusive() {
        assert_eq!(classify_belief(0.2, THETA0, THETA1), Verdict::Busy);
        assert_eq!(classify_belief(0.8, THETA0, THETA1), Verdict::Idle);
        assert_eq!(classify_belief(0.5, THETA0, THETA1), Verdict::Undecided);
        assert_eq!(classify_belief(0.199, THETA0, THETA1), Verdict::Busy);
        assert_eq!(classify_belief(0.801, THETA0, THETA1), Verdict::Idle);
    }

    #[test]
    fn decision_sets_at_reference_operating_point() {
        // k = 5 pooled indications, prior 0.7, symmetric noise 0.3.
        let sets = enumerate_decision_sets(5, 0.7, 0.3, 0.3, THETA0, THETA1);
        assert_eq!(sets.busy, vec![0, 1]);
        assert_eq!(sets.undecided, vec![2]);
        assert_eq!(sets.idle, vec![3, 4, 5]);

        // A single indication can only confirm idle, never busy.
        let sets = enumerate_decision_sets(1, 0.7, 0.3, 0.3, THETA0, THETA1);
        assert_eq!(sets.busy, Vec::<u32>::new());
        assert_eq!(sets.undecided, vec![0]);
        assert_eq!(sets.idle, vec![1]);
    }

    #[test]
    fn sequential_update_equals_batch() {
        let (eps, delta) = (0.25, 0.1);
        let mut belief = BeliefState::new(2, 0.6, THETA0, THETA1);
        belief.absorb(2, 3, eps, delta, THETA0, THETA1);
        belief.absorb(1, 4, eps, delta, THETA0, THETA1);
        belief.absorb(0, 1, eps, delta, THETA0, THETA1);
        let batch = posterior_idle(0.6, 3, 8, eps, delta);
        assert!((belief.posterior_idle - batch).abs() < 1e-14);
        assert_eq!(belief.pooled_observations, 8);
        assert_eq!(belief.idle_observations, 3);
    }

    #[test]
    fn observation_frequencies_match_error_rates() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let trials = 100_000;
        let mut false_alarms = 0u32;
        let mut misses = 0u32;
        for _ in 0..trials {
            if sample_observation(ChannelState::Idle, 0.3, 0.1, &mut rng).is_busy() {
                false_alarms += 1;
            }
            if sample_observation(ChannelState::Busy, 0.3, 0.1, &mut rng).is_idle() {
                misses += 1;
            }
        }
        let fa = false_alarms as f64 / trials as f64;
        let ms = misses as f64 / trials as f64;
        assert!((fa - 0.3).abs() < 0.01, "false alarm rate {fa}");
        assert!((ms - 0.1).abs() < 0.01, "miss rate {ms}");
    }

    proptest! {
        /// More idle indications never lower the idle posterior.
        #[test]
        fn posterior_monotone_in_idle_indications(
            prior in 0.01f64..0.99,
            epsilon in 0.0f64..=0.5,
            delta in 0.0f64..=0.5,
            k in 1u32..=20,
        ) {
            let mut previous = -1.0f64;
            for d in 0..=k {
                let a = posterior_idle(prior, d, k, epsilon, delta);
                prop_assert!(a >= previous - 1e-12,
                    "posterior fell from {previous} to {a} at d = {d}");
                prop_assert!((0.0..=1.0).contains(&a));
                previous = a;
            }
        }

        /// Decision sets partition 0..=k into contiguous busy/undecided/idle runs.
        #[test]
        fn decision_sets_partition_and_are_contiguous(
            prior in 0.01f64..0.99,
            epsilon in 0.01f64..=0.5,
            delta in 0.01f64..=0.5,
            k in 1u32..=20,
        ) {
            let sets = enumerate_decision_sets(k, prior, epsilon, delta, 0.2, 0.8);
            let total = sets.busy.len() + sets.idle.len() + sets.undecided.len();
            prop_assert_eq!(total as u32, k + 1);
            // Monotone posterior puts every busy count below every undecided
            // count, and those below every idle count.
            let max_busy = sets.busy.last().copied();
            let min_idle = sets.idle.first().copied();
            for &d in &sets.undecided {
                if let Some(b) = max_busy { prop_assert!(d > b); }
                if let Some(i) = min_idle { prop_assert!(d < i); }
            }
            if let (Some(b), Some(i)) = (max_busy, min_idle) {
                prop_assert!(b < i);
            }
        }
    }
}

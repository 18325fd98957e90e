//! Primary-channel model: independent two-state Markov chains.
//!
//! Each licensed channel alternates between `Idle` and `Busy` at slot
//! boundaries. `lambda` is the probability of staying idle, `mu` the
//! probability of leaving busy, so the stationary occupancy is
//! `eta = (1 - lambda) / (1 - lambda + mu)` (busy) and
//! `zeta = mu / (1 - lambda + mu)` (idle).

use rand::Rng;
use thiserror::Error;

/// Instantaneous occupancy of one primary channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelState {
    Idle,
    Busy,
}

impl ChannelState {
    pub fn is_idle(self) -> bool {
        matches!(self, ChannelState::Idle)
    }

    pub fn is_busy(self) -> bool {
        matches!(self, ChannelState::Busy)
    }
}

/// Static description of one primary channel and the sensing noise seen on it.
///
/// `epsilon` is the false-alarm probability (idle observed as busy) and
/// `delta` the miss probability (busy observed as idle). Both are capped at
/// one half: a detector worse than a coin flip would invert the inference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    /// Pr(idle -> idle) across one slot boundary.
    pub lambda: f64,
    /// Pr(busy -> idle) across one slot boundary.
    pub mu: f64,
    /// Data rate of the channel in bits per second.
    pub rate_bps: f64,
    /// Maximum tolerated collision probability with the primary user.
    pub gamma: f64,
    /// False-alarm probability of one sensing mini-slot on an idle channel.
    pub epsilon: f64,
    /// Missed-detection probability of one sensing mini-slot on a busy channel.
    pub delta: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("{field} = {value} outside {range}")]
    OutOfRange {
        field: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("transition matrix (lambda = 1, mu = 0) has no unique stationary distribution")]
    NoStationaryDistribution,
}

impl ChannelParams {
    pub fn validate(&self) -> Result<(), ChannelError> {
        let unit = |field: &'static str, value: f64| {
            if (0.0..=1.0).contains(&value) {
                Ok(())
            } else {
                Err(ChannelError::OutOfRange {
                    field,
                    value,
                    range: "[0, 1]",
                })
            }
        };
        unit("lambda", self.lambda)?;
        unit("mu", self.mu)?;
        unit("gamma", self.gamma)?;
        let half = |field: &'static str, value: f64| {
            if (0.0..=0.5).contains(&value) {
                Ok(())
            } else {
                Err(ChannelError::OutOfRange {
                    field,
                    value,
                    range: "[0, 0.5]",
                })
            }
        };
        half("epsilon", self.epsilon)?;
        half("delta", self.delta)?;
        if !(self.rate_bps.is_finite() && self.rate_bps > 0.0) {
            return Err(ChannelError::OutOfRange {
                field: "rate_bps",
                value: self.rate_bps,
                range: "(0, inf)",
            });
        }
        Ok(())
    }
}

/// Stationary `(busy, idle)` probabilities of one channel.
///
/// Returns `(eta, zeta)` with `eta + zeta = 1`. Fails when the chain has two
/// absorbing states (`lambda = 1`, `mu = 0`) and therefore no unique
/// stationary distribution.
pub fn stationary_probabilities(params: &ChannelParams) -> Result<(f64, f64), ChannelError> {
    params.validate()?;
    let norm = 1.0 - params.lambda + params.mu;
    if norm == 0.0 {
        return Err(ChannelError::NoStationaryDistribution);
    }
    let eta = (1.0 - params.lambda) / norm;
    let zeta = params.mu / norm;
    Ok((eta, zeta))
}

/// Advance every channel by one slot, consuming one draw from its own stream.
pub fn step_channels<R: Rng>(
    states: &mut [ChannelState],
    params: &[ChannelParams],
    rngs: &mut [R],
) {
    debug_assert_eq!(states.len(), params.len());
    debug_assert_eq!(states.len(), rngs.len());
    for ((state, p), rng) in states.iter_mut().zip(params).zip(rngs.iter_mut()) {
        let stay_or_become_idle = match *state {
            ChannelState::Idle => p.lambda,
            ChannelState::Busy => p.mu,
        };
        *state = if rng.gen_bool(stay_or_become_idle) {
            ChannelState::Idle
        } else {
            ChannelState::Busy
        };
    }
}

/// Joint occupancy of all primary channels at one slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelStateVector {
    pub states: Vec<ChannelState>,
    pub slot_index: u64,
}

impl ChannelStateVector {
    /// Draw the initial occupancy of every channel from its stationary law.
    pub fn stationary_sample<R: Rng>(
        params: &[ChannelParams],
        rngs: &mut [R],
    ) -> Result<Self, ChannelError> {
        debug_assert_eq!(params.len(), rngs.len());
        let mut states = Vec::with_capacity(params.len());
        for (p, rng) in params.iter().zip(rngs.iter_mut()) {
            let (_, zeta) = stationary_probabilities(p)?;
            states.push(if rng.gen_bool(zeta) {
                ChannelState::Idle
            } else {
                ChannelState::Busy
            });
        }
        Ok(Self {
            states,
            slot_index: 0,
        })
    }

    /// Advance all channels to the next slot.
    pub fn step<R: Rng>(&mut self, params: &[ChannelParams], rngs: &mut [R]) {
        step_channels(&mut self.states, params, rngs);
        self.slot_index += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn params(lambda: f64, mu: f64) -> ChannelParams {
        ChannelParams {
            lambda,
            mu,
            rate_bps: 1.0e6,
            gamma: 0.035,
            epsilon: 0.3,
            delta: 0.3,
        }
    }

    #[test]
    fn stationary_matches_closed_form() {
        // A memoryless chain with lambda = mu = 0.7 has stationary busy probability 0.3.
        let (eta, zeta) = stationary_probabilities(&params(0.7, 0.7)).unwrap();
        assert!((eta - 0.3).abs() < 1e-15, "eta = {eta}");
        assert!((zeta - 0.7).abs() < 1e-15, "zeta = {zeta}");

        // Always-idle chain.
        let (eta, zeta) = stationary_probabilities(&params(1.0, 1.0)).unwrap();
        assert_eq!((eta, zeta), (0.0, 1.0));

        // Always-busy chain.
        let (eta, zeta) = stationary_probabilities(&params(0.0, 0.0)).unwrap();
        assert_eq!((eta, zeta), (1.0, 0.0));
    }

    #[test]
    fn degenerate_chain_is_rejected() {
        assert_eq!(
            stationary_probabilities(&params(1.0, 0.0)),
            Err(ChannelError::NoStationaryDistribution)
        );
    }

    #[test]
    fn validation_rejects_out_of_range_fields() {
        let mut p = params(0.7, 0.7);
        p.epsilon = 0.6;
        assert!(matches!(
            p.validate(),
            Err(ChannelError::OutOfRange { field: "epsilon", .. })
        ));

        let mut p = params(0.7, 0.7);
        p.rate_bps = 0.0;
        assert!(matches!(
            p.validate(),
            Err(ChannelError::OutOfRange { field: "rate_bps", .. })
        ));

        let mut p = params(0.7, 0.7);
        p.lambda = 1.2;
        assert!(matches!(
            p.validate(),
            Err(ChannelError::OutOfRange { field: "lambda", .. })
        ));
    }

    #[test]
    fn empirical_occupancy_approaches_stationary() {
        let p = params(0.6, 0.9);
        let (eta, _) = stationary_probabilities(&p).unwrap();
        let all = vec![p; 3];
        let mut rngs: Vec<ChaCha12Rng> = (0..3).map(ChaCha12Rng::seed_from_u64).collect();
        let mut vector = ChannelStateVector::stationary_sample(&all, &mut rngs).unwrap();

        let steps = 200_000u64;
        let mut busy = [0u64; 3];
        for _ in 0..steps {
            vector.step(&all, &mut rngs);
            for (count, s) in busy.iter_mut().zip(&vector.states) {
                if s.is_busy() {
                    *count += 1;
                }
            }
        }
        for (m, count) in busy.iter().enumerate() {
            let freq = *count as f64 / steps as f64;
            println!("channel {m}: busy frequency {freq:.4} vs eta {eta:.4}");
            assert!((freq - eta).abs() < 0.01, "channel {m}: {freq} vs {eta}");
        }
        assert_eq!(vector.slot_index, steps);
    }
}

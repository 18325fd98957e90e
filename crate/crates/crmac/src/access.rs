//! Slotted RTS contention after the sensing phase.
//!
//! Two access modes are supported. In the per-channel mode (`Case1`) every
//! user that declared its own channel idle sends an RTS on that channel with
//! probability `p`; exactly one RTS wins the slot. In the bonded mode
//! (`Case2`) all users contend once on a common control channel and the
//! single winner transmits on every channel declared idle in this slot.

use rand::Rng;
use std::fmt;
use std::str::FromStr;

/// Contention mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AccessCase {
    /// Per-channel RTS contention among that channel's sensors.
    Case1,
    /// One control-channel contention; the winner bonds all idle channels.
    Case2,
}

impl fmt::Display for AccessCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AccessCase::Case1 => write!(f, "case1"),
            AccessCase::Case2 => write!(f, "case2"),
        }
    }
}

impl FromStr for AccessCase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "case1" | "1" => Ok(AccessCase::Case1),
            "case2" | "2" => Ok(AccessCase::Case2),
            other => Err(format!("unknown access case '{other}'")),
        }
    }
}

/// Access probability paired with the contention mode it applies to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccessConfig {
    pub p: f64,
    pub case: AccessCase,
}

/// Result of one contention round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContentionOutcome {
    /// Nobody sent an RTS.
    NoTransmission,
    /// Exactly one RTS; `winner` is the user index that holds the slot.
    Success { winner: usize },
    /// Two or more simultaneous RTS frames destroyed each other.
    Collision,
}

impl ContentionOutcome {
    pub fn is_success(self) -> bool {
        matches!(self, ContentionOutcome::Success { .. })
    }
}

/// Per-channel contention among the listed users.
pub fn contend_case1<R: Rng + ?Sized>(
    contenders: &[usize],
    p: f64,
    rng: &mut R,
) -> ContentionOutcome {
    let mut winner = None;
    let mut transmitters = 0u32;
    for &user in contenders {
        if rng.gen_bool(p) {
            transmitters += 1;
            winner = Some(user);
        }
    }
    match transmitters {
        0 => ContentionOutcome::NoTransmission,
        1 => ContentionOutcome::Success {
            winner: winner.expect("one transmitter recorded"),
        },
        _ => ContentionOutcome::Collision,
    }
}

/// Control-channel contention among all `num_users` users.
pub fn contend_case2<R: Rng + ?Sized>(num_users: usize, p: f64, rng: &mut R) -> ContentionOutcome {
    let everyone: Vec<usize> = (0..num_users).collect();
    contend_case1(&everyone, p, rng)
}

/// Closed-form `(no transmission, success, collision)` probabilities when
/// `u` users each send an RTS independently with probability `p`.
pub fn contention_probabilities(u: u32, p: f64) -> (f64, f64, f64) {
    if u == 0 {
        return (1.0, 0.0, 0.0);
    }
    let silent = (1.0 - p).powi(u as i32);
    let success = u as f64 * p * (1.0 - p).powi(u as i32 - 1);
    let collision = (1.0 - silent - success).max(0.0);
    (silent, success, collision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn closed_form_reference_points() {
        let (s, w, c) = contention_probabilities(2, 0.5);
        assert!((s - 0.25).abs() < 1e-15);
        assert!((w - 0.5).abs() < 1e-15);
        assert!((c - 0.25).abs() < 1e-15);

        let (s, w, c) = contention_probabilities(3, 0.2);
        assert!((s - 0.512).abs() < 1e-15);
        assert!((w - 0.384).abs() < 1e-15);
        assert!((c - 0.104).abs() < 1e-12);

        // Bonded success with eight users at p = 1/8.
        let (_, w, _) = contention_probabilities(8, 0.125);
        assert!((w - 0.875f64.powi(7)).abs() < 1e-15);
        assert!((w - 0.3926959).abs() < 5e-7, "w = {w}");

        assert_eq!(contention_probabilities(0, 0.7), (1.0, 0.0, 0.0));
    }

    #[test]
    fn simulated_outcome_frequencies_match_closed_form() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let contenders: Vec<usize> = (0..3).collect();
        let p = 0.2;
        let trials = 200_000;
        let (mut none, mut success, mut collision) = (0u32, 0u32, 0u32);
        for _ in 0..trials {
            match contend_case1(&contenders, p, &mut rng) {
                ContentionOutcome::NoTransmission => none += 1,
                ContentionOutcome::Success { winner } => {
                    assert!(winner < 3);
                    success += 1;
                }
                ContentionOutcome::Collision => collision += 1,
            }
        }
        let (s, w, c) = contention_probabilities(3, p);
        let t = trials as f64;
        assert!((none as f64 / t - s).abs() < 0.005);
        assert!((success as f64 / t - w).abs() < 0.005);
        assert!((collision as f64 / t - c).abs() < 0.005);
    }

    #[test]
    fn winners_are_uniform_across_contenders() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let contenders: Vec<usize> = vec![4, 9, 12];
        let mut wins = [0u32; 3];
        let mut successes = 0u32;
        for _ in 0..120_000 {
            if let ContentionOutcome::Success { winner } = contend_case1(&contenders, 0.3, &mut rng)
            {
                let slot = contenders.iter().position(|&u| u == winner).unwrap();
                wins[slot] += 1;
                successes += 1;
            }
        }
        for w in wins {
            let share = w as f64 / successes as f64;
            assert!((share - 1.0 / 3.0).abs() < 0.01, "share = {share}");
        }
    }

    #[test]
    fn degenerate_probabilities() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        assert_eq!(
            contend_case1(&[0, 1, 2], 0.0, &mut rng),
            ContentionOutcome::NoTransmission
        );
        assert_eq!(contend_case1(&[0, 1], 1.0, &mut rng), ContentionOutcome::Collision);
        assert_eq!(
            contend_case1(&[5], 1.0, &mut rng),
            ContentionOutcome::Success { winner: 5 }
        );
        assert_eq!(contend_case2(0, 0.5, &mut rng), ContentionOutcome::NoTransmission);
    }

    #[test]
    fn case_labels_round_trip() {
        assert_eq!(AccessCase::Case1.to_string(), "case1");
        assert_eq!(AccessCase::Case2.to_string(), "case2");
        assert_eq!("case1".parse::<AccessCase>().unwrap(), AccessCase::Case1);
        assert_eq!("2".parse::<AccessCase>().unwrap(), AccessCase::Case2);
        assert!("case3".parse::<AccessCase>().is_err());
    }

    proptest! {
        /// The three outcome probabilities always form a distribution.
        #[test]
        fn probabilities_sum_to_one(u in 0u32..=16, p in 0.0f64..=1.0) {
            let (s, w, c) = contention_probabilities(u, p);
            prop_assert!((s + w + c - 1.0).abs() < 1e-12);
            prop_assert!(s >= 0.0 && w >= 0.0 && c >= 0.0);
        }
    }
}

//! Scenario configuration: built-in defaults, a flat key=value file format,
//! and a canonical text dump.
//!
//! Every key is optional; anything not given falls back to the built-in
//! reference scenario (five channels at 30% occupancy, eight users, five
//! 9 us mini-slots in a 1.89 ms slot, symmetric sensing noise 0.3,
//! thresholds 0.2/0.8, collision budget 0.035).
//!
//! Channel occupancy can be given as `eta` (stationary busy probability),
//! as both transition probabilities `lambda`/`mu`, or as `eta` plus one of
//! them. An `eta` given alone is expanded to
//! `lambda = 1 - eta * (1 - persistence)` and
//! `mu = (1 - eta) * (1 - persistence)`, which pins the stationary busy
//! probability at `eta` while the `persistence` key (default 0.5) sets the
//! lag-one autocorrelation of the state process, `lambda - mu`. Giving
//! `persistence = 0` makes consecutive slots independent. Per-channel
//! overrides live in `[channel <i>]` sections (1-based).

use crate::access::AccessCase;
use crate::analytics::SlotTiming;
use crate::channel::ChannelParams;
use crate::policies::Scheme;
use crate::sim::SimScenario;
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("missing value for {field}")]
    Missing { field: String },
    #[error("invalid {field}: {message}")]
    Invalid { field: String, message: String },
    #[error("thresholds must satisfy 0 <= theta0 < theta1 <= 1")]
    ThetaOrdering,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Lag-one state autocorrelation used when occupancy is given as `eta` alone.
///
/// `lambda = 1 - eta * (1 - persistence)` and `mu = (1 - eta) * (1 - persistence)`
/// keep the stationary busy probability at `eta` for every persistence in
/// `[0, 1)`, while `lambda - mu = persistence` is the correlation between the
/// states of a channel in consecutive slots.
pub const DEFAULT_PERSISTENCE: f64 = 0.5;

/// Expand a stationary busy probability into transition probabilities under
/// the given lag-one autocorrelation. Returns `(lambda, mu)` where `lambda`
/// is `Pr(idle -> idle)` and `mu` is `Pr(busy -> idle)`.
pub fn occupancy_from_eta(eta: f64, persistence: f64) -> (f64, f64) {
    (
        1.0 - eta * (1.0 - persistence),
        (1.0 - eta) * (1.0 - persistence),
    )
}

/// How the proposed schemes pick their access probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PPolicy {
    /// Tune against the collision constraint at every operating point.
    Auto,
    /// Use this value everywhere.
    Fixed(f64),
}

/// Full description of an experiment: network, protocol, and run lengths.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub num_users: usize,
    pub max_mini_slots: u32,
    pub t_mini_slot: f64,
    pub t_slot: f64,
    pub theta0: f64,
    pub theta1: f64,
    pub channels: Vec<ChannelParams>,
    /// Lag-one autocorrelation applied when a channel's occupancy is given as
    /// `eta` alone (here or in a parameter sweep). Explicit `lambda`/`mu`
    /// pairs are taken verbatim.
    pub persistence: f64,
    pub schemes: Vec<Scheme>,
    pub cases: Vec<AccessCase>,
    pub p: PPolicy,
    /// Access probability used by the baseline schemes.
    pub baseline_p: f64,
    pub num_slots: u64,
    pub num_replications: usize,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self::reference()
    }
}

impl ScenarioConfig {
    /// The built-in reference scenario.
    pub fn reference() -> Self {
        let (lambda, mu) = occupancy_from_eta(0.3, DEFAULT_PERSISTENCE);
        let channel = ChannelParams {
            lambda,
            mu,
            rate_bps: 1.0e6,
            gamma: 0.035,
            epsilon: 0.3,
            delta: 0.3,
        };
        Self {
            num_users: 8,
            max_mini_slots: 5,
            t_mini_slot: 9.0e-6,
            t_slot: 1.89e-3,
            theta0: 0.2,
            theta1: 0.8,
            channels: vec![channel; 5],
            persistence: DEFAULT_PERSISTENCE,
            schemes: vec![Scheme::Memoryless, Scheme::Improved],
            cases: vec![AccessCase::Case1, AccessCase::Case2],
            p: PPolicy::Auto,
            baseline_p: 0.11,
            num_slots: 100_000,
            num_replications: 10,
            seed: 1,
        }
    }

    pub fn t_data(&self) -> f64 {
        self.t_slot - self.max_mini_slots as f64 * self.t_mini_slot
    }

    pub fn timing(&self) -> SlotTiming {
        SlotTiming {
            max_mini_slots: self.max_mini_slots,
            t_mini_slot: self.t_mini_slot,
            t_data: self.t_data(),
        }
    }

    pub fn scenario(&self) -> SimScenario {
        SimScenario {
            channels: self.channels.clone(),
            num_users: self.num_users,
            theta0: self.theta0,
            theta1: self.theta1,
            timing: self.timing(),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = |field: &str, ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(ConfigError::Invalid {
                    field: field.to_string(),
                    message: "must be positive".to_string(),
                })
            }
        };
        positive("channels", !self.channels.is_empty())?;
        positive("users", self.num_users >= 1)?;
        positive("mini_slots", self.max_mini_slots >= 1)?;
        positive("t_mini_slot_us", self.t_mini_slot > 0.0)?;
        positive("slots", self.num_slots >= 1)?;
        positive("replications", self.num_replications >= 1)?;
        if self.t_data() <= 0.0 {
            return Err(ConfigError::Invalid {
                field: "t_slot_ms".to_string(),
                message: "sensing phase does not fit into the slot".to_string(),
            });
        }
        if !(0.0 <= self.theta0 && self.theta0 < self.theta1 && self.theta1 <= 1.0) {
            return Err(ConfigError::ThetaOrdering);
        }
        if !(0.0..1.0).contains(&self.persistence) {
            return Err(ConfigError::Invalid {
                field: "persistence".to_string(),
                message: format!("{} outside [0, 1)", self.persistence),
            });
        }
        if let PPolicy::Fixed(p) = self.p {
            if !(0.0..=1.0).contains(&p) {
                return Err(ConfigError::Invalid {
                    field: "p".to_string(),
                    message: format!("{p} outside [0, 1]"),
                });
            }
        }
        if !(0.0..=1.0).contains(&self.baseline_p) {
            return Err(ConfigError::Invalid {
                field: "baseline_p".to_string(),
                message: format!("{} outside [0, 1]", self.baseline_p),
            });
        }
        if self.schemes.is_empty() {
            return Err(ConfigError::Missing {
                field: "schemes".to_string(),
            });
        }
        if self.cases.is_empty() {
            return Err(ConfigError::Missing {
                field: "cases".to_string(),
            });
        }
        for (i, ch) in self.channels.iter().enumerate() {
            ch.validate().map_err(|e| ConfigError::Invalid {
                field: format!("channel {}", i + 1),
                message: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str(&text)
    }

    /// Parse the flat key=value format on top of the built-in defaults.
    #[allow(clippy::should_implement_trait)]
    pub fn from_str(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::reference();
        let mut num_channels = cfg.channels.len();
        let mut global = OccupancySpec::default();
        let mut global_fields = FieldSpec::default();
        let mut sections: Vec<(usize, OccupancySpec, FieldSpec)> = Vec::new();
        let mut current: Option<usize> = None;

        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(inner) = line.strip_prefix('[') {
                let inner = inner.strip_suffix(']').ok_or_else(|| ConfigError::Parse {
                    line: line_no,
                    message: "unterminated section header".to_string(),
                })?;
                let mut parts = inner.split_whitespace();
                match (parts.next(), parts.next(), parts.next()) {
                    (Some("channel"), Some(n), None) => {
                        let ch: usize = n.parse().map_err(|_| ConfigError::Parse {
                            line: line_no,
                            message: format!("bad channel index '{n}'"),
                        })?;
                        if ch == 0 {
                            return Err(ConfigError::Parse {
                                line: line_no,
                                message: "channel sections are 1-based".to_string(),
                            });
                        }
                        current = Some(ch - 1);
                        sections.push((ch - 1, OccupancySpec::default(), FieldSpec::default()));
                    }
                    _ => {
                        return Err(ConfigError::Parse {
                            line: line_no,
                            message: format!("unknown section '[{inner}]'"),
                        })
                    }
                }
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Parse {
                line: line_no,
                message: "expected key = value".to_string(),
            })?;
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim();
            let parse_f64 = |field: &str| -> Result<f64, ConfigError> {
                value.parse::<f64>().map_err(|_| ConfigError::Invalid {
                    field: field.to_string(),
                    message: format!("'{value}' is not a number"),
                })
            };

            if let Some(section) = current {
                let (_, occ, fields) = sections
                    .iter_mut()
                    .rev()
                    .find(|(ch, _, _)| *ch == section)
                    .expect("section pushed on header");
                let field = format!("channel {}.{key}", section + 1);
                match key.as_str() {
                    "eta" => occ.eta = Some(parse_f64(&field)?),
                    "lambda" => occ.lambda = Some(parse_f64(&field)?),
                    "mu" => occ.mu = Some(parse_f64(&field)?),
                    "rate_mbps" => fields.rate_bps = Some(parse_f64(&field)? * 1.0e6),
                    "epsilon" => fields.epsilon = Some(parse_f64(&field)?),
                    "delta" => fields.delta = Some(parse_f64(&field)?),
                    "gamma" => fields.gamma = Some(parse_f64(&field)?),
                    _ => {
                        return Err(ConfigError::Parse {
                            line: line_no,
                            message: format!("unknown channel key '{key}'"),
                        })
                    }
                }
                continue;
            }

            match key.as_str() {
                "channels" => {
                    num_channels = value.parse().map_err(|_| ConfigError::Invalid {
                        field: "channels".to_string(),
                        message: format!("'{value}' is not a count"),
                    })?;
                }
                "users" => {
                    cfg.num_users = value.parse().map_err(|_| ConfigError::Invalid {
                        field: "users".to_string(),
                        message: format!("'{value}' is not a count"),
                    })?;
                }
                "mini_slots" => {
                    cfg.max_mini_slots = value.parse().map_err(|_| ConfigError::Invalid {
                        field: "mini_slots".to_string(),
                        message: format!("'{value}' is not a count"),
                    })?;
                }
                "t_mini_slot_us" => cfg.t_mini_slot = parse_f64("t_mini_slot_us")? * 1.0e-6,
                "t_slot_ms" => cfg.t_slot = parse_f64("t_slot_ms")? * 1.0e-3,
                "theta0" => cfg.theta0 = parse_f64("theta0")?,
                "theta1" => cfg.theta1 = parse_f64("theta1")?,
                "persistence" => cfg.persistence = parse_f64("persistence")?,
                "eta" => global.eta = Some(parse_f64("eta")?),
                "lambda" => global.lambda = Some(parse_f64("lambda")?),
                "mu" => global.mu = Some(parse_f64("mu")?),
                "rate_mbps" => global_fields.rate_bps = Some(parse_f64("rate_mbps")? * 1.0e6),
                "epsilon" => global_fields.epsilon = Some(parse_f64("epsilon")?),
                "delta" => global_fields.delta = Some(parse_f64("delta")?),
                "gamma" => global_fields.gamma = Some(parse_f64("gamma")?),
                "schemes" => {
                    cfg.schemes = value
                        .split(',')
                        .map(|s| {
                            s.parse::<Scheme>().map_err(|message| ConfigError::Invalid {
                                field: "schemes".to_string(),
                                message,
                            })
                        })
                        .collect::<Result<_, _>>()?;
                }
                "cases" => {
                    cfg.cases = value
                        .split(',')
                        .map(|s| {
                            s.parse::<AccessCase>()
                                .map_err(|message| ConfigError::Invalid {
                                    field: "cases".to_string(),
                                    message,
                                })
                        })
                        .collect::<Result<_, _>>()?;
                }
                "p" => {
                    cfg.p = if value.eq_ignore_ascii_case("auto") {
                        PPolicy::Auto
                    } else {
                        PPolicy::Fixed(parse_f64("p")?)
                    };
                }
                "baseline_p" => cfg.baseline_p = parse_f64("baseline_p")?,
                "slots" => {
                    cfg.num_slots = value.parse().map_err(|_| ConfigError::Invalid {
                        field: "slots".to_string(),
                        message: format!("'{value}' is not a count"),
                    })?;
                }
                "replications" => {
                    cfg.num_replications = value.parse().map_err(|_| ConfigError::Invalid {
                        field: "replications".to_string(),
                        message: format!("'{value}' is not a count"),
                    })?;
                }
                "seed" => {
                    cfg.seed = value.parse().map_err(|_| ConfigError::Invalid {
                        field: "seed".to_string(),
                        message: format!("'{value}' is not a u64"),
                    })?;
                }
                _ => {
                    return Err(ConfigError::Parse {
                        line: line_no,
                        message: format!("unknown key '{key}'"),
                    })
                }
            }
        }

        // Build the channel list: global occupancy/fields, then overrides.
        // This happens after the whole file is read so that `persistence`
        // applies regardless of key order.
        let (lambda, mu) = occupancy_from_eta(0.3, cfg.persistence);
        let default_channel = ChannelParams {
            lambda,
            mu,
            rate_bps: 1.0e6,
            gamma: 0.035,
            epsilon: 0.3,
            delta: 0.3,
        };
        let base = apply_channel_spec(
            &default_channel,
            &global,
            &global_fields,
            cfg.persistence,
            "channel",
        )?;
        let mut channels = vec![base; num_channels];
        for (index, occ, fields) in &sections {
            if *index >= num_channels {
                return Err(ConfigError::Invalid {
                    field: format!("channel {}", index + 1),
                    message: format!("only {num_channels} channels configured"),
                });
            }
            let label = format!("channel {}", index + 1);
            channels[*index] =
                apply_channel_spec(&channels[*index], occ, fields, cfg.persistence, &label)?;
        }
        cfg.channels = channels;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Canonical text form: every field explicit, occupancy as lambda/mu.
    pub fn to_config_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "channels = {}", self.channels.len());
        let _ = writeln!(out, "users = {}", self.num_users);
        let _ = writeln!(out, "mini_slots = {}", self.max_mini_slots);
        let _ = writeln!(out, "t_mini_slot_us = {}", self.t_mini_slot * 1.0e6);
        let _ = writeln!(out, "t_slot_ms = {}", self.t_slot * 1.0e3);
        let _ = writeln!(out, "theta0 = {}", self.theta0);
        let _ = writeln!(out, "theta1 = {}", self.theta1);
        let _ = writeln!(out, "persistence = {}", self.persistence);
        let schemes: Vec<String> = self.schemes.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "schemes = {}", schemes.join(", "));
        let cases: Vec<String> = self.cases.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "cases = {}", cases.join(", "));
        match self.p {
            PPolicy::Auto => {
                let _ = writeln!(out, "p = auto");
            }
            PPolicy::Fixed(p) => {
                let _ = writeln!(out, "p = {p}");
            }
        }
        let _ = writeln!(out, "baseline_p = {}", self.baseline_p);
        let _ = writeln!(out, "slots = {}", self.num_slots);
        let _ = writeln!(out, "replications = {}", self.num_replications);
        let _ = writeln!(out, "seed = {}", self.seed);
        for (i, ch) in self.channels.iter().enumerate() {
            let _ = writeln!(out, "\n[channel {}]", i + 1);
            let _ = writeln!(out, "lambda = {}", ch.lambda);
            let _ = writeln!(out, "mu = {}", ch.mu);
            let _ = writeln!(out, "rate_mbps = {}", ch.rate_bps / 1.0e6);
            let _ = writeln!(out, "epsilon = {}", ch.epsilon);
            let _ = writeln!(out, "delta = {}", ch.delta);
            let _ = writeln!(out, "gamma = {}", ch.gamma);
        }
        out
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct OccupancySpec {
    eta: Option<f64>,
    lambda: Option<f64>,
    mu: Option<f64>,
}

#[derive(Debug, Default, Clone, Copy)]
struct FieldSpec {
    rate_bps: Option<f64>,
    epsilon: Option<f64>,
    delta: Option<f64>,
    gamma: Option<f64>,
}

/// Resolve occupancy notation into transition probabilities.
fn resolve_occupancy(
    base: (f64, f64),
    occ: &OccupancySpec,
    persistence: f64,
    label: &str,
) -> Result<(f64, f64), ConfigError> {
    let invalid = |message: String| ConfigError::Invalid {
        field: format!("{label}.eta"),
        message,
    };
    match (occ.eta, occ.lambda, occ.mu) {
        (None, None, None) => Ok(base),
        (None, Some(l), Some(m)) => Ok((l, m)),
        (Some(e), None, None) => Ok(occupancy_from_eta(e, persistence)),
        (Some(e), Some(l), None) => {
            if e <= 0.0 || e >= 1.0 {
                return Err(invalid(format!(
                    "eta = {e} cannot be combined with lambda; give mu explicitly"
                )));
            }
            Ok((l, (1.0 - l) * (1.0 - e) / e))
        }
        (Some(e), None, Some(m)) => {
            if e >= 1.0 {
                return Err(invalid(format!(
                    "eta = {e} cannot be combined with mu; give lambda explicitly"
                )));
            }
            Ok((1.0 - e * m / (1.0 - e), m))
        }
        (Some(_), Some(_), Some(_)) => Err(invalid(
            "give at most two of eta, lambda, mu".to_string(),
        )),
        (None, Some(_), None) => Err(ConfigError::Missing {
            field: format!("{label}.mu"),
        }),
        (None, None, Some(_)) => Err(ConfigError::Missing {
            field: format!("{label}.lambda"),
        }),
    }
}

fn apply_channel_spec(
    base: &ChannelParams,
    occ: &OccupancySpec,
    fields: &FieldSpec,
    persistence: f64,
    label: &str,
) -> Result<ChannelParams, ConfigError> {
    let (lambda, mu) = resolve_occupancy((base.lambda, base.mu), occ, persistence, label)?;
    Ok(ChannelParams {
        lambda,
        mu,
        rate_bps: fields.rate_bps.unwrap_or(base.rate_bps),
        epsilon: fields.epsilon.unwrap_or(base.epsilon),
        delta: fields.delta.unwrap_or(base.delta),
        gamma: fields.gamma.unwrap_or(base.gamma),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::stationary_probabilities;

    #[test]
    fn reference_scenario_is_consistent() {
        let cfg = ScenarioConfig::reference();
        cfg.validate().unwrap();
        assert!((cfg.t_data() - 1.845e-3).abs() < 1e-12);
        assert_eq!(cfg.channels.len(), 5);
        let (eta, zeta) = stationary_probabilities(&cfg.channels[0]).unwrap();
        assert!((eta - 0.3).abs() < 1e-12);
        assert!((zeta - 0.7).abs() < 1e-12);
        assert_eq!(cfg.num_slots, 100_000);
        assert_eq!(cfg.num_replications, 10);
    }

    #[test]
    fn canonical_dump_round_trips() {
        let cfg = ScenarioConfig::reference();
        let text = cfg.to_config_text();
        let parsed = ScenarioConfig::from_str(&text).unwrap();
        assert_eq!(parsed.channels, cfg.channels);
        assert_eq!(parsed.schemes, cfg.schemes);
        assert_eq!(parsed.cases, cfg.cases);
        assert_eq!(parsed.num_slots, cfg.num_slots);
        assert_eq!(parsed.seed, cfg.seed);
        assert!((parsed.t_slot - cfg.t_slot).abs() < 1e-15);
    }

    #[test]
    fn eta_shorthand_and_sections() {
        let text = "
            eta = 0.5
            channels = 3
            seed = 9

            [channel 2]
            eta = 0.6
            epsilon = 0.1
        ";
        let cfg = ScenarioConfig::from_str(text).unwrap();
        assert_eq!(cfg.channels.len(), 3);
        let (eta0, _) = stationary_probabilities(&cfg.channels[0]).unwrap();
        let (eta1, _) = stationary_probabilities(&cfg.channels[1]).unwrap();
        assert!((eta0 - 0.5).abs() < 1e-12);
        assert!((eta1 - 0.6).abs() < 1e-12);
        assert_eq!(cfg.channels[1].epsilon, 0.1);
        assert_eq!(cfg.channels[0].epsilon, 0.3);
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn persistence_sets_autocorrelation_but_not_occupancy() {
        let text = "eta = 0.4\npersistence = 0.5";
        let cfg = ScenarioConfig::from_str(text).unwrap();
        let ch = &cfg.channels[0];
        let (eta, _) = stationary_probabilities(ch).unwrap();
        assert!((eta - 0.4).abs() < 1e-12);
        assert!((ch.lambda - ch.mu - 0.5).abs() < 1e-12);
        // persistence = 0 gives the independent-slots special case.
        let iid = ScenarioConfig::from_str("eta = 0.4\npersistence = 0").unwrap();
        assert!((iid.channels[0].lambda - 0.6).abs() < 1e-12);
        assert!((iid.channels[0].mu - 0.6).abs() < 1e-12);
        // Key order does not matter.
        let flipped = ScenarioConfig::from_str("persistence = 0.5\neta = 0.4").unwrap();
        assert_eq!(flipped.channels, cfg.channels);
        assert!(matches!(
            ScenarioConfig::from_str("persistence = 1.0"),
            Err(ConfigError::Invalid { .. })
        ));
    }

    #[test]
    fn eta_with_lambda_solves_for_mu() {
        let text = "eta = 0.4\nlambda = 0.6";
        let cfg = ScenarioConfig::from_str(text).unwrap();
        let ch = &cfg.channels[0];
        assert!((ch.mu - 0.6).abs() < 1e-12, "mu = {}", ch.mu);
        let (eta, _) = stationary_probabilities(ch).unwrap();
        assert!((eta - 0.4).abs() < 1e-12);
    }

    #[test]
    fn schemes_cases_and_p_parse() {
        let text = "schemes = random, negotiate, memoryless, improved\ncases = case2\np = 0.25";
        let cfg = ScenarioConfig::from_str(text).unwrap();
        assert_eq!(cfg.schemes.len(), 4);
        assert_eq!(cfg.cases, vec![AccessCase::Case2]);
        assert_eq!(cfg.p, PPolicy::Fixed(0.25));
        let cfg = ScenarioConfig::from_str("p = auto").unwrap();
        assert_eq!(cfg.p, PPolicy::Auto);
    }

    #[test]
    fn errors_are_reported_with_context() {
        assert!(matches!(
            ScenarioConfig::from_str("theta0 = 0.9"),
            Err(ConfigError::ThetaOrdering)
        ));
        assert!(matches!(
            ScenarioConfig::from_str("p = 1.5"),
            Err(ConfigError::Invalid { .. })
        ));
        assert!(matches!(
            ScenarioConfig::from_str("bogus = 3"),
            Err(ConfigError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            ScenarioConfig::from_str("lambda = 0.5"),
            Err(ConfigError::Missing { .. })
        ));
        assert!(matches!(
            ScenarioConfig::from_str("epsilon = 0.7"),
            Err(ConfigError::Invalid { .. })
        ));
        assert!(matches!(
            ScenarioConfig::from_str("[channel 9]\neta = 0.5"),
            Err(ConfigError::Invalid { .. })
        ));
    }
}

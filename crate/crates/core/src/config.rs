//! Rule constants and service knobs.
//!
//! Everything defaults to the standard rulebook. A TOML file overrides the
//! defaults, and `MERIT_*` environment variables override the file, so a
//! deployment can retune a single constant without shipping a config.

use crate::rational::{parse_ratio, ratio_string, Rational};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Whole-point awards per grading rule. Signs are applied by the rules
/// themselves: `report_upheld` is what the reporter gains and what the
/// editor and publisher each lose.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GradingConfig {
    pub registration: i64,
    pub community_created: i64,
    pub community_joined: i64,
    pub version_saved: i64,
    pub vote: i64,
    pub report_upheld: i64,
    pub report_rejected: i64,
}

impl Default for GradingConfig {
    fn default() -> Self {
        Self {
            registration: 25,
            community_created: 25,
            community_joined: 25,
            version_saved: 2,
            vote: 2,
            report_upheld: 5,
            report_rejected: 5,
        }
    }
}

/// Publication bank tuning. The three percentages must sum to 100.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AllocationConfig {
    /// Engagement threshold: a version is close-to-one when its vote/view
    /// ratio is at least `1 - epsilon`. Written as `"1/2"` or `"0.5"`.
    #[serde(with = "ratio_string")]
    pub epsilon: Rational,
    /// Whole points minted per selected version.
    pub points_per_version: i64,
    pub close_to_one_percent: i64,
    pub publisher_percent: i64,
    pub remaining_percent: i64,
}

impl Default for AllocationConfig {
    fn default() -> Self {
        Self {
            epsilon: Rational::new(1, 2),
            points_per_version: 5,
            close_to_one_percent: 70,
            publisher_percent: 20,
            remaining_percent: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    /// A snapshot is written whenever the sequence number is a multiple of
    /// this.
    pub snapshot_interval: u64,
    pub listen: String,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            snapshot_interval: 1000,
            listen: "127.0.0.1:8080".to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    pub grading: GradingConfig,
    pub allocation: AllocationConfig,
    pub service: ServiceConfig,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid value for {key}: {message}")]
    BadValue { key: String, message: String },
    #[error("allocation percentages must sum to 100, got {0}")]
    BadSplit(i64),
    #[error("allocation.epsilon must lie in [0, 1]")]
    EpsilonOutOfRange,
}

impl EngineConfig {
    /// Defaults, then the optional TOML file, then `MERIT_*` environment
    /// variables. The result is validated before it is returned.
    pub fn load(path: Option<&Path>) -> Result<EngineConfig, ConfigError> {
        let mut config = match path {
            Some(path) => {
                let raw = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
                    path: path.to_owned(),
                    source,
                })?;
                toml::from_str(&raw)?
            }
            None => EngineConfig::default(),
        };
        config.apply_env_from(|key| std::env::var(key).ok())?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_toml_str(raw: &str) -> Result<EngineConfig, ConfigError> {
        let config: EngineConfig = toml::from_str(raw)?;
        config.validate()?;
        Ok(config)
    }

    /// Applies `MERIT_SECTION_KEY` overrides from any source of variables.
    /// Factored out of [`load`](Self::load) so tests do not mutate the
    /// process environment.
    pub fn apply_env_from(
        &mut self,
        get: impl Fn(&str) -> Option<String>,
    ) -> Result<(), ConfigError> {
        fn set_i64(
            slot: &mut i64,
            key: &str,
            get: &impl Fn(&str) -> Option<String>,
        ) -> Result<(), ConfigError> {
            if let Some(raw) = get(key) {
                *slot = raw.trim().parse().map_err(|_| ConfigError::BadValue {
                    key: key.to_owned(),
                    message: format!("expected an integer, got `{raw}`"),
                })?;
            }
            Ok(())
        }

        set_i64(&mut self.grading.registration, "MERIT_GRADING_REGISTRATION", &get)?;
        set_i64(
            &mut self.grading.community_created,
            "MERIT_GRADING_COMMUNITY_CREATED",
            &get,
        )?;
        set_i64(
            &mut self.grading.community_joined,
            "MERIT_GRADING_COMMUNITY_JOINED",
            &get,
        )?;
        set_i64(
            &mut self.grading.version_saved,
            "MERIT_GRADING_VERSION_SAVED",
            &get,
        )?;
        set_i64(&mut self.grading.vote, "MERIT_GRADING_VOTE", &get)?;
        set_i64(
            &mut self.grading.report_upheld,
            "MERIT_GRADING_REPORT_UPHELD",
            &get,
        )?;
        set_i64(
            &mut self.grading.report_rejected,
            "MERIT_GRADING_REPORT_REJECTED",
            &get,
        )?;
        if let Some(raw) = get("MERIT_ALLOCATION_EPSILON") {
            self.allocation.epsilon =
                parse_ratio(&raw).map_err(|e| ConfigError::BadValue {
                    key: "MERIT_ALLOCATION_EPSILON".to_owned(),
                    message: e.to_string(),
                })?;
        }
        set_i64(
            &mut self.allocation.points_per_version,
            "MERIT_ALLOCATION_POINTS_PER_VERSION",
            &get,
        )?;
        set_i64(
            &mut self.allocation.close_to_one_percent,
            "MERIT_ALLOCATION_CLOSE_TO_ONE_PERCENT",
            &get,
        )?;
        set_i64(
            &mut self.allocation.publisher_percent,
            "MERIT_ALLOCATION_PUBLISHER_PERCENT",
            &get,
        )?;
        set_i64(
            &mut self.allocation.remaining_percent,
            "MERIT_ALLOCATION_REMAINING_PERCENT",
            &get,
        )?;
        if let Some(raw) = get("MERIT_SERVICE_SNAPSHOT_INTERVAL") {
            self.service.snapshot_interval =
                raw.trim().parse().map_err(|_| ConfigError::BadValue {
                    key: "MERIT_SERVICE_SNAPSHOT_INTERVAL".to_owned(),
                    message: format!("expected a positive integer, got `{raw}`"),
                })?;
        }
        if let Some(raw) = get("MERIT_SERVICE_LISTEN") {
            self.service.listen = raw;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let g = &self.grading;
        for (key, value) in [
            ("grading.registration", g.registration),
            ("grading.community_created", g.community_created),
            ("grading.community_joined", g.community_joined),
            ("grading.version_saved", g.version_saved),
            ("grading.vote", g.vote),
            ("grading.report_upheld", g.report_upheld),
            ("grading.report_rejected", g.report_rejected),
            (
                "allocation.points_per_version",
                self.allocation.points_per_version,
            ),
        ] {
            if value < 0 {
                return Err(ConfigError::BadValue {
                    key: key.to_owned(),
                    message: format!("must not be negative, got {value}"),
                });
            }
        }
        let a = &self.allocation;
        for (key, value) in [
            ("allocation.close_to_one_percent", a.close_to_one_percent),
            ("allocation.publisher_percent", a.publisher_percent),
            ("allocation.remaining_percent", a.remaining_percent),
        ] {
            if !(0..=100).contains(&value) {
                return Err(ConfigError::BadValue {
                    key: key.to_owned(),
                    message: format!("must lie in 0..=100, got {value}"),
                });
            }
        }
        let sum = a.close_to_one_percent + a.publisher_percent + a.remaining_percent;
        if sum != 100 {
            return Err(ConfigError::BadSplit(sum));
        }
        if a.epsilon > Rational::from_integer(1) {
            return Err(ConfigError::EpsilonOutOfRange);
        }
        if self.service.snapshot_interval == 0 {
            return Err(ConfigError::BadValue {
                key: "service.snapshot_interval".to_owned(),
                message: "must be at least 1".to_owned(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_the_standard_rulebook() {
        let config = EngineConfig::default();
        assert_eq!(config.grading.registration, 25);
        assert_eq!(config.grading.vote, 2);
        assert_eq!(config.allocation.epsilon, Rational::new(1, 2));
        assert_eq!(config.allocation.points_per_version, 5);
        assert_eq!(config.allocation.close_to_one_percent, 70);
        assert_eq!(config.service.snapshot_interval, 1000);
        config.validate().unwrap();
    }

    #[test]
    fn partial_toml_keeps_the_other_defaults() {
        let config = EngineConfig::from_toml_str(
            "[allocation]\nepsilon = \"1/4\"\n\n[service]\nlisten = \"0.0.0.0:9000\"\n",
        )
        .unwrap();
        assert_eq!(config.allocation.epsilon, Rational::new(1, 4));
        assert_eq!(config.service.listen, "0.0.0.0:9000");
        assert_eq!(config.grading.registration, 25);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = EngineConfig::from_toml_str("[grading]\nregistratoin = 25\n").unwrap_err();
        assert!(err.to_string().contains("invalid config"));
    }

    #[test]
    fn env_overrides_beat_the_file() {
        let mut config = EngineConfig::from_toml_str("[grading]\nvote = 3\n").unwrap();
        config
            .apply_env_from(|key| match key {
                "MERIT_GRADING_VOTE" => Some("4".to_owned()),
                "MERIT_ALLOCATION_EPSILON" => Some("0.25".to_owned()),
                _ => None,
            })
            .unwrap();
        assert_eq!(config.grading.vote, 4);
        assert_eq!(config.allocation.epsilon, Rational::new(1, 4));
    }

    #[test]
    fn split_must_sum_to_one_hundred() {
        let err =
            EngineConfig::from_toml_str("[allocation]\npublisher_percent = 25\n").unwrap_err();
        assert!(matches!(err, ConfigError::BadSplit(105)));
    }

    #[test]
    fn epsilon_above_one_is_rejected() {
        let err = EngineConfig::from_toml_str("[allocation]\nepsilon = \"3/2\"\n").unwrap_err();
        assert!(matches!(err, ConfigError::EpsilonOutOfRange));
    }

    #[test]
    fn bad_env_value_names_the_variable() {
        let mut config = EngineConfig::default();
        let err = config
            .apply_env_from(|key| (key == "MERIT_GRADING_VOTE").then(|| "lots".to_owned()))
            .unwrap_err();
        assert!(err.to_string().contains("MERIT_GRADING_VOTE"));
    }
}

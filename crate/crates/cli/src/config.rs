//! Session configuration shared by every subcommand.

use std::str::FromStr;

use dkinterp_core::{AgentUniverse, Logic, SyntaxError, DEFAULT_BUDGET};
use thiserror::Error;

/// Environment variable consulted for the budget when no flag is given.
pub const BUDGET_ENV: &str = "DKINTERP_BUDGET";

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("unknown logic `{0}`; expected k, kd, or kt")]
    UnknownLogic(String),
    #[error("unknown output format `{0}`; expected text, json, latex, or dot")]
    UnknownFormat(String),
    #[error(transparent)]
    Universe(#[from] SyntaxError),
}

/// Rendering target for command output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Latex,
    Dot,
}

impl FromStr for OutputFormat {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "latex" => Ok(OutputFormat::Latex),
            "dot" => Ok(OutputFormat::Dot),
            other => Err(ConfigError::UnknownFormat(other.to_string())),
        }
    }
}

/// Maps the user-facing logic labels onto the calculi. The `kt` label lands
/// on the store-based calculus, whose empty-store embedding defines the
/// reflexive logic's derivability.
pub fn parse_logic(label: &str) -> Result<Logic, ConfigError> {
    match label.to_ascii_lowercase().as_str() {
        "k" => Ok(Logic::K),
        "kd" => Ok(Logic::Kd),
        "kt" => Ok(Logic::KtPlus),
        other => Err(ConfigError::UnknownLogic(other.to_string())),
    }
}

/// Budget default: the environment override when set and numeric, otherwise
/// the library default.
pub fn default_budget() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|text| text.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Everything a single command invocation depends on.
#[derive(Debug, Clone)]
pub struct SessionConfig {
    pub universe: AgentUniverse,
    pub logic: Logic,
    pub budget: u64,
    pub format: OutputFormat,
    pub seed: u64,
}

impl SessionConfig {
    pub fn new(
        logic_label: &str,
        agents: &[String],
        budget: Option<u64>,
        format_label: &str,
        seed: u64,
    ) -> Result<Self, ConfigError> {
        Ok(SessionConfig {
            universe: AgentUniverse::new(agents.iter().map(String::as_str))?,
            logic: parse_logic(logic_label)?,
            budget: budget.unwrap_or_else(default_budget),
            format: format_label.parse()?,
            seed,
        })
    }
}

/// Parameters of the seeded random corpus the self-test runner draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomCorpusSpec {
    pub formula_count: u64,
    pub max_weight: u64,
    pub var_pool: usize,
    pub seed: u64,
}

impl Default for RandomCorpusSpec {
    fn default() -> Self {
        RandomCorpusSpec { formula_count: 60, max_weight: 8, var_pool: 3, seed: 7 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logic_labels_round_trip() {
        assert_eq!(parse_logic("k").unwrap(), Logic::K);
        assert_eq!(parse_logic("KD").unwrap(), Logic::Kd);
        assert_eq!(parse_logic("kt").unwrap(), Logic::KtPlus);
        assert!(parse_logic("s5").is_err());
    }

    #[test]
    fn config_collects_the_universe_and_defaults() {
        let cfg = SessionConfig::new(
            "kd",
            &["b".to_string(), "a".to_string()],
            Some(512),
            "json",
            9,
        )
        .unwrap();
        assert_eq!(cfg.logic, Logic::Kd);
        assert_eq!(cfg.universe.names(), ["a", "b"]);
        assert_eq!(cfg.budget, 512);
        assert_eq!(cfg.format, OutputFormat::Json);
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn bad_labels_are_rejected() {
        assert!(SessionConfig::new("k", &["a".to_string()], None, "yaml", 0).is_err());
        assert!(SessionConfig::new("q", &["a".to_string()], None, "text", 0).is_err());
        assert!(SessionConfig::new("k", &[], None, "text", 0).is_err());
    }
}

//! Command-line surface: session configuration, corpus generators, output
//! rendering, and the subcommand bodies, exposed as a library so that the
//! binary stays thin and the test suites can drive commands directly.

pub mod commands;
pub mod config;
pub mod corpus;
pub mod render;
pub mod selftest;

pub use commands::{
    cmd_countermodel, cmd_interpolate, cmd_prove, cmd_selftest, eliminate_pair, CommandOutput,
    InterpolateMode, InterpolateRequest, ALL_LOGICS,
};
pub use config::{
    default_budget, parse_logic, ConfigError, OutputFormat, RandomCorpusSpec, SessionConfig,
    BUDGET_ENV,
};
pub use corpus::{
    axiom_distribution, axiom_factivity, axiom_inclusion, axiom_seriality, exhaustive_formulas,
    random_formula, random_group, random_propositional, random_sequent,
};

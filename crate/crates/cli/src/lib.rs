//! Scenario-driven front end for `weylkit-core`.
//!
//! A scenario is a JSON file naming a chart, a metric, optional one-forms, a
//! connection, evaluation points and geodesic initial data. Each subcommand
//! turns a scenario into a JSON report whose bytes depend only on the scenario
//! and the settings.

pub mod commands;
pub mod error;
pub mod json;
pub mod scenario;

pub use error::CliError;
pub use scenario::{Overrides, Scenario};

//! Scenario runner for the dualitylab engine.

pub mod config;
pub mod report;
pub mod scenarios;

use rayon::prelude::*;

pub use config::{list_scenarios, ConfigError, Scenario, ScenarioConfig};
pub use report::{Check, ExperimentReport};
pub use scenarios::{run_scenario, RunError};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "DUALITYLAB_THREADS";

/// Parses a batch file: a JSON array of configurations.
pub fn parse_batch(text: &str) -> Result<Vec<ScenarioConfig>, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError(format!("batch file: {e}")))
}

/// Runs configurations concurrently; results keep the input order.
pub fn run_batch(configs: &[ScenarioConfig]) -> Vec<Result<ExperimentReport, RunError>> {
    configs.par_iter().map(run_scenario).collect()
}

/// Aggregate exit status: 2 if any configuration was rejected, else 1 if any
/// check failed, else 0.
pub fn aggregate_exit(results: &[Result<ExperimentReport, RunError>]) -> i32 {
    results.iter().map(|r| match r {
        Ok(rep) => rep.exit_code(),
        Err(e) => e.exit_code(),
    }).max().unwrap_or(0)
}

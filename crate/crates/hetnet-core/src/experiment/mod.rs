//! Scenario generation from configuration and the seeded Monte-Carlo
//! experiment runners behind the CLI.

mod config;
mod runner;
pub mod stats;

pub use config::ExperimentConfig;
pub use runner::{
    generate_scenario, run_bias_experiment, run_centralized_experiment, run_game_experiment,
    run_joint_experiment, AggregateRow, BiasReport, ExperimentResult, TrialRow,
};

//! Experiment configuration, presets and the end-to-end pipeline.

pub mod config;
pub mod presets;
pub mod run;
pub mod verify;

pub use config::{default_targets, parse_real, ExperimentConfig, Lowering, Noise, Shots};
pub use presets::{describe, find_preset, list_presets, preset, preset_names, Preset, DEFAULT_SEED, PRESETS};
pub use run::{
    estimate, relative_pattern_lifetime, run_experiment, run_realization, score_spectrum, ResourceEstimate,
    RunRecord, Scores,
};
pub use verify::{permutation_deviation, run_verify_suite, VerifyCase};

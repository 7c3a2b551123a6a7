//! Instance generation, worst-case search, and batch experiments.

pub mod experiment;
pub mod generate;
pub mod search;
pub mod tightness;

pub use experiment::{
    ExperimentConfig, ExperimentError, ExperimentRecord, ExperimentReport, RandomBatch, TightFamily, run_experiment,
    run_experiment_file, write_report,
};
pub use generate::{GeneratorConfig, gen_mc_tight, gen_random, gen_sc_tight};
pub use search::{SearchResult, default_search_config, hill_climb, hill_climb_worst_case};
pub use tightness::{TightnessRow, paper_examples};

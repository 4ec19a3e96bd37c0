//! Evolution loops for plain GP and the two surrogate-assisted variants.

mod config;
mod fitness;
mod run;

pub use config::{Algorithm, AlgorithmConfig, Budget};
pub use fitness::{ard, evaluate_trees, fitness_ard, EvaluationSet};
pub use run::{
    run_evolution, run_evolution_with, BestIndividual, Checkpoint, GenerationStats, OperatorCounts, Probe,
    RunEvent, RunReport,
};

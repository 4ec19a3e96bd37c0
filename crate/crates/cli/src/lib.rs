//! Experiment harness: dataset generation, training runs, test-set
//! evaluation, and CSV analysis.

pub mod analyze;
pub mod dataset;
pub mod evaluate;
pub mod experiment;

pub use analyze::{analyze, curve};
pub use dataset::{generate_datasets, load_split, DatasetSpec, Split, DATASET_GRID};
pub use evaluate::{test_experiment, TestRecord};
pub use experiment::{train, AlgoSpec, ExperimentSpec};

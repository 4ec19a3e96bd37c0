use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use pgu_core::evolve::{fitness_ard, EvaluationSet, RunReport};
use pgu_core::gp::Tree;
use pgu_core::sim::ReferenceRule;
use serde::{Deserialize, Serialize};

use crate::dataset::{load_evaluation_set, Split};
use crate::experiment::{report_path, ExperimentSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointFitness {
    pub minutes: f64,
    pub test_fitness: Option<f64>,
}

/// Test-split performance of one run's best heuristic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestRecord {
    pub test_fitness: f64,
    pub test_instances: usize,
    pub checkpoints: Vec<CheckpointFitness>,
}

pub fn test_path(spec: &ExperimentSpec, results: &Path, algo: &crate::AlgoSpec, dataset: usize, seed: u64) -> PathBuf {
    spec.run_dir(results, algo, dataset, seed).join("test.json")
}

pub fn tree_fitness(tree: &Tree, set: &EvaluationSet, pf: f64) -> Result<f64> {
    Ok(fitness_ard(tree, tree.size(), set, pf)?)
}

/// Fitness of the hand-written reference rule; only the size penalty remains.
pub fn reference_fitness(set: &EvaluationSet, pf: f64) -> Result<f64> {
    Ok(fitness_ard(&ReferenceRule::default(), ReferenceRule::EQUIVALENT_SIZE, set, pf)?)
}

/// Applies the best heuristic of every run, and each recorded checkpoint
/// incumbent, to the test split. Every run must have a report.
pub fn test_experiment(spec: &ExperimentSpec, data: &Path, results: &Path) -> Result<Vec<PathBuf>> {
    let missing: Vec<String> = spec
        .runs()
        .filter(|(a, d, s)| !report_path(spec, results, a, *d, *s).exists())
        .map(|(a, d, s)| format!("{} dataset-{d} seed-{s}", a.label()))
        .collect();
    if !missing.is_empty() {
        bail!("missing training reports: {}", missing.join(", "));
    }
    let pf = spec.base.pf;
    let mut written = Vec::new();
    for &dataset in &spec.datasets {
        let set = load_evaluation_set(data, dataset, Split::Test)?;
        for (algo, d, seed) in spec.runs().filter(|r| r.1 == dataset) {
            let path = report_path(spec, results, algo, d, seed);
            let report = RunReport::load(&path).with_context(|| format!("reading {}", path.display()))?;
            let checkpoints = report
                .checkpoints
                .iter()
                .map(|c| {
                    let test_fitness = c.tree.as_ref().map(|t| tree_fitness(t, &set, pf)).transpose()?;
                    Ok(CheckpointFitness {
                        minutes: c.minutes,
                        test_fitness,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let record = TestRecord {
                test_fitness: tree_fitness(&report.best.tree, &set, pf)?,
                test_instances: set.len(),
                checkpoints,
            };
            let out = test_path(spec, results, algo, d, seed);
            fs::write(&out, serde_json::to_string_pretty(&record)?)?;
            written.push(out);
        }
    }
    Ok(written)
}

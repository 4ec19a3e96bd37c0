use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use pgu_core::evolve::EvaluationSet;
use pgu_core::sim::{generate_instance, GeneratorParams, Instance};
use serde::{Deserialize, Serialize};

/// (loading ratio, trucks per quay crane) of each dataset id.
pub const DATASET_GRID: [(f64, usize); 4] = [(0.25, 5), (0.75, 7), (0.25, 7), (0.75, 5)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn dir(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub id: usize,
    pub seed: u64,
    pub train: usize,
    pub test: usize,
    pub params: GeneratorParams,
}

pub fn dataset_dir(root: &Path, id: usize) -> PathBuf {
    root.join(format!("dataset-{id}"))
}

fn instance_seed(seed: u64, id: usize, split: Split, i: usize) -> u64 {
    let tag = ((id as u64) << 40) | ((split as u64) << 32) | i as u64;
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ tag
}

/// Writes `datasets` directories, each with `train` and `test` instance
/// files and a `dataset.json` describing how they were made.
pub fn generate_datasets(
    root: &Path,
    datasets: usize,
    seed: u64,
    train: usize,
    test: usize,
    base: &GeneratorParams,
) -> Result<Vec<DatasetSpec>> {
    if datasets == 0 || datasets > DATASET_GRID.len() {
        bail!("--datasets must be between 1 and {}", DATASET_GRID.len());
    }
    let mut specs = Vec::new();
    for (id, &(ratio, tpq)) in DATASET_GRID.iter().enumerate().take(datasets) {
        let params = GeneratorParams {
            loading_ratio: ratio,
            trucks_per_qc: tpq,
            ..*base
        };
        let dir = dataset_dir(root, id);
        for (split, n) in [(Split::Train, train), (Split::Test, test)] {
            let sub = dir.join(split.dir());
            fs::create_dir_all(&sub).with_context(|| format!("creating {}", sub.display()))?;
            for i in 0..n {
                let inst = generate_instance(&params, instance_seed(seed, id, split, i))?;
                inst.save(&sub.join(format!("instance-{i}.json")))?;
            }
        }
        let spec = DatasetSpec {
            id,
            seed,
            train,
            test,
            params,
        };
        fs::write(dir.join("dataset.json"), serde_json::to_string_pretty(&spec)?)?;
        specs.push(spec);
    }
    Ok(specs)
}

pub fn load_spec(root: &Path, id: usize) -> Result<DatasetSpec> {
    let path = dataset_dir(root, id).join("dataset.json");
    let text = fs::read_to_string(&path).with_context(|| format!("unknown dataset {id}: no {}", path.display()))?;
    Ok(serde_json::from_str(&text)?)
}

/// Instances of one split, in index order.
pub fn load_split(root: &Path, id: usize, split: Split) -> Result<Vec<Instance>> {
    let spec = load_spec(root, id)?;
    let n = match split {
        Split::Train => spec.train,
        Split::Test => spec.test,
    };
    let dir = dataset_dir(root, id).join(split.dir());
    (0..n)
        .map(|i| {
            let path = dir.join(format!("instance-{i}.json"));
            Instance::load(&path).with_context(|| format!("loading {}", path.display()))
        })
        .collect()
}

pub fn load_evaluation_set(root: &Path, id: usize, split: Split) -> Result<EvaluationSet> {
    Ok(EvaluationSet::new(load_split(root, id, split)?)?)
}

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use pgu_core::evolve::{run_evolution, Algorithm, AlgorithmConfig, RunReport};
use serde::{Deserialize, Serialize};

use crate::dataset::{load_evaluation_set, Split};

/// An algorithm plus, for the unified-distance variant, its phenotypic
/// weight. Written `GP`, `SGP_PC`, `PGU_SGP` or `PGU_SGP:<wp>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgoSpec {
    pub algorithm: Algorithm,
    pub wp: f64,
}

impl AlgoSpec {
    pub fn new(algorithm: Algorithm) -> Self {
        Self { algorithm, wp: 0.5 }
    }

    /// Directory and CSV label, e.g. `PGU_SGP-0.5-0.5`.
    pub fn label(&self) -> String {
        match self.algorithm {
            Algorithm::PguSgp => format!("PGU_SGP-{}-{}", self.wp, 1.0 - self.wp),
            other => other.name().to_string(),
        }
    }
}

impl FromStr for AlgoSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, wp) = match s.split_once(':') {
            Some((n, w)) => (n, Some(w.parse::<f64>().with_context(|| format!("bad weight in `{s}`"))?)),
            None => (s, None),
        };
        let algorithm: Algorithm = name.parse()?;
        if wp.is_some() && algorithm != Algorithm::PguSgp {
            bail!("only PGU_SGP takes a weight, got `{s}`");
        }
        let wp = wp.unwrap_or(0.5);
        if !(0.0..=1.0).contains(&wp) {
            bail!("weight in `{s}` must lie in [0, 1]");
        }
        Ok(Self { algorithm, wp })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub datasets: Vec<usize>,
    pub algorithms: Vec<AlgoSpec>,
    pub seeds: Vec<u64>,
    /// Shared settings; `algorithm`, `wp` and `wg` are overridden per entry.
    pub base: AlgorithmConfig,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            bail!("experiment name must be a plain directory name");
        }
        if self.datasets.is_empty() || self.algorithms.is_empty() || self.seeds.is_empty() {
            bail!("datasets, algorithms and seeds must all be non-empty");
        }
        if self.seeds.iter().collect::<HashSet<_>>().len() != self.seeds.len() {
            bail!("seeds must be distinct");
        }
        if self.datasets.iter().collect::<HashSet<_>>().len() != self.datasets.len() {
            bail!("datasets must be distinct");
        }
        let labels: HashSet<String> = self.algorithms.iter().map(AlgoSpec::label).collect();
        if labels.len() != self.algorithms.len() {
            bail!("algorithm entries must be distinct");
        }
        for a in &self.algorithms {
            self.config_for(a).validate()?;
        }
        Ok(())
    }

    pub fn config_for(&self, algo: &AlgoSpec) -> AlgorithmConfig {
        AlgorithmConfig {
            algorithm: algo.algorithm,
            wp: algo.wp,
            wg: 1.0 - algo.wp,
            ..self.base.clone()
        }
    }

    pub fn dir(&self, results: &Path) -> PathBuf {
        results.join(&self.name)
    }

    pub fn run_dir(&self, results: &Path, algo: &AlgoSpec, dataset: usize, seed: u64) -> PathBuf {
        self.dir(results)
            .join(algo.label())
            .join(format!("dataset-{dataset}"))
            .join(format!("seed-{seed}"))
    }

    /// Every (algorithm, dataset, seed) cell in a fixed order.
    pub fn runs(&self) -> impl Iterator<Item = (&AlgoSpec, usize, u64)> + '_ {
        self.datasets.iter().flat_map(move |&d| {
            self.seeds
                .iter()
                .flat_map(move |&s| self.algorithms.iter().map(move |a| (a, d, s)))
        })
    }

    pub fn load(results: &Path, name: &str) -> Result<Self> {
        let path = results.join(name).join("experiment.json");
        let text = fs::read_to_string(&path).with_context(|| format!("unknown experiment: no {}", path.display()))?;
        Ok(serde_json::from_str(&text)?)
    }
}

pub fn report_path(spec: &ExperimentSpec, results: &Path, algo: &AlgoSpec, dataset: usize, seed: u64) -> PathBuf {
    spec.run_dir(results, algo, dataset, seed).join("report.json")
}

/// Runs every cell of `spec` one at a time, so wall-clock figures are not
/// distorted by runs competing for cores. An existing experiment directory
/// is resumed only if its recorded spec is identical.
pub fn train(spec: &ExperimentSpec, data: &Path, results: &Path, mut log: impl FnMut(&str)) -> Result<Vec<PathBuf>> {
    spec.validate()?;
    let dir = spec.dir(results);
    let spec_path = dir.join("experiment.json");
    if spec_path.exists() {
        let existing = ExperimentSpec::load(results, &spec.name)?;
        if &existing != spec {
            bail!(
                "{} holds results of a different experiment spec; pick another name",
                dir.display()
            );
        }
    } else {
        fs::create_dir_all(&dir)?;
        fs::write(&spec_path, serde_json::to_string_pretty(spec)?)?;
    }

    let mut written = Vec::new();
    for &dataset in &spec.datasets {
        let set = load_evaluation_set(data, dataset, Split::Train)?;
        for (algo, d, seed) in spec.runs().filter(|r| r.1 == dataset) {
            let path = report_path(spec, results, algo, d, seed);
            if path.exists() {
                log(&format!("skip {} dataset-{d} seed-{seed}: report exists", algo.label()));
                written.push(path);
                continue;
            }
            let report: RunReport = run_evolution(&spec.config_for(algo), &set, seed)?;
            let parent = path.parent().expect("run dir");
            fs::create_dir_all(parent)?;
            // write-then-rename so an interrupted run leaves no half report
            let tmp = parent.join("report.json.tmp");
            report.save(&tmp)?;
            fs::rename(&tmp, &path)?;
            log(&format!(
                "{} dataset-{d} seed-{seed}: best {:.6} sims {} in {:.1}s",
                algo.label(),
                report.best.fitness,
                report.total_simulations,
                report.elapsed_seconds
            ));
            written.push(path);
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algo_specs() {
        let a: AlgoSpec = "PGU_SGP:1".parse().unwrap();
        assert_eq!(a.label(), "PGU_SGP-1-0");
        assert_eq!("pgu_sgp".parse::<AlgoSpec>().unwrap().label(), "PGU_SGP-0.5-0.5");
        assert_eq!("GP".parse::<AlgoSpec>().unwrap().label(), "GP");
        assert!("GP:0.3".parse::<AlgoSpec>().is_err());
        assert!("PGU_SGP:2".parse::<AlgoSpec>().is_err());
        assert!("NOPE".parse::<AlgoSpec>().is_err());
    }
}

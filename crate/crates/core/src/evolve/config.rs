use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::gp::MAX_DEPTH;
use crate::surrogate::{PguConfig, ARCHIVE_CAPACITY, DEFAULT_CANDIDATE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    /// Every individual simulated every generation.
    #[serde(rename = "GP")]
    Gp,
    /// Individuals grouped by identical phenotype; duplicates predicted from
    /// a phenotype-only nearest neighbour.
    #[serde(rename = "SGP_PC")]
    SgpPc,
    /// Clustering on the unified phenotypic/genotypic distance.
    #[serde(rename = "PGU_SGP")]
    PguSgp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Gp, Algorithm::SgpPc, Algorithm::PguSgp];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Gp => "GP",
            Algorithm::SgpPc => "SGP_PC",
            Algorithm::PguSgp => "PGU_SGP",
        }
    }

    pub fn uses_surrogate(self) -> bool {
        self != Algorithm::Gp
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "GP" => Ok(Algorithm::Gp),
            "SGP_PC" => Ok(Algorithm::SgpPc),
            "PGU_SGP" => Ok(Algorithm::PguSgp),
            _ => Err(param("algorithm", format!("unknown algorithm `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Budget {
    Generations(u32),
    WallClockMinutes(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AlgorithmConfig {
    pub algorithm: Algorithm,
    pub wp: f64,
    pub wg: f64,
    pub delta: f64,
    pub population_size: usize,
    pub budget: Budget,
    pub tournament_k: usize,
    pub elites: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub reproduction_rate: f64,
    pub pf: f64,
    pub pcs: usize,
    pub candidate_cap: usize,
    pub init_min_depth: usize,
    pub init_max_depth: usize,
    pub archive_capacity: usize,
    /// Use only the first `n` training instances.
    pub train_instances: Option<usize>,
    /// Incumbent snapshot interval for the time-vs-fitness curve.
    pub checkpoint_minutes: f64,
    /// Every this many generations, also simulate the predicted individuals
    /// to measure surrogate accuracy. Metrics only.
    pub probe_interval: Option<u32>,
}

impl Default for AlgorithmConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::PguSgp,
            wp: 0.5,
            wg: 0.5,
            delta: 0.1,
            population_size: 500,
            budget: Budget::Generations(50),
            tournament_k: 5,
            elites: 10,
            crossover_rate: 0.8,
            mutation_rate: 0.15,
            reproduction_rate: 0.05,
            pf: 1e-7,
            pcs: 40,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
            init_min_depth: 2,
            init_max_depth: 6,
            archive_capacity: ARCHIVE_CAPACITY,
            train_instances: None,
            checkpoint_minutes: 3.0,
            probe_interval: None,
        }
    }
}

impl AlgorithmConfig {
    pub fn for_algorithm(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.pgu().validate()?;
        if self.population_size < 2 {
            return Err(param("population_size", "must be at least 2"));
        }
        match self.budget {
            Budget::Generations(0) => return Err(param("budget", "at least one generation")),
            Budget::WallClockMinutes(m) if !(m > 0.0) => {
                return Err(param("budget", "wall-clock budget must be positive"))
            }
            _ => {}
        }
        if self.tournament_k == 0 {
            return Err(param("tournament_k", "must be at least 1"));
        }
        if self.elites >= self.population_size {
            return Err(param("elites", "must be below population_size"));
        }
        let rates = [self.crossover_rate, self.mutation_rate, self.reproduction_rate];
        if rates.iter().any(|r| !(0.0..=1.0).contains(r)) {
            return Err(param("crossover_rate", "rates must lie in [0, 1]"));
        }
        if (rates.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(param("reproduction_rate", "operator rates must sum to 1"));
        }
        if !(self.pf >= 0.0) {
            return Err(param("pf", "must be non-negative"));
        }
        if self.pcs == 0 {
            return Err(param("pcs", "must be at least 1"));
        }
        if self.candidate_cap < 2 {
            return Err(param("candidate_cap", "must be at least 2"));
        }
        if self.init_min_depth < 1 || self.init_max_depth < self.init_min_depth || self.init_max_depth > MAX_DEPTH {
            return Err(param("init_max_depth", format!("need 1 <= min <= max <= {MAX_DEPTH}")));
        }
        if self.archive_capacity == 0 {
            return Err(param("archive_capacity", "must be at least 1"));
        }
        if self.train_instances == Some(0) {
            return Err(param("train_instances", "must be at least 1"));
        }
        if !(self.checkpoint_minutes > 0.0) {
            return Err(param("checkpoint_minutes", "must be positive"));
        }
        if self.probe_interval == Some(0) {
            return Err(param("probe_interval", "must be at least 1"));
        }
        Ok(())
    }

    pub fn pgu(&self) -> PguConfig {
        PguConfig {
            wp: self.wp,
            wg: self.wg,
            delta: self.delta,
        }
    }
}

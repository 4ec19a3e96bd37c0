use serde::{Deserialize, Serialize};

use super::characterization::Characterization;
use super::distance::{pgu_unchecked, Normalizers, PguConfig};
use crate::error::{Error, Result};
use crate::gp::{Fitness, FitnessKind, Tree};

pub const ARCHIVE_CAPACITY: usize = 500;

/// A true-evaluated individual kept for 1-NN prediction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveSample {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<Tree>,
    #[serde(flatten)]
    pub charac: Characterization,
    pub fitness: f64,
    pub birth_gen: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub fitness: f64,
    pub distance: f64,
    /// Position of the matched sample in the archive.
    pub index: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UpdateStats {
    pub appended: usize,
    pub evicted_similar: usize,
    pub evicted_old: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurrogateArchive {
    capacity: usize,
    samples: Vec<ArchiveSample>,
}

impl Default for SurrogateArchive {
    fn default() -> Self {
        Self::new()
    }
}

impl SurrogateArchive {
    pub fn new() -> Self {
        Self::with_capacity(ARCHIVE_CAPACITY)
    }

    pub fn with_capacity(capacity: usize) -> Self {
        Self {
            capacity: capacity.max(1),
            samples: Vec::new(),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Samples in append order.
    pub fn samples(&self) -> &[ArchiveSample] {
        &self.samples
    }

    /// Appends true-evaluated samples one by one. Before each append the
    /// nearest existing sample is dropped if closer than `cfg.delta`; after
    /// it, the oldest generation is trimmed (FIFO) down to capacity.
    pub fn update(
        &mut self,
        new: impl IntoIterator<Item = (Characterization, Fitness, u32, Option<Tree>)>,
        cfg: &PguConfig,
        norm: &Normalizers,
    ) -> Result<UpdateStats> {
        let mut stats = UpdateStats::default();
        for (charac, fitness, birth_gen, tree) in new {
            if fitness.kind != FitnessKind::True {
                return Err(Error::Contract("archive accepts only true-evaluated fitness".into()));
            }
            if let Some(nn) = self.nearest(&charac, cfg, norm)? {
                if nn.distance < cfg.delta {
                    self.samples.remove(nn.index);
                    stats.evicted_similar += 1;
                }
            }
            self.samples.push(ArchiveSample {
                tree,
                charac,
                fitness: fitness.value,
                birth_gen,
            });
            stats.appended += 1;
            while self.samples.len() > self.capacity {
                let oldest = (0..self.samples.len())
                    .min_by_key(|&i| (self.samples[i].birth_gen, i))
                    .expect("non-empty");
                self.samples.remove(oldest);
                stats.evicted_old += 1;
            }
        }
        Ok(stats)
    }

    /// Fitness of the nearest sample under the unified distance; ties go to
    /// the earliest appended.
    pub fn predict(&self, charac: &Characterization, cfg: &PguConfig, norm: &Normalizers) -> Result<Prediction> {
        self.nearest(charac, cfg, norm)?.ok_or(Error::EmptyArchive)
    }

    fn nearest(&self, charac: &Characterization, cfg: &PguConfig, norm: &Normalizers) -> Result<Option<Prediction>> {
        let mut best: Option<Prediction> = None;
        for (index, s) in self.samples.iter().enumerate() {
            if s.charac.pc.0.len() != charac.pc.0.len() {
                return Err(Error::Contract(format!(
                    "phenotypic vectors differ in length ({} vs {})",
                    s.charac.pc.0.len(),
                    charac.pc.0.len()
                )));
            }
            let distance = pgu_unchecked(&s.charac, charac, cfg, norm);
            if best.is_none_or(|b| distance < b.distance) {
                best = Some(Prediction {
                    fitness: s.fitness,
                    distance,
                    index,
                });
            }
        }
        Ok(best)
    }
}

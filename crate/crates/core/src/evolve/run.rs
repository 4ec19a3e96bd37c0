use std::collections::HashMap;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{Algorithm, AlgorithmConfig, Budget};
use super::fitness::{evaluate_trees, EvaluationSet};
use crate::error::{Error, Result};
use crate::gp::{crossover, init_population, mutate, tournament_select, Fitness, Individual, Tree};
use crate::par;
use crate::sim::ReferenceRule;
use crate::stats::pearson;
use crate::surrogate::{
    characterize, cluster_complete_linkage, pgu_matrix_with, sample_decision_situations, select_representative,
    Characterization, DecisionSituation, Normalizers, PguConfig, SurrogateArchive,
};

/// How the population of a generation was bred.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorCounts {
    pub elites: usize,
    pub crossover: usize,
    /// Crossover offspring that fell back to copying a parent.
    pub crossover_copied: usize,
    pub mutation: usize,
    pub reproduction: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub size: usize,
    pub rho: Option<f64>,
    pub simulations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: u32,
    pub best_true_fitness: Option<f64>,
    pub best_so_far: Option<f64>,
    pub mean_fitness: f64,
    pub clusters: usize,
    pub true_evals: usize,
    pub predicted: usize,
    pub reused: usize,
    pub sim_count: usize,
    pub archive_size: usize,
    pub probe: Option<Probe>,
    pub offspring: OperatorCounts,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestIndividual {
    pub tree: Tree,
    pub fitness: f64,
    pub size: usize,
    pub generation: u32,
}

/// Incumbent at a wall-clock boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub minutes: f64,
    pub best_fitness: Option<f64>,
    pub tree: Option<Tree>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub config: AlgorithmConfig,
    pub train_instances: usize,
    /// Reference-rule simulations: objective precomputation plus decision
    /// situation sampling.
    pub reference_simulations: usize,
    /// Reference simulations plus every true evaluation.
    pub total_simulations: usize,
    /// Metrics-only simulations, not part of the total.
    pub probe_simulations: usize,
    pub generations: Vec<GenerationStats>,
    pub best: BestIndividual,
    pub checkpoints: Vec<Checkpoint>,
    pub elapsed_seconds: f64,
}

impl RunReport {
    /// Copy with every wall-clock dependent field cleared.
    pub fn without_timing(&self) -> RunReport {
        let mut r = self.clone();
        r.elapsed_seconds = 0.0;
        r.checkpoints.clear();
        for g in &mut r.generations {
            g.elapsed_seconds = 0.0;
        }
        r
    }

    /// Mean ρ over probes that produced one.
    pub fn mean_probe_rho(&self) -> Option<f64> {
        let rhos: Vec<f64> = self.generations.iter().filter_map(|g| g.probe.and_then(|p| p.rho)).collect();
        (!rhos.is_empty()).then(|| rhos.iter().sum::<f64>() / rhos.len() as f64)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Hook points for callers that want to inspect a run as it happens.
#[derive(Debug)]
pub enum RunEvent<'a> {
    /// Fitness assigned to every individual of `generation`.
    Evaluated {
        generation: u32,
        population: &'a [Individual],
        archive: &'a SurrogateArchive,
        stats: &'a GenerationStats,
    },
    /// Next population bred; its first `elites` members are elite copies.
    Bred {
        generation: u32,
        population: &'a [Individual],
        elites: usize,
    },
}

pub fn run_evolution(cfg: &AlgorithmConfig, train: &EvaluationSet, seed: u64) -> Result<RunReport> {
    run_evolution_with(cfg, train, seed, |_| {})
}

pub fn run_evolution_with(
    cfg: &AlgorithmConfig,
    train: &EvaluationSet,
    seed: u64,
    mut observer: impl FnMut(RunEvent<'_>),
) -> Result<RunReport> {
    cfg.validate()?;
    let start = Instant::now();
    let train = match cfg.train_instances {
        Some(n) => train.truncated(n),
        None => train.clone(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let situation_seed: u64 = rng.random();
    let mut reference_simulations = train.len();
    let situations = if cfg.algorithm.uses_surrogate() {
        reference_simulations += train.len();
        sample_decision_situations(
            train.instances(),
            &ReferenceRule::default(),
            cfg.pcs,
            cfg.candidate_cap,
            situation_seed,
        )?
    } else {
        Vec::new()
    };

    let mut state = RunState {
        cfg,
        train: &train,
        situations,
        archive: SurrogateArchive::with_capacity(cfg.archive_capacity),
        incumbent: None,
    };
    let mut pop = init_population(&mut rng, cfg.population_size, cfg.init_min_depth, cfg.init_max_depth)?;
    let mut generations = Vec::new();
    let mut checkpoints = Vec::new();
    let mut next_checkpoint = cfg.checkpoint_minutes;
    let mut offspring = OperatorCounts::default();
    let mut probe_simulations = 0;

    for generation in 0u32.. {
        let mut stats = state.evaluate(&mut pop, generation)?;
        stats.offspring = offspring;
        let elapsed = start.elapsed().as_secs_f64();
        stats.elapsed_seconds = elapsed;
        // boundaries passed while this generation ran saw the previous incumbent
        while next_checkpoint * 60.0 <= elapsed {
            checkpoints.push(Checkpoint {
                minutes: next_checkpoint,
                best_fitness: state.incumbent.as_ref().map(|b| b.fitness),
                tree: state.incumbent.as_ref().map(|b| b.tree.clone()),
            });
            next_checkpoint += cfg.checkpoint_minutes;
        }
        state.update_incumbent(&pop, generation);
        stats.best_so_far = state.incumbent.as_ref().map(|b| b.fitness);
        probe_simulations += stats.probe.map_or(0, |p| p.simulations);
        observer(RunEvent::Evaluated {
            generation,
            population: &pop,
            archive: &state.archive,
            stats: &stats,
        });
        generations.push(stats);

        let done = match cfg.budget {
            Budget::Generations(g) => generation + 1 >= g,
            Budget::WallClockMinutes(m) => elapsed >= m * 60.0,
        };
        if done {
            break;
        }
        let (next, counts) = breed(cfg, &mut rng, &pop, generation + 1)?;
        observer(RunEvent::Bred {
            generation: generation + 1,
            population: &next,
            elites: counts.elites,
        });
        pop = next;
        offspring = counts;
    }

    let best = state
        .incumbent
        .ok_or_else(|| Error::Contract("run finished without any true evaluation".into()))?;
    let total_simulations = reference_simulations + generations.iter().map(|g| g.sim_count).sum::<usize>();
    Ok(RunReport {
        algorithm: cfg.algorithm,
        seed,
        config: cfg.clone(),
        train_instances: train.len(),
        reference_simulations,
        total_simulations,
        probe_simulations,
        generations,
        best,
        checkpoints,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

struct RunState<'a> {
    cfg: &'a AlgorithmConfig,
    train: &'a EvaluationSet,
    situations: Vec<DecisionSituation>,
    archive: SurrogateArchive,
    incumbent: Option<BestIndividual>,
}

impl RunState<'_> {
    fn evaluate(&mut self, pop: &mut [Individual], generation: u32) -> Result<GenerationStats> {
        let m = self.train.len();
        let mut stats = GenerationStats {
            generation,
            best_true_fitness: None,
            best_so_far: None,
            mean_fitness: 0.0,
            clusters: 0,
            true_evals: 0,
            predicted: 0,
            reused: 0,
            sim_count: 0,
            archive_size: 0,
            probe: None,
            offspring: OperatorCounts::default(),
            elapsed_seconds: 0.0,
        };
        match self.cfg.algorithm {
            Algorithm::Gp => {
                let all: Vec<usize> = (0..pop.len()).collect();
                self.true_evaluate(pop, &all)?;
                stats.clusters = pop.len();
                stats.true_evals = pop.len();
            }
            Algorithm::SgpPc | Algorithm::PguSgp => self.surrogate_step(pop, generation, &mut stats)?,
        }
        stats.sim_count = stats.true_evals * m;
        stats.archive_size = self.archive.len();
        let values: Vec<f64> = pop.iter().filter_map(|i| i.fitness.map(|f| f.value)).collect();
        stats.mean_fitness = values.iter().sum::<f64>() / values.len().max(1) as f64;
        stats.best_true_fitness = pop
            .iter()
            .filter(|i| i.has_true_fitness())
            .filter_map(|i| i.fitness.map(|f| f.value))
            .max_by(f64::total_cmp);
        Ok(stats)
    }

    fn true_evaluate(&self, pop: &mut [Individual], which: &[usize]) -> Result<()> {
        let trees: Vec<&Tree> = which.iter().map(|&i| &pop[i].tree).collect();
        let values = evaluate_trees(&trees, self.train, self.cfg.pf)?;
        for (&i, v) in which.iter().zip(values) {
            pop[i].fitness = Some(Fitness::true_value(v));
        }
        Ok(())
    }

    fn surrogate_step(&mut self, pop: &mut [Individual], generation: u32, stats: &mut GenerationStats) -> Result<()> {
        let situations = &self.situations;
        let chars: Vec<Characterization> = par::map_slice(pop, |ind| characterize(&ind.tree, situations));
        let (pgu_cfg, norm, representatives, clusters) = match self.cfg.algorithm {
            Algorithm::PguSgp => {
                let cfg = self.cfg.pgu();
                let norm = self.normalizers(&chars)?;
                let refs: Vec<&Characterization> = chars.iter().collect();
                let matrix = pgu_matrix_with(&refs, &cfg, &norm);
                let clusters = cluster_complete_linkage(&matrix, cfg.delta);
                let sizes: Vec<usize> = pop.iter().map(Individual::size).collect();
                let reps: Vec<usize> = clusters.iter().map(|c| select_representative(c, &matrix, &sizes)).collect();
                (cfg, norm, reps, clusters.len())
            }
            _ => {
                // phenotype-only, eviction only on an exact match
                let cfg = PguConfig {
                    wp: 1.0,
                    wg: 0.0,
                    delta: f64::MIN_POSITIVE,
                };
                let norm = self.normalizers(&chars)?;
                let reps = phenotype_groups(pop, &chars);
                let n = reps.len();
                (cfg, norm, reps, n)
            }
        };
        stats.clusters = clusters;

        self.true_evaluate(pop, &representatives)?;
        stats.true_evals = representatives.len();
        let samples: Vec<_> = representatives
            .iter()
            .map(|&i| {
                (
                    chars[i].clone(),
                    pop[i].fitness.expect("just evaluated"),
                    generation,
                    Some(pop[i].tree.clone()),
                )
            })
            .collect();
        self.archive.update(samples, &pgu_cfg, &norm)?;

        let mut is_rep = vec![false; pop.len()];
        for &i in &representatives {
            is_rep[i] = true;
        }
        let mut predicted = Vec::new();
        let mut predictions = Vec::new();
        for i in 0..pop.len() {
            if is_rep[i] {
                continue;
            }
            if pop[i].has_true_fitness() {
                stats.reused += 1;
                continue;
            }
            let p = self.archive.predict(&chars[i], &pgu_cfg, &norm)?;
            pop[i].fitness = Some(Fitness::estimated(p.fitness));
            predicted.push(i);
            predictions.push(p.fitness);
        }
        stats.predicted = predicted.len();

        if let Some(k) = self.cfg.probe_interval {
            if generation % k == 0 {
                stats.probe = Some(self.probe(pop, &predicted, &predictions)?);
            }
        }
        Ok(())
    }

    fn normalizers(&self, chars: &[Characterization]) -> Result<Normalizers> {
        let all: Vec<&Characterization> = chars
            .iter()
            .chain(self.archive.samples().iter().map(|s| &s.charac))
            .collect();
        Normalizers::over(&all)
    }

    // Simulates predicted individuals without touching the population.
    fn probe(&self, pop: &[Individual], predicted: &[usize], predictions: &[f64]) -> Result<Probe> {
        if predicted.len() < 2 {
            return Ok(Probe {
                size: predicted.len(),
                rho: None,
                simulations: 0,
            });
        }
        let trees: Vec<&Tree> = predicted.iter().map(|&i| &pop[i].tree).collect();
        let truth = evaluate_trees(&trees, self.train, self.cfg.pf)?;
        let rho = match pearson(predictions, &truth) {
            Ok(r) => Some(r),
            Err(Error::UndefinedCorrelation(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(Probe {
            size: predicted.len(),
            rho,
            simulations: predicted.len() * self.train.len(),
        })
    }

    fn update_incumbent(&mut self, pop: &[Individual], generation: u32) {
        for ind in pop.iter().filter(|i| i.has_true_fitness()) {
            let fitness = ind.fitness.expect("true fitness").value;
            let better = match &self.incumbent {
                None => true,
                Some(b) => fitness > b.fitness || (fitness == b.fitness && ind.size() < b.size),
            };
            if better {
                self.incumbent = Some(BestIndividual {
                    tree: ind.tree.clone(),
                    fitness,
                    size: ind.size(),
                    generation,
                });
            }
        }
    }
}

/// One representative per distinct phenotype: the smallest tree, then the
/// lowest index. Returned in order of first appearance.
fn phenotype_groups(pop: &[Individual], chars: &[Characterization]) -> Vec<usize> {
    let mut slot: HashMap<&[u32], usize> = HashMap::new();
    let mut reps: Vec<usize> = Vec::new();
    for (i, c) in chars.iter().enumerate() {
        match slot.get(c.pc.0.as_slice()) {
            Some(&g) => {
                if pop[i].size() < pop[reps[g]].size() {
                    reps[g] = i;
                }
            }
            None => {
                slot.insert(&c.pc.0, reps.len());
                reps.push(i);
            }
        }
    }
    reps
}

/// Elites first (true-evaluated only), then offspring from tournament
/// selection. Crossover yields pairs; the second child fills the next
/// crossover slot so per-offspring operator rates hold.
fn breed<R: Rng + ?Sized>(
    cfg: &AlgorithmConfig,
    rng: &mut R,
    pop: &[Individual],
    birth_gen: u32,
) -> Result<(Vec<Individual>, OperatorCounts)> {
    let mut counts = OperatorCounts::default();
    let mut elite_idx: Vec<usize> = (0..pop.len()).filter(|&i| pop[i].has_true_fitness()).collect();
    elite_idx.sort_by(|&a, &b| {
        let (fa, fb) = (pop[a].fitness.unwrap().value, pop[b].fitness.unwrap().value);
        fb.total_cmp(&fa).then(pop[a].size().cmp(&pop[b].size())).then(a.cmp(&b))
    });
    let mut next: Vec<Individual> = elite_idx.iter().take(cfg.elites).map(|&i| pop[i].clone()).collect();
    counts.elites = next.len();

    let mut pending: Option<(Individual, bool)> = None;
    while next.len() < pop.len() {
        let r: f64 = rng.random();
        if r < cfg.crossover_rate {
            let (child, copied) = match pending.take() {
                Some(c) => c,
                None => {
                    let a = tournament_select(rng, pop, cfg.tournament_k)?;
                    let b = tournament_select(rng, pop, cfg.tournament_k)?;
                    let out = crossover(rng, &pop[a].tree, &pop[b].tree);
                    let (first, second) = if out.copied {
                        (pop[a].clone(), pop[b].clone())
                    } else {
                        (Individual::new(out.first, birth_gen), Individual::new(out.second, birth_gen))
                    };
                    pending = Some((second, out.copied));
                    (first, out.copied)
                }
            };
            counts.crossover += 1;
            counts.crossover_copied += usize::from(copied);
            next.push(child);
        } else if r < cfg.crossover_rate + cfg.mutation_rate {
            let a = tournament_select(rng, pop, cfg.tournament_k)?;
            next.push(Individual::new(mutate(rng, &pop[a].tree), birth_gen));
            counts.mutation += 1;
        } else {
            let a = tournament_select(rng, pop, cfg.tournament_k)?;
            next.push(pop[a].clone());
            counts.reproduction += 1;
        }
    }
    Ok((next, counts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gp::Primitive;
    use crate::surrogate::{GenoVector, PhenoVector};

    #[test]
    fn phenotype_groups_pick_smallest() {
        let big = Individual::new(Tree::parse_sexpr("(+ TT CTN)").unwrap(), 0);
        let small = Individual::new(Tree::terminal(Primitive::TravelTime), 0);
        let pop = vec![big.clone(), small, big];
        let ch = |v: u32| Characterization {
            pc: PhenoVector(vec![v]),
            gc: GenoVector([0.0; 22]),
        };
        let chars = vec![ch(1), ch(1), ch(2)];
        assert_eq!(phenotype_groups(&pop, &chars), vec![1, 2]);
    }
}

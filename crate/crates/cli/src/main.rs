use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use pgu_cli::dataset::load_evaluation_set;
use pgu_cli::evaluate::{reference_fitness, tree_fitness};
use pgu_cli::{analyze, curve, generate_datasets, test_experiment, train, AlgoSpec, ExperimentSpec, Split};
use pgu_core::evolve::{AlgorithmConfig, Budget};
use pgu_core::gp::Tree;
use pgu_core::sim::GeneratorParams;

#[derive(Parser)]
#[command(name = "pgu-sgp", version, about = "Surrogate-assisted GP for truck dispatching heuristics")]
struct Cli {
    /// Worker threads for simulation fan-out.
    #[arg(long, global = true, env = "PGU_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate datasets of train/test instances.
    Generate {
        #[arg(long, default_value = "data")]
        data: PathBuf,
        #[arg(long, default_value_t = 4)]
        datasets: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        train: usize,
        #[arg(long, default_value_t = 50)]
        test: usize,
        #[arg(long, default_value_t = 60)]
        tasks: usize,
        #[arg(long, default_value_t = 3)]
        qcs: usize,
        #[arg(long, default_value_t = 6)]
        yard_blocks: usize,
        #[arg(long, default_value_t = 2)]
        gates: usize,
        #[arg(long, default_value_t = 0.4)]
        forty_foot_share: f64,
    },
    /// Run every algorithm x dataset x seed and write run reports.
    Train {
        #[arg(long, default_value = "data")]
        data: PathBuf,
        #[arg(long, default_value = "results")]
        results: PathBuf,
        #[arg(long)]
        exp: String,
        /// GP, SGP_PC, PGU_SGP or PGU_SGP:<wp>.
        #[arg(long, value_delimiter = ',', default_value = "GP,SGP_PC,PGU_SGP")]
        algorithms: Vec<AlgoSpec>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        datasets: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4")]
        seeds: Vec<u64>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Apply trained heuristics (or a given rule) to test instances.
    Test {
        #[arg(long, default_value = "data")]
        data: PathBuf,
        #[arg(long, default_value = "results")]
        results: PathBuf,
        /// Experiment whose runs to test.
        #[arg(long, conflicts_with_all = ["expr", "reference"])]
        exp: Option<String>,
        /// Evaluate this S-expression instead.
        #[arg(long)]
        expr: Option<String>,
        /// Evaluate the reference rule instead.
        #[arg(long)]
        reference: bool,
        #[arg(long, default_value_t = 0)]
        dataset: usize,
        #[arg(long, default_value_t = 1e-7)]
        pf: f64,
    },
    /// Summarize an experiment into CSV tables.
    Analyze {
        #[arg(long, default_value = "results")]
        results: PathBuf,
        #[arg(long)]
        exp: String,
    },
    /// Time-vs-test-fitness CSV for one dataset.
    Curve {
        #[arg(long, default_value = "results")]
        results: PathBuf,
        #[arg(long)]
        exp: String,
        #[arg(long, default_value_t = 0)]
        dataset: usize,
    },
}

#[derive(Args)]
struct ConfigArgs {
    #[arg(long, default_value_t = 500)]
    population: usize,
    /// Generation budget; ignored when --minutes is given.
    #[arg(long, default_value_t = 50)]
    generations: u32,
    /// Wall-clock budget in minutes.
    #[arg(long)]
    minutes: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 5)]
    tournament_k: usize,
    #[arg(long, default_value_t = 10)]
    elites: usize,
    #[arg(long, default_value_t = 0.8)]
    crossover_rate: f64,
    #[arg(long, default_value_t = 0.15)]
    mutation_rate: f64,
    #[arg(long, default_value_t = 0.05)]
    reproduction_rate: f64,
    #[arg(long, default_value_t = 1e-7)]
    pf: f64,
    #[arg(long, default_value_t = 40)]
    pcs: usize,
    #[arg(long, default_value_t = 10)]
    candidate_cap: usize,
    #[arg(long, default_value_t = 2)]
    init_min_depth: usize,
    #[arg(long, default_value_t = 6)]
    init_max_depth: usize,
    #[arg(long, default_value_t = 500)]
    archive_capacity: usize,
    /// Train on only the first N instances.
    #[arg(long)]
    train_instances: Option<usize>,
    #[arg(long, default_value_t = 3.0)]
    checkpoint_minutes: f64,
    /// Measure surrogate accuracy every N generations.
    #[arg(long)]
    probe_interval: Option<u32>,
}

impl ConfigArgs {
    fn into_config(self) -> AlgorithmConfig {
        AlgorithmConfig {
            population_size: self.population,
            budget: match self.minutes {
                Some(m) => Budget::WallClockMinutes(m),
                None => Budget::Generations(self.generations),
            },
            delta: self.delta,
            tournament_k: self.tournament_k,
            elites: self.elites,
            crossover_rate: self.crossover_rate,
            mutation_rate: self.mutation_rate,
            reproduction_rate: self.reproduction_rate,
            pf: self.pf,
            pcs: self.pcs,
            candidate_cap: self.candidate_cap,
            init_min_depth: self.init_min_depth,
            init_max_depth: self.init_max_depth,
            archive_capacity: self.archive_capacity,
            train_instances: self.train_instances,
            checkpoint_minutes: self.checkpoint_minutes,
            probe_interval: self.probe_interval,
            ..AlgorithmConfig::default()
        }
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        pgu_core::par::configure_global_workers(w);
    }
    match cli.command {
        Command::Generate {
            data,
            datasets,
            seed,
            train,
            test,
            tasks,
            qcs,
            yard_blocks,
            gates,
            forty_foot_share,
        } => {
            let base = GeneratorParams {
                num_tasks: tasks,
                num_qcs: qcs,
                yard_blocks,
                gates,
                forty_foot_share,
                ..GeneratorParams::default()
            };
            for s in generate_datasets(&data, datasets, seed, train, test, &base)? {
                println!(
                    "dataset-{}: loading ratio {}, {} trucks/QC, {} train + {} test",
                    s.id, s.params.loading_ratio, s.params.trucks_per_qc, s.train, s.test
                );
            }
        }
        Command::Train {
            data,
            results,
            exp,
            algorithms,
            datasets,
            seeds,
            config,
        } => {
            let spec = ExperimentSpec {
                name: exp,
                datasets,
                algorithms,
                seeds,
                base: config.into_config(),
            };
            let written = train(&spec, &data, &results, |m| eprintln!("{m}"))?;
            println!("{} run reports under {}", written.len(), spec.dir(&results).display());
        }
        Command::Test {
            data,
            results,
            exp,
            expr,
            reference,
            dataset,
            pf,
        } => {
            if let Some(exp) = exp {
                let spec = ExperimentSpec::load(&results, &exp)?;
                let written = test_experiment(&spec, &data, &results)?;
                println!("tested {} runs of {exp}", written.len());
            } else {
                let set = load_evaluation_set(&data, dataset, Split::Test)?;
                let f = match (expr, reference) {
                    (Some(e), false) => tree_fitness(&e.parse::<Tree>()?, &set, pf)?,
                    (None, true) => reference_fitness(&set, pf)?,
                    _ => bail!("give exactly one of --exp, --expr or --reference"),
                };
                println!("{f}");
            }
        }
        Command::Analyze { results, exp } => {
            for p in analyze(&results, &exp)? {
                println!("{}", p.display());
            }
        }
        Command::Curve { results, exp, dataset } => {
            println!("{}", curve(&results, &exp, dataset)?.display());
        }
    }
    Ok(())
}

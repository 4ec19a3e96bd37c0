//! Acceptance suite. Runs every criterion in sequence (timing comparisons
//! must not share the machine with other tests) and prints one line each.
//! Set `PGU_ACCEPTANCE_STRICT=1` to exit non-zero when any criterion fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use pgu_cli::evaluate::test_path;
use pgu_cli::experiment::report_path;
use pgu_cli::{generate_datasets, test_experiment, train, AlgoSpec, ExperimentSpec, TestRecord};
use pgu_core::evolve::{
    evaluate_trees, run_evolution, run_evolution_with, Algorithm, AlgorithmConfig, Budget, EvaluationSet, RunEvent,
    RunReport,
};
use pgu_core::gp::{init_population, mutate, ramped_half_and_half, Primitive, Tree};
use pgu_core::sim::{generate_instance, FeatureVector, GeneratorParams, ReferenceRule};
use pgu_core::stats::{midranks, wilcoxon_rank_sum};
use pgu_core::surrogate::{
    characterize, cluster_complete_linkage, compute_gc, compute_pc, pd, pgu_matrix, sample_decision_situations,
    Characterization, DecisionSituation, DistanceMatrix, GenoVector, Normalizers, PguConfig, PhenoVector,
    SurrogateArchive,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn desk_params() -> GeneratorParams {
    GeneratorParams::default()
}

fn desk_config(algorithm: Algorithm) -> AlgorithmConfig {
    AlgorithmConfig {
        population_size: 50,
        budget: Budget::Generations(10),
        ..AlgorithmConfig::for_algorithm(algorithm)
    }
}

fn train_set(n: usize, seed: u64) -> EvaluationSet {
    let p = desk_params();
    EvaluationSet::new((0..n as u64).map(|i| generate_instance(&p, seed + i).unwrap()).collect()).unwrap()
}

// ---------------------------------------------------------------- 1

fn worked_examples() -> Outcome {
    let marker = |i: usize| FeatureVector {
        tt: i as f64,
        ..Default::default()
    };
    let situation = |refs: [f64; 3], base: usize| {
        DecisionSituation::new((base..base + 3).map(marker).collect(), refs.to_vec()).unwrap()
    };
    let situations = [
        situation([256.0, 200101.0, 310.0], 0),
        situation([262.0, 90.0, 256.0], 3),
        situation([131.0, 384.0, 200580.0], 6),
    ];
    let specific = [178.9, 230.4, 184.7, 121.0, 168.0, 182.6, 141.0, 128.5, 187.7];
    let rule = |f: &FeatureVector| specific[f.tt as usize];
    let pc = compute_pc(&rule, &situations);
    check(pc.0 == vec![1, 3, 2], format!("PC {:?}", pc.0))?;

    let ind = PhenoVector(vec![1, 2, 3, 2]);
    let samples = [
        (vec![2, 1, 1, 4], -0.296, 3.162),
        (vec![1, 3, 1, 2], 0.483, 2.236),
        (vec![4, 3, 2, 3], 0.124, 3.464),
    ];
    for (pcs, _, want) in &samples {
        let d = pd(&ind, &PhenoVector(pcs.clone())).unwrap();
        check((d - want).abs() < 1e-3, format!("PD {d} vs {want}"))?;
    }
    let cfg = PguConfig {
        wp: 1.0,
        wg: 0.0,
        delta: 0.0,
    };
    let ch = |v: &[u32]| Characterization {
        pc: PhenoVector(v.to_vec()),
        gc: GenoVector([0.0; 22]),
    };
    let mut archive = SurrogateArchive::new();
    archive
        .update(
            samples
                .iter()
                .map(|(p, f, _)| (ch(p), pgu_core::gp::Fitness::true_value(*f), 0, None)),
            &cfg,
            &Normalizers::IDENTITY,
        )
        .unwrap();
    let p = archive.predict(&ch(&ind.0), &cfg, &Normalizers::IDENTITY).unwrap();
    check(
        p.index == 1 && p.fitness == 0.483 && (p.distance - 2.236).abs() < 1e-3,
        format!("prediction {p:?}"),
    )?;

    let tree: Tree = "(+ (max ALT AUT) (/ RTN CTN))".parse().unwrap();
    let gc = compute_gc(&tree);
    let alt = gc.0[Primitive::AvgLoadTime.index()];
    check((alt - 1.0 / 7.0).abs() < 1e-6, format!("GC ALT {alt}"))?;
    check((gc.0.iter().sum::<f64>() - 1.0).abs() < 1e-6, "GC sum")?;
    Ok(format!(
        "PC {:?}, predict S2 -> {} at {:.3}, GC ALT {:.3}",
        pc.0, p.fitness, p.distance, alt
    ))
}

// ---------------------------------------------------------------- 2

fn naive_complete_linkage(m: &DistanceMatrix, delta: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = (0..m.len()).map(|i| vec![i]).collect();
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let mut link = 0.0f64;
                for &i in &clusters[a] {
                    for &j in &clusters[b] {
                        link = link.max(m.get(i, j));
                    }
                }
                // clusters stay ordered by smallest member, so (a, b) order is
                // lexicographic
                if best.is_none_or(|(d, _, _)| link < d) {
                    best = Some((link, a, b));
                }
            }
        }
        match best {
            Some((d, a, b)) if d < delta => {
                let moved = clusters.remove(b);
                clusters[a].extend(moved);
                clusters[a].sort_unstable();
            }
            _ => break,
        }
    }
    clusters
}

fn enumerate_rank_sum_p(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let doubled: Vec<i64> = ranks.iter().map(|r| (r * 2.0).round() as i64).collect();
    let observed: i64 = doubled[..a.len()].iter().sum();
    let n = pooled.len();
    let (mut le, mut ge, mut total) = (0u64, 0u64, 0u64);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != a.len() {
            continue;
        }
        let s: i64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| doubled[i]).sum();
        total += 1;
        le += u64::from(s <= observed);
        ge += u64::from(s >= observed);
    }
    (2.0 * le.min(ge) as f64 / total as f64).min(1.0)
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for case in 0..1000 {
        let n = rng.random_range(1..=12);
        // coarse integer distances force many ties
        let coarse = rng.random_bool(0.5);
        let vals: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        if coarse {
                            rng.random_range(0..6) as f64 / 5.0
                        } else {
                            rng.random::<f64>()
                        }
                    })
                    .collect()
            })
            .collect();
        let m = DistanceMatrix::from_fn(n, |i, j| vals[i.min(j)][i.max(j)]);
        let delta = rng.random_range(0.0..1.2);
        let got = cluster_complete_linkage(&m, delta);
        let want = naive_complete_linkage(&m, delta);
        check(got == want, format!("clustering case {case}: {got:?} vs {want:?}"))?;
    }

    for case in 0..1000 {
        let len = rng.random_range(1..=6);
        let count = rng.random_range(1..=30);
        let random_char = |rng: &mut ChaCha8Rng| {
            let mut gc = [0.0; 22];
            for _ in 0..rng.random_range(1..8) {
                gc[rng.random_range(0..22)] += 1.0;
            }
            let s: f64 = gc.iter().sum();
            Characterization {
                pc: PhenoVector((0..len).map(|_| rng.random_range(1..=4)).collect()),
                gc: GenoVector(gc.map(|v| v / s)),
            }
        };
        let samples: Vec<(Characterization, f64)> =
            (0..count).map(|_| (random_char(&mut rng), rng.random::<f64>())).collect();
        let query = random_char(&mut rng);
        let wp = [0.0, 0.5, 1.0, rng.random::<f64>()][rng.random_range(0..4)];
        let cfg = PguConfig {
            wp,
            wg: 1.0 - wp,
            delta: 0.0,
        };
        let mut all: Vec<&Characterization> = samples.iter().map(|s| &s.0).collect();
        all.push(&query);
        let norm = Normalizers::over(&all).unwrap();
        let mut archive = SurrogateArchive::new();
        archive
            .update(
                samples
                    .iter()
                    .map(|(c, f)| (c.clone(), pgu_core::gp::Fitness::true_value(*f), 0, None)),
                &cfg,
                &norm,
            )
            .unwrap();
        let got = archive.predict(&query, &cfg, &norm).unwrap();
        let euclid = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
        let scaled = |d: f64, m: f64| if m > 0.0 { d / m } else { 0.0 };
        let mut best = (f64::INFINITY, usize::MAX);
        for (i, (c, _)) in samples.iter().enumerate() {
            let p: Vec<f64> = c.pc.0.iter().map(|&v| v as f64).collect();
            let q: Vec<f64> = query.pc.0.iter().map(|&v| v as f64).collect();
            let d = wp * scaled(euclid(&p, &q), norm.max_pd) + (1.0 - wp) * scaled(euclid(&c.gc.0, &query.gc.0), norm.max_gd);
            if d < best.0 {
                best = (d, i);
            }
        }
        check(
            got.index == best.1 && got.fitness == samples[best.1].1,
            format!("predict case {case}: {} vs {}", got.index, best.1),
        )?;
    }

    let mut worst = 0.0f64;
    for case in 0..300 {
        let n = rng.random_range(3..=8);
        let m = rng.random_range(3..=8);
        let draw = |rng: &mut ChaCha8Rng, k: usize| -> Vec<f64> { (0..k).map(|_| rng.random_range(0..7) as f64).collect() };
        let a = draw(&mut rng, n);
        let b = draw(&mut rng, m);
        let got = wilcoxon_rank_sum(&a, &b).unwrap().p_value;
        let want = enumerate_rank_sum_p(&a, &b);
        worst = worst.max((got - want).abs());
        check((got - want).abs() < 1e-9, format!("wilcoxon case {case}: {got} vs {want}"))?;
    }
    Ok(format!(
        "1000 clusterings and 1000 predictions identical to naive scans; 300 rank-sum p-values within {worst:.1e}"
    ))
}

// ---------------------------------------------------------------- 3

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut tree_count = 0;
    while tree_count < 100_000 {
        let min = rng.random_range(1..=6);
        let max = rng.random_range(min..=8);
        let batch = ramped_half_and_half(&mut rng, 500, min, max).unwrap();
        for t in batch {
            let t = if rng.random_bool(0.5) { mutate(&mut rng, &t) } else { t };
            let gc = compute_gc(&t);
            check(
                gc.0.iter().all(|&v| (0.0..=1.0).contains(&v)) && (gc.0.iter().sum::<f64>() - 1.0).abs() < 1e-9,
                format!("GC off the simplex for {t}"),
            )?;
            tree_count += 1;
        }
    }

    let set = train_set(4, 300);
    let situations = sample_decision_situations(set.instances(), &ReferenceRule::default(), 40, 10, 9).unwrap();
    let mut partitions = 0;
    for round in 0..20 {
        let pop = init_population(&mut rng, 60, 2, 6).unwrap();
        let chars: Vec<Characterization> = pop.iter().map(|i| characterize(&i.tree, &situations)).collect();
        let refs: Vec<&Characterization> = chars.iter().collect();
        let wp = round as f64 / 19.0;
        let cfg = PguConfig {
            wp,
            wg: 1.0 - wp,
            delta: 0.1,
        };
        let m = pgu_matrix(&refs, &cfg).unwrap();
        for i in 0..m.len() {
            check(m.get(i, i) == 0.0, "non-zero diagonal")?;
            for j in 0..m.len() {
                let v = m.get(i, j);
                check(v == m.get(j, i) && (0.0..=1.0 + 1e-12).contains(&v), format!("entry ({i},{j}) = {v}"))?;
            }
        }
        for delta in [0.0, 0.05, 0.1, 0.2, 0.4] {
            let clusters = cluster_complete_linkage(&m, delta);
            let mut seen: Vec<usize> = clusters.iter().flatten().copied().collect();
            seen.sort_unstable();
            check(seen == (0..m.len()).collect::<Vec<_>>(), "clusters do not partition")?;
            for c in &clusters {
                for &i in c {
                    for &j in c {
                        check(i == j || m.get(i, j) < delta, format!("intra distance >= {delta}"))?;
                    }
                }
            }
            for a in 0..clusters.len() {
                for b in a + 1..clusters.len() {
                    let link = clusters[a]
                        .iter()
                        .flat_map(|&i| clusters[b].iter().map(move |&j| (i, j)))
                        .map(|(i, j)| m.get(i, j))
                        .fold(0.0, f64::max);
                    check(link >= delta, format!("inter linkage {link} < {delta}"))?;
                }
            }
            partitions += 1;
        }
    }

    // small archive so the cap is actually exercised
    let cfg = AlgorithmConfig {
        archive_capacity: 40,
        ..desk_config(Algorithm::PguSgp)
    };
    let mut max_archive = 0;
    let mut elites_checked = 0;
    let mut violation: Option<String> = None;
    let mut final_archive = None;
    run_evolution_with(&cfg, &set, 11, |ev| match ev {
        RunEvent::Evaluated { archive, .. } => {
            max_archive = max_archive.max(archive.len());
            if archive.len() > cfg.archive_capacity {
                violation = Some(format!("archive holds {}", archive.len()));
            }
            final_archive = Some(archive.clone());
        }
        RunEvent::Bred { population, elites, .. } => {
            elites_checked += elites;
            if !population[..elites].iter().all(|i| i.has_true_fitness()) {
                violation = Some("estimated elite".into());
            }
        }
    })
    .map_err(|e| e.to_string())?;
    if let Some(v) = violation {
        return Err(v);
    }
    // purity: every archived fitness is what a simulation gives
    let archive = final_archive.ok_or("no generations")?;
    let trees: Vec<&Tree> = archive.samples().iter().map(|s| s.tree.as_ref().unwrap()).collect();
    let truth = evaluate_trees(&trees, &set, cfg.pf).map_err(|e| e.to_string())?;
    for (s, t) in archive.samples().iter().zip(truth) {
        check(s.fitness == t, format!("archived fitness {} is not the simulated {t}", s.fitness))?;
    }
    Ok(format!(
        "{tree_count} trees on the simplex; {partitions} partitions sound; archive peaked at {max_archive}/{} and matched re-simulation; {elites_checked} elites true-evaluated",
        cfg.archive_capacity
    ))
}

// ---------------------------------------------------------------- 4

fn determinism(data: &Path) -> Outcome {
    let bin = env!("CARGO_BIN_EXE_pgu-sgp");
    let start = Instant::now();
    let mut reports = Vec::new();
    for workers in [1, 4] {
        let results = tempfile::tempdir().map_err(|e| e.to_string())?;
        let out = Command::new(bin)
            .env("PGU_WORKERS", workers.to_string())
            .args(["train", "--exp", "det", "--datasets", "0", "--seeds", "7"])
            .args(["--algorithms", "GP,SGP_PC,PGU_SGP", "--population", "50", "--generations", "10"])
            .arg("--data")
            .arg(data)
            .arg("--results")
            .arg(results.path())
            .output()
            .map_err(|e| e.to_string())?;
        check(out.status.success(), String::from_utf8_lossy(&out.stderr).to_string())?;
        let spec = ExperimentSpec::load(results.path(), "det").map_err(|e| e.to_string())?;
        let mut texts = Vec::new();
        for (a, d, s) in spec.runs() {
            let r = RunReport::load(&report_path(&spec, results.path(), a, d, s)).map_err(|e| e.to_string())?;
            texts.push(r.without_timing().to_json().map_err(|e| e.to_string())?);
        }
        reports.push(texts);
    }
    let secs = start.elapsed().as_secs_f64();
    check(reports[0] == reports[1], "reports differ between 1 and 4 workers")?;
    check(secs < 600.0, format!("took {secs:.0}s"))?;
    Ok(format!(
        "{} reports identical with 1 and 4 workers ({secs:.1}s for both)",
        reports[0].len()
    ))
}

// ---------------------------------------------------------------- 5

struct Cell {
    sims: usize,
    seconds: f64,
    test: f64,
}

fn run_experiment(
    data: &Path,
    results: &Path,
    name: &str,
    algorithms: &[AlgoSpec],
    base: AlgorithmConfig,
) -> Result<BTreeMap<(String, usize), Vec<Cell>>, String> {
    let spec = ExperimentSpec {
        name: name.into(),
        datasets: vec![0, 1],
        algorithms: algorithms.to_vec(),
        seeds: (0..5).collect(),
        base,
    };
    train(&spec, data, results, |_| {}).map_err(|e| e.to_string())?;
    test_experiment(&spec, data, results).map_err(|e| e.to_string())?;
    let mut cells: BTreeMap<(String, usize), Vec<Cell>> = BTreeMap::new();
    for (a, d, s) in spec.runs() {
        let r = RunReport::load(&report_path(&spec, results, a, d, s)).map_err(|e| e.to_string())?;
        let t: TestRecord = serde_json::from_str(
            &std::fs::read_to_string(test_path(&spec, results, a, d, s)).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        cells.entry((a.label(), d)).or_default().push(Cell {
            sims: r.total_simulations,
            seconds: r.elapsed_seconds,
            test: t.test_fitness,
        });
    }
    Ok(cells)
}

fn efficiency(data: &Path, results: &Path) -> Outcome {
    let gp = AlgoSpec::new(Algorithm::Gp);
    let pgu = AlgoSpec::new(Algorithm::PguSgp);
    let cells = run_experiment(data, results, "efficiency", &[gp, pgu], desk_config(Algorithm::Gp))?;
    let total = |label: &str, f: &dyn Fn(&Cell) -> f64| -> f64 {
        cells.iter().filter(|(k, _)| k.0 == label).flat_map(|(_, v)| v).map(f).sum()
    };
    let (gl, pl) = (gp.label(), pgu.label());
    let sim_share = total(&pl, &|c| c.sims as f64) / total(&gl, &|c| c.sims as f64);
    let time_share = total(&pl, &|c| c.seconds) / total(&gl, &|c| c.seconds);
    let gp_fit = total(&gl, &|c| c.test) / 10.0;
    let pgu_fit = total(&pl, &|c| c.test) / 10.0;
    let rel = (pgu_fit - gp_fit) / gp_fit.abs();
    let mut pvals = Vec::new();
    let mut degraded = false;
    for d in [0, 1] {
        let a: Vec<f64> = cells[&(pl.clone(), d)].iter().map(|c| c.test).collect();
        let b: Vec<f64> = cells[&(gl.clone(), d)].iter().map(|c| c.test).collect();
        let p = wilcoxon_rank_sum(&a, &b).map_err(|e| e.to_string())?.p_value;
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        degraded |= p <= 0.05 && mean(&a) < mean(&b);
        pvals.push(p);
    }
    let summary = format!(
        "simulations {:.1}% of GP (need <= 50%), wall time {:.1}% of GP (need <= 70%), test fitness {pgu_fit:.5} vs {gp_fit:.5} ({:+.1}%, need >= -10%), p = {:.3}/{:.3}",
        sim_share * 100.0,
        time_share * 100.0,
        rel * 100.0,
        pvals[0],
        pvals[1]
    );
    let ok = sim_share <= 0.5 && time_share <= 0.7 && rel >= -0.10 && !degraded;
    if ok {
        Ok(summary)
    } else {
        Err(summary)
    }
}

// ---------------------------------------------------------------- 6

fn surrogate_quality(data: &Path, results: &Path) -> Outcome {
    let pc = AlgoSpec::new(Algorithm::SgpPc);
    let pgu = AlgoSpec::new(Algorithm::PguSgp);
    let base = AlgorithmConfig {
        probe_interval: Some(1),
        ..desk_config(Algorithm::PguSgp)
    };
    let spec_runs = |label: &str| -> Result<Vec<f64>, String> {
        let spec = ExperimentSpec::load(results, "quality").map_err(|e| e.to_string())?;
        let algo = spec.algorithms.iter().find(|a| a.label() == label).unwrap();
        let mut rhos = Vec::new();
        for &d in &spec.datasets {
            for &s in &spec.seeds {
                let r = RunReport::load(&report_path(&spec, results, algo, d, s)).map_err(|e| e.to_string())?;
                if let Some(rho) = r.mean_probe_rho() {
                    rhos.push(rho);
                }
            }
        }
        Ok(rhos)
    };
    run_experiment(data, results, "quality", &[pc, pgu], base)?;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len().max(1) as f64;
    let pgu_rho = spec_runs(&pgu.label())?;
    let pc_rho = spec_runs(&pc.label())?;
    let (p, q) = (mean(&pgu_rho), mean(&pc_rho));
    let summary = format!(
        "PGU_SGP mean rho {p:.3} over {} runs (need >= 0.4), SGP_PC {q:.3} over {} runs (need PGU >= SGP_PC - 0.05)",
        pgu_rho.len(),
        pc_rho.len()
    );
    if !pgu_rho.is_empty() && p >= 0.4 && p >= q - 0.05 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

// ---------------------------------------------------------------- 7

fn degenerate_configs() -> Outcome {
    let set = train_set(3, 700);
    let cfg = AlgorithmConfig {
        delta: 0.0,
        population_size: 40,
        budget: Budget::Generations(5),
        ..AlgorithmConfig::for_algorithm(Algorithm::PguSgp)
    };
    let report = run_evolution(&cfg, &set, 5).map_err(|e| e.to_string())?;
    for g in &report.generations {
        check(
            g.true_evals == cfg.population_size && g.sim_count == cfg.population_size * set.len(),
            format!("generation {} spent {} true evaluations", g.generation, g.true_evals),
        )?;
    }

    let situations = sample_decision_situations(set.instances(), &ReferenceRule::default(), 40, 10, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let cfg = PguConfig {
        wp: 1.0,
        wg: 0.0,
        delta: 0.1,
    };
    let mut checked = 0;
    for _ in 0..50 {
        let pop = init_population(&mut rng, 50, 2, 5).unwrap();
        let chars: Vec<Characterization> = pop.iter().map(|i| characterize(&i.tree, &situations)).collect();
        let mut shuffled = chars.clone();
        let mut gcs: Vec<GenoVector> = chars.iter().map(|c| c.gc).collect();
        gcs.shuffle(&mut rng);
        for (c, g) in shuffled.iter_mut().zip(gcs) {
            c.gc = g;
        }
        let a = pgu_matrix(&chars.iter().collect::<Vec<_>>(), &cfg).unwrap();
        let b = pgu_matrix(&shuffled.iter().collect::<Vec<_>>(), &cfg).unwrap();
        check(
            cluster_complete_linkage(&a, cfg.delta) == cluster_complete_linkage(&b, cfg.delta),
            "wp = 1 partition changed with permuted GC",
        )?;
        checked += 1;
    }
    Ok(format!(
        "delta = 0 spent exactly {} true evaluations in each of {} generations; {checked} wp = 1 partitions unchanged under GC permutation",
        cfg_pop(&report),
        report.generations.len()
    ))
}

fn cfg_pop(r: &RunReport) -> usize {
    r.config.population_size
}

fn main() {
    let data = tempfile::tempdir().expect("tempdir");
    let results = tempfile::tempdir().expect("tempdir");
    generate_datasets(data.path(), 2, 2024, 10, 10, &desk_params()).expect("datasets");

    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("1 worked examples", Box::new(worked_examples)),
        ("2 oracle equivalence", Box::new(oracle_equivalence)),
        ("3 property suites", Box::new(property_suites)),
        ("4 determinism across workers", Box::new(|| determinism(data.path()))),
        ("5 efficiency at desk scale", Box::new(|| efficiency(data.path(), results.path()))),
        ("6 surrogate quality", Box::new(|| surrogate_quality(data.path(), results.path()))),
        ("7 degenerate configurations", Box::new(degenerate_configs)),
    ];
    let mut failed = 0;
    for (name, f) in &criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    // failures are reported above; strict mode also turns them into a
    // failing exit status
    if failed > 0 && std::env::var_os("PGU_ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use pgu_core::evolve::{Algorithm, RunReport};
use pgu_core::stats::{average_ranks, wilcoxon_rank_sum};

use crate::evaluate::{test_path, TestRecord};
use crate::experiment::{report_path, AlgoSpec, ExperimentSpec};

struct Run {
    report: RunReport,
    test: TestRecord,
}

fn load_runs(spec: &ExperimentSpec, results: &Path) -> Result<BTreeMap<(usize, usize, u64), Run>> {
    let mut runs = BTreeMap::new();
    let mut missing = Vec::new();
    for (ai, algo) in spec.algorithms.iter().enumerate() {
        for &d in &spec.datasets {
            for &s in &spec.seeds {
                let rp = report_path(spec, results, algo, d, s);
                let tp = test_path(spec, results, algo, d, s);
                if !rp.exists() || !tp.exists() {
                    missing.push(format!("{} dataset-{d} seed-{s}", algo.label()));
                    continue;
                }
                let report = RunReport::load(&rp).with_context(|| format!("reading {}", rp.display()))?;
                let test: TestRecord = serde_json::from_str(&fs::read_to_string(&tp)?)
                    .with_context(|| format!("reading {}", tp.display()))?;
                runs.insert((ai, d, s), Run { report, test });
            }
        }
    }
    if !missing.is_empty() {
        bail!("incomplete experiment, run train and test first: {}", missing.join(", "));
    }
    Ok(runs)
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

// p-value of `xs` against the baseline samples, when both have 3+ runs
fn p_against(xs: &[f64], base: Option<&Vec<f64>>) -> Option<f64> {
    let base = base?;
    wilcoxon_rank_sum(xs, base).ok().map(|r| r.p_value)
}

fn sign(p: Option<f64>, mean: f64, base_mean: Option<f64>, higher_is_better: bool) -> &'static str {
    match (p, base_mean) {
        (Some(p), Some(b)) if p < 0.05 => {
            if (mean > b) == higher_is_better {
                "+"
            } else {
                "-"
            }
        }
        (Some(_), Some(_)) => "=",
        _ => "",
    }
}

/// Writes `training_time.csv`, `test_fitness.csv`, `correlation.csv` and
/// `ranks.csv` under `<results>/<exp>/analysis`. Comparisons are against the
/// plain GP entry when the experiment has one.
pub fn analyze(results: &Path, name: &str) -> Result<Vec<PathBuf>> {
    let spec = ExperimentSpec::load(results, name)?;
    let runs = load_runs(&spec, results)?;
    let out_dir = spec.dir(results).join("analysis");
    fs::create_dir_all(&out_dir)?;
    let gp_index = spec.algorithms.iter().position(|a| a.algorithm == Algorithm::Gp);

    let collect = |ai: usize, d: usize, f: &dyn Fn(&Run) -> f64| -> Vec<f64> {
        spec.seeds.iter().map(|&s| f(&runs[&(ai, d, s)])).collect()
    };

    let time_path = out_dir.join("training_time.csv");
    let fit_path = out_dir.join("test_fitness.csv");
    let corr_path = out_dir.join("correlation.csv");
    let rank_path = out_dir.join("ranks.csv");
    let mut time_w = csv::Writer::from_path(&time_path)?;
    let mut fit_w = csv::Writer::from_path(&fit_path)?;
    let mut corr_w = csv::Writer::from_path(&corr_path)?;
    time_w.write_record([
        "dataset",
        "algorithm",
        "runs",
        "mean_simulations",
        "simulation_share_vs_gp",
        "mean_minutes",
        "std_minutes",
        "p_vs_gp",
        "sign_vs_gp",
    ])?;
    fit_w.write_record(["dataset", "algorithm", "runs", "mean", "std", "p_vs_gp", "sign_vs_gp"])?;
    corr_w.write_record(["dataset", "algorithm", "runs_with_probes", "mean_rho", "std_rho"])?;

    let mut rank_rows = Vec::new();
    for &d in &spec.datasets {
        let gp_minutes = gp_index.map(|g| collect(g, d, &|r| r.report.elapsed_seconds / 60.0));
        let gp_fit = gp_index.map(|g| collect(g, d, &|r| r.test.test_fitness));
        let gp_sims = gp_index.map(|g| mean_std(&collect(g, d, &|r| r.report.total_simulations as f64)).0);
        let mut row_means = Vec::new();
        for (ai, algo) in spec.algorithms.iter().enumerate() {
            let label = algo.label();
            let is_gp = Some(ai) == gp_index;
            let baseline = |v: &Option<Vec<f64>>| if is_gp { None } else { v.clone() };

            let sims = mean_std(&collect(ai, d, &|r| r.report.total_simulations as f64)).0;
            let minutes = collect(ai, d, &|r| r.report.elapsed_seconds / 60.0);
            let (tm, ts) = mean_std(&minutes);
            let p = p_against(&minutes, baseline(&gp_minutes).as_ref());
            let gp_mean_minutes = gp_minutes.as_ref().map(|v| mean_std(v).0);
            time_w.write_record([
                d.to_string(),
                label.clone(),
                spec.seeds.len().to_string(),
                sims.to_string(),
                opt(gp_sims.map(|g| sims / g)),
                tm.to_string(),
                ts.to_string(),
                opt(p),
                sign(p, tm, gp_mean_minutes, false).to_string(),
            ])?;

            let fit = collect(ai, d, &|r| r.test.test_fitness);
            let (fm, fs_) = mean_std(&fit);
            let p = p_against(&fit, baseline(&gp_fit).as_ref());
            let gp_mean_fit = gp_fit.as_ref().map(|v| mean_std(v).0);
            fit_w.write_record([
                d.to_string(),
                label.clone(),
                spec.seeds.len().to_string(),
                fm.to_string(),
                fs_.to_string(),
                opt(p),
                sign(p, fm, gp_mean_fit, true).to_string(),
            ])?;
            row_means.push(fm);

            if algo.algorithm.uses_surrogate() {
                let rhos: Vec<f64> = spec
                    .seeds
                    .iter()
                    .filter_map(|&s| runs[&(ai, d, s)].report.mean_probe_rho())
                    .collect();
                let (rm, rs) = if rhos.is_empty() {
                    (None, None)
                } else {
                    let (m, s) = mean_std(&rhos);
                    (Some(m), Some(s))
                };
                corr_w.write_record([d.to_string(), label, rhos.len().to_string(), opt(rm), opt(rs)])?;
            }
        }
        rank_rows.push(row_means);
    }
    time_w.flush()?;
    fit_w.flush()?;
    corr_w.flush()?;

    let ranks = average_ranks(&rank_rows, true)?;
    let mut rank_w = csv::Writer::from_path(&rank_path)?;
    rank_w.write_record(["algorithm", "average_rank"])?;
    for (algo, r) in spec.algorithms.iter().zip(ranks) {
        rank_w.write_record([algo.label(), r.to_string()])?;
    }
    rank_w.flush()?;
    Ok(vec![time_path, fit_path, corr_path, rank_path])
}

/// Mean test fitness of checkpoint incumbents against elapsed minutes for
/// one dataset, written to `analysis/curve-dataset-<d>.csv`.
pub fn curve(results: &Path, name: &str, dataset: usize) -> Result<PathBuf> {
    let spec = ExperimentSpec::load(results, name)?;
    if !spec.datasets.contains(&dataset) {
        bail!("experiment {name} has no dataset {dataset}");
    }
    let runs = load_runs(&spec, results)?;
    let out_dir = spec.dir(results).join("analysis");
    fs::create_dir_all(&out_dir)?;
    let path = out_dir.join(format!("curve-dataset-{dataset}.csv"));
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(["algorithm", "minutes", "runs", "mean_test_fitness"])?;
    for (ai, algo) in spec.algorithms.iter().enumerate() {
        // minutes are multiples of one interval, so key on the index
        let mut points: BTreeMap<u64, (f64, Vec<f64>)> = BTreeMap::new();
        for &s in &spec.seeds {
            for c in &runs[&(ai, dataset, s)].test.checkpoints {
                if let Some(f) = c.test_fitness {
                    let key = (c.minutes / spec.base.checkpoint_minutes).round() as u64;
                    points.entry(key).or_insert((c.minutes, Vec::new())).1.push(f);
                }
            }
        }
        for (minutes, values) in points.values() {
            w.write_record([
                AlgoSpec::label(algo),
                minutes.to_string(),
                values.len().to_string(),
                mean_std(values).0.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(path)
}

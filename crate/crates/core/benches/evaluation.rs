use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pgu_core::evolve::{evaluate_trees, EvaluationSet};
use pgu_core::gp::ramped_half_and_half;
use pgu_core::par;
use pgu_core::sim::{generate_instance, GeneratorParams, ReferenceRule};
use pgu_core::surrogate::{characterize, pgu_matrix, sample_decision_situations, Characterization, PguConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn workers() -> Vec<usize> {
    let max = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut w = vec![1];
    if max > 1 {
        w.push(max);
    }
    w
}

fn population_evaluation(c: &mut Criterion) {
    let params = GeneratorParams::default();
    let set = EvaluationSet::new((0..10).map(|s| generate_instance(&params, s).unwrap()).collect()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let trees = ramped_half_and_half(&mut rng, 50, 2, 6).unwrap();
    let refs: Vec<_> = trees.iter().collect();

    let mut group = c.benchmark_group("evaluate_50x10");
    group.sample_size(10);
    for w in workers() {
        group.bench_with_input(BenchmarkId::new("workers", w), &w, |b, &w| {
            b.iter(|| par::with_workers(w, || evaluate_trees(&refs, &set, 1e-7).unwrap()))
        });
    }
    group.finish();
}

fn distance_matrix(c: &mut Criterion) {
    let params = GeneratorParams::default();
    let insts: Vec<_> = (0..2).map(|s| generate_instance(&params, s).unwrap()).collect();
    let sits = sample_decision_situations(&insts, &ReferenceRule::default(), 40, 10, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let chars: Vec<Characterization> = ramped_half_and_half(&mut rng, 500, 2, 6)
        .unwrap()
        .iter()
        .map(|t| characterize(t, &sits))
        .collect();
    let refs: Vec<&Characterization> = chars.iter().collect();

    let mut group = c.benchmark_group("pgu_matrix_500");
    group.sample_size(10);
    for w in workers() {
        group.bench_with_input(BenchmarkId::new("workers", w), &w, |b, &w| {
            b.iter(|| par::with_workers(w, || pgu_matrix(&refs, &PguConfig::default()).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, population_evaluation, distance_matrix);
criterion_main!(benches);

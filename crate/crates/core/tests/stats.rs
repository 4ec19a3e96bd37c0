use pgu_core::stats::*;
use proptest::prelude::*;

// all C(n+m, n) splits of the pooled midranks
fn enumerate_p(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let w: f64 = ranks[..a.len()].iter().sum();
    let n = pooled.len();
    let (mut le, mut ge, mut total) = (0.0, 0.0, 0.0);
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != a.len() {
            continue;
        }
        let s: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
        total += 1.0;
        if s <= w + 1e-9 {
            le += 1.0;
        }
        if s >= w - 1e-9 {
            ge += 1.0;
        }
    }
    (2.0 * f64::min(le, ge) / total).min(1.0)
}

proptest! {
    #[test]
    fn exact_matches_enumeration(
        a in prop::collection::vec(0u8..6, 3..=8),
        b in prop::collection::vec(0u8..6, 3..=8),
    ) {
        let a: Vec<f64> = a.into_iter().map(f64::from).collect();
        let b: Vec<f64> = b.into_iter().map(f64::from).collect();
        let r = wilcoxon_rank_sum(&a, &b).unwrap();
        prop_assert!((r.p_value - enumerate_p(&a, &b)).abs() < 1e-9);
        let swapped = wilcoxon_rank_sum(&b, &a).unwrap();
        prop_assert!((r.p_value - swapped.p_value).abs() < 1e-12);
    }

    #[test]
    fn correlation_bounded(xs in prop::collection::vec(-100.0f64..100.0, 2..30), k in 0.1f64..5.0) {
        let ys: Vec<f64> = xs.iter().enumerate().map(|(i, x)| x * k + (i % 3) as f64).collect();
        if let Ok(r) = pearson(&xs, &ys) {
            prop_assert!((-1.0..=1.0).contains(&r));
        }
    }
}

#[test]
fn normal_approximation_near_exact_at_the_boundary() {
    // the two paths should agree roughly where they meet
    let a: Vec<f64> = (0..10).map(|v| v as f64 * 1.3).collect();
    let b: Vec<f64> = (0..11).map(|v| v as f64 * 1.1 + 4.0).collect();
    let approx = wilcoxon_rank_sum(&a, &b).unwrap();
    let exact = wilcoxon_rank_sum(&a, &b[..10]).unwrap();
    assert!(!approx.exact && exact.exact);
    assert!((approx.p_value - exact.p_value).abs() < 0.1);
}

#[test]
fn hand_ranked_table() {
    // 3 algorithms x 4 datasets, higher is better
    let rows = vec![
        vec![1.0, 2.0, 3.0],
        vec![3.0, 2.0, 1.0],
        vec![2.0, 2.0, 5.0],
        vec![0.5, 0.7, 0.9],
    ];
    let r = average_ranks(&rows, true).unwrap();
    // ranks per row: [3,2,1] [1,2,3] [2.5,2.5,1] [3,2,1]
    assert_eq!(r, vec![9.5 / 4.0, 8.5 / 4.0, 6.0 / 4.0]);
    assert!(average_ranks(&[vec![1.0], vec![1.0, 2.0]], true).is_err());
}

//! Summary statistics used by the experiment harness.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{param, Error, Result};

/// Product-moment correlation between predicted and true values.
pub fn pearson(predicted: &[f64], truth: &[f64]) -> Result<f64> {
    if predicted.len() != truth.len() {
        return Err(Error::Contract(format!(
            "correlation inputs differ in length ({} vs {})",
            predicted.len(),
            truth.len()
        )));
    }
    if predicted.len() < 2 {
        return Err(Error::UndefinedCorrelation("fewer than two observations"));
    }
    let n = predicted.len() as f64;
    let mx = predicted.iter().sum::<f64>() / n;
    let my = truth.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in predicted.iter().zip(truth) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("zero variance"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Largest per-side sample size handled by the exact distribution.
pub const EXACT_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSumTest {
    /// Rank sum of the first sample in the pooled ranking (midranks on ties).
    pub statistic: f64,
    pub p_value: f64,
    pub exact: bool,
    /// Every observation was equal; the test carries no information.
    pub all_tied: bool,
}

/// Midranks (1-based) of `values`.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Two-sided Wilcoxon rank-sum test. Exact when both samples have at most
/// [`EXACT_LIMIT`] observations, otherwise a tie- and continuity-corrected
/// normal approximation.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64]) -> Result<RankSumTest> {
    if a.len() < 3 {
        return Err(param("a", "needs at least 3 observations"));
    }
    if b.len() < 3 {
        return Err(param("b", "needs at least 3 observations"));
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(param("a", "NaN observation"));
    }
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let statistic: f64 = ranks[..a.len()].iter().sum();
    let exact = a.len() <= EXACT_LIMIT && b.len() <= EXACT_LIMIT;
    if pooled.iter().all(|&v| v == pooled[0]) {
        return Ok(RankSumTest {
            statistic,
            p_value: 1.0,
            exact,
            all_tied: true,
        });
    }
    let p_value = if exact {
        exact_p(&ranks, a.len(), statistic)
    } else {
        normal_p(&pooled, &ranks, a.len(), statistic)
    };
    Ok(RankSumTest {
        statistic,
        p_value,
        exact,
        all_tied: false,
    })
}

// Distribution of the doubled rank sum over all ways to choose n of the
// pooled ranks.
fn exact_p(ranks: &[f64], n: usize, statistic: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (r * 2.0).round() as usize).collect();
    let max_sum: usize = doubled.iter().sum();
    // ways[k][s]: subsets of size k with doubled sum s
    let mut ways = vec![vec![0f64; max_sum + 1]; n + 1];
    ways[0][0] = 1.0;
    for &r in &doubled {
        for k in (1..=n).rev() {
            for s in (r..=max_sum).rev() {
                let add = ways[k - 1][s - r];
                if add != 0.0 {
                    ways[k][s] += add;
                }
            }
        }
    }
    let target = (statistic * 2.0).round() as usize;
    let total: f64 = ways[n].iter().sum();
    let lower: f64 = ways[n][..=target].iter().sum();
    let upper: f64 = ways[n][target..].iter().sum();
    (2.0 * lower.min(upper) / total).min(1.0)
}

fn normal_p(pooled: &[f64], ranks: &[f64], n: usize, statistic: f64) -> f64 {
    let big_n = pooled.len() as f64;
    let (n1, n2) = (n as f64, big_n - n as f64);
    let mut sorted = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|&&r| r == sorted[i]).count();
        let t = j as f64;
        tie_term += t * t * t - t;
        i += j;
    }
    let mean = n1 * (big_n + 1.0) / 2.0;
    let var = n1 * n2 / 12.0 * ((big_n + 1.0) - tie_term / (big_n * (big_n - 1.0)));
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((statistic - mean).abs() - 0.5).max(0.0) / var.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    (2.0 * normal.sf(z)).min(1.0)
}

/// Mean rank of each column across rows, rank 1 being best in its row and
/// ties sharing the average rank.
pub fn average_ranks(rows: &[Vec<f64>], higher_is_better: bool) -> Result<Vec<f64>> {
    let Some(first) = rows.first() else {
        return Err(param("rows", "no rows to rank"));
    };
    let cols = first.len();
    if cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(param("rows", "rows must be non-empty and of equal length"));
    }
    let mut sums = vec![0.0; cols];
    for row in rows {
        let keyed: Vec<f64> = if higher_is_better {
            row.iter().map(|v| -v).collect()
        } else {
            row.clone()
        };
        for (s, r) in sums.iter_mut().zip(midranks(&keyed)) {
            *s += r;
        }
    }
    Ok(sums.into_iter().map(|s| s / rows.len() as f64).collect())
}

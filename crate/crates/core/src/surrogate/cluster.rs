use super::distance::DistanceMatrix;

/// Agglomerative complete-linkage clustering. Clusters keep merging while the
/// smallest complete-linkage distance is below `delta`; ties go to the
/// lexicographically smallest pair, each cluster identified by its smallest
/// member. Returns clusters with sorted members, ordered by first member.
pub fn cluster_complete_linkage(matrix: &DistanceMatrix, delta: f64) -> Vec<Vec<usize>> {
    let n = matrix.len();
    let mut link: Vec<f64> = (0..n).flat_map(|i| matrix.row(i).iter().copied()).collect();
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut active = vec![true; n];
    // per slot: smallest linkage to a later active slot, and which slot
    let mut row_min: Vec<(f64, usize)> = vec![(f64::INFINITY, usize::MAX); n];

    let scan_row = |link: &[f64], active: &[bool], i: usize| -> (f64, usize) {
        let mut best = (f64::INFINITY, usize::MAX);
        for j in i + 1..n {
            if active[j] && link[i * n + j] < best.0 {
                best = (link[i * n + j], j);
            }
        }
        best
    };
    for i in 0..n {
        row_min[i] = scan_row(&link, &active, i);
    }

    loop {
        let mut best = (f64::INFINITY, usize::MAX, usize::MAX);
        for i in 0..n {
            if active[i] && row_min[i].1 != usize::MAX && row_min[i].0 < best.0 {
                best = (row_min[i].0, i, row_min[i].1);
            }
        }
        let (d, a, b) = best;
        if a == usize::MAX || !(d < delta) {
            break;
        }
        active[b] = false;
        let moved = std::mem::take(&mut members[b]);
        members[a].extend(moved);
        for k in 0..n {
            if active[k] && k != a {
                let v = link[a * n + k].max(link[b * n + k]);
                link[a * n + k] = v;
                link[k * n + a] = v;
            }
        }
        for i in 0..n {
            if !active[i] {
                continue;
            }
            if i == a || row_min[i].1 == a || row_min[i].1 == b {
                row_min[i] = scan_row(&link, &active, i);
            }
        }
    }

    let mut out: Vec<Vec<usize>> = members
        .into_iter()
        .zip(active)
        .filter_map(|(mut m, live)| {
            live.then(|| {
                m.sort_unstable();
                m
            })
        })
        .collect();
    out.sort_unstable_by_key(|m| m[0]);
    out
}

/// Member with the least mean distance to the rest of its cluster; ties go to
/// the smaller tree, then the lower index.
///
/// # Panics
/// On an empty cluster.
pub fn select_representative(cluster: &[usize], matrix: &DistanceMatrix, sizes: &[usize]) -> usize {
    assert!(!cluster.is_empty(), "empty cluster");
    let mut best: Option<(f64, usize, usize)> = None;
    for &i in cluster {
        // same divisor for every member, so compare sums
        let total: f64 = cluster.iter().map(|&j| matrix.get(i, j)).sum();
        let key = (total, sizes[i], i);
        let better = match best {
            None => true,
            Some(b) => key.0 < b.0 || (key.0 == b.0 && (key.1, key.2) < (b.1, b.2)),
        };
        if better {
            best = Some(key);
        }
    }
    best.map(|b| b.2).unwrap_or(cluster[0])
}

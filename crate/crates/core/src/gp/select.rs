use rand::Rng;

use super::tree::Individual;
use crate::error::{Error, Result};

/// Tournament selection with replacement. Fitness is maximized; ties go to the
/// smaller tree, then the lower index. Returns the winner's index.
pub fn tournament_select<R: Rng + ?Sized>(
    rng: &mut R,
    pop: &[Individual],
    k: usize,
) -> Result<usize> {
    if k == 0 {
        return Err(Error::Contract("tournament size must be at least 1".into()));
    }
    if pop.is_empty() {
        return Err(Error::Contract("tournament over an empty population".into()));
    }
    let mut best: Option<(usize, f64)> = None;
    for _ in 0..k {
        let i = rng.random_range(0..pop.len());
        let fit = pop[i]
            .fitness
            .ok_or_else(|| Error::Contract(format!("individual {i} has no fitness")))?
            .value;
        best = match best {
            None => Some((i, fit)),
            Some((j, bf)) if beats(pop, i, fit, j, bf) => Some((i, fit)),
            keep => keep,
        };
    }
    Ok(best.map(|(i, _)| i).unwrap())
}

fn beats(pop: &[Individual], i: usize, fi: f64, j: usize, fj: f64) -> bool {
    if fi != fj {
        return fi > fj;
    }
    let (si, sj) = (pop[i].size(), pop[j].size());
    if si != sj {
        return si < sj;
    }
    i < j
}

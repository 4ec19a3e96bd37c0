use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::sim::{run_simulation, DispatchRule, FeatureVector, Instance, ReferenceRule};

/// Default number of best reference-ranked candidates kept per situation.
pub const DEFAULT_CANDIDATE_CAP: usize = 10;

/// A recorded dispatch decision with reference scores and 1-based ranks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionSituation {
    pub candidates: Vec<FeatureVector>,
    pub ref_scores: Vec<f64>,
    pub ref_ranks: Vec<u32>,
}

impl DecisionSituation {
    /// Ranks candidates by ascending reference score; ties keep candidate
    /// order.
    pub fn new(candidates: Vec<FeatureVector>, ref_scores: Vec<f64>) -> Result<Self> {
        if candidates.len() < 2 || candidates.len() != ref_scores.len() {
            return Err(Error::Contract(format!(
                "decision situation needs >= 2 candidates with one score each, got {} / {}",
                candidates.len(),
                ref_scores.len()
            )));
        }
        let mut order: Vec<usize> = (0..ref_scores.len()).collect();
        order.sort_by(|&a, &b| ref_scores[a].total_cmp(&ref_scores[b]));
        let mut ref_ranks = vec![0u32; order.len()];
        for (rank, &i) in order.iter().enumerate() {
            ref_ranks[i] = rank as u32 + 1;
        }
        Ok(Self {
            candidates,
            ref_scores,
            ref_ranks,
        })
    }

    /// Situation built from scores of `reference`, keeping only the `cap`
    /// best-ranked candidates in their original order.
    pub fn from_reference<R: DispatchRule + ?Sized>(
        candidates: &[FeatureVector],
        reference: &R,
        cap: usize,
    ) -> Result<Self> {
        let scores: Vec<f64> = candidates.iter().map(|f| reference.score(f)).collect();
        let full = Self::new(candidates.to_vec(), scores)?;
        if full.len() <= cap {
            return Ok(full);
        }
        let keep: Vec<usize> = (0..full.len()).filter(|&i| full.ref_ranks[i] as usize <= cap).collect();
        Self::new(
            keep.iter().map(|&i| full.candidates[i]).collect(),
            keep.iter().map(|&i| full.ref_scores[i]).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    /// Reference rank of the candidate `rule` scores lowest (ties to the
    /// earlier candidate).
    pub fn rank_of_choice<R: DispatchRule + ?Sized>(&self, rule: &R) -> u32 {
        let mut best = 0;
        let mut best_score = f64::INFINITY;
        for (i, f) in self.candidates.iter().enumerate() {
            let s = rule.score(f);
            let s = if s.is_finite() { s } else { crate::gp::NON_FINITE_SCORE };
            if i == 0 || s < best_score {
                best = i;
                best_score = s;
            }
        }
        self.ref_ranks[best]
    }
}

/// Runs `reference` over the training instances with tracing, then draws
/// `pcs` decision points with at least two candidates uniformly without
/// replacement.
pub fn sample_decision_situations(
    instances: &[Instance],
    reference: &ReferenceRule,
    pcs: usize,
    cap: usize,
    seed: u64,
) -> Result<Vec<DecisionSituation>> {
    if pcs == 0 {
        return Err(crate::error::param("pcs", "must be at least 1"));
    }
    if cap < 2 {
        return Err(crate::error::param("cap", "must be at least 2"));
    }
    if instances.is_empty() {
        return Err(Error::Dataset("no training instances to sample decision situations from".into()));
    }
    let traces = par::map_slice(instances, |inst| run_simulation(inst, reference, true));
    let mut eligible = Vec::new();
    for trace in traces {
        for point in trace?.trace.unwrap_or_default() {
            if point.features.len() >= 2 {
                eligible.push(point.features);
            }
        }
    }
    if eligible.len() < pcs {
        return Err(Error::Dataset(format!(
            "only {} decision points with >= 2 candidates, need {pcs}; use larger or more instances",
            eligible.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, eligible.len(), pcs).into_vec();
    picked.sort_unstable();
    picked
        .into_iter()
        .map(|i| DecisionSituation::from_reference(&eligible[i], reference, cap))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(tt: f64) -> FeatureVector {
        FeatureVector { tt, ..Default::default() }
    }

    #[test]
    fn ranks_and_ties() {
        let s = DecisionSituation::new(vec![fv(0.0); 4], vec![5.0, 1.0, 5.0, 3.0]).unwrap();
        assert_eq!(s.ref_ranks, vec![3, 1, 4, 2]);
        assert!(DecisionSituation::new(vec![fv(0.0)], vec![1.0]).is_err());
    }

    #[test]
    fn cap_keeps_best_ranked() {
        let cands: Vec<FeatureVector> = [50.0, 10.0, 40.0, 20.0, 30.0].map(fv).to_vec();
        let s = DecisionSituation::from_reference(&cands, &ReferenceRule::default(), 3).unwrap();
        assert_eq!(s.candidates.iter().map(|f| f.tt).collect::<Vec<_>>(), vec![10.0, 20.0, 30.0]);
        assert_eq!(s.ref_ranks, vec![1, 2, 3]);
    }
}

use serde::{Deserialize, Serialize};

use super::situation::DecisionSituation;
use crate::gp::{Tree, NUM_PRIMITIVES};
use crate::sim::DispatchRule;

/// Phenotypic characterization: for each decision situation, the reference
/// rank of the candidate the rule would dispatch.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhenoVector(pub Vec<u32>);

/// Genotypic characterization: node-type frequencies in canonical primitive
/// order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GenoVector(pub [f64; NUM_PRIMITIVES]);

/// Both characterizations of one individual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Characterization {
    pub pc: PhenoVector,
    pub gc: GenoVector,
}

pub fn compute_pc<R: DispatchRule + ?Sized>(rule: &R, situations: &[DecisionSituation]) -> PhenoVector {
    PhenoVector(situations.iter().map(|s| s.rank_of_choice(rule)).collect())
}

pub fn compute_gc(tree: &Tree) -> GenoVector {
    let mut counts = [0usize; NUM_PRIMITIVES];
    for p in tree.nodes() {
        counts[p.index()] += 1;
    }
    let size = tree.size() as f64;
    GenoVector(counts.map(|c| c as f64 / size))
}

pub fn characterize(tree: &Tree, situations: &[DecisionSituation]) -> Characterization {
    Characterization {
        pc: compute_pc(tree, situations),
        gc: compute_gc(tree),
    }
}

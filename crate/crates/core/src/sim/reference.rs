use serde::{Deserialize, Serialize};

use super::engine::DispatchRule;
use super::features::FeatureVector;

/// Expert dispatching heuristic used as the fitness baseline and as the
/// ranking source for phenotypic characterization:
///
/// `score = TT + snwtn·SNWTN + ctn·CTN − rtn·RTN` (lower is better).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRule {
    pub snwtn_weight: f64,
    pub ctn_weight: f64,
    pub rtn_weight: f64,
}

impl Default for ReferenceRule {
    fn default() -> Self {
        Self {
            snwtn_weight: 30.0,
            ctn_weight: 10.0,
            rtn_weight: 5.0,
        }
    }
}

impl ReferenceRule {
    /// Node count of the rule written as a tree with constants:
    /// `(- (+ (+ TT (* c SNWTN)) (* c CTN)) (* c RTN))`.
    pub const EQUIVALENT_SIZE: usize = 13;

    #[inline]
    pub fn score(&self, f: &FeatureVector) -> f64 {
        f.tt + self.snwtn_weight * f.snwtn + self.ctn_weight * f.ctn - self.rtn_weight * f.rtn
    }
}

impl DispatchRule for ReferenceRule {
    fn score(&self, f: &FeatureVector) -> f64 {
        ReferenceRule::score(self, f)
    }
}

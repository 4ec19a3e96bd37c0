use crate::error::{Error, Result};
use crate::gp::Tree;
use crate::par;
use crate::sim::{run_simulation, DispatchRule, Instance, ReferenceRule};

/// Instances with the reference rule's objective on each, precomputed once.
#[derive(Debug, Clone)]
pub struct EvaluationSet {
    instances: Vec<Instance>,
    reference: Vec<f64>,
}

impl EvaluationSet {
    /// Simulates the reference rule on every instance.
    pub fn new(instances: Vec<Instance>) -> Result<Self> {
        if instances.is_empty() {
            return Err(Error::Dataset("evaluation set has no instances".into()));
        }
        let rule = ReferenceRule::default();
        let reference = par::map_slice(&instances, |inst| run_simulation(inst, &rule, false).map(|r| r.objective))
            .into_iter()
            .collect::<Result<Vec<f64>>>()?;
        Self::with_reference(instances, reference)
    }

    pub fn with_reference(instances: Vec<Instance>, reference: Vec<f64>) -> Result<Self> {
        if instances.len() != reference.len() {
            return Err(Error::Contract("one reference objective per instance".into()));
        }
        if let Some(i) = reference.iter().position(|&r| !(r > 0.0) || !r.is_finite()) {
            return Err(Error::Dataset(format!(
                "reference objective of instance {i} is {}; instance is degenerate",
                reference[i]
            )));
        }
        Ok(Self { instances, reference })
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn reference_objectives(&self) -> &[f64] {
        &self.reference
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// The first `n` instances.
    pub fn truncated(&self, n: usize) -> Self {
        let n = n.min(self.len()).max(1);
        Self {
            instances: self.instances[..n].to_vec(),
            reference: self.reference[..n].to_vec(),
        }
    }
}

/// Average relative deviation from the reference objective, minus a size
/// penalty. Larger is better.
pub fn ard(objectives: &[f64], reference: &[f64], size: usize, pf: f64) -> Result<f64> {
    if objectives.len() != reference.len() || objectives.is_empty() {
        return Err(Error::Contract("one objective per reference instance".into()));
    }
    if let Some(i) = reference.iter().position(|&r| r == 0.0) {
        return Err(Error::Dataset(format!("reference objective of instance {i} is zero")));
    }
    let dev: f64 = objectives.iter().zip(reference).map(|(o, r)| (o - r) / r).sum();
    Ok(dev / objectives.len() as f64 - pf * size as f64)
}

/// Fitness of an arbitrary rule whose tree size is `size`.
pub fn fitness_ard<R: DispatchRule + Sync + ?Sized>(rule: &R, size: usize, set: &EvaluationSet, pf: f64) -> Result<f64> {
    let objectives = par::map_slice(set.instances(), |inst| run_simulation(inst, rule, false).map(|r| r.objective))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    ard(&objectives, set.reference_objectives(), size, pf)
}

/// Fitness of every tree. Work fans out over (tree, instance) pairs and is
/// folded in index order.
pub fn evaluate_trees(trees: &[&Tree], set: &EvaluationSet, pf: f64) -> Result<Vec<f64>> {
    let m = set.len();
    let objectives = par::map_indices(trees.len() * m, |k| {
        run_simulation(&set.instances()[k % m], trees[k / m], false).map(|r| r.objective)
    });
    let mut objectives = objectives.into_iter();
    let mut out = Vec::with_capacity(trees.len());
    for tree in trees {
        let objs = objectives.by_ref().take(m).collect::<Result<Vec<f64>>>()?;
        out.push(ard(&objs, set.reference_objectives(), tree.size(), pf)?);
    }
    Ok(out)
}

use rand::Rng;

use super::init::grow;
use super::tree::{Tree, MAX_DEPTH};

/// Point pairs tried before crossover gives up and copies the parents.
pub const CROSSOVER_RETRIES: usize = 8;
/// Depth cap of subtrees grown by mutation (further limited by [`MAX_DEPTH`]).
pub const MUTATION_SUBTREE_DEPTH: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct CrossoverOutcome {
    pub first: Tree,
    pub second: Tree,
    /// True when every attempt broke the depth limit and the parents were
    /// copied through unchanged.
    pub copied: bool,
}

/// Exchanges the subtrees at `at_a` and `at_b`. Returns `None` if either
/// child would exceed [`MAX_DEPTH`].
pub fn swap_subtrees(a: &Tree, at_a: usize, b: &Tree, at_b: usize) -> Option<(Tree, Tree)> {
    let sub_a = &a.nodes()[at_a..a.subtree_end(at_a)];
    let sub_b = &b.nodes()[at_b..b.subtree_end(at_b)];
    let first = a.replace_subtree(at_a, sub_b);
    if first.depth() > MAX_DEPTH {
        return None;
    }
    let second = b.replace_subtree(at_b, sub_a);
    if second.depth() > MAX_DEPTH {
        return None;
    }
    Some((first, second))
}

/// Subtree crossover with uniformly chosen points. Parents are never
/// modified.
pub fn crossover<R: Rng + ?Sized>(rng: &mut R, a: &Tree, b: &Tree) -> CrossoverOutcome {
    crossover_with_retries(rng, a, b, CROSSOVER_RETRIES)
}

pub fn crossover_with_retries<R: Rng + ?Sized>(
    rng: &mut R,
    a: &Tree,
    b: &Tree,
    attempts: usize,
) -> CrossoverOutcome {
    for _ in 0..attempts {
        let at_a = rng.random_range(0..a.size());
        let at_b = rng.random_range(0..b.size());
        if let Some((first, second)) = swap_subtrees(a, at_a, b, at_b) {
            return CrossoverOutcome {
                first,
                second,
                copied: false,
            };
        }
    }
    CrossoverOutcome {
        first: a.clone(),
        second: b.clone(),
        copied: true,
    }
}

/// Subtree mutation: a uniformly chosen node is replaced by a grown subtree
/// that fits under the depth limit.
pub fn mutate<R: Rng + ?Sized>(rng: &mut R, a: &Tree) -> Tree {
    let at = rng.random_range(0..a.size());
    let level = a.node_levels()[at];
    let room = MAX_DEPTH + 1 - level;
    let depth = rng.random_range(1..=MUTATION_SUBTREE_DEPTH.min(room));
    let mut fresh = Vec::new();
    grow(rng, depth, false, &mut fresh);
    a.replace_subtree(at, &fresh)
}

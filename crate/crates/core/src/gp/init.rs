use rand::Rng;

use super::primitive::Primitive;
use super::tree::{Individual, Tree, MAX_DEPTH};
use crate::error::{param, Result};

/// Appends a tree of exactly `depth` levels with functions on every internal
/// level.
pub(crate) fn full<R: Rng + ?Sized>(rng: &mut R, depth: usize, out: &mut Vec<Primitive>) {
    if depth <= 1 {
        out.push(random_terminal(rng));
        return;
    }
    let f = random_function(rng);
    out.push(f);
    for _ in 0..f.arity() {
        full(rng, depth - 1, out);
    }
}

/// Appends a tree of at most `depth` levels, choosing uniformly over the
/// whole primitive set below the limit. `function_root` forces a function at
/// the top so that the result has depth >= 2 when allowed.
pub(crate) fn grow<R: Rng + ?Sized>(
    rng: &mut R,
    depth: usize,
    function_root: bool,
    out: &mut Vec<Primitive>,
) {
    if depth <= 1 {
        out.push(random_terminal(rng));
        return;
    }
    let p = if function_root {
        random_function(rng)
    } else {
        Primitive::ALL[rng.random_range(0..Primitive::ALL.len())]
    };
    out.push(p);
    for _ in 0..p.arity() {
        grow(rng, depth - 1, false, out);
    }
}

fn random_terminal<R: Rng + ?Sized>(rng: &mut R) -> Primitive {
    Primitive::TERMINALS[rng.random_range(0..Primitive::TERMINALS.len())]
}

fn random_function<R: Rng + ?Sized>(rng: &mut R) -> Primitive {
    Primitive::FUNCTIONS[rng.random_range(0..Primitive::FUNCTIONS.len())]
}

/// Ramped half-and-half. Individual `i` targets depth `min + i % levels`;
/// alternate passes over the ramp use full and grow.
pub fn ramped_half_and_half<R: Rng + ?Sized>(
    rng: &mut R,
    size: usize,
    min_depth: usize,
    max_depth: usize,
) -> Result<Vec<Tree>> {
    if min_depth < 1 {
        return Err(param("min_depth", "must be at least 1"));
    }
    if max_depth < min_depth {
        return Err(param("max_depth", format!("{max_depth} is below min_depth {min_depth}")));
    }
    if max_depth > MAX_DEPTH {
        return Err(param("max_depth", format!("{max_depth} exceeds the depth limit {MAX_DEPTH}")));
    }
    let levels = max_depth - min_depth + 1;
    let trees = (0..size)
        .map(|i| {
            let depth = min_depth + i % levels;
            let mut nodes = Vec::new();
            if (i / levels) % 2 == 0 {
                full(rng, depth, &mut nodes);
            } else {
                grow(rng, depth, true, &mut nodes);
            }
            Tree::from_prefix_unchecked(nodes)
        })
        .collect();
    Ok(trees)
}

/// Initial population with birth generation 0.
pub fn init_population<R: Rng + ?Sized>(
    rng: &mut R,
    size: usize,
    min_depth: usize,
    max_depth: usize,
) -> Result<Vec<Individual>> {
    Ok(ramped_half_and_half(rng, size, min_depth, max_depth)?
        .into_iter()
        .map(|t| Individual::new(t, 0))
        .collect())
}

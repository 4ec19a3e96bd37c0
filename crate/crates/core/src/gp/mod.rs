//! Tree-based genetic programming: primitive set, representation, and
//! variation operators.

mod init;
mod ops;
mod primitive;
mod select;
mod tree;

pub use init::{init_population, ramped_half_and_half};
pub use ops::{
    crossover, crossover_with_retries, mutate, swap_subtrees, CrossoverOutcome, CROSSOVER_RETRIES,
    MUTATION_SUBTREE_DEPTH,
};
pub use primitive::{Primitive, NUM_FUNCTIONS, NUM_PRIMITIVES, NUM_TERMINALS};
pub use select::tournament_select;
pub use tree::{Fitness, FitnessKind, Individual, Tree, MAX_DEPTH, NON_FINITE_SCORE};

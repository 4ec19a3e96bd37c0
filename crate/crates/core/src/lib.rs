//! Surrogate-assisted genetic programming for evolving truck dispatching
//! rules, with a pheno-geno unified similarity metric driving sample
//! selection and nearest-neighbour fitness prediction.

pub mod error;
pub mod evolve;
pub mod gp;
pub mod par;
pub mod sim;
pub mod stats;
pub mod surrogate;

pub use error::{Error, Result};

//! Phenotypic and genotypic characterizations, the unified distance built
//! from them, complete-linkage clustering, and the 1-NN surrogate archive.

mod archive;
mod characterization;
mod cluster;
mod distance;
mod situation;

pub use archive::{ArchiveSample, Prediction, SurrogateArchive, UpdateStats, ARCHIVE_CAPACITY};
pub use characterization::{characterize, compute_gc, compute_pc, Characterization, GenoVector, PhenoVector};
pub use cluster::{cluster_complete_linkage, select_representative};
pub use distance::{gd, pd, pgu, pgu_matrix, pgu_matrix_with, DistanceMatrix, Normalizers, PguConfig};
pub use situation::{sample_decision_situations, DecisionSituation, DEFAULT_CANDIDATE_CAP};

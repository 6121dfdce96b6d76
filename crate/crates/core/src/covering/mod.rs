//! Lattice models of coverings of the cube and the simplex, and witness
//! verifiers for the covering-dimension theorems.
//!
//! Closed sets are modelled as point sets, touching a facet is lattice
//! membership, and multiplicity is counted pointwise. The verifiers never
//! assume the theorem: a failed search is reported as a counterexample candidate.

pub mod coloring;
pub mod model;
pub mod sample;
pub mod witness;

use thiserror::Error;

pub use coloring::{palais_coloring, validate_coloring, Coloring, ColoringDefect, Piece};
pub use model::{CoverJson, CoverSet, LatticeCover, LatticeFacet, LatticeModel, ModelKind, ModelParams};
pub use sample::{kkm_lebesgue_witness, lattice_sample, PointCloudCover, PointCloudJson};
pub use witness::{
    axes_witness, complement_witness, kkm_witness, lebesgue_witness, Outcome, Theorem, TouchCertificate,
    Verdict, Violation, Witness, WitnessReport,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("bad model: {0}")]
    BadModel(String),
    #[error("set {set:?}: {detail}")]
    BadPoint { set: String, detail: String },
    #[error("set {0:?} is empty")]
    EmptySet(String),
    #[error("set {0:?} appears twice")]
    DuplicateSet(String),
    #[error("verifier needs a {expected:?} model, got {got:?}")]
    WrongModel { expected: ModelKind, got: ModelKind },
    #[error("expected exactly {expected} sets, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("bad sample: {0}")]
    BadSample(String),
    #[error("{0}")]
    BadParameter(String),
}

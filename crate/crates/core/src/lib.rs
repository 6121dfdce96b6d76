//! Exact divisor and intersection theory for toric varieties of simple
//! polytopes, plus lattice models that check covering-dimension theorems
//! (KKM, Lebesgue and relatives) as executable witnesses.

pub mod chow;
pub mod covering;
pub mod dsu;
pub mod harness;
pub mod linalg;
pub mod moment;
pub mod polytope;
pub mod rational;
pub mod volume;

pub use chow::{ChowError, Divisor, RingPresentation};
pub use polytope::{FaceDescriptor, PolytopeError, SimplePolytope, StandardKind};
pub use rational::Q;

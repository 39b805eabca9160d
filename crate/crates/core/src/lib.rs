//! Exact, finite-scale probabilistic coherence spaces.
//!
//! Every object here is finite and every check is an exact rational
//! computation: PCSs are down-closed polytopes given by dual pairs of
//! descriptions, morphisms are nonnegative sparse matrices, and the linear
//! logic structure (`⊸`, `⊗`, `&`, `!`) is realized on top of them together
//! with cone constructions (products, equalizers, measure cones) and
//! substochastic kernels.

pub mod bang;
pub mod coherence;
pub mod cone;
pub mod error;
pub mod io;
pub mod kernel;
pub mod limits;
pub mod linalg;
pub mod lp;
pub mod morph;
pub mod oracle;
pub mod pcs;
pub mod polytope;
pub mod random;
pub mod rational;
pub mod stability;
pub mod suites;
pub mod tensor;
pub mod vector;
pub mod web;

pub use bang::StableFn;
pub use cone::{Cone, ConeElem};
pub use error::{PcohError, Result};
pub use kernel::{DiscreteSpace, Kernel};
pub use limits::{EqualizerCone, ProductCone};
pub use morph::{MorphMatrix, SparseMat};
pub use pcs::{biorth_closure, Pcs};
pub use polytope::Polytope;
pub use rational::Q;
pub use vector::RatVec;
pub use web::{Label, Web};

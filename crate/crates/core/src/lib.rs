//! Exact harmonic analysis on the levels of the subset lattice and of the
//! subspace lattice of a finite vector space.

pub mod closed_forms;
pub mod error;
pub mod level;
pub mod matrix;
pub mod operators;
pub mod qcomb;
pub mod spectral;
pub mod subset;
pub mod subspace;
pub mod verifier;

pub use error::{Error, Result};
pub use level::{Family, Geometry, LevelIndex};
pub use matrix::{ExactMatrix, LevelTag};
pub use qcomb::{ExactInteger, ExactRational, QParameter};
pub use subset::{Subset, SubsetGeometry};
pub use subspace::{Subspace, SubspaceGeometry};

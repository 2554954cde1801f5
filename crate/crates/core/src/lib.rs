//! Exact computer algebra for truncated p-typical Witt vectors, crystalline
//! Weyl algebras, Witt differential operators, the de Rham–Witt complex of
//! affine space, Witt line-bundle cohomology on projective space, local
//! cohomology of Drinfeld's upper half space and generalized Steinberg
//! modules.

pub mod derham_witt;
pub mod error;
pub mod linalg;
pub mod local_cohomology;
pub mod proj_cech;
pub mod rings;
pub mod sampling;
pub mod steinberg;
pub mod suites;
pub mod weyl;
pub mod witt_core;
pub mod witt_diff;

pub use error::{Error, Result};

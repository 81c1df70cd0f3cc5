//! Exact identity checking and numerical verification of gap and pinching
//! results for minimal surfaces in spheres.

pub mod cli;
pub mod error;
pub mod gaps;
pub mod geoquad;
pub mod invariants;
pub mod lemmas;
pub mod numeric;
pub mod pipeline;
pub mod ratpoly;
pub mod report;
pub mod surface;
pub mod tolerances;

pub use error::{Error, Result};

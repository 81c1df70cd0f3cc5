//! Immersion catalog, spec parsing, exact jets, adapted frames and the
//! second fundamental form with its first covariant derivative.

pub mod catalog;
pub mod frame;
pub mod harmonics;
pub mod jet;
pub mod shape;
pub mod spec;

use std::path::Path;

pub use frame::{adapted_frame, FrameData};
pub use jet::{Jet, Taylor2};
pub use shape::{covariant_grad_h, second_fundamental_form, CovariantGradH, ShapePair};
pub use spec::{Chart, ImmersionSpec};

use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

/// Resolves a catalog name or a path to a spec file.
pub fn load_immersion(source: &str, tol: &Tolerances) -> Result<ImmersionSpec> {
    match catalog::lookup(source) {
        Ok(spec) => Ok(spec),
        Err(_) => {
            let path = Path::new(source);
            if path.is_file() {
                ImmersionSpec::from_file(path, tol)
            } else {
                Err(Error::UnknownSurface(source.to_string()))
            }
        }
    }
}

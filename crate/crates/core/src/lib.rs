//! Torus localization for Gromov–Witten invariants of projective hypersurfaces
//! in genus zero and one, in exact rational arithmetic.

pub mod error;
pub mod exactnum;
pub mod graphs;
pub mod integrals;
pub mod localize;
pub mod posets;

pub use error::{Error, Result};
pub use exactnum::{sample_weights, BigRat, RatString, WeightAssignment};
pub use localize::{gw0_hypersurface, gw1_hypersurface_threefold, EvalOptions, Evaluation, SumMode};

/// Engine version, recorded in every result document.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

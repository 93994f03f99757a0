//! Exact construction, validation and optimization of triangulations and
//! dissections of convex polytopes.

pub mod error;
pub mod exactgeom;
pub mod pointconfig;
pub mod simplexrel;
pub mod complexes;
pub mod families;
pub mod extremal;

pub use error::{Error, Result};
pub use exactgeom::{Point, Rat};
pub use pointconfig::PointConfiguration;

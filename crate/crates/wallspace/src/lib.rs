//! Measured wallspaces for groups acting on cube complexes, trees, and the
//! hyperbolic plane, with graph-of-groups gluing, dispersal diagnostics, and
//! properness experiments.

pub mod assembly;
pub mod cube;
pub mod dispersal;
pub mod error;
pub mod graph_spec;
pub mod group;
pub mod hyperbolic;
pub mod interval;
pub mod space;

pub use error::{Error, Result};

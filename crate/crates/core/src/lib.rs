//! Point sets in `R^d` without large holes, built from base-2 digital nets.

pub mod bits;
pub mod bounds;
pub mod embed;
pub mod error;
pub mod geom;
pub mod goodset;
pub mod holes;
pub mod io;
pub mod netgen;
pub mod pipeline;

pub use error::{Error, Result};

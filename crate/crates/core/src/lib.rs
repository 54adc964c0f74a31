pub mod boundary;
pub mod bspline;
pub mod error;
pub mod metrics;
pub mod problem;
pub mod residual;
pub mod solver;
pub mod stepper;

mod banded;

pub use error::{Edge, Error, Result};

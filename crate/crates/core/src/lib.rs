pub mod error;
pub mod functions;
pub mod gibbs;
pub mod padic;
pub mod poly;
pub mod potts;
pub mod sampling;
pub mod symbolic;

pub use error::{Error, Result};
pub use padic::{Ball, Norm, OrdBound, PadicNumber, Sphere, Valuation, DEFAULT_PRECISION};

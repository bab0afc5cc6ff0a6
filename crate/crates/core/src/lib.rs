pub mod arith;
pub mod cli;
pub mod cohomology;
pub mod cyclotomic;
pub mod error;
pub mod fq_poly;
pub mod heisenberg;
pub mod linalg;
pub mod regular;
pub mod spectral;
pub mod units;
pub mod valuation;

pub use error::{Error, Result};

pub mod error;
pub mod exactnum;
pub mod localtree;

pub use error::{Error, Result};
pub mod cli;
pub mod congruence;
pub mod quatalg;
mod serde_rational;

pub mod cli;
pub mod descent;
pub mod error;
pub mod group;
pub mod linalg;
pub mod local_field;
pub mod logarithm;
pub mod oracle;
pub mod outcome;
pub mod rep;
pub mod sampling;

pub use error::{Error, Result};

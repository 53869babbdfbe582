pub mod algebra;
pub mod bias;
pub mod classic;
pub mod cli;
pub mod curve;
pub mod drh;
pub mod lfunc;
pub mod error;

pub use error::{Error, Result};

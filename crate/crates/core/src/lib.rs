pub mod classify;
pub mod cli;
pub mod error;
pub mod field;
pub mod freeness;
pub mod ore;
pub mod skew;

pub use error::{Error, Result};

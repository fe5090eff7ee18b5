pub mod error;
pub mod numeric;

pub use error::{Error, Result};
pub mod cli;
pub mod curves;
pub mod finitefield;
pub mod search;
pub mod sequence;
pub mod traces;

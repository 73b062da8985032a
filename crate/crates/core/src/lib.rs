pub mod analysis;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod scalar;
pub mod space;
pub mod system;

pub use error::{Error, Result};

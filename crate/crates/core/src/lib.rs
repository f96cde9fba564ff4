pub mod bell;
pub mod cli;
pub mod error;
pub mod output;
pub mod sampling;
pub mod special;
pub mod states;
pub mod tomography;

pub use error::{Error, Result};

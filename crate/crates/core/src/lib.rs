pub mod code;
pub mod error;
pub mod gf3;
pub mod weight;
pub mod hadamard;
pub mod canonical;
pub mod catalog;

pub use error::{Error, Result};

pub mod arithmetic;
pub mod decomposer;
pub mod error;
pub mod jordan;
pub mod linalg;
pub mod powers;
pub mod sampling;
pub mod selftest;

pub use error::{Error, Result};

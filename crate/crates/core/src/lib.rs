pub mod attacks;
pub mod bench;
pub mod cli;
pub mod decompose;
pub mod error;
pub mod linalg;
pub mod platform;
pub mod protocols;
pub mod span;
pub mod wire;

pub use error::{Error, Result};

pub mod algebra;
pub mod artin_schreier;
pub mod elliptic;
pub mod error;
pub mod geometry;
pub mod eval;
pub mod logic;
pub mod model;
pub mod verify;

pub use error::{Error, Result};

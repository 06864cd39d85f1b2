pub mod closure;
pub mod error;
pub mod fixtures;
pub mod grading;
pub mod lie;
pub mod linalg;
pub mod sl2;
pub mod stratum;
pub mod weyl;

pub use error::{Error, Result};

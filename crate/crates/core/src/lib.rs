pub mod bounds;
pub mod cli;
pub mod error;
pub mod haar_average;
pub mod linalg;
pub mod logbase;
pub mod measures;
pub mod mub;
pub mod states;
pub mod subentropy;

pub use error::{Error, Result};
pub use logbase::LogBase;

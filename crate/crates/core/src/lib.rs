pub mod bautin;
pub mod bounds;
pub mod diophantine;
pub mod error;
pub mod generators;
pub mod interval;
pub mod linalg;
pub mod rational;
pub mod series;
pub mod upoly;
pub mod zeros;

pub use error::{Error, Result};

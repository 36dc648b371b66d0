pub mod error;
pub mod fnspace;
pub mod fock;
pub mod states;
pub mod sugawara;

pub use error::{Error, Result};

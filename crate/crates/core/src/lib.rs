pub mod cli;
pub mod diagrams;
pub mod error;
pub mod exactla;
pub mod freegroup;
pub mod freelie;
pub mod johnson;
mod memo;
pub mod tsa;
pub mod verify;

pub use error::{Error, Result};

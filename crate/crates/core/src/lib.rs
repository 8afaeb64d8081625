pub mod braided;
pub mod cli;
pub mod cochain;
pub mod error;
pub mod fermion;
pub mod group;
pub mod io;
pub mod linalg;
pub mod lyndon;
pub mod obstruct;
pub mod pipeline;
pub mod qz;
pub mod scenario;
pub mod supergroup;

pub use error::{Error, Result};
pub use qz::QZ;

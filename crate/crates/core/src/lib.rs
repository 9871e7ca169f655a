//! Traveling vortex pairs and vortex rings for wave maps and Schrodinger maps into `S^2`.

pub mod ansatz;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod fields;
pub mod io;
pub mod profile;
pub mod reconstruct;
pub mod reduction;
pub mod solver;
pub mod stereo;

pub use error::{Error, Result};

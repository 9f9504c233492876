//! Frame-randomized QAOA on frustrated Ising rings: circuit construction,
//! depth-preserving twirling passes, statevector and noisy-trajectory
//! simulation, and energy-landscape statistics.

pub mod circuit;
pub mod error;
pub mod ising;
pub mod landscape;
pub mod qaoa;
pub mod seed;
pub mod sim;
pub mod twirl;

pub use error::{Error, Result};

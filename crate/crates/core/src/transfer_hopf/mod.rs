//! Radiation transfer through absorbing matter and the Hopf boundary value problem.

mod hopf;
mod profile;
mod transfer;

pub use hopf::*;
pub use profile::{HopfProfile, TabulatedProfile};
pub use transfer::*;

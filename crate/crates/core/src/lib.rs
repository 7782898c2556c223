// `!(a < b)` is the NaN-rejecting form throughout
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beam_focusing;
pub mod error;
pub mod group;
pub mod numerics;
pub mod oracles;
pub mod plasma_bunch;
pub mod plasma_resonance;
pub mod quasi_chaplygin;
pub mod runner;
pub mod transfer_hopf;

pub use error::{Error, Result};

//! Separability tests, operator Schmidt decompositions and entanglement
//! witnesses for symmetric bipartite quantum states.

pub mod cli;
pub mod criteria;
pub mod error;
pub mod io;
pub mod numerics;
pub mod schmidt;
pub mod states;
pub mod witness;

pub use error::{Error, Result};

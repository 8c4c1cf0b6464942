//! Simulation and analysis toolkit for the go-or-grow delayed logistic
//! equation and its underlying stochastic lattice model.

pub mod dde;
pub mod error;
pub mod abm;
pub mod acceptance;
pub mod analysis;
pub mod model;
pub mod phi;
pub mod spectral;

pub use error::{Error, Result};

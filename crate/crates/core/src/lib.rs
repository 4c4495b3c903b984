//! Numerical toolkit for the Penner matrix model with coupling sequences
//! `g_n` satisfying `n g_n → t`.

pub mod asympt;
pub mod coupling;
pub mod dd;
pub mod electro;
pub mod error;
pub mod laguerre;
pub mod partition;
pub mod quad;
pub mod spectral;
pub mod specfun;

pub use error::{Error, Result};

//! Quantum modularity laboratory for partial theta series with periodic coefficients.

pub mod cyclo;
pub mod error;
pub mod lvalues;
pub mod modgroup;
pub mod numerics;
pub mod periodic;
pub mod qknots;
pub mod qmf;
pub mod report;
pub mod suite;
pub mod theta;

pub use error::{Error, Result};

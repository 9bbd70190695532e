//! Generating graphs of the cyclic groups `Z_n`: divisor classes, minimal
//! generating sets, graph invariants and spectra through quotient matrices,
//! with brute-force oracles for every closed form.

pub mod error;
pub mod gensets;
pub mod graph;
pub mod linalg;
pub mod numth;
pub mod oracle;
pub mod partition;
pub mod spectra;

pub use error::{Error, Result};
pub use numth::{factorize, FactoredInt};

//! Giambelli compatible point processes.
//!
//! Symmetric-function evaluations on partitions, z-measures and their
//! mixtures, the discrete hypergeometric and Whittaker correlation kernels,
//! orthogonal polynomial ensembles over atomic measures, and brute-force
//! oracles that check the closed forms against direct summation.

pub mod error;
pub mod kernels;
pub mod oracle;
pub mod ope;
pub mod partition;
pub mod scalar;
pub mod specfun;
pub mod symfunc;
pub mod zmeasure;

pub use error::{Error, Result};
pub use partition::{dim_skew, enumerate_partitions, FrobeniusCoords, HalfInt, LatticeConfiguration, Partition};

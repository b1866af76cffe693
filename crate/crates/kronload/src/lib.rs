//! Exact symmetric-group character tables, Kronecker coefficients, and
//! eigenvector loadings of integer partitions, with threshold classifiers
//! that certify vanishing or non-vanishing of coefficients from loadings
//! alone.
//!
//! The pipeline: enumerate partitions of `n` in descending lexicographic
//! order, compute dominant eigenvectors of the part-product and L1-distance
//! matrices over that list by power iteration, rescale them to per-partition
//! loadings in `[0, 100]`, and compare triple loadings against thresholds
//! obtained from exhaustive symmetry-reduced scans (or conjectured closed
//! forms for large `n`).

pub mod characters;
pub mod error;
pub mod kronecker;
pub mod loadings;
pub mod partitions;
pub mod stats;
pub mod thresholds;

pub use error::{Error, Result};

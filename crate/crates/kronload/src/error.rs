//! Shared error type for every fallible operation in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across partitions, characters, coefficients,
/// loadings, and scans.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed partition input: bad syntax, increasing parts, interior zeros.
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    /// Parts sum to something other than the requested total.
    #[error("partition sums to {actual}, expected {expected}")]
    SumMismatch { expected: u64, actual: u64 },

    /// Two objects indexed by different totals were combined.
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: u32, right: u32 },

    /// An argument is outside the operation's domain (n = 0, wrong residue, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A fixed-width integer computation would exceed its range and was
    /// stopped before wrapping.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    /// A coefficient accumulation failed the exact divisibility check; this
    /// indicates a corrupted or inconsistent character table.
    #[error("character sum for {context} is not divisible by the group order")]
    DivisibilityViolation { context: String },

    /// Power iteration hit the iteration cap before reaching tolerance.
    #[error("power iteration failed to converge within {max_iters} iterations (last delta {last_delta:e})")]
    NonConvergence { max_iters: u32, last_delta: f64 },

    /// The iterate direction flipped sign, so the dominant eigenvalue is not
    /// positive and normalized iterates cannot settle.
    #[error("power iteration oscillates at iteration {iteration}; dominant eigenvalue is not positive")]
    Oscillation { iteration: u32 },

    /// The dominant eigenvector is constant, so min-max normalization is
    /// undefined.
    #[error("degenerate eigenvector spread {spread:e}; loadings are undefined")]
    DegenerateSpread { spread: f64 },

    /// The request exceeds a configured time or memory budget and an explicit
    /// override is required.
    #[error("resource budget exceeded: {0}")]
    ResourceBudget(String),

    /// Threshold classification found both rules firing at once, which the
    /// defining inequalities make impossible on consistent inputs.
    #[error("inconsistent thresholds: both classification rules fired for the same triple")]
    InconsistentThresholds,

    /// A conjecture-mode search ended with no qualifying partition.
    #[error("no self-paired triple with vanishing coefficient exists for n={0}")]
    NoVanishingSelfTriple(u32),
}

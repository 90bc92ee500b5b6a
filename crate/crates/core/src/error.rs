use alloc::string::String;

/// Errors reported by the core library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("beta-set size {t} is smaller than the partition length {len}")]
    BetaSetTooSmall { t: usize, len: usize },

    #[error("e must be at least 2, got {0}")]
    InvalidE(usize),

    #[error("residue {r} out of range for e = {e}")]
    InvalidResidue { r: usize, e: usize },

    #[error("quantum integer index must be non-negative, got {0}")]
    NegativeQuantumIndex(i64),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("polynomial division is not exact")]
    NotDivisible,

    #[error("partition sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("pairing precondition violated: {0}")]
    Pairing(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An internal unitriangularity or positivity assumption of the
    /// canonical-basis elimination did not hold.
    #[error("canonical basis invariant broken: {0}")]
    Invariant(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_e(e: usize) -> Result<()> {
    if e < 2 {
        return Err(Error::InvalidE(e));
    }
    Ok(())
}

pub(crate) fn check_residue(e: usize, r: usize) -> Result<()> {
    check_e(e)?;
    if r >= e {
        return Err(Error::InvalidResidue { r, e });
    }
    Ok(())
}

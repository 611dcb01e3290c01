use thiserror::Error;

/// Errors raised by the library.
///
/// `Input` covers anything the caller can fix by supplying different data.
/// `Invariant` means a mathematical consistency check failed; it carries a
/// witness string and indicates a bug (or a convention error), never bad input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("level mismatch: expected {expected}, found {found}")]
    LevelMismatch { expected: u32, found: u32 },
    #[error("matrix is not invertible mod {level}: {matrix}")]
    NotInvertible { level: u32, matrix: String },
    #[error("group closure exceeds the element cap of {cap}")]
    GroupTooLarge { cap: usize },
    #[error("H_K is not contained in det G (offending unit {unit})")]
    GaloisNotInDet { unit: u32 },
    #[error("rank deficiency: expected rank {expected}, found {found}")]
    RankDeficient { expected: usize, found: usize },
    #[error("Runge condition violated: sigma must be a proper subset of the {orbits} cusp orbits")]
    SigmaNotProper { orbits: usize },
    #[error("invariant failure: {0}")]
    Invariant(String),
}

impl Error {
    /// True for failures of internal mathematical invariants, as opposed to
    /// rejected input.
    pub fn is_invariant(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by construction and computation routines.
///
/// [`Error::Refusal`] marks inputs that are well formed but outside the
/// mathematical domain of an operation (e.g. asking for the torus-case count
/// when the small Weyl group is nontrivial). Everything else is an input or
/// resource error.
#[derive(Debug, Error)]
pub enum Error {
    /// The Cartan type string could not be parsed or is unsupported.
    #[error("unknown Cartan type `{0}`")]
    UnknownCartanType(String),

    /// A custom cocharacter lattice failed validation.
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    /// Group enumeration exceeded the configured cap.
    #[error("enumeration cap of {cap} elements exceeded")]
    CapExceeded {
        /// The cap that was in force.
        cap: usize,
    },

    /// Elements from different root data were mixed in one operation.
    #[error("elements belong to different root data")]
    MixedParents,

    /// Two blocks were composed whose endpoints do not match.
    #[error("blocks are not composable: source/target mismatch")]
    NotComposable,

    /// An element was passed to a block operation but is not a member.
    #[error("element is not a member of the block")]
    NotInBlock,

    /// An element was expected in a reflection subgroup but is not there.
    #[error("element does not lie in the reflection subgroup")]
    NotInSubgroup,

    /// A word over the generators failed a reducedness precondition.
    #[error("word is not reduced")]
    NotReduced,

    /// A prime power `q` is incompatible with a character parameter.
    #[error("q = {q} is incompatible with the parameter: {reason}")]
    BadQ {
        /// The offending prime power.
        q: u64,
        /// Why it was rejected.
        reason: String,
    },

    /// Malformed user input (config file, word string, flags).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Well-formed input outside the mathematical domain of the operation.
    #[error("refused: {0}")]
    Refusal(String),

    /// An internal consistency check failed; indicates a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

//! Error type shared by every module of the crate.

use thiserror::Error;

/// Domain errors. Parse errors carry the offending token or line so CLI
/// messages can name the violated precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("diagram parse error: {0}")]
    DiagramParse(String),

    #[error("matrix parse error: {0}")]
    MatrixParse(String),

    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid generalized Cartan matrix: {0}")]
    InvalidCartan(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("rank {0} exceeds the supported maximum of {max}", max = crate::coxeter::MAX_RANK)]
    RankTooLarge(usize),

    #[error("operation requires an irreducible system: {0}")]
    NotIrreducible(String),

    #[error("operation requires a nonempty system")]
    EmptySystem,

    #[error("subset {0} is not spherical")]
    NotSpherical(String),

    #[error("family `{family}` requires n >= {min}, got {n}")]
    FamilyParameter {
        family: &'static str,
        min: usize,
        n: usize,
    },

    #[error("unsupported Coxeter label {0}: exact enumeration covers entries 2, 3, 4, 6 and infinity only")]
    UnsupportedRing(u32),

    #[error("finite Weyl group: no sigma candidates")]
    FiniteWeylGroup,

    #[error("growth polynomial is tabulated for finite types only, got {0}")]
    NotFiniteType(String),

    #[error("covolume parameter q must be >= 2, got {0}")]
    InvalidQ(u64),

    #[error("malformed simplicial complex: {0}")]
    MalformedComplex(String),
}

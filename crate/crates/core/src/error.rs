//! Shared error type for the exact and float pipelines.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    Singular,

    #[error("group closure exceeded cap of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("source-to-representation map is not a homomorphism: colliding source words disagree on rho")]
    NotAHomomorphism,

    #[error(
        "per-degree rank {found} disagrees with Molien coefficient {expected} at degree {degree}"
    )]
    MolienMismatch {
        degree: usize,
        expected: usize,
        found: usize,
    },

    #[error("input is not covariant under the group action")]
    NotCovariant,

    #[error("degree-{degree} slice does not lie in the module generated by the basis")]
    NotInModule { degree: usize },

    #[error("input degree {degree} exceeds the basis certification degree {certified}")]
    DegreeBeyondCertification { degree: usize, certified: usize },

    #[error("no invariant-coefficient solution found up to derivative order {order}")]
    NoSolutionAtOrder { order: usize },

    #[error("point lies outside the admissible domain")]
    OutsideDomain,

    #[error("group is not orthogonal: the euclidean norm is not invariant")]
    NotOrthogonal,

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the variant, used in CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::Singular => "Singular",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::NotAHomomorphism => "NotAHomomorphism",
            Error::MolienMismatch { .. } => "MolienMismatch",
            Error::NotCovariant => "NotCovariant",
            Error::NotInModule { .. } => "NotInModule",
            Error::DegreeBeyondCertification { .. } => "DegreeBeyondCertification",
            Error::NoSolutionAtOrder { .. } => "NoSolutionAtOrder",
            Error::OutsideDomain => "OutsideDomain",
            Error::NotOrthogonal => "NotOrthogonal",
            Error::Parse(_) => "ConfigParse",
        }
    }
}

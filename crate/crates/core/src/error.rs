use thiserror::Error;

/// Errors raised by the exact kernels and the verification pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{dividend} is not divisible by {divisor}")]
    NotDivisible { dividend: String, divisor: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("operator index {index} out of range for order {order}")]
    Index { index: usize, order: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("moment of degree {needed} requested but the table only reaches degree {cap}")]
    MomentCapExceeded { needed: u32, cap: u32 },

    #[error(
        "moments of degree {degree} are not determined by the Pearson relations (free: {free:?})"
    )]
    Underdetermined { degree: u32, free: Vec<(u32, u32)> },

    #[error("Pearson relations of degree {degree} are inconsistent")]
    Inconsistent { degree: u32 },

    #[error("det(Phi) = ac - b^2 vanishes identically")]
    DegenerateDeterminant,

    #[error("entries of Q_{degree} are dependent modulo lower degree polynomials")]
    Unsolvable { degree: u32 },

    #[error("moment matrix of degree {degree} is singular")]
    SingularMoments { degree: u32 },

    #[error("eigen-matrix residual at degree {degree} is nonzero")]
    NonzeroResidual { degree: u32 },

    #[error("family {0:?} has no factored symmetry factor; only the moment route is available")]
    NoCarrier(String),

    #[error("unknown family {0:?}")]
    UnknownFamily(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

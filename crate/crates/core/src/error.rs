use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Input errors (malformed data, violated preconditions) and semantic
/// failures (a matrix that is not in the group, a conjugate that leaves
/// the rational span) share one type; callers such as the CLI map them to
/// exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("argument must be nonzero")]
    ZeroArgument,

    #[error("{0} is not a prime")]
    NotPrime(String),

    #[error("cannot factor {0}: exceeds the supported range")]
    TooLargeToFactor(String),

    #[error("generators span a lattice of rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operands belong to different quaternion algebras")]
    AlgebraMismatch,

    #[error("operands use different involutions")]
    InvolutionMismatch,

    #[error("operands live over different quadratic fields (sqrt {0} vs sqrt {1})")]
    FieldMismatch(i64, i64),

    #[error("invalid quadratic field parameter {0}: must be a squarefree integer > 1")]
    InvalidFieldParameter(i64),

    #[error("{0} is not invertible")]
    NotInvertible(String),

    #[error("involution parameter must be a pure quaternion, got {0}")]
    NotPure(String),

    #[error("linear map is not an orthogonal involution: {0}")]
    NotAnInvolution(String),

    #[error("{0} does not lie in H+")]
    NotInPlusSpace(String),

    #[error("not an order: {0}")]
    NotAnOrder(String),

    #[error("order is not stable under the involution")]
    NotSharpStable,

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("not integral: {0}")]
    NotIntegral(String),

    #[error("value leaves the rational span: {0}")]
    NotRational(String),

    #[error("superorder scan refuses prime {p} above the bound {bound}")]
    ScanPrimeTooLarge { p: u64, bound: u64 },

    #[error("algebra is indefinite; its unit group is infinite")]
    IndefiniteAlgebra,

    #[error("normalizing needs sqrt({0}), an imaginary extension")]
    ImaginaryExtension(String),

    #[error("matrix is not in SL‡(2,H): {}", .0.join("; "))]
    NotMember(Vec<String>),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

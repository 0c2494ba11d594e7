use crate::ratlin::DimensionMismatch;
use crate::text::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{0}` declared twice")]
    DuplicateGenerator(String),
    #[error("generator `{name}` has degree {degree}; degrees must be at least 2")]
    InvalidDegree { name: String, degree: u32 },
    #[error("degree {degree} is beyond the exactness bound {bound}")]
    BeyondBound { degree: u32, bound: u32 },
    #[error("{what}: expected degree {expected}, found {found}")]
    DegreeMismatch {
        what: String,
        expected: u32,
        found: u32,
    },
    #[error("{0} is not homogeneous")]
    NotHomogeneous(String),
    #[error("models do not match: {0}")]
    ModelMismatch(String),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("model `{0}` is not minimal")]
    NotMinimal(String),
    #[error("the class of {representative} in H^{degree} is nonzero (generator `{generator}`)")]
    Obstruction {
        generator: String,
        degree: u32,
        representative: String,
    },
    #[error("H^{degree} has dimension {dimension}; odd cohomology must vanish")]
    OddCohomology { degree: u32, dimension: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("range exhausted: {0}")]
    Range(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Dimension(#[from] DimensionMismatch),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("composite of differentials is nonzero")]
    CompositionNonzero,
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("invalid simplicial complex: {0}")]
    InvalidComplex(String),
    #[error("cochains live on different complexes")]
    ComplexMismatch,
    #[error("cochain is not closed: {0}")]
    NotClosed(String),
    #[error("cochain is not closed modulo the integers")]
    NotClosedModZ,
    #[error("apex {0} is not joined to every simplex of the intersection")]
    NotACone(usize),
    #[error("invalid simplicial map: {0}")]
    MapInvalid(String),
    #[error("Deligne cochains live over different bases or levels")]
    BaseMismatch,
    #[error("grading mismatch: {0}")]
    GradingMismatch(String),
    #[error("matrix is not a formal connection: {0}")]
    NotAConnection(String),
    #[error("operation not supported by the {0} backend")]
    BackendUnsupported(String),
    #[error("not a refinement: {0}")]
    NotARefinement(String),
    #[error("not a chain complex: {0}")]
    NotAComplex(String),
    #[error("simplicial identity violated: {0}")]
    IdentitiesViolated(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;

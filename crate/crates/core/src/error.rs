use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch in {op}: {left:?} against {right:?}")]
    ShapeMismatch { op: &'static str, left: (usize, usize), right: (usize, usize) },

    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare { op: &'static str, rows: usize, cols: usize },

    #[error("leading coefficient ({dim}x{dim}) is singular")]
    SingularLeadingCoefficient { dim: usize },

    #[error("order {required} requested but only order {available} is available")]
    InsufficientOrder { required: usize, available: usize },

    #[error("subspaces of dimensions {dims:?} do not form a direct sum of the {ambient}-dimensional space")]
    NotADecomposition { ambient: usize, dims: Vec<usize> },

    #[error("a {sub_dim}-dimensional subspace is not contained in the {ambient_dim}-dimensional ambient subspace")]
    NotContained { sub_dim: usize, ambient_dim: usize },

    #[error(
        "given basis of dimension {given_dim} is not a complement of the {sub_dim}-dimensional \
         subspace inside the {ambient_dim}-dimensional ambient subspace"
    )]
    InvalidComplement { given_dim: usize, sub_dim: usize, ambient_dim: usize },

    #[error("map is not injective on the {dim}-dimensional subspace (rank {rank})")]
    NotInjective { dim: usize, rank: usize },

    #[error("image of the {dim}-dimensional subspace does not equal the {target_dim}-dimensional target")]
    ImageMismatch { dim: usize, target_dim: usize },

    #[error("coefficient L_{power} is needed at stage {stage}, but the series is truncated at order {available}")]
    TruncationExhausted { stage: usize, power: usize, available: usize },

    #[error(
        "no stabilization certificate after {stages} stages: range dimensions sum to {rank_reached}, \
         generic rank is {generic_rank}"
    )]
    NoStabilization { stages: usize, rank_reached: usize, generic_rank: usize },

    #[error("stabilization index is not known yet (only {stages} stages computed)")]
    NotStabilized { stages: usize },

    #[error("the family is identically zero")]
    ZeroFamily,

    #[error("diagonalization residual is nonzero at order {order}")]
    ResidualNonzero { order: usize },

    #[error("root element must be a nonzero vector")]
    ZeroRoot,

    #[error("vector has length {found}, expected {expected}")]
    VectorLength { expected: usize, found: usize },

    #[error("operation needs a polynomial of degree at least 1")]
    DegreeZero,

    #[error("family is generically singular: rank {rank} of {dim}x{dim}")]
    GenericallySingular { rank: usize, dim: usize },

    #[error("no Laurent inverse with pole order at most {max_pole}")]
    PoleBoundExceeded { max_pole: usize },

    #[error("pole order {pole} is outside the scope of the resolvent recurrences (needs at most 1)")]
    PoleOrderTooHigh { pole: usize },

    #[error("stage {stage}, {subspace}: {source}")]
    AtStage {
        stage: usize,
        subspace: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_stage(self, stage: usize, subspace: &'static str) -> Self {
        Error::AtStage { stage, subspace, source: Box::new(self) }
    }

    /// The innermost error, with any stage context stripped.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::AtStage { source, .. } => source.root_cause(),
            other => other,
        }
    }
}

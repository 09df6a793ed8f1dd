use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("invalid JSON: {0}")]
    Json(String),

    #[error("family must have at least one row and one column, got {rows}x{cols}")]
    EmptyShape { rows: usize, cols: usize },

    #[error("coefficient of power {power}: expected a {expected_rows}x{expected_cols} grid, found {found}")]
    GridShape { power: isize, expected_rows: usize, expected_cols: usize, found: String },

    #[error("coefficient of power {power}, entry ({row}, {col}): malformed rational {text:?}")]
    MalformedRational { power: isize, row: usize, col: usize, text: String },

    #[error("malformed power {0:?}: expected an integer")]
    MalformedPower(String),

    #[error("power {0} appears more than once")]
    DuplicatePower(isize),

    #[error("power {power} is below -declared_pole = -{declared_pole}")]
    NegativePower { power: isize, declared_pole: usize },

    #[error("power {power} exceeds trunc_or_degree = {limit}")]
    PowerOutOfRange { power: isize, limit: usize },

    #[error("a truncated_series family needs trunc_or_degree")]
    MissingTruncation,

    #[error("complement file: {0}")]
    Complement(String),

    #[error(transparent)]
    Core(#[from] opfamily::Error),
}

impl CliError {
    /// 1 for bad input, 2 when stabilization cannot be certified, 3 for internal-consistency failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e.root_cause() {
                opfamily::Error::NoStabilization { .. } | opfamily::Error::TruncationExhausted { .. } => 2,
                opfamily::Error::ResidualNonzero { .. } => 3,
                _ => 1,
            },
            _ => 1,
        }
    }
}

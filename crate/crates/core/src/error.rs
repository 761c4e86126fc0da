use thiserror::Error;

/// Errors produced by the library.
///
/// Every variant maps onto a stable, machine-readable reason code through
/// [`Error::code`], which the CLI prints alongside the exit status.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input at line {line}: {reason}")]
    MalformedInput { line: usize, reason: String },

    #[error("GCM axiom violated: {0}")]
    AxiomViolation(String),

    #[error("generator index {index} is out of range (rank {rank})")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("element is not straight (checked up to n = {n_checked}{})", witness.map(|n| format!(", fails at n = {n}")).unwrap_or_default())]
    NotStraight {
        n_checked: usize,
        witness: Option<usize>,
    },

    #[error("element is not standard (conjugator of length {conjugator_length} required)")]
    NotStandard { conjugator_length: usize },

    #[error("parabolic closure has a spherical component: {0}")]
    EssentialityViolation(String),

    #[error("no standard conjugate within radius {radius} ({examined} candidates examined)")]
    SearchExhausted { radius: usize, examined: usize },

    #[error("height cutoff too small: found {found} of {expected} inversions")]
    CutoffTooSmall { found: usize, expected: usize },

    #[error("root {root:?} undecided after {n_max} iterations")]
    Undecided { root: Vec<i64>, n_max: usize },

    #[error("comparison inconclusive at height cutoff {height}")]
    Inconclusive { height: u32 },

    #[error("vector {0:?} is not an imaginary root")]
    NotImaginary(Vec<i64>),

    #[error("the nub is trivial")]
    TrivialNub,

    #[error("q = {0} is not a prime power >= 2")]
    BadQ(u64),

    #[error("oracle could not decide root {root:?} within its bounds")]
    OracleUndecided { root: Vec<i64> },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Stable snake_case identifier for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedInput { .. } => "malformed_input",
            Error::AxiomViolation(_) => "axiom_violation",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::Overflow(_) => "overflow",
            Error::NotStraight { .. } => "not_straight",
            Error::NotStandard { .. } => "not_standard",
            Error::EssentialityViolation(_) => "essentiality_violation",
            Error::SearchExhausted { .. } => "search_exhausted",
            Error::CutoffTooSmall { .. } => "cutoff_too_small",
            Error::Undecided { .. } => "undecided",
            Error::Inconclusive { .. } => "inconclusive",
            Error::NotImaginary(_) => "not_imaginary",
            Error::TrivialNub => "trivial_nub",
            Error::BadQ(_) => "bad_q",
            Error::OracleUndecided { .. } => "oracle_undecided",
            Error::Internal(_) => "internal",
        }
    }

    /// True for outcomes caused by truncation or bounded search rather than
    /// by a definite mathematical answer.
    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            Error::Undecided { .. } | Error::Inconclusive { .. } | Error::OracleUndecided { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

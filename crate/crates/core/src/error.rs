use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("coefficient field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("dimension mismatch: expected {expected} variables, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("q has a unit term: {0}")]
    UnitInQ(String),
    #[error("I not m-primary at origin: {0}")]
    NotMPrimary(String),
    #[error("support not confined to origin: {0}")]
    SupportNotAtOrigin(String),
    #[error("grade zero: Ratliff-Rush chain need not terminate meaningfully")]
    GradeZero,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("non-homogeneous input: {0}")]
    NonHomogeneous(String),
    #[error("no superficial candidate found in {0} attempts")]
    NoSuperficial(usize),
    #[error("Koszul budget exceeded: {0}")]
    KoszulBudget(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("internal check failed: {0}")]
    Certificate(String),
}

impl Error {
    /// Budget exhaustion, as opposed to a mathematical failure.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::Budget(_) | Error::KoszulBudget(_) | Error::NoSuperficial(_)
        )
    }
}

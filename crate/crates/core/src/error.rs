use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrimeP(u64),
    #[error("q = {0} is too small (q >= 3 required; pass --allow-q2 to override)")]
    QTooSmall(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field of size {0} exceeds the table limit")]
    FieldTooLarge(u128),
    #[error("no embedding of F_{{{src_p}^{src_deg}}} into F_{{{dst_p}^{dst_deg}}}")]
    NoEmbedding { src_p: u32, src_deg: u32, dst_p: u32, dst_deg: u32 },
    #[error("m = {m} is not coprime to the characteristic {p}")]
    MNotCoprimeToP { m: u64, p: u32 },
    #[error("coefficient fields do not match")]
    FieldMismatch,
    #[error("division by the zero polynomial")]
    DivideByZeroPoly,
    #[error("constant polynomial where degree >= 1 is required")]
    ConstantPolynomial,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("element does not belong to the algebra it is evaluated in")]
    AlgebraMismatch,
    #[error("{0} is not a prime of A")]
    NotPrime(String),
    #[error("budget exceeded: {needed} > {budget} ({what})")]
    BudgetExceeded { what: String, needed: u128, budget: u128 },
    #[error("Bernoulli-Goss value B({0}) is not a polynomial")]
    NonIntegralResult(u64),
    #[error("c = {c} outside {{2, ..., {max}}}")]
    COutOfRange { c: u64, max: u64 },
    #[error("valuation {valuation} is outside the convergence domain v > -q/(q-1)")]
    OutsideConvergenceDomain { valuation: i64 },
    #[error("coefficient of T^-{exponent} does not lie in F_q")]
    DescentFailure { exponent: i64 },
    #[error("P-adic element with valuation {0} is outside the domain (v_P >= 1 required)")]
    NotInDomain(String),
    #[error("unexpected valuation v_P = {0}")]
    UnexpectedValuation(u32),
    #[error("certificates disagree for {0}")]
    CertificateMismatch(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn budget(what: impl Into<String>, needed: u128, budget: u128) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            needed,
            budget,
        }
    }

    /// Short machine-readable tag used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonPrimeP(_) => "NonPrimeP",
            Error::QTooSmall(_) => "QTooSmall",
            Error::NotPrimePower(_) => "NotPrimePower",
            Error::FieldTooLarge(_) => "FieldTooLarge",
            Error::NoEmbedding { .. } => "NoEmbedding",
            Error::MNotCoprimeToP { .. } => "MNotCoprimeToP",
            Error::FieldMismatch => "FieldMismatch",
            Error::DivideByZeroPoly => "DivideByZeroPoly",
            Error::ConstantPolynomial => "ConstantPolynomial",
            Error::NotMonic => "NotMonic",
            Error::InexactDivision(_) => "InexactDivision",
            Error::AlgebraMismatch => "AlgebraMismatch",
            Error::NotPrime(_) => "NotPrime",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::NonIntegralResult(_) => "NonIntegralResult",
            Error::COutOfRange { .. } => "COutOfRange",
            Error::OutsideConvergenceDomain { .. } => "OutsideConvergenceDomain",
            Error::DescentFailure { .. } => "DescentFailure",
            Error::NotInDomain(_) => "NotInDomain",
            Error::UnexpectedValuation(_) => "UnexpectedValuation",
            Error::CertificateMismatch(_) => "CertificateMismatch",
            Error::VerificationFailed(_) => "VerificationFailure",
            Error::NotInvertible(_) => "NotInvertible",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Parse(_) => "Parse",
        }
    }
}

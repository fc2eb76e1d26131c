use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("characteristic {0} is too large (must be below 65536)")]
    CharacteristicTooLarge(u32),
    #[error("field of order {p}^{k} is too large for table arithmetic")]
    FieldTooLarge { p: u32, k: u32 },
    #[error("modulus polynomial must be monic of degree {expected}")]
    BadModulus { expected: u32 },
    #[error("modulus polynomial is reducible")]
    ReducibleModulus,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("denominator vanishes at the specialization point")]
    Pole,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("coefficient {0} out of range")]
    CoefficientOutOfRange(u64),
}

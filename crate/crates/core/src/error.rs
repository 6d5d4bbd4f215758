use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("exact coefficient arithmetic overflowed at n = {n}")]
    CoefficientOverflow { n: usize },

    #[error("curve discriminant {discriminant} has prime factor {prime} not dividing the conductor {conductor}")]
    ConductorMismatch {
        discriminant: i128,
        prime: u64,
        conductor: u64,
    },

    #[error("precision unreachable: {needed} coefficients needed, ceiling is {ceiling}")]
    PrecisionUnreachable { needed: usize, ceiling: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("not a Fricke eigenform: ratio {re} + {im}i is not within 1e-6 of +1 or -1")]
    NotFrickeEigenform { re: f64, im: f64 },

    #[error("degenerate test point: |f(z)| below floor at every fallback point")]
    DegenerateTestPoint,

    #[error("Fricke eigenvalue of the form is not set")]
    FrickeEigenvalueUnset,

    #[error("intermediate Atkin-Lehner cusp unsupported: gcd({denominator}, {level}) is a proper divisor of the level")]
    UnsupportedCusp { denominator: i64, level: u64 },

    #[error("pole: j(gamma, r) = 0 at r = gamma^-1 oo; use the infinity verifier")]
    Pole,

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;

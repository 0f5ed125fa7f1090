use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid noise parameters (p={p}, r={r}): {constraint}")]
    InvalidParams {
        p: f64,
        r: f64,
        constraint: &'static str,
    },

    #[error("matrix is not Hermitian: max |m - m^H| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("{variant} formula requires {requirement} (p={p}, r={r})")]
    VariantMismatch {
        variant: &'static str,
        requirement: &'static str,
        p: f64,
        r: f64,
    },

    #[error("beta_exp={beta_exp} outside fittable range [{lower}, {upper}] for p={p}")]
    BetaOutOfRange {
        p: f64,
        beta_exp: f64,
        lower: f64,
        upper: f64,
    },

    #[error("p={p}: no noise to decompose")]
    NoNoise { p: f64 },

    #[error("no threshold in domain: {0}")]
    NoThreshold(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

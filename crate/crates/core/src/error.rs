use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max |m - m^dag| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace {trace} deviates from 1 beyond tolerance")]
    NotNormalized { trace: f64 },

    #[error("probability list has a negative entry {0}")]
    NegativeProbability(f64),

    #[error("non-finite entry in input")]
    NonFinite,

    #[error("isometry condition violated (max |J^dag J - I| = {residual:e})")]
    NotIsometry { residual: f64 },

    #[error("invalid projective decomposition: {0}")]
    InvalidPdi(String),

    #[error("invalid gluing: {0}")]
    Gluing(String),

    #[error("{name} = {value} is outside its domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("index {index} out of range for {len} blocks")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("Bloch vector has length {0} > 1")]
    InvalidBloch(f64),

    #[error("alpha and beta have mixed signs: no interior extremum")]
    NoInteriorExtremum,

    #[error("problem too large: {0}")]
    TooLarge(String),
}

pub(crate) fn check_domain(
    name: &'static str,
    value: f64,
    ok: bool,
    domain: &'static str,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            name,
            value,
            domain,
        })
    }
}

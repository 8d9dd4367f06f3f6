use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("eigenvalue {value:e} below the PSD floor")]
    NegativeEigenvalue { value: f64 },

    #[error("trace {trace} plus tail mass {tail_mass} does not sum to one")]
    TraceDeficit { trace: f64, tail_mass: f64 },

    #[error("parameter {name} = {value} outside {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("Bloch vector has norm {norm}, expected a unit vector")]
    NonUnitBloch { norm: f64 },

    #[error("adaptive truncation hit cutoff cap {cap} with tail mass {tail_mass:e}")]
    TruncationExhausted { cap: usize, tail_mass: f64 },

    #[error("every measurement outcome has zero probability")]
    AllOutcomesVanish,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("eigensolver failed to converge")]
    Eigensolver,

    #[error("record check failed: {0}")]
    Record(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_domain(
    name: &'static str,
    value: f64,
    domain: &'static str,
    ok: bool,
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

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("singular point: {0}")]
    Singular(String),
    #[error("series did not converge: {0}")]
    NonConvergence(String),
    #[error("imaginary residue {residue:e} too large for value {value:e}")]
    Residue { residue: f64, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

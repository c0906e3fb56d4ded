use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid lattice configuration: {0}")]
    InvalidConfiguration(String),
    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("pole at {0}")]
    Pole(String),
    #[error("series did not converge within {terms} terms ({what})")]
    NonConvergence { what: String, terms: usize },
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("backend cannot represent value: {0}")]
    Backend(String),
    #[error("truncation tolerance unreachable: {0}")]
    Truncation(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

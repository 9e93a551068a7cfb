//! Dimension polynomials ("strength") of linear systems of differential and
//! difference equations, computed from Gröbner bases in free modules over
//! commutative operator rings.

pub mod catalog;
pub mod cli;
pub mod coeff;
pub mod dimpoly;
pub mod dsl;
pub mod groebner;
pub mod inversive;
pub mod lexer;
pub mod operator;
pub mod par;
pub mod pipeline;
pub mod report;
pub mod scheme;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] lexer::ParseError),
    #[error("invalid system: {0}")]
    Presentation(String),
    #[error(transparent)]
    Scheme(#[from] scheme::SchemeError),
    #[error(transparent)]
    DimPoly(#[from] dimpoly::DimPolyError),
    #[error(transparent)]
    Order(#[from] operator::OperatorError),
    #[error("unknown built-in system `{0}`")]
    UnknownBuiltin(String),
    #[error("{0}")]
    Io(String),
    #[error("malformed report: {0}")]
    Json(String),
    #[error("{0}")]
    Usage(String),
}

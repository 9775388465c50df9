use thiserror::Error;

use crate::kernel::SupportClass;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),

    #[error("center must be finite, got ({0}, {1})")]
    InvalidCenter(f64, f64),

    #[error("root path needs an interior radius, got {class:?} at rho = {rho}")]
    NotInterior { class: SupportClass, rho: f64 },

    #[error("invalid interval ({a}, {b}): need a < b")]
    InvalidInterval { a: f64, b: f64 },

    #[error("node count must be at least 1")]
    ZeroNodes,

    #[error("{0}")]
    InvalidRule(&'static str),

    #[error("quadrature interval [{rule_lo}, {rule_hi}] does not meet profile support [{support_lo}, {support_hi}]")]
    OutsideSupport {
        rule_lo: f64,
        rule_hi: f64,
        support_lo: f64,
        support_hi: f64,
    },

    #[error("grid does not resolve the mollifier: epsilon {epsilon} < 2 * spacing {spacing}")]
    Unresolved { epsilon: f64, spacing: f64 },

    #[error("{0}")]
    GridClipped(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

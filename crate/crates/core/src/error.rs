use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} = {value} is outside its domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("field has {got} samples but the grid expects {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("viscosity law drops to {value} at rho = {rho}, below the lower bound {mu_lower}")]
    ViscosityBelowBound { rho: f64, value: f64, mu_lower: f64 },

    #[error("existence condition violated: lhs = {lhs} is not below the mass {mass}")]
    StationaryInfeasible { lhs: f64, mass: f64 },

    #[error("bisection for the stationary constant failed: {0}")]
    Bracket(String),

    #[error("tridiagonal solve hit pivot {pivot} in row {row}")]
    Pivot { row: usize, pivot: f64 },

    #[error("negative density {value} in cell {index} at t = {t}")]
    NegativeDensity { index: usize, value: f64, t: f64 },

    #[error("non-finite value in the state at t = {t}")]
    NonFinite { t: f64 },

    #[error("initial data rejected: {0}")]
    InitialData(String),

    #[error("every cell is at or below the vacuum threshold {threshold}")]
    AllVacuum { threshold: f64 },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("decay fit needs at least {needed} positive samples in the window, found {found}")]
    FitInfeasible { needed: usize, found: usize },
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            expected,
        }
    }
}

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what}: expected {expected:?} (rows, cols), found {found:?}")]
    DimensionMismatch {
        what: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("invalid topology: {0}")]
    InvalidTopology(&'static str),

    #[error("block {block} contradicts active assumption {assumption}")]
    AssumptionContradiction { assumption: u8, block: &'static str },

    #[error("operation requires assumption {0} to be active")]
    AssumptionRequired(u8),

    #[error("reciprocity violated: {0}")]
    NotReciprocal(&'static str),

    #[error("{what} is singular or ill-conditioned (reciprocal condition {rcond:e})")]
    IllConditioned { what: &'static str, rcond: f64 },

    #[error("scattering matrix has a unit eigenvalue (open-circuit load, phase 0){}", fmt_element(.element))]
    OpenCircuit { element: Option<usize> },

    #[error("path gain of {link} must be finite and nonnegative, got {value}")]
    InvalidPathGain { link: &'static str, value: f64 },

    #[error("phase vector for RIS {ris} has {found} entries, expected {expected}")]
    PhaseCount {
        ris: usize,
        expected: usize,
        found: usize,
    },

    #[error("trial count must be at least 1")]
    NoTrials,
}

fn fmt_element(element: &Option<usize>) -> alloc::string::String {
    match element {
        Some(n) => alloc::format!(" at element {n}"),
        None => alloc::string::String::new(),
    }
}

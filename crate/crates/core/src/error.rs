//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by curve construction, quadrature, and the kinematic solves.
#[derive(Debug, Error)]
pub enum Error {
    #[error("abscissae must be strictly increasing from 0 to 1")]
    NonMonotoneAbscissae,

    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { got: usize, min: usize },

    #[error("material coordinate {s} outside [0, 1]")]
    OutOfRange { s: f64 },

    #[error("zero-length segment at index {index}")]
    ZeroLengthSegment { index: usize },

    #[error("tangent norm {norm} departs from unity beyond tolerance")]
    NonUnitTangent { norm: f64 },

    #[error("velocity field sampling does not match the curve grid")]
    MismatchedSampling,

    #[error("quadrature needs at least 2 panels, got {got}")]
    TooFewPanels { got: usize },

    #[error("resistance system is numerically singular (condition estimate {cond:.3e})")]
    SingularSystem { cond: f64 },

    #[error("{name} = {value} violates constraint: {constraint}")]
    InvalidParam {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },

    #[error("at t = {t}: {source}")]
    AtTime {
        t: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wrap an error with the simulation timestamp at which it occurred.
    pub fn at_time(self, t: f64) -> Error {
        Error::AtTime {
            t,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

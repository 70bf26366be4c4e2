use thiserror::Error;

use crate::geometry::{Digit, Regime};

/// Which coin tape ran dry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tape {
    /// The two-sided tape ω.
    Omega,
    /// The three-sided tape υ.
    Upsilon,
}

impl std::fmt::Display for Tape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tape::Omega => f.write_str("omega"),
            Tape::Upsilon => f.write_str("upsilon"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GasketError {
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("point ({x}, {y}) lies outside the convex hull")]
    OutsideHull { x: f64, y: f64 },
    #[error("beta = {0} is outside the supported range")]
    InvalidBeta(f64),
    #[error("operation requires the {expected:?} regime")]
    WrongRegime { expected: Regime },
    #[error("{0} tape exhausted")]
    TapeExhausted(Tape),
    #[error("digit {digit} is not admissible at step {step}")]
    InadmissibleDigit { step: usize, digit: Digit },
    #[error("point lies in a hole of the attractor")]
    PointInHole,
    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("power iteration did not converge in {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("invalid symbol {symbol:?} for {tape} tape")]
    InvalidSymbol { tape: Tape, symbol: char },
    #[error("invalid digit character {0:?}")]
    InvalidDigit(char),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, GasketError>;

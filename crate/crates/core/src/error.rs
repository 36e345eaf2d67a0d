//! Error types shared across the crate.

use std::fmt;

use crate::rational::Rational;

/// Error type for construction, evaluation and verification operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An equation spec violates one of its constraints; the message names it.
    InvalidSpec(String),
    /// The similarity substitution collapses (c == 0).
    DegenerateEquation(String),
    /// An argument is outside the operation's domain.
    Domain(String),
    /// Failed to parse a rational from a string.
    Parse(String),
    /// A denominator parameter is zero or a negative integer and no
    /// numerator entry cancels it.
    PoleInDenominatorParam {
        /// Solution index the parameter lists were built for, when known.
        solution_index: Option<usize>,
        /// Offset m of the colliding denominator slot.
        slot: usize,
        value: Rational,
    },
    /// Numerator parameter count exceeds denominator count; the series
    /// would not be entire. Indicates a construction bug.
    ParameterCountInvalid { num: usize, den: usize },
    /// Series summation hit the term cap before the tail bound met the
    /// tolerance; carries the partial result.
    MaxTermsExceeded {
        partial_value: f64,
        bound_on_tail: f64,
        terms_used: usize,
    },
    /// The recurrence pivot vanished at step n (resonant truncation index);
    /// the pure power-series ansatz has no solution with this leading index.
    ZeroPivot { solution_index: usize, n: usize },
    /// One or more indices of a solution family hit a zero pivot;
    /// entries are (solution index, failing step n).
    FamilyConstruction(Vec<(usize, usize)>),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSpec(msg) => write!(f, "invalid equation spec: {}", msg),
            Error::DegenerateEquation(msg) => write!(f, "degenerate equation: {}", msg),
            Error::Domain(msg) => write!(f, "domain error: {}", msg),
            Error::Parse(msg) => write!(f, "parse error: {}", msg),
            Error::PoleInDenominatorParam {
                solution_index,
                slot,
                value,
            } => {
                write!(f, "denominator parameter {} at slot {}", value, slot)?;
                if let Some(i) = solution_index {
                    write!(f, " (solution index {})", i)?;
                }
                write!(f, " is zero or a negative integer")
            }
            Error::ParameterCountInvalid { num, den } => write!(
                f,
                "{} numerator parameters against {} denominator parameters; series not entire",
                num, den
            ),
            Error::MaxTermsExceeded {
                partial_value,
                bound_on_tail,
                terms_used,
            } => write!(
                f,
                "term cap reached after {} terms (partial value {}, tail bound {})",
                terms_used, partial_value, bound_on_tail
            ),
            Error::ZeroPivot { solution_index, n } => write!(
                f,
                "zero pivot for solution index {} at step n = {} (resonance)",
                solution_index, n
            ),
            Error::FamilyConstruction(failures) => {
                write!(f, "family construction failed at (index, step):")?;
                for (i, n) in failures {
                    write!(f, " ({}, {})", i, n)?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for Error {}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

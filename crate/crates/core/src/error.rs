use alloc::string::String;
use core::fmt;

use crate::lp::Rational;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A vector or constraint row does not match the ambient dimension.
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// A per-type table has the wrong number of rows.
    RowMismatch {
        expected: usize,
        found: usize,
    },
    EmptyTypeList,
    TooManyTypes {
        count: usize,
        max: usize,
    },
    NonPositivePrior {
        ty: usize,
    },
    PriorNotNormalized {
        sum: Rational,
    },
    EmptyDecisionSet,
    UnboundedDecisionSet,
    /// No decision in X gives this type its reservation utility.
    TypeUnacceptable {
        ty: usize,
    },
    InvalidStrategy(String),
    InvalidBelief(String),
    TooFewMessages {
        messages: usize,
        types: usize,
    },
    DecisionOutsideX,
    V0TooHigh {
        v0: Rational,
        cap: Rational,
    },
    EmptySubset,
    MessageUndefined(String),
    WrongTypeCount {
        expected: usize,
        found: usize,
    },
    NotAPartition,
    NotOneDimensional,
    NotPrivateValues,
    WrongClassification,
    BisectionBudgetExceeded {
        lo: Rational,
        hi: Rational,
    },
    NotAnEquilibrium,
    NoPartitionalEquilibrium,
    /// A constructor produced a profile that failed its own check.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::RowMismatch { expected, found } => {
                write!(f, "expected {expected} rows (one per type), found {found}")
            }
            Error::EmptyTypeList => write!(f, "the game has no types"),
            Error::TooManyTypes { count, max } => {
                write!(f, "{count} types exceeds the supported maximum of {max}")
            }
            Error::NonPositivePrior { ty } => {
                write!(f, "prior probability of type {} is not positive", ty + 1)
            }
            Error::PriorNotNormalized { sum } => write!(f, "prior sums to {sum}, not 1"),
            Error::EmptyDecisionSet => write!(f, "the decision set is empty"),
            Error::UnboundedDecisionSet => write!(f, "the decision set is unbounded"),
            Error::TypeUnacceptable { ty } => {
                write!(f, "no decision gives type {} at least its reservation utility", ty + 1)
            }
            Error::InvalidStrategy(msg) => write!(f, "invalid strategy: {msg}"),
            Error::InvalidBelief(msg) => write!(f, "invalid belief: {msg}"),
            Error::TooFewMessages { messages, types } => {
                write!(f, "{messages} messages is fewer than the {types} types")
            }
            Error::DecisionOutsideX => write!(f, "decision lies outside the decision set"),
            Error::V0TooHigh { v0, cap } => write!(
                f,
                "exit payoff {v0} exceeds the admissible maximum {cap} (min over types and decisions of V)"
            ),
            Error::EmptySubset => write!(f, "type subset is empty"),
            Error::MessageUndefined(m) => write!(f, "receiver strategy has no proposal for message {m:?}"),
            Error::WrongTypeCount { expected, found } => {
                write!(f, "construction needs {expected} types, game has {found}")
            }
            Error::NotAPartition => write!(f, "participation structure is not a partition"),
            Error::NotOneDimensional => write!(f, "decision set is not one-dimensional"),
            Error::NotPrivateValues => {
                write!(f, "receiver utility depends on the sender's type")
            }
            Error::WrongClassification => {
                write!(f, "participation structure has the wrong shape for this construction")
            }
            Error::BisectionBudgetExceeded { lo, hi } => {
                write!(f, "bisection budget exhausted with bracket [{lo}, {hi}]")
            }
            Error::NotAnEquilibrium => write!(f, "the profile or mechanism fails its equilibrium check"),
            Error::NoPartitionalEquilibrium => write!(f, "no partitional equilibrium exists"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

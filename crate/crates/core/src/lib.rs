//! Bounds on probabilities and coefficients of relation between events,
//! given partial knowledge expressed as constraints on a product partition.
//!
//! A program declares up to 16 events and a set of assertions about
//! probabilities, conditionals, odds, Quetelet and de Finetti coefficients.
//! The solver turns each assertion into linear or bilinear constraints on
//! the `2^n` atom probabilities and reports, for every query, the interval
//! of values compatible with the assertions.

pub mod cli;
pub mod coefficients;
pub mod constraints;
pub mod dsl;
pub mod error;
pub mod oracle;
pub mod partition;
pub mod simplex;
pub mod solver;

pub use coefficients::{convert, CoeffSpec, ExtReal, Family, RangeType};
pub use constraints::{Declaration, Relation};
pub use dsl::{parse, ParseError, Program};
pub use error::{Error, Result};
pub use partition::{BoolExpr, Distribution, EventTable};
pub use solver::{answer_query, Interval, SolverConfig, Status};

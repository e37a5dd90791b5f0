//! Sharpness, unsharpness and bias measures for quantum effects, with a
//! qubit coexistence test and a brute-force joint-observable oracle.

pub mod effect;
pub mod error;
pub mod measures;
pub mod operator;
pub mod oracle;
pub mod qubit;
pub mod scan;
pub mod suites;
pub mod tolerance;

pub use effect::{validate_effect, Effect, State};
pub use error::{Error, Result};
pub use measures::MeasureId;
pub use operator::HermitianOperator;
pub use qubit::{are_coexistent, CoexistenceStatus, QubitEffect};
pub use tolerance::Tolerances;

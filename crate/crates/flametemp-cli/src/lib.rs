//! Library side of the `flametemp` command-line tool: case definitions, the
//! published reference table, output formatting, curve export, and database
//! validation. The binary in `main.rs` is a thin clap wrapper over these.

pub mod cases;
pub mod curves;
pub mod output;
pub mod reference;
pub mod validate;

pub use cases::{run_case, CaseResult, CaseSpec, Fuel, Mode, Oxidizer};
pub use reference::{ReferenceRow, REFERENCE_TABLE};

//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by parsing, evaluation, and the two AFT solvers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Fixed-column thermo input could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Two species blocks share a name after uppercase normalization.
    #[error("duplicate species {name:?} at line {line}")]
    DuplicateSpecies { name: String, line: usize },

    /// A database cannot be written back in fixed-column form.
    #[error("serialize error: {0}")]
    Serialize(String),

    /// The N2 coefficient patch could not be applied.
    #[error("patch error: {0}")]
    Patch(String),

    /// A property was requested at a non-physical temperature.
    #[error("domain error: temperature {t} K is not positive")]
    Domain { t: f64 },

    /// A mixture references a species the database does not contain.
    #[error("unknown species {0:?}")]
    UnknownSpecies(String),

    /// A precondition on caller-supplied values failed.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Fuel contains elements outside C/H.
    #[error("unsupported fuel {name:?}: {msg}")]
    UnsupportedFuel { name: String, msg: String },

    /// Oxygen-deficient mixture: complete combustion products are undefined.
    #[error("rich mixture: requires {required} mol O2 but only {available} available")]
    RichMixture { required: f64, available: f64 },

    /// The enthalpy-balance residual has the same sign at both bracket ends.
    #[error("no bracket: F({t_lo}) = {f_lo:e} and F({t_hi}) = {f_hi:e} have the same sign")]
    NoBracket {
        t_lo: f64,
        t_hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// An iterative solver ran out of iterations.
    #[error("no convergence after {iterations} iterations: {msg}")]
    NoConvergence { iterations: usize, msg: String },

    /// The element-species matrix lost rank during an equilibrium solve.
    #[error("singular system over elements {elements:?}: {msg}")]
    SingularSystem { elements: Vec<String>, msg: String },

    /// No species in the database is composed solely of the available elements.
    #[error("no candidate species for elements {0:?}")]
    NoCandidates(Vec<String>),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

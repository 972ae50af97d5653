//! Library half of the `xxchain` command-line tool: configuration, sweeps,
//! point evaluation and oracle comparison, all producing CSV text.

pub mod compare;
pub mod config;
pub mod format;
pub mod quantity;
pub mod sweep;

use std::fmt;

pub use compare::{run_oracle_compare, CompareReport};
pub use config::{load_config, parse_config, SweepSpec};
pub use quantity::{run_point, Quantity, Record};
pub use sweep::{run_sweep, SweepOutput};

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad input; exit status 2.
    Validation(String),
    /// A quadrature or numerical guard failed; exit status 3.
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<xxchain::Error> for CliError {
    fn from(e: xxchain::Error) -> Self {
        use xxchain::Error as E;
        match e {
            E::ToleranceNotReached { .. } | E::NegativeRadicand(_) => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}

//! File schema, verification reports and command implementations behind
//! the `gengeo` binary.

pub mod commands;
pub mod report;
pub mod schema;

/// A command failure together with the exit code it maps to.
#[derive(Debug, Clone)]
pub struct CliError {
    pub exit: u8,
    pub message: String,
}

impl CliError {
    /// Malformed input: exit code 2.
    pub fn malformed(message: String) -> Self {
        CliError { exit: 2, message }
    }

    /// Axiom failure: exit code 1.
    pub fn axioms(message: String) -> Self {
        CliError { exit: 1, message }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}

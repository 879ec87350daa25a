//! File formats and reporting for the `sumnet` command-line tool: plain-text
//! network files, code files, and the structured report every subcommand
//! renders (human text or JSON from the same data).

pub mod codefile;
pub mod netfile;
pub mod report;

use std::fmt;

/// Every failure the CLI can surface, mapped onto the documented exit codes:
/// 1 for input/usage problems, 2 for a definitive "no code exists", 3 for
/// inconclusive results (budget, search-space, or generation limits), 4 for
/// a failed verification.
#[derive(Debug)]
pub enum CliError {
    /// Malformed file content, with 1-based location.
    Parse { line: usize, col: usize, message: String },
    /// Structurally invalid network or code (cycles, wrong counts, shape).
    Validation(String),
    /// The requested field order is not prime.
    InvalidField(u64),
    /// Alpha outside the admissible range for the field.
    InvalidAlpha(String),
    /// Mode requires a different solvability class.
    ClassMismatch { mode: String, class: String },
    /// Bad flag combination.
    Usage(String),
    /// Exhaustion cap exceeded.
    SearchSpaceTooLarge { slots: u32, cap: u32 },
    /// Random generation gave up.
    GenerationFailed(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. }
            | CliError::Validation(_)
            | CliError::InvalidField(_)
            | CliError::InvalidAlpha(_)
            | CliError::ClassMismatch { .. }
            | CliError::Usage(_)
            | CliError::Io(_) => 1,
            CliError::SearchSpaceTooLarge { .. } | CliError::GenerationFailed(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { line, col, message } => {
                write!(f, "line {line}, column {col}: {message}")
            }
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::InvalidField(p) => write!(f, "field order {p} is not prime"),
            CliError::InvalidAlpha(m) => write!(f, "invalid alpha: {m}"),
            CliError::ClassMismatch { mode, class } => {
                write!(f, "mode `{mode}` does not apply to a {class} network")
            }
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::SearchSpaceTooLarge { slots, cap } => {
                write!(f, "{slots} coefficient slots exceed the exhaustion cap of {cap}")
            }
            CliError::GenerationFailed(m) => write!(f, "network generation failed: {m}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

//! Library half of the `prcrypt` binary: command implementations and the
//! scenario language, kept out of `main.rs` so integration tests can drive
//! them directly.

pub mod commands;
pub mod scenario;

/// Exit codes, kept distinct and documented:
/// 0 success, 2 usage (argument parsing), 3 malformed input (hex, key
/// lengths, scenario or constants files), 4 failed `expect` assertions,
/// 5 I/O failures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Malformed user input; carries a human-readable diagnostic.
    Input(String),
    /// Filesystem problems reading or writing payload data.
    Io(String),
    /// One or more scenario expectations did not hold.
    ExpectFailed(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 3,
            CliError::ExpectFailed(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "error: {msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
            CliError::ExpectFailed(failures) => {
                writeln!(f, "{} expectation(s) failed:", failures.len())?;
                for line in failures {
                    writeln!(f, "  {line}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for CliError {}

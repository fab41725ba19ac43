//! File formats, grid sweeps and report rendering on top of `hadiff-core`.

pub mod grid;
pub mod json;
pub mod svg;

use std::fmt;

/// Bad input: unreadable files, malformed JSON, invalid arguments. The CLI
/// exits with code 3 on these, and with 2 when a mathematical check fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl InputError {
    pub fn new(msg: impl Into<String>) -> Self {
        InputError(msg.into())
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

impl From<hadiff_core::Error> for InputError {
    fn from(e: hadiff_core::Error) -> Self {
        InputError(e.to_string())
    }
}

impl From<serde_json::Error> for InputError {
    fn from(e: serde_json::Error) -> Self {
        InputError(format!("malformed JSON: {e}"))
    }
}

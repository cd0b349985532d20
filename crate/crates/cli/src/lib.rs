//! Document formats and the `dgres` command line.
//!
//! Documents are canonical JSON: sorted keys, exact scalars as strings, and a
//! version tag for the sign conventions so archived reports stay readable.

pub mod codec;
pub mod commands;
pub mod format;

pub use commands::{run, Cli, Command, Outcome, Status};
pub use format::{parse, print, Document, FormatError, Kind, CONVENTIONS, FORMAT_VERSION};

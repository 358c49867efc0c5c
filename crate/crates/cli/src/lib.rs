//! Command-line front end: a line-oriented input syntax, its elaboration
//! into library objects, a canonical printer, DOT output and the verbs.

pub mod commands;
pub mod document;
pub mod dot;
pub mod error;
pub mod print;
pub mod syntax;

pub use commands::{cli_output, run, Cli, Command, Report, Verdict};
pub use document::Document;
pub use error::{CliError, Location};

//! JSON input, command dispatch and reports for the `opfamily` command-line tool.

pub mod commands;
pub mod complement;
pub mod error;
pub mod report;
pub mod spec;

pub use commands::{run_command, Command, Flags};
pub use complement::parse_complements;
pub use error::CliError;
pub use report::Report;
pub use spec::{parse_family, FamilySpec, Kind};

//! Command-line front end: instance files, solver subcommands, generators,
//! and the benchmark table.

mod commands;
mod instance;

pub use commands::{run, Cli, Command};
pub use instance::{fmt_weight, format_instance, parse_instance, Instance, ParseError};

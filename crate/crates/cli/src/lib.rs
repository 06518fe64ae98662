//! Command-line front end for `frobsesh-core`: JSON input, the corpus scan and
//! SVG output.

pub mod catalog;
pub mod commands;
pub mod error;
pub mod input;
pub mod scan;
pub mod svg;

pub use commands::{run, Cli, Command, Outcome};
pub use error::{CliError, CliResult};

//! JSON front end for `blochiso-core`: document parsing, subcommand bodies and
//! report rendering. The `blochiso` binary is a thin argument parser on top.

pub mod commands;
pub mod document;
pub mod error;
pub mod render;

pub use commands::{Options, Verdict, VerifyMode};
pub use document::{ChannelDocument, Kind, Object};
pub use error::CliError;
pub use render::Format;

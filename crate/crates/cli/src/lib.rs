//! Command-line front end: argument parsing, dispatch to the core engines,
//! and text or JSON rendering.

pub mod commands;
pub mod output;
pub mod parse;

pub use commands::{run, RunOutput};
pub use output::{OutputDoc, SCHEMA_VERSION};
pub use parse::{parse_poly, ParseError, PolyExpr};

//! Typed JSON syntax trees.
//!
//! `ast.rs` and `names.json` are generated by `semascope generate` from
//! `fixtures/json-node-types.json` and committed. Regenerate them with
//!
//! ```sh
//! semascope generate fixtures/json-node-types.json crates/json-ast/src
//! ```

#[rustfmt::skip]
mod ast;

pub use ast::*;

/// Grammar name to Rust name mapping for the generated items.
pub const NAMES: &str = include_str!("names.json");

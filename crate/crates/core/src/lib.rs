//! Language-agnostic syntax trees and the tools built on them.
//!
//! Source text is parsed into [`Term`]s through tree-sitter grammars.
//! On top of that sit a structural differ producing [`PatchTree`]s, tables of
//! contents over diffs, code-navigation tags, and a generator for typed ASTs
//! from grammar metadata.

pub mod codegen;
pub mod diff;
pub mod language;
pub mod parse;
pub mod portable;
pub mod recursion;
pub mod span;
pub mod summary;
pub mod tags;
pub mod term;
pub mod typed;

pub use diff::{apply_patch, diff_keyed, diff_terms, DiffOptions, Patch, PatchTree, Projection};
pub use language::{LanguageDescriptor, Registry, RegistryError};
pub use parse::{parse_source, ParseError};
pub use portable::FormatError;
pub use span::{Point, SourceSpan};
pub use summary::{table_of_contents, Change, DeclarationRule, TocEntry};
pub use tags::{extract_tags, find_definitions, find_references, Tag, TagRole, TagRule};
pub use term::{ErrorStatus, Term};

//! Source bytes to [`Term`]s through tree-sitter grammars.
//!
//! Ingestion is an unfold whose seeds are backend nodes: each step reads a
//! node's kind, range, error state and field-labelled children. Parsing is
//! total over arbitrary bytes; malformed regions come back as `Error` or
//! `Missing` nodes with the surrounding structure intact.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, OnceLock};

use tree_sitter::{Language, Node, Parser};

use crate::language::{Backend, LanguageDescriptor};
use crate::portable::{self, FormatError};
use crate::recursion::{unfold_bounded, Expansion};
use crate::span::{Point, SourceSpan};
use crate::term::{ErrorStatus, Term};

/// Depth bound for ingestion. The unfold is stack-safe, so this only guards
/// against runaway memory.
const INGEST_MAX_DEPTH: usize = 1 << 20;

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("parser backend unavailable for `{language}`: {reason}")]
    BackendUnavailable { language: String, reason: String },
    #[error("invalid portable tree: {0}")]
    Format(#[from] FormatError),
}

/// Parses `source` with the language's backend. Only fails when the backend
/// cannot be loaded (or, for portable languages, when the document is
/// malformed).
pub fn parse_source(language: &LanguageDescriptor, source: &[u8]) -> Result<Term, ParseError> {
    let grammar = match &language.backend {
        Backend::Portable => {
            let doc = std::str::from_utf8(source).map_err(|e| FormatError {
                line: 0,
                column: 0,
                message: format!("portable trees are UTF-8: {e}"),
            })?;
            return Ok(portable::decode(doc)?);
        }
        Backend::Builtin(name) => builtin_grammar(name).ok_or_else(|| ParseError::BackendUnavailable {
            language: language.id.clone(),
            reason: format!("no built-in grammar named `{name}`"),
        })?,
        Backend::SharedLibrary { path, symbol } => {
            load_shared(path, symbol).map_err(|reason| ParseError::BackendUnavailable {
                language: language.id.clone(),
                reason,
            })?
        }
    };
    parse_with(&grammar, source).map_err(|reason| ParseError::BackendUnavailable {
        language: language.id.clone(),
        reason,
    })
}

pub fn builtin_grammar(name: &str) -> Option<Language> {
    match name {
        "json" => Some(tree_sitter_json::LANGUAGE.into()),
        "python" => Some(tree_sitter_python::LANGUAGE.into()),
        _ => None,
    }
}

/// Grammar metadata (`node-types.json`) for a built-in grammar.
pub fn builtin_node_types(name: &str) -> Option<&'static str> {
    match name {
        "json" => Some(tree_sitter_json::NODE_TYPES),
        "python" => Some(tree_sitter_python::NODE_TYPES),
        _ => None,
    }
}

type GrammarCache = Mutex<HashMap<(PathBuf, String), Language>>;

/// Loads a grammar from a shared library. Libraries stay loaded for the
/// life of the process; each (path, symbol) is opened once.
fn load_shared(path: &Path, symbol: &str) -> Result<Language, String> {
    static CACHE: OnceLock<GrammarCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (path.to_path_buf(), symbol.to_string());
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(lang) = guard.get(&key) {
        return Ok(lang.clone());
    }
    // SAFETY: loading a grammar library runs its initializers; registry
    // entries are trusted configuration. The symbol has the tree-sitter
    // language-function signature by contract.
    let lang = unsafe {
        let lib = libloading::Library::new(path).map_err(|e| format!("cannot load {}: {e}", path.display()))?;
        let func: libloading::Symbol<'_, unsafe extern "C" fn() -> *const ()> = lib
            .get(symbol.as_bytes())
            .map_err(|e| format!("symbol `{symbol}` not found in {}: {e}", path.display()))?;
        let lang = Language::new(tree_sitter_language::LanguageFn::from_raw(*func));
        std::mem::forget(lib);
        lang
    };
    guard.insert(key, lang.clone());
    Ok(lang)
}

/// Parses with an already-loaded grammar. A fresh parser per call keeps
/// concurrent parses independent.
pub fn parse_with(grammar: &Language, source: &[u8]) -> Result<Term, String> {
    let mut parser = Parser::new();
    parser.set_language(grammar).map_err(|e| e.to_string())?;
    let tree = parser.parse(source, None).ok_or_else(|| "parser produced no tree".to_string())?;
    let root = tree.root_node();
    let mut term = unfold_bounded(root, INGEST_MAX_DEPTH, |node| expand(node, source))
        .map_err(|e| e.to_string())?;
    // The backend's root excludes leading and trailing whitespace; the term
    // covers the whole input.
    term.span = SourceSpan::new(0, source.len(), Point::new(0, 0), Point::default().advance(source));
    if term.is_leaf() && term.text.is_none() {
        term.text = Some(String::new());
    }
    Ok(term)
}

fn span_of(node: &Node<'_>) -> SourceSpan {
    let (s, e) = (node.start_position(), node.end_position());
    SourceSpan::new(
        node.start_byte(),
        node.end_byte(),
        Point::new(s.row, s.column),
        Point::new(e.row, e.column),
    )
}

fn expand<'t>(node: Node<'t>, source: &[u8]) -> Expansion<Node<'t>> {
    let error = if node.is_missing() {
        ErrorStatus::Missing
    } else if node.is_error() {
        ErrorStatus::Error
    } else {
        ErrorStatus::Ok
    };
    let kind = if node.is_error() { "ERROR".to_string() } else { node.kind().to_string() };
    let span = span_of(&node);
    let mut fields: Vec<(String, Vec<Node<'t>>)> = Vec::new();
    let mut children = Vec::new();
    let mut cursor = node.walk();
    if cursor.goto_first_child() {
        loop {
            let child = cursor.node();
            match cursor.field_name() {
                Some(name) => match fields.iter_mut().find(|(n, _)| n == name) {
                    Some((_, list)) => list.push(child),
                    None => fields.push((name.to_string(), vec![child])),
                },
                None => children.push(child),
            }
            if !cursor.goto_next_sibling() {
                break;
            }
        }
    }
    let text = if fields.is_empty() && children.is_empty() {
        let bytes = source.get(span.byte_range()).unwrap_or_default();
        Some(String::from_utf8_lossy(bytes).into_owned())
    } else {
        None
    };
    Expansion { kind, span, text, error, fields, children }
}

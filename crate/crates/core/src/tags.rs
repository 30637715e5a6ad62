//! Definition and reference tags for code navigation.
//!
//! Tagging is one source-order traversal driven by per-kind rules. A stack
//! of scope frames records locally bound names, so a bare identifier can be
//! told apart as a local variable or (under rules with a fallback category)
//! a global or a zero-argument call.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::span::SourceSpan;
use crate::summary::ANONYMOUS;
use crate::term::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleRole {
    Definition,
    Reference,
    /// Consumes the name node without tagging it (attribute names,
    /// keyword-argument names).
    Ignore,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TagRule {
    pub kind: String,
    pub role: RuleRole,
    #[serde(default)]
    pub category: String,
    /// Field names leading from the node to its name; empty means the node
    /// is its own name.
    #[serde(default)]
    pub name_path: Vec<String>,
    #[serde(default)]
    pub scope_introducing: bool,
    /// Field whose identifiers become local names.
    pub binds_locals: Option<String>,
    /// Category of the definition tags emitted for those locals; `None`
    /// binds them silently.
    pub local_category: Option<String>,
    /// Reference category used when the name is not bound in any enclosing
    /// scope. Without it, `category` is always used.
    pub fallback_category: Option<String>,
}

impl TagRule {
    pub fn new(kind: &str, role: RuleRole, category: &str, name_path: &[&str]) -> Self {
        Self {
            kind: kind.to_string(),
            role,
            category: category.to_string(),
            name_path: name_path.iter().map(|s| s.to_string()).collect(),
            scope_introducing: false,
            binds_locals: None,
            local_category: None,
            fallback_category: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TagRole {
    Definition,
    Reference,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tag {
    pub name: String,
    pub role: TagRole,
    pub category: String,
    #[serde(serialize_with = "span_out", deserialize_with = "span_in")]
    pub span: SourceSpan,
    /// The source line at the span's start, trimmed.
    pub line: String,
    /// Names of the enclosing scope-introducing definitions, outermost first.
    pub scope_path: Vec<String>,
}

fn span_out<S: Serializer>(span: &SourceSpan, s: S) -> Result<S::Ok, S::Error> {
    span.to_array().serialize(s)
}

fn span_in<'de, D: Deserializer<'de>>(d: D) -> Result<SourceSpan, D::Error> {
    <[usize; 6]>::deserialize(d).map(SourceSpan::from_array)
}

/// Stack of frames of locally bound names.
#[derive(Debug, Default)]
pub struct ScopeTable {
    frames: Vec<(String, BTreeSet<String>)>,
}

impl ScopeTable {
    /// A table holding only the file-level frame.
    pub fn new() -> Self {
        Self { frames: vec![(String::new(), BTreeSet::new())] }
    }

    pub fn push(&mut self, owner: String) {
        self.frames.push((owner, BTreeSet::new()));
    }

    pub fn pop(&mut self) {
        debug_assert!(self.frames.len() > 1, "the file frame is never popped");
        self.frames.pop();
    }

    pub fn bind(&mut self, name: &str) {
        if let Some((_, names)) = self.frames.last_mut() {
            names.insert(name.to_string());
        }
    }

    /// Searches innermost frame outwards.
    pub fn is_bound(&self, name: &str) -> bool {
        self.frames.iter().rev().any(|(_, names)| names.contains(name))
    }

    pub fn depth(&self) -> usize {
        self.frames.len()
    }

    /// Owners of every frame above the file frame.
    pub fn path(&self) -> Vec<String> {
        self.frames.iter().skip(1).map(|(owner, _)| owner.clone()).collect()
    }
}

/// A tag name: a leaf's text, or a quoted string's contents. Anything else
/// (compound expressions, error nodes) names nothing.
fn tag_name(node: &Term) -> Option<String> {
    if node.has_error() {
        return None;
    }
    if node.is_leaf() {
        return node.text.clone().filter(|t| !t.is_empty());
    }
    let text = node.source_text();
    match text.as_bytes() {
        [q @ (b'"' | b'\''), .., last] if last == q && text.len() >= 2 => {
            Some(text[1..text.len() - 1].to_string()).filter(|t| !t.is_empty())
        }
        _ => None,
    }
}

struct Tagger<'a> {
    rules: &'a [TagRule],
    source: &'a [u8],
    line_starts: Vec<usize>,
    /// Identifier-like leaf kinds: kinds of rules that name themselves.
    identifier_kinds: HashSet<&'a str>,
    scopes: ScopeTable,
    consumed: HashSet<*const Term>,
    tags: Vec<Tag>,
}

/// Extracts tags from one parsed file, ordered by span.
pub fn extract_tags(term: &Term, rules: &[TagRule], source: &[u8]) -> Vec<Tag> {
    let mut line_starts = vec![0];
    line_starts.extend(source.iter().enumerate().filter(|(_, &c)| c == b'\n').map(|(i, _)| i + 1));
    let mut t = Tagger {
        rules,
        source,
        line_starts,
        identifier_kinds: rules.iter().filter(|r| r.name_path.is_empty()).map(|r| r.kind.as_str()).collect(),
        scopes: ScopeTable::new(),
        consumed: HashSet::new(),
        tags: Vec::new(),
    };
    t.visit(term);
    let mut tags = t.tags;
    tags.sort_by_key(|t| (t.span.start_byte, t.span.end_byte));
    tags
}

impl<'a> Tagger<'a> {
    fn line_text(&self, span: &SourceSpan) -> String {
        let start = self.line_starts.get(span.start_point.row).copied().unwrap_or(0).min(self.source.len());
        let end = self.source[start..].iter().position(|&c| c == b'\n').map_or(self.source.len(), |i| start + i);
        String::from_utf8_lossy(&self.source[start..end]).trim().to_string()
    }

    fn emit(&mut self, node: &Term, name: String, role: TagRole, category: &str) {
        let tag = Tag {
            name,
            role,
            category: category.to_string(),
            span: node.span,
            line: self.line_text(&node.span),
            scope_path: self.scopes.path(),
        };
        self.tags.push(tag);
    }

    fn take(&mut self, node: &Term) -> bool {
        self.consumed.insert(node as *const Term)
    }

    fn is_consumed(&self, node: &Term) -> bool {
        self.consumed.contains(&(node as *const Term))
    }

    /// Leaves of a binding position that declare names: identifiers reached
    /// through `name` fields and unnamed children (never through values,
    /// types or attribute objects).
    fn binding_leaves<'t>(&self, node: &'t Term, out: &mut Vec<&'t Term>) {
        let mut stack = vec![node];
        while let Some(n) = stack.pop() {
            if n.is_leaf() {
                let identifier = if self.identifier_kinds.is_empty() {
                    n.text.as_deref().is_some_and(|t| t != n.kind)
                } else {
                    self.identifier_kinds.contains(n.kind.as_str())
                };
                if identifier {
                    out.push(n);
                }
                continue;
            }
            let mut next: Vec<&Term> = n.children.iter().collect();
            next.extend(n.fields.get("name").into_iter().flatten());
            next.sort_by_key(|t| t.span.start_byte);
            stack.extend(next.into_iter().rev());
        }
    }

    fn visit(&mut self, node: &Term) {
        if self.is_consumed(node) {
            return;
        }
        stacker::maybe_grow(64 * 1024, 1024 * 1024, || {
            let rules = self.rules;
            let mut scope_owner: Option<String> = None;
            for rule in rules.iter().filter(|r| r.kind == node.kind) {
                let name_node = node.resolve_path(&rule.name_path);
                if let Some(name_node) = name_node.filter(|n| !self.is_consumed(n)) {
                    let name = tag_name(name_node);
                    match (rule.role, name) {
                        (RuleRole::Ignore, _) => {
                            self.take(name_node);
                        }
                        (RuleRole::Definition, Some(name)) => {
                            self.take(name_node);
                            self.scopes.bind(&name);
                            self.emit(name_node, name.clone(), TagRole::Definition, &rule.category);
                            if rule.scope_introducing {
                                scope_owner.get_or_insert(name);
                            }
                        }
                        (RuleRole::Reference, Some(name)) => {
                            self.take(name_node);
                            let category = match &rule.fallback_category {
                                Some(fallback) if !self.scopes.is_bound(&name) => fallback.as_str(),
                                _ => rule.category.as_str(),
                            };
                            self.emit(name_node, name, TagRole::Reference, category);
                        }
                        (_, None) => {}
                    }
                }
            }
            let introduces = rules.iter().any(|r| r.kind == node.kind && r.scope_introducing);
            if introduces {
                self.scopes.push(scope_owner.unwrap_or_else(|| ANONYMOUS.to_string()));
            }
            for rule in rules.iter().filter(|r| r.kind == node.kind) {
                let Some(field) = rule.binds_locals.as_deref().and_then(|f| node.fields.get(f)) else { continue };
                let mut leaves = Vec::new();
                for f in field {
                    self.binding_leaves(f, &mut leaves);
                }
                for leaf in leaves {
                    if !self.take(leaf) {
                        continue;
                    }
                    let Some(name) = tag_name(leaf) else { continue };
                    self.scopes.bind(&name);
                    if let Some(category) = &rule.local_category {
                        self.emit(leaf, name, TagRole::Definition, category);
                    }
                }
            }
            for child in node.source_children() {
                self.visit(child);
            }
            if introduces {
                self.scopes.pop();
            }
        })
    }
}

/// Definition tags named exactly `name`, in document order.
pub fn find_definitions<'t>(tags: &'t [Tag], name: &str) -> Vec<&'t Tag> {
    tags.iter().filter(|t| t.role == TagRole::Definition && t.name == name).collect()
}

/// Reference tags named exactly `name`, in document order.
pub fn find_references<'t>(tags: &'t [Tag], name: &str) -> Vec<&'t Tag> {
    tags.iter().filter(|t| t.role == TagRole::Reference && t.name == name).collect()
}

pub fn render_tags_json(tags: &[Tag]) -> String {
    serde_json::to_string(tags).expect("tags always serialize")
}

/// ctags-style lines: name, file, `/^line$/;"` address, kind letter, role.
pub fn render_ctags(tags: &[Tag], file: &str, source: &[u8]) -> String {
    let lines: Vec<&[u8]> = source.split(|&c| c == b'\n').collect();
    let mut out = String::new();
    for t in tags {
        let raw = lines.get(t.span.start_point.row).copied().unwrap_or_default();
        let raw = String::from_utf8_lossy(raw);
        let raw = raw.strip_suffix('\r').unwrap_or(&raw);
        let pattern = raw.replace('\\', "\\\\").replace('/', "\\/");
        let letter = t.category.chars().next().unwrap_or('x');
        let role = match t.role {
            TagRole::Definition => "def",
            TagRole::Reference => "ref",
        };
        let _ = writeln!(out, "{}\t{}\t/^{}$/;\"\t{}\troles:{}", t.name, file, pattern, letter, role);
    }
    out
}

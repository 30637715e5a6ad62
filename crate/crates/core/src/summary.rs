//! Tables of contents: which declarations a diff adds, removes or modifies.

use serde::{Deserialize, Serialize, Serializer};

use crate::diff::{CopyNode, Patch, PatchTree, Projection};
use crate::span::SourceSpan;
use crate::term::Term;

/// Marks a node kind as a declaration and says where its name lives.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeclarationRule {
    pub kind: String,
    pub category: String,
    pub name_path: Vec<String>,
}

impl DeclarationRule {
    pub fn new(kind: &str, category: &str, name_path: &[&str]) -> Self {
        Self {
            kind: kind.to_string(),
            category: category.to_string(),
            name_path: name_path.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Change {
    Added,
    Removed,
    Modified,
}

impl Change {
    pub fn as_str(self) -> &'static str {
        match self {
            Change::Added => "Added",
            Change::Removed => "Removed",
            Change::Modified => "Modified",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TocEntry {
    pub file: String,
    pub category: String,
    pub name: String,
    pub change: Change,
    /// After-side span, or before-side for removals.
    #[serde(serialize_with = "span_array")]
    pub span: SourceSpan,
}

fn span_array<S: Serializer>(span: &SourceSpan, s: S) -> Result<S::Ok, S::Error> {
    span.to_array().serialize(s)
}

pub const ANONYMOUS: &str = "<anonymous>";

/// Display text of a name node: leaf text, or for a quoted string its
/// contents. `None` if the node is, or contains, a parse error.
pub(crate) fn name_text(node: &Term) -> Option<String> {
    if node.has_error() {
        return None;
    }
    let text = node.source_text();
    let unquoted = match text.as_bytes() {
        [q @ (b'"' | b'\''), .., last] if !node.is_leaf() && last == q && text.len() >= 2 => text[1..text.len() - 1].to_string(),
        _ => text,
    };
    (!unquoted.is_empty()).then_some(unquoted)
}

fn declared_name(term: &Term, rule: &DeclarationRule) -> String {
    term.resolve_path(&rule.name_path).and_then(name_text).unwrap_or_else(|| ANONYMOUS.to_string())
}

struct Frame<'p> {
    copy: &'p CopyNode,
    rule: &'p DeclarationRule,
    reported: bool,
}

struct Walker<'p> {
    rules: &'p [DeclarationRule],
    file: &'p str,
    frames: Vec<Frame<'p>>,
    /// Entries with their (after offset, before offset) sort key.
    entries: Vec<((usize, usize), TocEntry)>,
}

/// Folds a patch into declaration-level changes. Each change is attributed
/// to its innermost enclosing declaration; a whole declaration inserted or
/// deleted is reported as added or removed. Ordered by after-side position,
/// then before-side.
pub fn table_of_contents(patch: &PatchTree, rules: &[DeclarationRule], file: &str) -> Vec<TocEntry> {
    let mut w = Walker { rules, file, frames: Vec::new(), entries: Vec::new() };
    let start = (
        patch.root.span(Projection::Before).map_or(0, |s| s.start_byte),
        patch.root.span(Projection::After).map_or(0, |s| s.start_byte),
    );
    w.visit(&patch.root, start);
    w.entries.sort_by_key(|(key, _)| *key);
    w.entries.into_iter().map(|(_, e)| e).collect()
}

impl<'p> Walker<'p> {
    fn rule(&self, kind: &str) -> Option<&'p DeclarationRule> {
        self.rules.iter().find(|r| r.kind == kind)
    }

    fn entry(&self, rule: &DeclarationRule, name: String, change: Change, span: SourceSpan) -> TocEntry {
        TocEntry { file: self.file.to_string(), category: rule.category.clone(), name, change, span }
    }

    /// Attributes a change to the innermost enclosing declaration.
    fn mark_enclosing(&mut self) {
        let Some(frame) = self.frames.last_mut() else { return };
        if frame.reported {
            return;
        }
        frame.reported = true;
        let (copy, rule) = (frame.copy, frame.rule);
        let after = PatchTree { root: Patch::Copy(Box::new(copy.clone())) }.project(Projection::After);
        let entry = self.entry(rule, declared_name(&after, rule), Change::Modified, copy.after_span);
        self.entries.push(((copy.after_span.start_byte, copy.before_span.start_byte), entry));
    }

    /// `cursor` is the (before, after) offset where this position sits.
    fn visit(&mut self, p: &'p Patch, cursor: (usize, usize)) {
        stacker::maybe_grow(64 * 1024, 1024 * 1024, || match p {
            Patch::Copy(c) => {
                let decl = self.rule(&c.kind);
                if let Some(rule) = decl {
                    self.frames.push(Frame { copy: c, rule, reported: false });
                }
                for list in c.fields.values().chain(std::iter::once(&c.children)) {
                    let mut cur = (c.before_span.start_byte, c.after_span.start_byte);
                    for e in list {
                        self.visit(e, cur);
                        if let Some(s) = e.span(Projection::Before) {
                            cur.0 = s.end_byte;
                        }
                        if let Some(s) = e.span(Projection::After) {
                            cur.1 = s.end_byte;
                        }
                    }
                }
                if decl.is_some() {
                    self.frames.pop();
                }
            }
            Patch::Insert { term, .. } => self.changed_subtree(term, Change::Added, cursor),
            Patch::Delete { term, .. } => self.changed_subtree(term, Change::Removed, cursor),
            Patch::Replace { before, after, .. } => {
                let same_decl = match (self.rule(&before.kind), self.rule(&after.kind)) {
                    (Some(rb), Some(ra)) => rb.category == ra.category && declared_name(before, rb) == declared_name(after, ra),
                    _ => false,
                };
                if same_decl {
                    let rule = self.rule(&after.kind).expect("checked above");
                    let entry = self.entry(rule, declared_name(after, rule), Change::Modified, after.span);
                    self.entries.push(((after.span.start_byte, before.span.start_byte), entry));
                } else {
                    self.changed_subtree(before, Change::Removed, cursor);
                    self.changed_subtree(after, Change::Added, cursor);
                }
            }
        })
    }

    fn changed_subtree(&mut self, term: &Term, change: Change, cursor: (usize, usize)) {
        let mut found = Vec::new();
        let mut stack = vec![term];
        while let Some(t) = stack.pop() {
            match self.rule(&t.kind) {
                Some(rule) => found.push((t, rule)),
                None => stack.extend(t.source_children().into_iter().rev()),
            }
        }
        if found.is_empty() {
            self.mark_enclosing();
            return;
        }
        for (t, rule) in found {
            let key = match change {
                Change::Removed => (cursor.1, t.span.start_byte),
                _ => (t.span.start_byte, cursor.0),
            };
            let entry = self.entry(rule, declared_name(t, rule), change, t.span);
            self.entries.push((key, entry));
        }
    }
}

/// `<change> <category> <name> (<file>:<line>)` per entry.
pub fn render_toc_text(entries: &[TocEntry]) -> String {
    entries
        .iter()
        .map(|e| format!("{} {} {} ({}:{})\n", e.change.as_str(), e.category, e.name, e.file, e.span.start_point.row + 1))
        .collect()
}

pub fn render_toc_json(entries: &[TocEntry]) -> String {
    serde_json::to_string(entries).expect("entries always serialize")
}

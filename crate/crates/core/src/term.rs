//! The language-agnostic syntax tree.

use std::collections::BTreeMap;
use std::fmt;

use crate::span::SourceSpan;

/// Parse status of a node. Error and Missing nodes may appear anywhere; the
/// subtrees beneath an Error node stay accessible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum ErrorStatus {
    #[default]
    Ok,
    /// The parser could not fit these bytes into the grammar.
    Error,
    /// A zero-width node the parser synthesized to recover.
    Missing,
}

impl ErrorStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorStatus::Ok => "ok",
            ErrorStatus::Error => "error",
            ErrorStatus::Missing => "missing",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ok" => Some(ErrorStatus::Ok),
            "error" => Some(ErrorStatus::Error),
            "missing" => Some(ErrorStatus::Missing),
            _ => None,
        }
    }

    pub fn is_ok(self) -> bool {
        self == ErrorStatus::Ok
    }
}

/// Which version of a diffed pair a node originates from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Synthesized nodes only.
    Neither,
    Before,
    After,
    /// Present in both versions, or a single-tree context.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Annotation {
    pub span: SourceSpan,
    pub side: Side,
}

/// A syntax-tree node.
///
/// Named fields hold the children the grammar assigns to a field; everything
/// else (anonymous tokens, extras such as comments, unlabelled named
/// children) lives in `children`. A node is a leaf exactly when it has no
/// fields, no children, and carries `text`.
///
/// Terms are immutable values. `Clone`, `PartialEq` and `Drop` use explicit
/// work-lists, so arbitrarily deep trees never exhaust the call stack.
pub struct Term {
    pub kind: String,
    pub span: SourceSpan,
    pub text: Option<String>,
    pub fields: BTreeMap<String, Vec<Term>>,
    pub children: Vec<Term>,
    pub error: ErrorStatus,
}

impl Term {
    pub fn leaf(kind: impl Into<String>, span: SourceSpan, text: impl Into<String>) -> Self {
        Self {
            kind: kind.into(),
            span,
            text: Some(text.into()),
            fields: BTreeMap::new(),
            children: Vec::new(),
            error: ErrorStatus::Ok,
        }
    }

    pub fn branch(
        kind: impl Into<String>,
        span: SourceSpan,
        fields: BTreeMap<String, Vec<Term>>,
        children: Vec<Term>,
    ) -> Self {
        Self {
            kind: kind.into(),
            span,
            text: None,
            fields,
            children,
            error: ErrorStatus::Ok,
        }
    }

    pub fn with_error(mut self, error: ErrorStatus) -> Self {
        self.error = error;
        self
    }

    pub fn is_leaf(&self) -> bool {
        self.fields.is_empty() && self.children.is_empty()
    }

    /// Number of direct subterms (field members plus children).
    pub fn arity(&self) -> usize {
        self.fields.values().map(Vec::len).sum::<usize>() + self.children.len()
    }

    /// Direct subterms in structural order: field lists by field name, then
    /// `children`.
    pub fn subterms(&self) -> impl DoubleEndedIterator<Item = &Term> + '_ {
        self.fields.values().flatten().chain(self.children.iter())
    }

    /// Direct subterms in source order (by start byte; structural order
    /// breaks ties).
    pub fn source_children(&self) -> Vec<&Term> {
        let mut all: Vec<&Term> = self.subterms().collect();
        all.sort_by_key(|t| (t.span.start_byte, t.span.end_byte));
        all
    }

    /// First node of the named field, if any.
    pub fn field(&self, name: &str) -> Option<&Term> {
        self.fields.get(name).and_then(|v| v.first())
    }

    /// Follows a path of field names from this node.
    pub fn resolve_path<S: AsRef<str>>(&self, path: &[S]) -> Option<&Term> {
        let mut node = self;
        for name in path {
            node = node.field(name.as_ref())?;
        }
        Some(node)
    }

    /// Total number of nodes in this tree.
    pub fn node_count(&self) -> usize {
        let mut count = 0;
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            count += 1;
            stack.extend(t.subterms());
        }
        count
    }

    /// Pre-order traversal in source order.
    pub fn preorder(&self) -> Preorder<'_> {
        Preorder { stack: vec![self] }
    }

    /// Leaf texts concatenated in source order. For a leaf, its own text.
    pub fn source_text(&self) -> String {
        if let Some(text) = &self.text {
            if self.is_leaf() {
                return text.clone();
            }
        }
        self.preorder()
            .filter(|t| t.is_leaf())
            .filter_map(|t| t.text.as_deref())
            .collect()
    }

    /// Whether this node or any descendant has a non-Ok error status.
    pub fn has_error(&self) -> bool {
        self.preorder().any(|t| !t.error.is_ok())
    }
}

/// Source-order pre-order iterator over a tree.
pub struct Preorder<'a> {
    stack: Vec<&'a Term>,
}

impl<'a> Iterator for Preorder<'a> {
    type Item = &'a Term;

    fn next(&mut self) -> Option<&'a Term> {
        let t = self.stack.pop()?;
        let children = t.source_children();
        self.stack.extend(children.into_iter().rev());
        Some(t)
    }
}

impl Drop for Term {
    fn drop(&mut self) {
        if self.is_leaf() {
            return;
        }
        let mut stack: Vec<Term> = std::mem::take(&mut self.children);
        for (_, list) in std::mem::take(&mut self.fields) {
            stack.extend(list);
        }
        while let Some(mut t) = stack.pop() {
            stack.append(&mut t.children);
            for (_, list) in std::mem::take(&mut t.fields) {
                stack.extend(list);
            }
        }
    }
}

impl Clone for Term {
    fn clone(&self) -> Self {
        crate::recursion::fold(self, |layer| layer.into_term())
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        let mut stack = vec![(self, other)];
        while let Some((a, b)) = stack.pop() {
            if a.kind != b.kind
                || a.span != b.span
                || a.text != b.text
                || a.error != b.error
                || a.children.len() != b.children.len()
                || a.fields.len() != b.fields.len()
            {
                return false;
            }
            for ((na, la), (nb, lb)) in a.fields.iter().zip(b.fields.iter()) {
                if na != nb || la.len() != lb.len() {
                    return false;
                }
                stack.extend(la.iter().zip(lb.iter()));
            }
            stack.extend(a.children.iter().zip(b.children.iter()));
        }
        true
    }
}

impl Eq for Term {}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::portable::to_sexp(self))
    }
}

/// A violated structural invariant, with the path of child indices from the
/// root to the offending node.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message} at node {path:?} ({kind})")]
pub struct InvariantViolation {
    pub path: Vec<usize>,
    pub kind: String,
    pub message: String,
}

/// Checks every structural invariant of a tree:
/// well-formed spans, the leaf condition, child span containment,
/// per-list start-byte ordering, and non-empty field lists.
pub fn validate(term: &Term) -> Result<(), InvariantViolation> {
    let mut stack: Vec<(&Term, Vec<usize>)> = vec![(term, Vec::new())];
    while let Some((t, path)) = stack.pop() {
        let fail = |message: String| InvariantViolation {
            path: path.clone(),
            kind: t.kind.clone(),
            message,
        };
        if !t.span.is_well_formed() {
            return Err(fail(format!("span {:?} is inverted", t.span.to_array())));
        }
        let leaf = t.is_leaf();
        if leaf != t.text.is_some() {
            return Err(fail(if leaf {
                "leaf without text".to_string()
            } else {
                "non-leaf carries text".to_string()
            }));
        }
        for (name, list) in &t.fields {
            if list.is_empty() {
                return Err(fail(format!("field `{name}` is empty")));
            }
        }
        let lists = t.fields.values().chain(std::iter::once(&t.children));
        for list in lists {
            for pair in list.windows(2) {
                if pair[0].span.start_byte > pair[1].span.start_byte {
                    return Err(fail("children are not ordered by start byte".to_string()));
                }
            }
        }
        for (i, child) in t.subterms().enumerate() {
            if !t.span.contains(&child.span) {
                return Err(fail(format!(
                    "child {i} span {:?} escapes parent span {:?}",
                    child.span.to_array(),
                    t.span.to_array()
                )));
            }
            let mut child_path = path.clone();
            child_path.push(i);
            stack.push((child, child_path));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::span::Point;

    fn sp(a: usize, b: usize) -> SourceSpan {
        SourceSpan::new(a, b, Point::new(0, a), Point::new(0, b))
    }

    fn sample() -> Term {
        let mut fields = BTreeMap::new();
        fields.insert("key".to_string(), vec![Term::leaf("string", sp(1, 4), "\"a\"")]);
        fields.insert("value".to_string(), vec![Term::leaf("number", sp(5, 6), "1")]);
        let pair = Term::branch("pair", sp(1, 6), fields, vec![Term::leaf(":", sp(4, 5), ":")]);
        Term::branch(
            "object",
            sp(0, 7),
            BTreeMap::new(),
            vec![Term::leaf("{", sp(0, 1), "{"), pair, Term::leaf("}", sp(6, 7), "}")],
        )
    }

    #[test]
    fn sample_is_valid() {
        let t = sample();
        validate(&t).unwrap();
        assert_eq!(t.node_count(), 7);
        assert_eq!(t.source_text(), "{\"a\":1}");
        assert_eq!(t.clone(), t);
    }

    #[test]
    fn source_children_interleave_fields_and_children() {
        let t = sample();
        let pair = &t.children[1];
        let kinds: Vec<_> = pair.source_children().iter().map(|c| c.kind.as_str()).collect();
        assert_eq!(kinds, ["string", ":", "number"]);
    }

    #[test]
    fn validator_rejects_escaping_child() {
        let t = Term::branch("a", sp(0, 2), BTreeMap::new(), vec![Term::leaf("b", sp(1, 3), "x")]);
        let err = validate(&t).unwrap_err();
        assert!(err.message.contains("escapes"), "{err}");
    }

    #[test]
    fn validator_rejects_misordered_children() {
        let t = Term::branch(
            "a",
            sp(0, 4),
            BTreeMap::new(),
            vec![Term::leaf("b", sp(2, 3), "x"), Term::leaf("b", sp(0, 1), "y")],
        );
        assert!(validate(&t).is_err());
    }

    #[test]
    fn validator_rejects_textless_leaf() {
        let mut t = Term::leaf("a", sp(0, 1), "x");
        t.text = None;
        assert!(validate(&t).is_err());
    }

    #[test]
    fn deep_chain_clones_compares_and_drops() {
        let mut t = Term::leaf("x", sp(0, 0), "");
        for _ in 0..200_000 {
            t = Term::branch("n", sp(0, 0), BTreeMap::new(), vec![t]);
        }
        let u = t.clone();
        assert!(t == u);
        assert_eq!(u.node_count(), 200_001);
    }
}

//! Runtime support for generated typed ASTs.
//!
//! Generated code maps a [`Term`] onto one Rust type per grammar node type.
//! Every child position is a [`Checked`]: either the decoded value or, when
//! the subtree is a parse error or does not fit the declared type, the raw
//! term. Decoding therefore never fails on malformed input.

pub use crate::span::SourceSpan;
pub use crate::term::Term;

/// Implemented by every generated type.
pub trait FromTerm: Sized {
    /// Whether a node of this kind can decode as `Self`.
    fn accepts(kind: &str) -> bool;
    /// Decodes a node whose kind is accepted. `None` when the node's shape
    /// does not match the declaration.
    fn from_term(term: &Term) -> Option<Self>;
    /// Pushes the span of every node this value covers.
    fn spans(&self, out: &mut Vec<SourceSpan>);
    /// Pushes the raw subtree of every position that failed to decode.
    fn errors<'a>(&'a self, out: &mut Vec<&'a Term>);
}

/// A decoded child, or the original subtree at an erroneous position.
#[derive(Debug, Clone, PartialEq)]
pub enum Checked<T> {
    Valid(Box<T>),
    Invalid(Box<Term>),
}

impl<T: FromTerm> Checked<T> {
    pub fn decode(term: &Term) -> Self {
        stacker::maybe_grow(64 * 1024, 1024 * 1024, || {
            if !term.error.is_ok() || !T::accepts(&term.kind) {
                return Checked::Invalid(Box::new(term.clone()));
            }
            match T::from_term(term) {
                Some(v) => Checked::Valid(Box::new(v)),
                None => Checked::Invalid(Box::new(term.clone())),
            }
        })
    }

    pub fn spans(&self, out: &mut Vec<SourceSpan>) {
        match self {
            Checked::Valid(v) => v.spans(out),
            Checked::Invalid(t) => term_spans(t, out),
        }
    }

    pub fn errors<'a>(&'a self, out: &mut Vec<&'a Term>) {
        match self {
            Checked::Valid(v) => v.errors(out),
            Checked::Invalid(t) => out.push(t),
        }
    }
}

impl<T> Checked<T> {
    pub fn valid(&self) -> Option<&T> {
        match self {
            Checked::Valid(v) => Some(v),
            Checked::Invalid(_) => None,
        }
    }

    pub fn is_valid(&self) -> bool {
        matches!(self, Checked::Valid(_))
    }
}

/// An anonymous token in a slot that admits tokens.
#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: String,
    pub ann: SourceSpan,
    pub text: String,
    pub extras: Vec<Term>,
}

impl Token {
    pub fn from_term(term: &Term) -> Self {
        Token {
            kind: term.kind.clone(),
            ann: term.span,
            text: term.source_text(),
            extras: term.subterms().cloned().collect(),
        }
    }

    pub fn spans(&self, out: &mut Vec<SourceSpan>) {
        out.push(self.ann);
        extras_spans(&self.extras, out);
    }
}

/// Members of a field, in order.
pub fn field<'t>(term: &'t Term, name: &str) -> Vec<&'t Term> {
    term.fields.get(name).map(|v| v.iter().collect()).unwrap_or_default()
}

pub fn one<T: FromTerm>(items: &[&Term]) -> Option<Checked<T>> {
    match items {
        [t] => Some(Checked::decode(t)),
        _ => None,
    }
}

pub fn optional<T: FromTerm>(items: &[&Term]) -> Option<Option<Checked<T>>> {
    match items {
        [] => Some(None),
        [t] => Some(Some(Checked::decode(t))),
        _ => None,
    }
}

pub fn many<T: FromTerm>(items: &[&Term]) -> Vec<Checked<T>> {
    items.iter().map(|t| Checked::decode(t)).collect()
}

/// Members of fields the declaration does not know about.
pub fn undeclared_fields(term: &Term, declared: &[&str]) -> Vec<Term> {
    term.fields
        .iter()
        .filter(|(name, _)| !declared.contains(&name.as_str()))
        .flat_map(|(_, list)| list.iter().cloned())
        .collect()
}

/// Splits unlabelled children into those belonging to the children slot
/// (accepted kinds and parse errors) and the rest (punctuation, comments),
/// which are appended to `extras`.
pub fn split_children<'t>(term: &'t Term, accepts: fn(&str) -> bool, extras: &mut Vec<Term>) -> Vec<&'t Term> {
    let mut slot = Vec::new();
    for child in &term.children {
        if accepts(&child.kind) || !child.error.is_ok() {
            slot.push(child);
        } else {
            extras.push(child.clone());
        }
    }
    slot
}

/// Spans of every node in a term.
pub fn term_spans(term: &Term, out: &mut Vec<SourceSpan>) {
    let mut stack = vec![term];
    while let Some(t) = stack.pop() {
        out.push(t.span);
        stack.extend(t.subterms());
    }
}

/// Extras that contain a parse error.
pub fn extras_errors<'a>(extras: &'a [Term], out: &mut Vec<&'a Term>) {
    out.extend(extras.iter().filter(|t| t.has_error()));
}

pub fn extras_spans(extras: &[Term], out: &mut Vec<SourceSpan>) {
    for t in extras {
        term_spans(t, out);
    }
}

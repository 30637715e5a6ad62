//! Structured recursion over [`Term`]s: fold (catamorphism), unfold
//! (anamorphism) and para (paramorphism).
//!
//! All three run on explicit work-lists instead of the call stack, so trees
//! with hundreds of thousands of nodes, or chains that deep, are fine.
//!
//! Child results are always delivered in *structural order*: every field's
//! list, fields ordered by name, then the node's `children`.

use std::collections::BTreeMap;

use crate::span::SourceSpan;
use crate::term::{ErrorStatus, Term};

/// One node of a tree with its subterms replaced by `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer<'a, R> {
    pub kind: &'a str,
    pub span: SourceSpan,
    pub text: Option<&'a str>,
    pub error: ErrorStatus,
    pub fields: Vec<(&'a str, Vec<R>)>,
    pub children: Vec<R>,
}

impl<'a, R> Layer<'a, R> {
    /// All child results in structural order.
    pub fn results(&self) -> impl Iterator<Item = &R> {
        self.fields.iter().flat_map(|(_, v)| v.iter()).chain(self.children.iter())
    }

    pub fn into_results(self) -> impl Iterator<Item = R> + use<'a, R> {
        self.fields.into_iter().flat_map(|(_, v)| v).chain(self.children)
    }

    pub fn map<S>(self, mut f: impl FnMut(R) -> S) -> Layer<'a, S> {
        Layer {
            kind: self.kind,
            span: self.span,
            text: self.text,
            error: self.error,
            fields: self
                .fields
                .into_iter()
                .map(|(n, v)| (n, v.into_iter().map(&mut f).collect()))
                .collect(),
            children: self.children.into_iter().map(f).collect(),
        }
    }
}

impl Layer<'_, Term> {
    /// Reassembles a node from already-built subterms.
    pub fn into_term(self) -> Term {
        let mut t = Term {
            kind: self.kind.to_string(),
            span: self.span,
            text: self.text.map(str::to_string),
            fields: BTreeMap::new(),
            children: self.children,
            error: self.error,
        };
        for (name, list) in self.fields {
            t.fields.insert(name.to_string(), list);
        }
        t
    }
}

fn split_layer<'a, R>(t: &'a Term, results: Vec<R>) -> Layer<'a, R> {
    let mut it = results.into_iter();
    let fields = t
        .fields
        .iter()
        .map(|(name, list)| (name.as_str(), it.by_ref().take(list.len()).collect()))
        .collect();
    Layer {
        kind: &t.kind,
        span: t.span,
        text: t.text.as_deref(),
        error: t.error,
        fields,
        children: it.collect(),
    }
}

/// Bottom-up evaluation: each node's result is computed from exactly its
/// subterms' results, in structural order.
pub fn fold<R>(term: &Term, mut algebra: impl FnMut(Layer<'_, R>) -> R) -> R {
    enum Step<'a> {
        Enter(&'a Term),
        Exit(&'a Term),
    }
    let mut stack = vec![Step::Enter(term)];
    let mut results: Vec<R> = Vec::new();
    while let Some(step) = stack.pop() {
        match step {
            Step::Enter(t) => {
                stack.push(Step::Exit(t));
                stack.extend(t.subterms().rev().map(Step::Enter));
            }
            Step::Exit(t) => {
                let n = t.arity();
                let mine = results.split_off(results.len() - n);
                let r = algebra(split_layer(t, mine));
                results.push(r);
            }
        }
    }
    results.pop().expect("fold produces a result for the root")
}

/// Like [`fold`], but the algebra also sees each original child subtree
/// alongside its result.
pub fn para<'t, R>(term: &'t Term, mut algebra: impl FnMut(Layer<'t, (&'t Term, R)>) -> R) -> R {
    enum Step<'a> {
        Enter(&'a Term),
        Exit(&'a Term),
    }
    let mut stack = vec![Step::Enter(term)];
    let mut results: Vec<(&'t Term, R)> = Vec::new();
    while let Some(step) = stack.pop() {
        match step {
            Step::Enter(t) => {
                stack.push(Step::Exit(t));
                stack.extend(t.subterms().rev().map(Step::Enter));
            }
            Step::Exit(t) => {
                let n = t.arity();
                let mine = results.split_off(results.len() - n);
                let r = algebra(split_layer(t, mine));
                results.push((t, r));
            }
        }
    }
    results.pop().expect("para produces a result for the root").1
}

/// One step of an unfold: a node's own data plus the seeds of its subterms.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion<S> {
    pub kind: String,
    pub span: SourceSpan,
    pub text: Option<String>,
    pub error: ErrorStatus,
    pub fields: Vec<(String, Vec<S>)>,
    pub children: Vec<S>,
}

impl<S> Expansion<S> {
    pub fn leaf(kind: impl Into<String>, span: SourceSpan, text: impl Into<String>) -> Self {
        Self {
            kind: kind.into(),
            span,
            text: Some(text.into()),
            error: ErrorStatus::Ok,
            fields: Vec::new(),
            children: Vec::new(),
        }
    }

    pub fn branch(kind: impl Into<String>, span: SourceSpan, children: Vec<S>) -> Self {
        Self {
            kind: kind.into(),
            span,
            text: None,
            error: ErrorStatus::Ok,
            fields: Vec::new(),
            children,
        }
    }
}

pub const DEFAULT_MAX_DEPTH: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UnfoldError {
    #[error("unfold exceeded the maximum depth of {0}")]
    DepthExceeded(usize),
}

/// Top-down construction from a seed, with the default depth bound.
pub fn unfold<S>(seed: S, coalgebra: impl FnMut(S) -> Expansion<S>) -> Result<Term, UnfoldError> {
    unfold_bounded(seed, DEFAULT_MAX_DEPTH, coalgebra)
}

/// Top-down construction from a seed. Seeds are expanded in pre-order, and
/// each node's subterms in the order the coalgebra listed them. Returns
/// [`UnfoldError::DepthExceeded`] instead of recursing past `max_depth`
/// levels (the root is depth 1).
pub fn unfold_bounded<S>(
    seed: S,
    max_depth: usize,
    mut coalgebra: impl FnMut(S) -> Expansion<S>,
) -> Result<Term, UnfoldError> {
    struct Frame<S> {
        node: Term,
        // Field name and length per field, in expansion order.
        shape: Vec<(String, usize)>,
        // Seeds still to expand, reversed so `pop` yields the next one.
        pending: Vec<S>,
        built: Vec<Term>,
    }

    fn open<S>(e: Expansion<S>) -> Frame<S> {
        let mut shape = Vec::with_capacity(e.fields.len());
        let mut pending = Vec::new();
        for (name, seeds) in e.fields {
            shape.push((name, seeds.len()));
            pending.extend(seeds);
        }
        pending.extend(e.children);
        pending.reverse();
        Frame {
            node: Term {
                kind: e.kind,
                span: e.span,
                text: e.text,
                fields: BTreeMap::new(),
                children: Vec::new(),
                error: e.error,
            },
            shape,
            pending,
            built: Vec::new(),
        }
    }

    if max_depth == 0 {
        return Err(UnfoldError::DepthExceeded(max_depth));
    }
    let mut stack = vec![open(coalgebra(seed))];
    loop {
        let top = stack.last_mut().expect("stack holds at least the root");
        if let Some(next) = top.pending.pop() {
            if stack.len() >= max_depth {
                return Err(UnfoldError::DepthExceeded(max_depth));
            }
            stack.push(open(coalgebra(next)));
            continue;
        }
        let Frame { mut node, shape, built, .. } = stack.pop().expect("non-empty");
        let mut it = built.into_iter();
        for (name, len) in shape {
            let list: Vec<Term> = it.by_ref().take(len).collect();
            if !list.is_empty() {
                node.fields.entry(name).or_default().extend(list);
            }
        }
        node.children = it.collect();
        match stack.last_mut() {
            Some(parent) => parent.built.push(node),
            None => return Ok(node),
        }
    }
}

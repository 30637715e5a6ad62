use std::collections::BTreeMap;

use crate::span::SourceSpan;
use crate::term::{ErrorStatus, Term};

/// One position of a patch tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Patch {
    /// The node exists on both sides; its subterms are diffed.
    Copy(Box<CopyNode>),
    /// A subtree only present after. `move_id` links it to the deletion it
    /// was moved from.
    Insert { term: Term, move_id: Option<usize> },
    /// A subtree only present before.
    Delete { term: Term, move_id: Option<usize> },
    /// One subtree replaced by another in place. `moved` marks a pair that
    /// the move pass joined from a separate deletion and insertion.
    Replace { before: Term, after: Term, moved: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyNode {
    pub kind: String,
    pub before_span: SourceSpan,
    pub after_span: SourceSpan,
    pub error: ErrorStatus,
    /// Leaf text (equal on both sides).
    pub text: Option<String>,
    /// Children were matched by key, so their order may differ between the
    /// sides; projections restore source order.
    pub keyed: bool,
    pub fields: BTreeMap<String, Vec<Patch>>,
    pub children: Vec<Patch>,
}

impl Drop for CopyNode {
    fn drop(&mut self) {
        let mut stack: Vec<Patch> = std::mem::take(&mut self.children);
        for (_, list) in std::mem::take(&mut self.fields) {
            stack.extend(list);
        }
        while let Some(p) = stack.pop() {
            if let Patch::Copy(mut c) = p {
                stack.append(&mut c.children);
                for (_, list) in std::mem::take(&mut c.fields) {
                    stack.extend(list);
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Projection {
    Before,
    After,
}

impl Patch {
    pub fn is_copy(&self) -> bool {
        matches!(self, Patch::Copy(_))
    }

    /// Span on the given side, if the position exists there.
    pub fn span(&self, side: Projection) -> Option<SourceSpan> {
        match (self, side) {
            (Patch::Copy(c), Projection::Before) => Some(c.before_span),
            (Patch::Copy(c), Projection::After) => Some(c.after_span),
            (Patch::Insert { term, .. }, Projection::After) => Some(term.span),
            (Patch::Delete { term, .. }, Projection::Before) => Some(term.span),
            (Patch::Replace { before, .. }, Projection::Before) => Some(before.span),
            (Patch::Replace { after, .. }, Projection::After) => Some(after.span),
            _ => None,
        }
    }

    pub fn kind(&self) -> &str {
        match self {
            Patch::Copy(c) => &c.kind,
            Patch::Insert { term, .. } | Patch::Delete { term, .. } => &term.kind,
            Patch::Replace { before, .. } => &before.kind,
        }
    }

    /// Direct sub-positions of a copy, fields by name then children.
    pub fn subpatches(&self) -> impl Iterator<Item = &Patch> + '_ {
        let copy = match self {
            Patch::Copy(c) => Some(c),
            _ => None,
        };
        copy.into_iter().flat_map(|c| c.fields.values().flatten().chain(c.children.iter()))
    }

    /// Pre-order walk over all positions; never descends into inserted,
    /// deleted or replaced subtrees.
    pub fn positions(&self) -> impl Iterator<Item = &Patch> + '_ {
        let mut stack = vec![self];
        std::iter::from_fn(move || {
            let p = stack.pop()?;
            let subs: Vec<&Patch> = p.subpatches().collect();
            stack.extend(subs.into_iter().rev());
            Some(p)
        })
    }
}

/// The result of diffing two terms. The root is always a copy or a
/// replacement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatchTree {
    pub root: Patch,
}

impl PatchTree {
    /// Positions that are not copies.
    pub fn changes(&self) -> impl Iterator<Item = &Patch> + '_ {
        self.root.positions().filter(|p| !p.is_copy())
    }

    /// No insertions, deletions or replacements anywhere.
    pub fn is_identity(&self) -> bool {
        self.changes().next().is_none()
    }

    pub fn project(&self, side: Projection) -> Term {
        project(&self.root, side).expect("patch roots exist on both sides")
    }
}

/// Reconstructs one side of a diff.
pub fn apply_patch(patch: &PatchTree, side: Projection) -> Term {
    patch.project(side)
}

fn project(patch: &Patch, side: Projection) -> Option<Term> {
    match (patch, side) {
        (Patch::Copy(c), _) => Some(project_copy(c, side)),
        (Patch::Insert { term, .. }, Projection::After) | (Patch::Delete { term, .. }, Projection::Before) => {
            Some(term.clone())
        }
        (Patch::Replace { before, .. }, Projection::Before) => Some(before.clone()),
        (Patch::Replace { after, .. }, Projection::After) => Some(after.clone()),
        _ => None,
    }
}

fn project_list(list: &[Patch], side: Projection, keyed: bool) -> Vec<Term> {
    let mut out: Vec<Term> = list.iter().filter_map(|p| project(p, side)).collect();
    if keyed {
        out.sort_by_key(|t| (t.span.start_byte, t.span.end_byte));
    }
    out
}

fn project_copy(c: &CopyNode, side: Projection) -> Term {
    stacker::maybe_grow(64 * 1024, 1024 * 1024, || {
        let mut fields = BTreeMap::new();
        for (name, list) in &c.fields {
            let projected = project_list(list, side, false);
            if !projected.is_empty() {
                fields.insert(name.clone(), projected);
            }
        }
        Term {
            kind: c.kind.clone(),
            span: match side {
                Projection::Before => c.before_span,
                Projection::After => c.after_span,
            },
            text: c.text.clone(),
            fields,
            children: project_list(&c.children, side, c.keyed),
            error: c.error,
        }
    })
}

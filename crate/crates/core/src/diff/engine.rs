use std::collections::BTreeMap;

use super::moves;
use super::patch::{CopyNode, Patch, PatchTree};
use super::ses::{ses, ses_traced, Edit, Trace, DEFAULT_TRACE_CAP};
use super::DiffOptions;
use crate::span::SourceSpan;
use crate::term::Term;

/// Something the differ noticed but worked around.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    /// A child of a keyed node had no key field; it was aligned by list
    /// diffing instead.
    MissingKeyField { parent: String, key_field: String, child: String, span: SourceSpan },
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diagnostic::MissingKeyField { parent, key_field, child, span } => write!(
                f,
                "`{child}` at {span} under keyed `{parent}` has no `{key_field}` field; diffed as a list element"
            ),
        }
    }
}

/// Diff state: options, collected diagnostics and (optionally) traces of
/// every list alignment.
pub struct Differ<'o> {
    opts: &'o DiffOptions,
    diagnostics: Vec<Diagnostic>,
    traces: Option<Vec<Trace>>,
}

pub fn diff_terms(before: &Term, after: &Term, opts: &DiffOptions) -> PatchTree {
    Differ::new(opts).diff(before, after)
}

/// Diffs two dictionary-shaped nodes, matching their children by the text
/// of `key_field` regardless of order.
pub fn diff_keyed(before: &Term, after: &Term, key_field: &str, opts: &DiffOptions) -> (PatchTree, Vec<Diagnostic>) {
    let mut differ = Differ::new(opts);
    let tree = differ.diff_keyed(before, after, key_field);
    (tree, differ.diagnostics)
}

/// Shallow comparison data for one list element.
struct Head<'t> {
    term: &'t Term,
    identity: Option<String>,
}

impl Head<'_> {
    fn pairable(&self, other: &Head<'_>) -> bool {
        let (a, b) = (self.term, other.term);
        a.kind == b.kind && a.error == b.error && a.is_leaf() == b.is_leaf() && self.identity == other.identity
    }

    fn same(&self, other: &Head<'_>) -> bool {
        self.pairable(other) && (!self.term.is_leaf() || self.term.text == other.term.text)
    }

    fn label(&self) -> String {
        match (&self.term.text, self.term.is_leaf()) {
            (Some(text), true) => text.chars().take(24).collect(),
            _ => self.term.kind.clone(),
        }
    }
}

impl<'o> Differ<'o> {
    pub fn new(opts: &'o DiffOptions) -> Self {
        Self { opts, diagnostics: Vec::new(), traces: None }
    }

    /// Records a search trace for every list alignment.
    pub fn with_traces(mut self) -> Self {
        self.traces = Some(Vec::new());
        self
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }

    pub fn take_traces(&mut self) -> Vec<Trace> {
        self.traces.as_mut().map(std::mem::take).unwrap_or_default()
    }

    pub fn diff(&mut self, before: &Term, after: &Term) -> PatchTree {
        let root = if self.identity(before) == self.identity(after) {
            self.diff_node(before, after)
        } else {
            replace(before, after)
        };
        self.finish(root)
    }

    pub fn diff_keyed(&mut self, before: &Term, after: &Term, key_field: &str) -> PatchTree {
        let root = self.diff_node_with(before, after, Some(key_field));
        self.finish(root)
    }

    fn finish(&self, mut root: Patch) -> PatchTree {
        if self.opts.move_detection {
            moves::detect_moves(&mut root, self.opts);
        }
        PatchTree { root }
    }

    fn identity(&self, t: &Term) -> Option<String> {
        let field = self.opts.identity_fields.get(&t.kind)?;
        Some(t.field(field).map(Term::source_text).unwrap_or_default())
    }

    fn head<'t>(&self, t: &'t Term) -> Head<'t> {
        Head { term: t, identity: self.identity(t) }
    }

    fn diff_node(&mut self, before: &Term, after: &Term) -> Patch {
        let key = self.opts.keyed_kinds.get(&before.kind).cloned();
        self.diff_node_with(before, after, key.as_deref())
    }

    fn diff_node_with(&mut self, before: &Term, after: &Term, key_field: Option<&str>) -> Patch {
        if before.kind != after.kind || before.error != after.error || before.is_leaf() != after.is_leaf() {
            return replace(before, after);
        }
        if before.is_leaf() {
            return if before.text == after.text { copy_leaf(before, after) } else { replace(before, after) };
        }
        stacker::maybe_grow(64 * 1024, 1024 * 1024, || {
            let mut fields = BTreeMap::new();
            let names: std::collections::BTreeSet<&String> = before.fields.keys().chain(after.fields.keys()).collect();
            for name in names {
                let list = match (before.fields.get(name), after.fields.get(name)) {
                    (Some(b), Some(a)) if b.len() == 1 && a.len() == 1 => self.diff_slot(&b[0], &a[0]),
                    (Some(b), Some(a)) => self.diff_list(&b.iter().collect::<Vec<_>>(), &a.iter().collect::<Vec<_>>()),
                    (Some(b), None) => b.iter().map(delete).collect(),
                    (None, Some(a)) => a.iter().map(insert).collect(),
                    (None, None) => unreachable!(),
                };
                fields.insert(name.clone(), list);
            }
            let (children, keyed) = match key_field {
                Some(key) => self.diff_keyed_children(before, after, key),
                None => (self.diff_list(&before.children.iter().collect::<Vec<_>>(), &after.children.iter().collect::<Vec<_>>()), false),
            };
            Patch::Copy(Box::new(CopyNode {
                kind: before.kind.clone(),
                before_span: before.span,
                after_span: after.span,
                error: before.error,
                text: None,
                keyed,
                fields,
                children,
            }))
        })
    }

    /// A fixed-arity position present on both sides.
    fn diff_slot(&mut self, before: &Term, after: &Term) -> Vec<Patch> {
        if before.kind == after.kind && self.identity(before) != self.identity(after) {
            vec![delete(before), insert(after)]
        } else {
            vec![self.diff_node(before, after)]
        }
    }

    fn align(&mut self, before: &[Head<'_>], after: &[Head<'_>], eq: impl Fn(&Head<'_>, &Head<'_>) -> bool) -> Vec<Edit> {
        match &mut self.traces {
            Some(traces) => {
                let (script, mut trace) = ses_traced(before, after, eq, DEFAULT_TRACE_CAP);
                trace.before_labels = before.iter().map(Head::label).collect();
                trace.after_labels = after.iter().map(Head::label).collect();
                traces.push(trace);
                script.edits
            }
            None => ses(before, after, eq).edits,
        }
    }

    /// Variable-arity lists: align heads with a shortest edit script, then
    /// pair up same-kind leftovers in each gap so changed leaves become
    /// replacements.
    fn diff_list(&mut self, before: &[&Term], after: &[&Term]) -> Vec<Patch> {
        let hb: Vec<Head<'_>> = before.iter().map(|t| self.head(t)).collect();
        let ha: Vec<Head<'_>> = after.iter().map(|t| self.head(t)).collect();
        let edits = self.align(&hb, &ha, |x, y| x.same(y));
        let mut out = Vec::with_capacity(edits.len());
        let (mut gap_b, mut gap_a) = (Vec::new(), Vec::new());
        for e in edits {
            match e {
                Edit::Delete(i) => gap_b.push(i),
                Edit::Insert(j) => gap_a.push(j),
                Edit::Keep(i, j) => {
                    self.flush_gap(&hb, &ha, &mut gap_b, &mut gap_a, &mut out);
                    out.push(self.diff_node(before[i], after[j]));
                }
            }
        }
        self.flush_gap(&hb, &ha, &mut gap_b, &mut gap_a, &mut out);
        out
    }

    fn flush_gap(
        &mut self,
        hb: &[Head<'_>],
        ha: &[Head<'_>],
        gap_b: &mut Vec<usize>,
        gap_a: &mut Vec<usize>,
        out: &mut Vec<Patch>,
    ) {
        if gap_b.is_empty() || gap_a.is_empty() {
            out.extend(gap_b.drain(..).map(|i| delete(hb[i].term)));
            out.extend(gap_a.drain(..).map(|j| insert(ha[j].term)));
            return;
        }
        let sub_b: Vec<&Head<'_>> = gap_b.iter().map(|&i| &hb[i]).collect();
        let sub_a: Vec<&Head<'_>> = gap_a.iter().map(|&j| &ha[j]).collect();
        for e in ses(&sub_b, &sub_a, |x, y| x.pairable(y)).edits {
            out.push(match e {
                Edit::Keep(i, j) => self.diff_node(sub_b[i].term, sub_a[j].term),
                Edit::Delete(i) => delete(sub_b[i].term),
                Edit::Insert(j) => insert(sub_a[j].term),
            });
        }
        gap_b.clear();
        gap_a.clear();
    }

    /// Children of a keyed node: entries carrying the key field are matched
    /// by key text (positionally among duplicates); the rest are list
    /// diffed. Falls back to plain list diffing when sibling spans tie,
    /// since source order could not then be restored from spans.
    fn diff_keyed_children(&mut self, before: &Term, after: &Term, key_field: &str) -> (Vec<Patch>, bool) {
        let strictly_ordered = |t: &Term| {
            t.children.windows(2).all(|w| (w[0].span.start_byte, w[0].span.end_byte) < (w[1].span.start_byte, w[1].span.end_byte))
        };
        let b_all: Vec<&Term> = before.children.iter().collect();
        let a_all: Vec<&Term> = after.children.iter().collect();
        if !strictly_ordered(before) || !strictly_ordered(after) {
            return (self.diff_list(&b_all, &a_all), false);
        }
        type Groups<'t> = BTreeMap<(String, String), (Vec<usize>, Vec<usize>)>;
        let mut groups: Groups<'_> = BTreeMap::new();
        let mut loose_b = Vec::new();
        let mut loose_a = Vec::new();
        for (side, list) in [(0, &b_all), (1, &a_all)] {
            for (idx, child) in list.iter().enumerate() {
                match child.field(key_field) {
                    Some(k) => {
                        let entry = groups.entry((k.kind.clone(), k.source_text())).or_default();
                        if side == 0 { entry.0.push(idx) } else { entry.1.push(idx) }
                    }
                    None => {
                        if !child.is_leaf() {
                            self.diagnostics.push(Diagnostic::MissingKeyField {
                                parent: before.kind.clone(),
                                key_field: key_field.to_string(),
                                child: child.kind.clone(),
                                span: child.span,
                            });
                        }
                        if side == 0 { loose_b.push(*child) } else { loose_a.push(*child) }
                    }
                }
            }
        }
        // Entries present after are ordered by after position; pure
        // deletions follow in before order.
        let mut placed: Vec<(usize, usize, Patch)> = Vec::new();
        for (bs, as_) in groups.values() {
            for (n, &i) in bs.iter().enumerate() {
                match as_.get(n) {
                    Some(&j) => placed.push((0, j, self.diff_node(b_all[i], a_all[j]))),
                    None => placed.push((1, i, delete(b_all[i]))),
                }
            }
            for &j in as_.iter().skip(bs.len()) {
                placed.push((0, j, insert(a_all[j])));
            }
        }
        for p in self.diff_list(&loose_b, &loose_a) {
            let rank = match (p.span(super::Projection::After), p.span(super::Projection::Before)) {
                (Some(s), _) => (0, position_of(&a_all, s)),
                (None, Some(s)) => (1, position_of(&b_all, s)),
                (None, None) => unreachable!(),
            };
            placed.push((rank.0, rank.1, p));
        }
        placed.sort_by_key(|(class, pos, _)| (*class, *pos));
        (placed.into_iter().map(|(_, _, p)| p).collect(), true)
    }
}

fn position_of(list: &[&Term], span: SourceSpan) -> usize {
    list.iter().position(|t| t.span == span).unwrap_or(usize::MAX)
}

fn copy_leaf(before: &Term, after: &Term) -> Patch {
    Patch::Copy(Box::new(CopyNode {
        kind: before.kind.clone(),
        before_span: before.span,
        after_span: after.span,
        error: before.error,
        text: before.text.clone(),
        keyed: false,
        fields: BTreeMap::new(),
        children: Vec::new(),
    }))
}

fn replace(before: &Term, after: &Term) -> Patch {
    Patch::Replace { before: before.clone(), after: after.clone(), moved: false }
}

fn delete(t: &Term) -> Patch {
    Patch::Delete { term: t.clone(), move_id: None }
}

fn insert(t: &Term) -> Patch {
    Patch::Insert { term: t.clone(), move_id: None }
}

#[cfg(test)]
mod tests {
    use super::super::{apply_patch, Projection};
    use super::*;
    use crate::language::Registry;
    use crate::parse::parse_source;
    use crate::span::Point;

    fn sp(a: usize, b: usize) -> SourceSpan {
        SourceSpan::new(a, b, Point::new(0, a), Point::new(0, b))
    }

    fn num(at: usize, text: &str) -> Term {
        Term::leaf("number", sp(at, at + 1), text)
    }

    fn array(items: Vec<Term>) -> Term {
        let end = items.last().map_or(0, |t| t.span.end_byte);
        Term::branch("array", sp(0, end), BTreeMap::new(), items)
    }

    fn json(src: &str) -> Term {
        parse_source(Registry::builtin().get("json").unwrap(), src.as_bytes()).unwrap()
    }

    fn check_projections(a: &Term, b: &Term, p: &PatchTree) {
        assert_eq!(&apply_patch(p, Projection::Before), a);
        assert_eq!(&apply_patch(p, Projection::After), b);
    }

    #[test]
    fn reflexive_diff_is_all_copy() {
        let t = json(r#"{"a": [1, 2, {"b": null}], "c": "d"}"#);
        let p = diff_terms(&t, &t, &DiffOptions::default());
        assert!(p.is_identity());
        check_projections(&t, &t, &p);
    }

    #[test]
    fn differing_leaves_are_replaced() {
        let (a, b) = (num(0, "1"), num(0, "2"));
        let p = diff_terms(&a, &b, &DiffOptions::default());
        assert_eq!(p.root, Patch::Replace { before: a, after: b, moved: false });
    }

    #[test]
    fn removing_the_middle_element_is_one_delete() {
        let a = array(vec![num(0, "1"), num(1, "2"), num(2, "3")]);
        let b = array(vec![num(0, "1"), num(1, "3")]);
        let p = diff_terms(&a, &b, &DiffOptions { move_detection: false, ..Default::default() });
        let changes: Vec<_> = p.changes().collect();
        assert_eq!(changes.len(), 1);
        assert!(matches!(changes[0], Patch::Delete { term, .. } if term.text.as_deref() == Some("2")));
        check_projections(&a, &b, &p);
    }

    #[test]
    fn removing_a_json_element_deletes_it() {
        let (a, b) = (json("[1,2,3]"), json("[1,3]"));
        let p = diff_terms(&a, &b, &DiffOptions::default());
        let deleted: Vec<&str> = p
            .changes()
            .map(|c| match c {
                Patch::Delete { term, .. } => term.text.as_deref().unwrap_or(""),
                other => panic!("unexpected change {other:?}"),
            })
            .collect();
        assert_eq!(deleted.iter().filter(|t| **t == "2").count(), 1);
        assert!(deleted.iter().all(|t| *t == "2" || *t == ","));
        check_projections(&a, &b, &p);
    }

    #[test]
    fn keyed_objects_ignore_order() {
        let opts = Registry::builtin().get("json").unwrap().diff_options();
        let (a, b) = (json(r#"{"a":1,"b":2}"#), json(r#"{"b":2,"a":1}"#));
        let p = diff_terms(&a, &b, &opts);
        assert!(p.is_identity(), "{:?}", p.changes().collect::<Vec<_>>());
        check_projections(&a, &b, &p);
    }

    #[test]
    fn keyed_changes_replace_values_and_insert_pairs() {
        let (a, b) = (json(r#"{"a":1}"#), json(r#"{"a":2,"c":3}"#));
        let object_a = &a.children[0];
        let object_b = &b.children[0];
        let (p, diags) = diff_keyed(object_a, object_b, "key", &DiffOptions::default());
        assert!(diags.is_empty());
        let changes: Vec<_> = p.changes().collect();
        let replaced: Vec<_> = changes
            .iter()
            .filter_map(|c| match c {
                Patch::Replace { before, after, .. } => Some((before.source_text(), after.source_text())),
                _ => None,
            })
            .collect();
        assert_eq!(replaced, [("1".to_string(), "2".to_string())]);
        let inserted: Vec<String> = changes
            .iter()
            .filter_map(|c| match c {
                Patch::Insert { term, .. } if term.kind == "pair" => Some(term.source_text()),
                _ => None,
            })
            .collect();
        assert_eq!(inserted, ["\"c\":3"]);
        assert!(!changes.iter().any(|c| matches!(c, Patch::Delete { .. })));
        check_projections(object_a, object_b, &p);
    }

    #[test]
    fn children_without_keys_are_reported() {
        let leaf = |at| Term::leaf("x", sp(at, at + 1), "x");
        let keyless = |at| Term::branch("entry", sp(at, at + 1), BTreeMap::new(), vec![leaf(at)]);
        let a = Term::branch("dict", sp(0, 2), BTreeMap::new(), vec![keyless(0), keyless(1)]);
        let (p, diags) = diff_keyed(&a, &a, "key", &DiffOptions::default());
        // One per keyless child, on each side.
        assert_eq!(diags.len(), 4);
        assert!(p.is_identity());
    }

    #[test]
    fn functions_align_by_name() {
        let python = Registry::builtin().get("python").unwrap().clone();
        let opts = python.diff_options();
        let a = parse_source(&python, b"def foo():\n    return 1\n\ndef bar():\n    return 2\n").unwrap();
        let b = parse_source(&python, b"def bar():\n    return 3\n\ndef foo():\n    return 1\n").unwrap();
        let p = diff_terms(&a, &b, &DiffOptions { move_detection: false, ..opts });
        let Patch::Copy(root) = &p.root else { panic!() };
        let name = |t: &Term| t.field("name").unwrap().source_text();
        let funcs: Vec<&Patch> = root.children.iter().filter(|c| c.kind() == "function_definition").collect();
        assert_eq!(funcs.len(), 3);
        // Whichever function is kept, it is paired with its namesake.
        for f in funcs {
            match f {
                Patch::Copy(c) => {
                    let tree = PatchTree { root: f.clone() };
                    assert_eq!(name(&tree.project(Projection::Before)), name(&tree.project(Projection::After)));
                    assert_ne!(c.before_span, c.after_span);
                }
                Patch::Insert { term, .. } | Patch::Delete { term, .. } => {
                    assert_eq!(name(term), if c_name_kept(root) == "foo" { "bar" } else { "foo" })
                }
                Patch::Replace { .. } => panic!("functions with different names were paired"),
            }
        }
        check_projections(&a, &b, &p);
    }

    fn c_name_kept(root: &CopyNode) -> String {
        let kept = root.children.iter().find(|c| c.is_copy() && c.kind() == "function_definition").unwrap();
        PatchTree { root: kept.clone() }.project(Projection::Before).field("name").unwrap().source_text()
    }

    #[test]
    fn deep_trees_do_not_overflow() {
        let mut a = Term::leaf("x", SourceSpan::empty(), "");
        let mut b = Term::leaf("x", SourceSpan::empty(), "y");
        for _ in 0..50_000 {
            a = Term::branch("w", SourceSpan::empty(), BTreeMap::new(), vec![a]);
            b = Term::branch("w", SourceSpan::empty(), BTreeMap::new(), vec![b]);
        }
        let p = diff_terms(&a, &b, &DiffOptions::default());
        assert_eq!(p.changes().count(), 1);
        assert_eq!(apply_patch(&p, Projection::After), b);
    }
}

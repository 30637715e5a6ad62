//! Move detection over the deletions and insertions left by alignment.

use super::patch::Patch;
use super::pqgram::{feature_vector, FeatureVector};
use super::DiffOptions;
use crate::term::Term;

/// Pairs deleted with inserted subtrees whose feature vectors lie within
/// the similarity threshold. Pairs are accepted closest first (ties by
/// index), each subtree at most once, which makes every accepted pair
/// mutually nearest among the subtrees still unpaired. Sorted by the
/// `before` index.
pub fn match_moves(before: &[&Term], after: &[&Term], opts: &DiffOptions) -> Vec<(usize, usize)> {
    if before.is_empty() || after.is_empty() {
        return Vec::new();
    }
    let fv = |t: &&Term| feature_vector(t, opts.p, opts.q, opts.d);
    let vb: Vec<FeatureVector> = before.iter().map(fv).collect();
    let va: Vec<FeatureVector> = after.iter().map(fv).collect();
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (i, b) in vb.iter().enumerate() {
        for (j, a) in va.iter().enumerate() {
            let dist = b.relative_distance(a);
            if dist <= opts.similarity_threshold {
                candidates.push((dist, i, j));
            }
        }
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut used_b = vec![false; before.len()];
    let mut used_a = vec![false; after.len()];
    let mut pairs = Vec::new();
    for (_, i, j) in candidates {
        if !used_b[i] && !used_a[j] {
            used_b[i] = true;
            used_a[j] = true;
            pairs.push((i, j));
        }
    }
    pairs.sort_unstable();
    pairs
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Entry {
    Delete,
    Insert,
    Other,
}

/// Where a candidate sits: the visit-order id of its list and its index.
#[derive(Clone, Copy)]
struct Site {
    list: usize,
    index: usize,
}

struct Survey<'p> {
    lists: Vec<Vec<Entry>>,
    deleted: Vec<(&'p Term, Site)>,
    inserted: Vec<(&'p Term, Site)>,
}

fn eligible(t: &Term, opts: &DiffOptions) -> bool {
    if opts.significant_kinds.is_empty() {
        !t.is_leaf()
    } else {
        opts.significant_kinds.contains(&t.kind)
    }
}

fn survey<'p>(root: &'p Patch, opts: &DiffOptions) -> Survey<'p> {
    let mut s = Survey { lists: Vec::new(), deleted: Vec::new(), inserted: Vec::new() };
    let mut stack = vec![root];
    while let Some(p) = stack.pop() {
        let Patch::Copy(c) = p else { continue };
        let mut nested = Vec::new();
        for list in c.fields.values().chain(std::iter::once(&c.children)) {
            let id = s.lists.len();
            let mut kinds = Vec::with_capacity(list.len());
            for (index, entry) in list.iter().enumerate() {
                kinds.push(match entry {
                    Patch::Delete { term, move_id: None } => {
                        if eligible(term, opts) {
                            s.deleted.push((term, Site { list: id, index }));
                        }
                        Entry::Delete
                    }
                    Patch::Insert { term, move_id: None } => {
                        if eligible(term, opts) {
                            s.inserted.push((term, Site { list: id, index }));
                        }
                        Entry::Insert
                    }
                    Patch::Copy(_) => {
                        nested.push(entry);
                        Entry::Other
                    }
                    _ => Entry::Other,
                });
            }
            s.lists.push(kinds);
        }
        stack.extend(nested.into_iter().rev());
    }
    s
}

/// What to do with one list entry.
#[derive(Clone, Copy)]
enum Action {
    Link(usize),
    /// Becomes a moved replacement; the paired entry is the given index.
    Merge(usize),
    Remove,
}

/// Runs move detection on a finished patch. A pair that sits in one list
/// with only deletions (or only insertions) between its two ends becomes a
/// single moved replacement; any other pair keeps its deletion and
/// insertion, linked by a shared move id.
pub(crate) fn detect_moves(root: &mut Patch, opts: &DiffOptions) {
    let plan = {
        let s = survey(root, opts);
        let before: Vec<&Term> = s.deleted.iter().map(|(t, _)| *t).collect();
        let after: Vec<&Term> = s.inserted.iter().map(|(t, _)| *t).collect();
        let pairs = match_moves(&before, &after, opts);
        if pairs.is_empty() {
            return;
        }
        let mut plan: Vec<Vec<Option<Action>>> = s.lists.iter().map(|l| vec![None; l.len()]).collect();
        let mut next_id = 0;
        for (i, j) in pairs {
            let (d, n) = (s.deleted[i].1, s.inserted[j].1);
            let adjacent = d.list == n.list && {
                let entries = &s.lists[d.list];
                if d.index < n.index {
                    entries[d.index + 1..n.index].iter().all(|e| *e == Entry::Delete)
                } else {
                    entries[n.index + 1..d.index].iter().all(|e| *e == Entry::Insert)
                }
            };
            if adjacent {
                let (keep, drop) = (d.index.min(n.index), d.index.max(n.index));
                plan[d.list][keep] = Some(Action::Merge(drop));
                plan[d.list][drop] = Some(Action::Remove);
            } else {
                plan[d.list][d.index] = Some(Action::Link(next_id));
                plan[n.list][n.index] = Some(Action::Link(next_id));
                next_id += 1;
            }
        }
        plan
    };
    execute(root, &plan);
}

fn execute(root: &mut Patch, plan: &[Vec<Option<Action>>]) {
    let mut list_id = 0;
    let mut stack: Vec<&mut Patch> = vec![root];
    while let Some(p) = stack.pop() {
        let Patch::Copy(c) = p else { continue };
        let c = &mut **c;
        let mut lists: Vec<&mut Vec<Patch>> = c.fields.values_mut().collect();
        lists.push(&mut c.children);
        let mut nested: Vec<&mut Patch> = Vec::new();
        for list in lists {
            let actions = &plan[list_id];
            list_id += 1;
            if actions.iter().any(Option::is_some) {
                rewrite(list, actions);
            }
            nested.extend(list.iter_mut().filter(|e| e.is_copy()));
        }
        stack.extend(nested.into_iter().rev());
    }
}

fn rewrite(list: &mut Vec<Patch>, actions: &[Option<Action>]) {
    let mut old: Vec<Option<Patch>> = std::mem::take(list).into_iter().map(Some).collect();
    for (idx, action) in actions.iter().enumerate() {
        match *action {
            Some(Action::Link(id)) => match old[idx].as_mut() {
                Some(Patch::Delete { move_id, .. } | Patch::Insert { move_id, .. }) => *move_id = Some(id),
                _ => unreachable!("move links only touch deletions and insertions"),
            },
            Some(Action::Merge(other)) => {
                let (a, b) = (old[idx].take(), old[other].take());
                let (before, after) = match (a, b) {
                    (Some(Patch::Delete { term: before, .. }), Some(Patch::Insert { term: after, .. }))
                    | (Some(Patch::Insert { term: after, .. }), Some(Patch::Delete { term: before, .. })) => (before, after),
                    _ => unreachable!("merged moves pair a deletion with an insertion"),
                };
                old[idx] = Some(Patch::Replace { before, after, moved: true });
            }
            Some(Action::Remove) | None => {}
        }
    }
    *list = old.into_iter().flatten().collect();
}

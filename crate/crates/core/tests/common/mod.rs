#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use semascope_core::{DiffOptions, ErrorStatus, Point, SourceSpan, Term};

/// A tree shape without positions; [`Shape::layout`] assigns spans by
/// writing the leaves out one after another.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Leaf { kind: String, text: String, error: ErrorStatus },
    Node { kind: String, fields: BTreeMap<String, Vec<Shape>>, children: Vec<Shape>, error: ErrorStatus },
}

impl Shape {
    pub fn count(&self) -> usize {
        match self {
            Shape::Leaf { .. } => 1,
            Shape::Node { fields, children, .. } => {
                1 + fields.values().flatten().chain(children).map(Shape::count).sum::<usize>()
            }
        }
    }

    pub fn layout(&self) -> (Term, String) {
        let mut src = String::new();
        let t = lay(self, &mut src);
        (t, src)
    }
}

fn point_at(src: &str) -> Point {
    Point::default().advance(src.as_bytes())
}

fn lay(shape: &Shape, src: &mut String) -> Term {
    match shape {
        Shape::Leaf { kind, text, error } => {
            let (s, sp) = (src.len(), point_at(src));
            src.push_str(text);
            src.push(' ');
            let span = SourceSpan::new(s, s + text.len(), sp, point_at(&src[..s + text.len()]));
            Term::leaf(kind.clone(), span, text.clone()).with_error(*error)
        }
        Shape::Node { kind, fields, children, error } => {
            let (s, sp) = (src.len(), point_at(src));
            let mut out_fields = BTreeMap::new();
            for (name, list) in fields {
                out_fields.insert(name.clone(), list.iter().map(|c| lay(c, src)).collect());
            }
            let out_children: Vec<Term> = children.iter().map(|c| lay(c, src)).collect();
            let span = SourceSpan::new(s, src.len(), sp, point_at(src));
            if out_fields.is_empty() && out_children.is_empty() {
                // A node left without children reads as an empty leaf.
                return Term::leaf(kind.clone(), span, "").with_error(*error);
            }
            Term::branch(kind.clone(), span, out_fields, out_children).with_error(*error)
        }
    }
}

pub const LEAF_TEXTS: [&str; 6] = ["1", "2", "x", "y", "\"s\"", "+"];

pub struct Gen {
    pub rng: StdRng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Self { rng: StdRng::seed_from_u64(seed) }
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    fn error(&mut self) -> ErrorStatus {
        match self.below(40) {
            0 => ErrorStatus::Error,
            1 => ErrorStatus::Missing,
            _ => ErrorStatus::Ok,
        }
    }

    pub fn leaf(&mut self) -> Shape {
        let kind = ["num", "id", "op"][self.below(3)].to_string();
        let text = LEAF_TEXTS[self.below(LEAF_TEXTS.len())].to_string();
        Shape::Leaf { kind, text, error: self.error() }
    }

    /// A random tree with about `budget` nodes. Some nodes are `dict`s whose
    /// entries carry a `k` key field, some are `fn`s with a `name` field.
    pub fn tree(&mut self, budget: usize) -> Shape {
        if budget <= 1 || self.below(5) == 0 {
            return self.leaf();
        }
        let mut left = budget - 1;
        match self.below(6) {
            0 => {
                let mut children = Vec::new();
                while left >= 2 && children.len() < 6 {
                    let size = 1 + self.below(left.min(20));
                    left = left.saturating_sub(size + 1);
                    children.push(self.entry(size));
                }
                Shape::Node { kind: "dict".into(), fields: BTreeMap::new(), children, error: ErrorStatus::Ok }
            }
            1 => {
                let mut fields = BTreeMap::new();
                fields.insert("name".to_string(), vec![Shape::Leaf { kind: "id".into(), text: ["f", "g", "h"][self.below(3)].into(), error: ErrorStatus::Ok }]);
                let body = self.tree(left.saturating_sub(1).max(1));
                fields.insert("body".to_string(), vec![body]);
                Shape::Node { kind: "fn".into(), fields, children: Vec::new(), error: ErrorStatus::Ok }
            }
            _ => {
                let kind = ["list", "call", "block"][self.below(3)].to_string();
                let mut fields = BTreeMap::new();
                if self.below(3) == 0 {
                    let size = 1 + self.below(left.min(10));
                    left = left.saturating_sub(size);
                    fields.insert(["left", "right"][self.below(2)].to_string(), vec![self.tree(size)]);
                }
                let mut children = Vec::new();
                while left > 0 && children.len() < 8 {
                    let size = 1 + self.below(left.min(30));
                    left = left.saturating_sub(size);
                    children.push(self.tree(size));
                }
                Shape::Node { kind, fields, children, error: self.error() }
            }
        }
    }

    fn entry(&mut self, size: usize) -> Shape {
        let mut fields = BTreeMap::new();
        let key = ["a", "b", "c", "d", "e", "f"][self.below(6)];
        fields.insert("k".to_string(), vec![Shape::Leaf { kind: "key".into(), text: key.into(), error: ErrorStatus::Ok }]);
        fields.insert("v".to_string(), vec![self.tree(size.max(1))]);
        Shape::Node { kind: "entry".into(), fields, children: Vec::new(), error: ErrorStatus::Ok }
    }

    /// Applies up to `n` random edits: relabel a leaf, drop, insert or
    /// duplicate a child, or swap two siblings.
    pub fn mutate(&mut self, shape: &Shape, n: usize) -> Shape {
        let mut s = shape.clone();
        for _ in 0..n {
            let target = self.below(s.count());
            let edit = self.below(5);
            let size = 1 + self.below(8);
            let fresh = self.tree(size);
            edit_at(&mut s, target, edit, fresh, &mut self.rng);
        }
        s
    }
}

/// Walks to the `target`-th node in pre-order and applies `edit` there.
fn edit_at(s: &mut Shape, target: usize, edit: usize, fresh: Shape, rng: &mut StdRng) {
    let mut counter = 0;
    let mut slot = Some(fresh);
    visit(s, target, &mut counter, &mut |node| match node {
        Shape::Leaf { text, .. } => *text = LEAF_TEXTS[rng.random_range(0..LEAF_TEXTS.len())].to_string(),
        Shape::Node { children, .. } => {
            let len = children.len();
            match edit {
                0 if len > 0 => {
                    children.remove(rng.random_range(0..len));
                }
                1 | 2 => children.insert(rng.random_range(0..=len), slot.take().expect("used once")),
                3 if len > 0 => {
                    let dup = children[rng.random_range(0..len)].clone();
                    children.insert(rng.random_range(0..=len), dup);
                }
                _ if len > 1 => {
                    let (i, j) = (rng.random_range(0..len), rng.random_range(0..len));
                    children.swap(i, j);
                }
                _ => children.push(slot.take().expect("used once")),
            }
        }
    });
}

fn visit(s: &mut Shape, target: usize, counter: &mut usize, f: &mut dyn FnMut(&mut Shape)) -> bool {
    if *counter == target {
        f(s);
        return true;
    }
    *counter += 1;
    if let Shape::Node { fields, children, .. } = s {
        for c in fields.values_mut().flatten().chain(children.iter_mut()) {
            if visit(c, target, counter, f) {
                return true;
            }
        }
    }
    false
}

pub fn test_options() -> DiffOptions {
    let mut opts = DiffOptions::default();
    opts.keyed_kinds.insert("dict".into(), "k".into());
    opts.identity_fields.insert("fn".into(), "name".into());
    opts
}

pub fn fixtures() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Corpus pairs as (name, extension, before, after), sorted by name.
pub fn corpus() -> Vec<(String, String, Vec<u8>, Vec<u8>)> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(fixtures().join("corpus")).unwrap() {
        let dir = entry.unwrap().path();
        let name = dir.file_name().unwrap().to_string_lossy().into_owned();
        let ext = if dir.join("before.py").exists() { "py" } else { "json" };
        let before = std::fs::read(dir.join(format!("before.{ext}"))).unwrap();
        let after = std::fs::read(dir.join(format!("after.{ext}"))).unwrap();
        out.push((name, ext.to_string(), before, after));
    }
    out.sort();
    out
}

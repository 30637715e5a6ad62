//! pq-grams and the feature vectors built from them.
//!
//! A pq-gram anchored at node `v` pairs the labels of `v` and its `p - 1`
//! nearest ancestors with a window of `q` consecutive child labels. Missing
//! ancestors and the child list's ends are padded with the `*` sentinel. A
//! node with `k >= 1` children contributes `k + q - 1` windows; a leaf
//! contributes one all-sentinel window.
//!
//! A feature vector hashes every gram to one signed unit along one of `d`
//! axes. The hash is fixed, so vectors are a pure function of the labelled
//! tree shape.

use std::collections::BTreeMap;

use crate::term::Term;

pub const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
pub const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    fnv1a_extend(FNV_OFFSET, bytes)
}

fn fnv1a_extend(mut h: u64, bytes: &[u8]) -> u64 {
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// A node label: its kind and a hash of its text (zero for non-leaves).
/// `None` is the `*` sentinel.
pub type Label = Option<(String, u64)>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gram {
    /// Ancestors outermost first, ending with the anchor node.
    pub stem: Vec<Label>,
    pub base: Vec<Label>,
}

pub fn label_of(t: &Term) -> (String, u64) {
    let text_hash = match (&t.text, t.is_leaf()) {
        (Some(text), true) => fnv1a(text.as_bytes()),
        _ => 0,
    };
    (t.kind.clone(), text_hash)
}

/// Canonical byte serialization of a gram.
fn serialize_label(out: &mut Vec<u8>, label: &Label) {
    match label {
        None => out.push(0),
        Some((kind, hash)) => {
            out.push(1);
            out.extend_from_slice(&(kind.len() as u32).to_le_bytes());
            out.extend_from_slice(kind.as_bytes());
            out.extend_from_slice(&hash.to_le_bytes());
        }
    }
}

impl Gram {
    pub fn hash64(&self) -> u64 {
        let mut buf = Vec::new();
        for l in self.stem.iter().chain(&self.base) {
            serialize_label(&mut buf, l);
        }
        fnv1a(&buf)
    }
}

/// Calls `f` for every gram of the tree, walking without recursion.
pub fn for_each_gram(term: &Term, p: usize, q: usize, mut f: impl FnMut(&[Label], &[Label])) {
    assert!(p >= 1 && q >= 1, "pq-gram parameters must be positive");
    let root_stem: Vec<Label> = std::iter::repeat_n(None, p - 1).chain([Some(label_of(term))]).collect();
    let mut stack: Vec<(&Term, Vec<Label>)> = vec![(term, root_stem)];
    let mut window: Vec<Label> = Vec::new();
    while let Some((node, stem)) = stack.pop() {
        let children = node.source_children();
        if children.is_empty() {
            window.clear();
            window.resize(q, None);
            f(&stem, &window);
            continue;
        }
        let labels: Vec<Label> = children.iter().map(|c| Some(label_of(c))).collect();
        let mut padded: Vec<Label> = Vec::with_capacity(labels.len() + 2 * (q - 1));
        padded.extend(std::iter::repeat_n(None, q - 1));
        padded.extend(labels.iter().cloned());
        padded.extend(std::iter::repeat_n(None, q - 1));
        for w in padded.windows(q) {
            f(&stem, w);
        }
        for (child, label) in children.into_iter().zip(labels).rev() {
            let mut child_stem: Vec<Label> = stem[1..].to_vec();
            child_stem.push(label);
            stack.push((child, child_stem));
        }
    }
}

/// All grams of the tree, in pre-order.
pub fn pq_grams(term: &Term, p: usize, q: usize) -> Vec<Gram> {
    let mut out = Vec::new();
    for_each_gram(term, p, q, |stem, base| out.push(Gram { stem: stem.to_vec(), base: base.to_vec() }));
    out
}

/// The grams as a multiset.
pub fn gram_bag(term: &Term, p: usize, q: usize) -> BTreeMap<Gram, usize> {
    let mut bag = BTreeMap::new();
    for g in pq_grams(term, p, q) {
        *bag.entry(g).or_insert(0) += 1;
    }
    bag
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector(pub Vec<f64>);

impl FeatureVector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Euclidean distance.
    pub fn distance(&self, other: &FeatureVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }

    /// Distance normalized by the two magnitudes, in `[0, 1]`.
    pub fn relative_distance(&self, other: &FeatureVector) -> f64 {
        let denom = self.norm() + other.norm();
        if denom == 0.0 {
            0.0
        } else {
            self.distance(other) / denom
        }
    }

    /// Little-endian IEEE-754 bytes of every component.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|x| x.to_le_bytes()).collect()
    }
}

/// Sum over the tree's grams of a signed unit vector: the gram's 64-bit
/// hash picks the axis (`hash mod d`) and the sign (top bit).
pub fn feature_vector(term: &Term, p: usize, q: usize, d: usize) -> FeatureVector {
    assert!(d >= 2, "feature dimension must be at least 2");
    let mut v = vec![0.0f64; d];
    let mut buf = Vec::new();
    for_each_gram(term, p, q, |stem, base| {
        buf.clear();
        for l in stem.iter().chain(base) {
            serialize_label(&mut buf, l);
        }
        let h = fnv1a(&buf);
        let axis = (h % d as u64) as usize;
        if h >> 63 == 1 {
            v[axis] -= 1.0;
        } else {
            v[axis] += 1.0;
        }
    });
    FeatureVector(v)
}

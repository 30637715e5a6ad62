//! Structural diffing.
//!
//! Nodes are aligned by shape: named fields pairwise, child lists with a
//! shortest edit script, dictionary-like nodes by key. Leftover deletions
//! and insertions are then paired by feature-vector similarity to detect
//! moves.

mod engine;
mod git;
mod json;
mod moves;
mod patch;
pub mod pqgram;
pub mod ses;
mod svg;

use std::collections::{BTreeMap, BTreeSet};

pub use engine::{diff_keyed, diff_terms, Diagnostic, Differ};
pub use git::{render_git_patch, GitPatchOptions, SpanOutOfBounds};
pub use json::{decode_json_patch, render_json};
pub use moves::match_moves;
pub use patch::{apply_patch, CopyNode, Patch, PatchTree, Projection};
pub use pqgram::{feature_vector, gram_bag, pq_grams, FeatureVector, Gram};
pub use ses::{ses, ses_traced, Edit, EditScript, Trace, DEFAULT_TRACE_CAP};
pub use svg::render_trace_svg;

#[derive(Debug, Clone, PartialEq)]
pub struct DiffOptions {
    /// pq-gram stem length.
    pub p: usize,
    /// pq-gram base width.
    pub q: usize,
    /// Feature vector dimension.
    pub d: usize,
    /// Largest relative distance at which two subtrees still count as a move.
    pub similarity_threshold: f64,
    pub move_detection: bool,
    /// Node kind to the field whose text identifies the node (a function's
    /// name, say). Same-kind nodes with different identities never align.
    pub identity_fields: BTreeMap<String, String>,
    /// Dictionary-shaped node kinds to the child field holding the key.
    pub keyed_kinds: BTreeMap<String, String>,
    /// Kinds eligible for move detection. Empty admits every non-leaf kind.
    pub significant_kinds: BTreeSet<String>,
}

impl Default for DiffOptions {
    fn default() -> Self {
        Self {
            p: 2,
            q: 3,
            d: 15,
            similarity_threshold: 0.4,
            move_detection: true,
            identity_fields: BTreeMap::new(),
            keyed_kinds: BTreeMap::new(),
            significant_kinds: BTreeSet::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid diff options: {0}")]
pub struct OptionsError(pub String);

impl DiffOptions {
    pub fn validate(&self) -> Result<(), OptionsError> {
        if self.p < 1 {
            return Err(OptionsError("p must be at least 1".into()));
        }
        if self.q < 1 {
            return Err(OptionsError("q must be at least 1".into()));
        }
        if self.d < 2 {
            return Err(OptionsError("d must be at least 2".into()));
        }
        if !(0.0..=1.0).contains(&self.similarity_threshold) {
            return Err(OptionsError(format!(
                "similarity threshold {} is outside [0, 1]",
                self.similarity_threshold
            )));
        }
        Ok(())
    }
}

//! Canonical JSON for patch trees.
//!
//! ```json
//! {"op":"copy","kind":"pair","before_span":[..],"after_span":[..],"error":"ok",
//!  "fields":[["key",[...]]],"children":[...]}
//! {"op":"delete","kind":"number","before_span":[..],"term":{...}}
//! {"op":"insert","kind":"pair","after_span":[..],"moved":true,"move_id":0,"term":{...}}
//! {"op":"replace","kind":"number","before_span":[..],"after_span":[..],"before":{...},"after":{...}}
//! ```
//!
//! Leaf copies add `"text"`, keyed copies `"keyed":true`. Embedded terms use
//! the portable tree format.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer};

use super::patch::{CopyNode, Patch, PatchTree};
use crate::portable::{write_node_into, FormatError, PortableNode};
use crate::span::SourceSpan;
use crate::term::{ErrorStatus, Term};

pub fn render_json(patch: &PatchTree) -> String {
    let mut out = String::new();
    write_patch(&mut out, &patch.root);
    out
}

fn push_str(out: &mut String, s: &str) {
    out.push_str(&serde_json::to_string(s).expect("strings always serialize"));
}

fn push_span(out: &mut String, name: &str, span: &SourceSpan) {
    let [a, b, c, d, e, f] = span.to_array();
    let _ = write!(out, ",\"{name}\":[{a},{b},{c},{d},{e},{f}]");
}

fn push_term(out: &mut String, name: &str, t: &Term) {
    let _ = write!(out, ",\"{name}\":");
    write_node_into(out, t);
}

fn push_move(out: &mut String, move_id: Option<usize>) {
    if let Some(id) = move_id {
        let _ = write!(out, ",\"moved\":true,\"move_id\":{id}");
    }
}

fn write_list(out: &mut String, list: &[Patch]) {
    out.push('[');
    for (i, p) in list.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_patch(out, p);
    }
    out.push(']');
}

fn write_patch(out: &mut String, p: &Patch) {
    stacker::maybe_grow(64 * 1024, 1024 * 1024, || match p {
        Patch::Copy(c) => {
            out.push_str("{\"op\":\"copy\",\"kind\":");
            push_str(out, &c.kind);
            push_span(out, "before_span", &c.before_span);
            push_span(out, "after_span", &c.after_span);
            let _ = write!(out, ",\"error\":\"{}\"", c.error.as_str());
            if let Some(text) = &c.text {
                out.push_str(",\"text\":");
                push_str(out, text);
            }
            if c.keyed {
                out.push_str(",\"keyed\":true");
            }
            out.push_str(",\"fields\":[");
            for (i, (name, list)) in c.fields.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('[');
                push_str(out, name);
                out.push(',');
                write_list(out, list);
                out.push(']');
            }
            out.push_str("],\"children\":");
            write_list(out, &c.children);
            out.push('}');
        }
        Patch::Delete { term, move_id } => {
            out.push_str("{\"op\":\"delete\",\"kind\":");
            push_str(out, &term.kind);
            push_span(out, "before_span", &term.span);
            push_move(out, *move_id);
            push_term(out, "term", term);
            out.push('}');
        }
        Patch::Insert { term, move_id } => {
            out.push_str("{\"op\":\"insert\",\"kind\":");
            push_str(out, &term.kind);
            push_span(out, "after_span", &term.span);
            push_move(out, *move_id);
            push_term(out, "term", term);
            out.push('}');
        }
        Patch::Replace { before, after, moved } => {
            out.push_str("{\"op\":\"replace\",\"kind\":");
            push_str(out, &before.kind);
            push_span(out, "before_span", &before.span);
            push_span(out, "after_span", &after.span);
            if *moved {
                out.push_str(",\"moved\":true");
            }
            push_term(out, "before", before);
            push_term(out, "after", after);
            out.push('}');
        }
    })
}

/// Decodes a patch rendered by [`render_json`].
pub fn decode_json_patch(doc: &str) -> Result<PatchTree, FormatError> {
    let mut de = serde_json::Deserializer::from_str(doc);
    de.disable_recursion_limit();
    let root = {
        let stacked = serde_stacker::Deserializer::new(&mut de);
        Patch::deserialize(stacked)?
    };
    de.end()?;
    Ok(PatchTree { root })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPatch {
    op: String,
    kind: String,
    before_span: Option<[usize; 6]>,
    after_span: Option<[usize; 6]>,
    #[serde(default)]
    moved: bool,
    move_id: Option<usize>,
    error: Option<String>,
    text: Option<String>,
    #[serde(default)]
    keyed: bool,
    #[serde(default)]
    fields: Vec<(String, Vec<Patch>)>,
    #[serde(default)]
    children: Vec<Patch>,
    term: Option<PortableNode>,
    before: Option<PortableNode>,
    after: Option<PortableNode>,
}

impl<'de> Deserialize<'de> for Patch {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawPatch::deserialize(d)?;
        build(raw).map_err(D::Error::custom)
    }
}

fn build(raw: RawPatch) -> Result<Patch, String> {
    let need = |v: Option<PortableNode>, name: &str| v.map(|n| n.0).ok_or_else(|| format!("`{}` patch needs `{name}`", raw.op));
    let moved_id = |moved: bool, id: Option<usize>| match (moved, id) {
        (true, Some(id)) => Ok(Some(id)),
        (false, None) => Ok(None),
        _ => Err("`moved` and `move_id` go together".to_string()),
    };
    match raw.op.as_str() {
        "copy" => {
            let span = |s: Option<[usize; 6]>, name: &str| {
                s.map(SourceSpan::from_array).ok_or_else(|| format!("copy needs `{name}`"))
            };
            let error = raw.error.as_deref().and_then(ErrorStatus::parse).ok_or("copy needs a valid `error`")?;
            let mut fields = BTreeMap::new();
            for (name, list) in raw.fields {
                if fields.insert(name.clone(), list).is_some() {
                    return Err(format!("duplicate field `{name}`"));
                }
            }
            Ok(Patch::Copy(Box::new(CopyNode {
                before_span: span(raw.before_span, "before_span")?,
                after_span: span(raw.after_span, "after_span")?,
                kind: raw.kind,
                error,
                text: raw.text,
                keyed: raw.keyed,
                fields,
                children: raw.children,
            })))
        }
        "delete" => {
            let move_id = moved_id(raw.moved, raw.move_id)?;
            Ok(Patch::Delete { term: need(raw.term, "term")?, move_id })
        }
        "insert" => {
            let move_id = moved_id(raw.moved, raw.move_id)?;
            Ok(Patch::Insert { term: need(raw.term, "term")?, move_id })
        }
        "replace" => {
            let moved = raw.moved;
            let before = need(raw.before, "before")?;
            let after = need(raw.after, "after")?;
            Ok(Patch::Replace { before, after, moved })
        }
        other => Err(format!("unknown op `{other}`")),
    }
}

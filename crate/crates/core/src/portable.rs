//! The portable tree interchange format, plus an s-expression dump.
//!
//! A document is UTF-8 JSON; each node is
//!
//! ```json
//! {"kind":"pair","span":[sb,eb,sr,sc,er,ec],"error":"ok","text":"...",
//!  "fields":[["key",[...]],["value",[...]]],"children":[...]}
//! ```
//!
//! `text` appears only on leaves. Fields are an array of `[name, nodes]`
//! pairs so their order survives any JSON tooling. Encoding is canonical:
//! equal terms always produce byte-identical documents.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use serde::de::value::MapAccessDeserializer;
use serde::de::{Error as _, MapAccess, Visitor};
use serde::{Deserialize, Deserializer};

use crate::span::SourceSpan;
use crate::term::{ErrorStatus, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message} at line {line}, column {column}")]
pub struct FormatError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep the bare message.
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        FormatError { line: e.line(), column: e.column(), message }
    }
}

/// Canonical compact encoding of a term.
pub fn encode(term: &Term) -> String {
    let mut out = String::new();
    write_node_into(&mut out, term);
    out
}

enum Emit<'a> {
    Node(&'a Term),
    Raw(&'static str),
    Str(&'a str),
}

fn push_json_str(out: &mut String, s: &str) {
    out.push_str(&serde_json::to_string(s).expect("strings always serialize"));
}

/// Appends the canonical encoding of `term` to `out`, without recursion.
pub(crate) fn write_node_into(out: &mut String, term: &Term) {
    let mut stack = vec![Emit::Node(term)];
    while let Some(task) = stack.pop() {
        match task {
            Emit::Raw(s) => out.push_str(s),
            Emit::Str(s) => push_json_str(out, s),
            Emit::Node(t) => {
                out.push_str("{\"kind\":");
                push_json_str(out, &t.kind);
                let [a, b, c, d, e, f] = t.span.to_array();
                let _ = write!(out, ",\"span\":[{a},{b},{c},{d},{e},{f}],\"error\":\"{}\"", t.error.as_str());
                if let Some(text) = &t.text {
                    out.push_str(",\"text\":");
                    push_json_str(out, text);
                }
                out.push_str(",\"fields\":[");
                // Tasks are pushed in reverse emission order.
                let mut tasks: Vec<Emit<'_>> = Vec::new();
                for (i, (name, list)) in t.fields.iter().enumerate() {
                    if i > 0 {
                        tasks.push(Emit::Raw(","));
                    }
                    tasks.push(Emit::Raw("["));
                    tasks.push(Emit::Str(name));
                    tasks.push(Emit::Raw(",["));
                    for (j, n) in list.iter().enumerate() {
                        if j > 0 {
                            tasks.push(Emit::Raw(","));
                        }
                        tasks.push(Emit::Node(n));
                    }
                    tasks.push(Emit::Raw("]]"));
                }
                tasks.push(Emit::Raw("],\"children\":["));
                for (j, n) in t.children.iter().enumerate() {
                    if j > 0 {
                        tasks.push(Emit::Raw(","));
                    }
                    tasks.push(Emit::Node(n));
                }
                tasks.push(Emit::Raw("]}"));
                stack.extend(tasks.into_iter().rev());
            }
        }
    }
}

/// Decodes a portable document, checking every term invariant. The first
/// violation is reported with the document position where it was detected.
pub fn decode(doc: &str) -> Result<Term, FormatError> {
    let mut de = serde_json::Deserializer::from_str(doc);
    de.disable_recursion_limit();
    let node = {
        let stacked = serde_stacker::Deserializer::new(&mut de);
        PortableNode::deserialize(stacked)?
    };
    de.end()?;
    Ok(node.0)
}

/// A decoded node. Deserializing validates the node against its already
/// decoded children.
pub(crate) struct PortableNode(pub(crate) Term);

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNode {
    kind: String,
    span: [usize; 6],
    error: String,
    #[serde(default)]
    text: Option<String>,
    #[serde(default)]
    fields: Vec<(String, Vec<PortableNode>)>,
    #[serde(default)]
    children: Vec<PortableNode>,
}

impl<'de> Deserialize<'de> for PortableNode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        // Validating inside `visit_map` lets the JSON reader attach the
        // position of the offending node to the error.
        struct NodeVisitor;
        impl<'de> Visitor<'de> for NodeVisitor {
            type Value = PortableNode;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a portable tree node")
            }

            fn visit_map<A: MapAccess<'de>>(self, map: A) -> Result<PortableNode, A::Error> {
                let raw = RawNode::deserialize(MapAccessDeserializer::new(map))?;
                build_node(raw).map(PortableNode).map_err(A::Error::custom)
            }
        }
        d.deserialize_map(NodeVisitor)
    }
}

fn build_node(raw: RawNode) -> Result<Term, String> {
    let span = SourceSpan::from_array(raw.span);
    if !span.is_well_formed() {
        return Err(format!("span {:?} of `{}` is inverted", raw.span, raw.kind));
    }
    let error = ErrorStatus::parse(&raw.error)
        .ok_or_else(|| format!("unknown error status `{}`", raw.error))?;
    let mut fields = BTreeMap::new();
    for (name, list) in raw.fields {
        if list.is_empty() {
            return Err(format!("field `{name}` of `{}` is empty", raw.kind));
        }
        let list: Vec<Term> = list.into_iter().map(|n| n.0).collect();
        if fields.insert(name.clone(), list).is_some() {
            return Err(format!("duplicate field `{name}` in `{}`", raw.kind));
        }
    }
    let children: Vec<Term> = raw.children.into_iter().map(|n| n.0).collect();
    let leaf = fields.is_empty() && children.is_empty();
    if leaf != raw.text.is_some() {
        return Err(if leaf {
            format!("leaf `{}` has no text", raw.kind)
        } else {
            format!("non-leaf `{}` has text", raw.kind)
        });
    }
    for list in fields.values().chain(std::iter::once(&children)) {
        for pair in list.windows(2) {
            if pair[0].span.start_byte > pair[1].span.start_byte {
                return Err(format!("children of `{}` are not ordered by start byte", raw.kind));
            }
        }
        for c in list {
            if !span.contains(&c.span) {
                return Err(format!(
                    "child `{}` span {:?} escapes `{}` span {:?}",
                    c.kind,
                    c.span.to_array(),
                    raw.kind,
                    raw.span
                ));
            }
        }
    }
    Ok(Term { kind: raw.kind, span, text: raw.text, fields, children, error })
}

/// S-expression dump in source order: `(pair key: (string "\"a\"") ...)`.
/// Leaves show their text; error nodes are marked `ERROR`/`MISSING`.
pub fn to_sexp(term: &Term) -> String {
    enum Emit<'a> {
        Node(Option<&'a str>, &'a Term),
        Close,
    }
    let mut out = String::new();
    let mut stack = vec![Emit::Node(None, term)];
    let mut first = true;
    while let Some(task) = stack.pop() {
        match task {
            Emit::Close => out.push(')'),
            Emit::Node(label, t) => {
                if !first {
                    out.push(' ');
                }
                first = false;
                if let Some(label) = label {
                    out.push_str(label);
                    out.push_str(": ");
                }
                out.push('(');
                match t.error {
                    ErrorStatus::Missing => out.push_str("MISSING "),
                    ErrorStatus::Error if t.kind != "ERROR" => out.push_str("ERROR "),
                    _ => {}
                }
                out.push_str(&t.kind);
                if let (true, Some(text)) = (t.is_leaf(), &t.text) {
                    out.push(' ');
                    push_json_str(&mut out, text);
                }
                let mut labelled: Vec<(Option<&str>, &Term)> = t
                    .fields
                    .iter()
                    .flat_map(|(n, l)| l.iter().map(move |c| (Some(n.as_str()), c)))
                    .chain(t.children.iter().map(|c| (None, c)))
                    .collect();
                labelled.sort_by_key(|(_, c)| (c.span.start_byte, c.span.end_byte));
                stack.push(Emit::Close);
                stack.extend(labelled.into_iter().rev().map(|(l, c)| Emit::Node(l, c)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::span::Point;

    const THREE: &str = r#"{"kind":"array","span":[0,3,0,0,0,3],"error":"ok","fields":[],"children":[
        {"kind":"[","span":[0,1,0,0,0,1],"error":"ok","text":"[","fields":[],"children":[]},
        {"kind":"]","span":[2,3,0,2,0,3],"error":"ok","text":"]","fields":[],"children":[]}]}"#;

    #[test]
    fn handcrafted_three_nodes() {
        let t = decode(THREE).unwrap();
        let expected = Term::branch(
            "array",
            SourceSpan::new(0, 3, Point::new(0, 0), Point::new(0, 3)),
            BTreeMap::new(),
            vec![
                Term::leaf("[", SourceSpan::new(0, 1, Point::new(0, 0), Point::new(0, 1)), "["),
                Term::leaf("]", SourceSpan::new(2, 3, Point::new(0, 2), Point::new(0, 3)), "]"),
            ],
        );
        assert_eq!(t, expected);
        assert_eq!(t.node_count(), 3);
        assert_eq!(decode(&encode(&t)).unwrap(), t);
    }

    #[test]
    fn inverted_span_is_a_format_error() {
        let doc = r#"{"kind":"a","span":[3,1,0,3,0,1],"error":"ok","text":"x","fields":[],"children":[]}"#;
        let err = decode(doc).unwrap_err();
        assert!(err.message.contains("inverted"), "{err}");
        assert_eq!(err.line, 1);
        assert!(err.column > 0);
    }

    #[test]
    fn error_position_points_at_the_offending_node() {
        let doc = "{\"kind\":\"a\",\"span\":[0,5,0,0,0,5],\"error\":\"ok\",\"fields\":[],\"children\":[\n\
                   {\"kind\":\"b\",\"span\":[4,9,0,4,0,9],\"error\":\"ok\",\"text\":\"x\",\"fields\":[],\"children\":[]}]}";
        let err = decode(doc).unwrap_err();
        assert!(err.message.contains("escapes"), "{err}");
        assert_eq!(err.line, 2);
    }

    #[test]
    fn rejects_unknown_keys_bad_status_and_trailing_content() {
        let base = r#"{"kind":"a","span":[0,1,0,0,0,1],"error":"ok","text":"x","fields":[],"children":[]}"#;
        assert!(decode(base).is_ok());
        assert!(decode(&base.replace("\"ok\"", "\"bad\"")).is_err());
        assert!(decode(&base.replace("\"text\"", "\"txt\"")).is_err());
        assert!(decode(&format!("{base} {base}")).is_err());
        assert!(decode("[").is_err());
    }

    #[test]
    fn sexp_marks_errors_and_fields() {
        let doc = r#"{"kind":"pair","span":[0,3,0,0,0,3],"error":"ok","fields":[["key",[
            {"kind":"string","span":[0,1,0,0,0,1],"error":"ok","text":"a","fields":[],"children":[]}]],
            ["value",[{"kind":"number","span":[3,3,0,3,0,3],"error":"missing","text":"","fields":[],"children":[]}]]],
            "children":[{"kind":":","span":[1,2,0,1,0,2],"error":"ok","text":":","fields":[],"children":[]}]}"#;
        let t = decode(doc).unwrap();
        assert_eq!(
            to_sexp(&t),
            r#"(pair key: (string "a") (: ":") value: (MISSING number ""))"#
        );
    }
}

//! Rust source emission.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::schema::{Cardinality, LocalSum, Payload, Schema, SchemaEntry};
use super::CodegenError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmitOptions {
    /// Path of the runtime module the generated code imports.
    pub runtime_path: String,
}

impl Default for EmitOptions {
    fn default() -> Self {
        Self { runtime_path: "::semascope_core::typed".to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmittedFile {
    pub path: String,
    pub contents: String,
}

const KEYWORDS: &[&str] = &[
    "abstract", "as", "async", "await", "become", "box", "break", "const", "continue", "do", "dyn", "else", "enum",
    "extern", "false", "final", "fn", "for", "gen", "if", "impl", "in", "let", "loop", "macro", "match", "mod", "move",
    "mut", "override", "priv", "pub", "ref", "return", "static", "struct", "trait", "true", "try", "type", "typeof",
    "unsafe", "unsized", "use", "virtual", "where", "while", "yield",
];

/// `_simple_statement` becomes `SimpleStatement`, `pair.key` `PairKey`.
pub fn rust_type_name(name: &str) -> String {
    let mut out = String::new();
    for part in name.split(|c: char| !c.is_ascii_alphanumeric()).filter(|p| !p.is_empty()) {
        let mut chars = part.chars();
        if let Some(first) = chars.next() {
            out.push(first.to_ascii_uppercase());
            out.extend(chars);
        }
    }
    if out.is_empty() || out.starts_with(|c: char| c.is_ascii_digit()) {
        out.insert(0, 'T');
    }
    if out == "Self" {
        out.push('_');
    }
    out
}

/// Field names keep their spelling; keywords become raw identifiers, or
/// take a trailing underscore where raw identifiers are not allowed.
pub fn rust_field_name(name: &str) -> String {
    let mut out: String = name.chars().map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' }).collect();
    if out.is_empty() || out.starts_with(|c: char| c.is_ascii_digit()) {
        out.insert(0, 'f');
    }
    if matches!(out.as_str(), "self" | "super" | "crate" | "_") {
        out.push('_');
    } else if KEYWORDS.contains(&out.as_str()) {
        out.insert_str(0, "r#");
    }
    out
}

struct Names {
    types: BTreeMap<String, String>,
    fields: BTreeMap<String, String>,
}

impl Names {
    fn ty(&self, name: &str) -> &str {
        &self.types[name]
    }

    fn payload(&self, p: &Payload) -> &str {
        match p {
            Payload::Type(t) => self.ty(t),
            Payload::Union(u) => self.ty(&u.name),
        }
    }
}

fn assign_types(schema: &Schema) -> Result<BTreeMap<String, String>, CodegenError> {
    let mut by_ident: BTreeMap<String, String> = BTreeMap::new();
    let mut types = BTreeMap::new();
    let grammar_names = schema.entries.iter().map(|e| e.name()).chain(schema.local_sums().into_iter().map(|u| u.name.as_str()));
    for name in grammar_names {
        let ident = rust_type_name(name);
        if let Some(first) = by_ident.insert(ident.clone(), name.to_string()) {
            return Err(CodegenError::NameCollision { ident, first, second: name.to_string() });
        }
        types.insert(name.to_string(), ident);
    }
    Ok(types)
}

/// Emits `ast.rs` (the types and their decoders) and `names.json` (the
/// grammar-to-Rust name mapping). Output depends only on the schema.
pub fn emit_source(schema: &Schema, options: &EmitOptions) -> Result<Vec<EmittedFile>, CodegenError> {
    if schema.entries.is_empty() {
        return Ok(Vec::new());
    }
    let mut names = Names { types: assign_types(schema)?, fields: BTreeMap::new() };
    let mut src = String::new();
    src.push_str("// Generated from a tree-sitter node-types document by `semascope generate`.\n");
    src.push_str("// Regenerate instead of editing.\n\n");
    let _ = writeln!(src, "use {} as rt;\n", options.runtime_path);
    if let Some(root) = &schema.root {
        let ty = names.ty(root).to_string();
        let _ = writeln!(src, "/// Decodes a whole parse tree.");
        let _ = writeln!(src, "pub fn decode(term: &rt::Term) -> rt::Checked<{ty}> {{\n    rt::Checked::decode(term)\n}}\n");
    }
    for entry in &schema.entries {
        match entry {
            SchemaEntry::Terminal { name } => emit_terminal(&mut src, &names, name),
            SchemaEntry::Sum { name, alternatives, tokens } => {
                emit_sum(&mut src, &names, names.ty(name), alternatives, tokens)?;
            }
            SchemaEntry::Product { name, fields, children } => {
                let mut idents: BTreeMap<String, String> = ["ann", "extras"].iter().map(|s| (s.to_string(), s.to_string())).collect();
                if children.is_some() {
                    idents.insert("children".into(), "children".into());
                }
                for f in fields {
                    let ident = rust_field_name(&f.name);
                    if let Some(first) = idents.insert(ident.clone(), f.name.clone()) {
                        return Err(CodegenError::NameCollision { ident, first, second: format!("{name}.{}", f.name) });
                    }
                    names.fields.insert(f.name.clone(), ident);
                }
                emit_product(&mut src, &names, name, fields, children.as_ref());
                for u in fields.iter().filter_map(|f| match &f.payload {
                    Payload::Union(u) => Some(u),
                    Payload::Type(_) => None,
                }) {
                    emit_local(&mut src, &names, u)?;
                }
                if let Some((_, Payload::Union(u))) = children {
                    emit_local(&mut src, &names, u)?;
                }
            }
        }
    }
    while src.ends_with("\n\n") {
        src.pop();
    }
    let manifest = serde_json::json!({ "types": names.types, "fields": names.fields });
    let mut manifest = serde_json::to_string_pretty(&manifest).expect("maps of strings serialize");
    manifest.push('\n');
    Ok(vec![
        EmittedFile { path: "ast.rs".into(), contents: src },
        EmittedFile { path: "names.json".into(), contents: manifest },
    ])
}

fn emit_terminal(src: &mut String, names: &Names, name: &str) {
    let ty = names.ty(name);
    let _ = write!(
        src,
        "/// `{name}`
#[derive(Debug, Clone, PartialEq)]
pub struct {ty} {{
    pub ann: rt::SourceSpan,
    pub text: ::std::string::String,
    pub extras: ::std::vec::Vec<rt::Term>,
}}

impl rt::FromTerm for {ty} {{
    fn accepts(kind: &str) -> bool {{
        kind == {name:?}
    }}

    fn from_term(term: &rt::Term) -> ::std::option::Option<Self> {{
        ::std::option::Option::Some(Self {{
            ann: term.span,
            text: term.source_text(),
            extras: term.subterms().cloned().collect(),
        }})
    }}

    fn spans(&self, out: &mut ::std::vec::Vec<rt::SourceSpan>) {{
        out.push(self.ann);
        rt::extras_spans(&self.extras, out);
    }}

    fn errors<'a>(&'a self, _out: &mut ::std::vec::Vec<&'a rt::Term>) {{}}
}}

"
    );
}

fn slot_type(card: Cardinality, payload: &str) -> String {
    match card {
        Cardinality::One => format!("rt::Checked<{payload}>"),
        Cardinality::Optional => format!("::std::option::Option<rt::Checked<{payload}>>"),
        Cardinality::Many => format!("::std::vec::Vec<rt::Checked<{payload}>>"),
    }
}

fn slot_decode(card: Cardinality, payload: &str, items: &str) -> String {
    match card {
        Cardinality::One => format!("rt::one::<{payload}>(&{items})?"),
        Cardinality::Optional => format!("rt::optional::<{payload}>(&{items})?"),
        Cardinality::Many => format!("rt::many::<{payload}>(&{items})"),
    }
}

fn slot_spans(card: Cardinality, access: &str) -> String {
    match card {
        Cardinality::One => format!("        {access}.spans(out);\n"),
        Cardinality::Optional | Cardinality::Many => format!("        for c in &{access} {{\n            c.spans(out);\n        }}\n"),
    }
}

fn emit_product(
    src: &mut String,
    names: &Names,
    name: &str,
    fields: &[super::schema::FieldSpec],
    children: Option<&(Cardinality, Payload)>,
) {
    let ty = names.ty(name);
    let _ = writeln!(src, "/// `{name}`\n#[derive(Debug, Clone, PartialEq)]\npub struct {ty} {{\n    pub ann: rt::SourceSpan,");
    for f in fields {
        let _ = writeln!(src, "    pub {}: {},", names.fields[&f.name], slot_type(f.cardinality, names.payload(&f.payload)));
    }
    if let Some((card, payload)) = children {
        let _ = writeln!(src, "    pub children: {},", slot_type(*card, names.payload(payload)));
    }
    src.push_str("    pub extras: ::std::vec::Vec<rt::Term>,\n}\n\n");

    let declared: Vec<String> = fields.iter().map(|f| format!("{:?}", f.name)).collect();
    let _ = write!(
        src,
        "impl rt::FromTerm for {ty} {{
    fn accepts(kind: &str) -> bool {{
        kind == {name:?}
    }}

    fn from_term(term: &rt::Term) -> ::std::option::Option<Self> {{
"
    );
    let _ = writeln!(src, "        let mut extras = rt::undeclared_fields(term, &[{}]);", declared.join(", "));
    for f in fields {
        let items = format!("rt::field(term, {:?})", f.name);
        let _ = writeln!(src, "        let {} = {};", names.fields[&f.name], slot_decode(f.cardinality, names.payload(&f.payload), &items));
    }
    if let Some((card, payload)) = children {
        let p = names.payload(payload);
        let _ = writeln!(src, "        let slot = rt::split_children(term, <{p} as rt::FromTerm>::accepts, &mut extras);");
        let _ = writeln!(src, "        let children = {};", slot_decode(*card, p, "slot"));
    } else {
        src.push_str("        extras.extend(term.children.iter().cloned());\n");
    }
    src.push_str("        ::std::option::Option::Some(Self {\n            ann: term.span,\n");
    for f in fields {
        let _ = writeln!(src, "            {},", names.fields[&f.name]);
    }
    if children.is_some() {
        src.push_str("            children,\n");
    }
    src.push_str("            extras,\n        })\n    }\n\n");
    src.push_str("    fn spans(&self, out: &mut ::std::vec::Vec<rt::SourceSpan>) {\n        out.push(self.ann);\n");
    for f in fields {
        src.push_str(&slot_spans(f.cardinality, &format!("self.{}", names.fields[&f.name])));
    }
    if let Some((card, _)) = children {
        src.push_str(&slot_spans(*card, "self.children"));
    }
    src.push_str("        rt::extras_spans(&self.extras, out);\n    }\n\n");
    src.push_str("    fn errors<'a>(&'a self, out: &mut ::std::vec::Vec<&'a rt::Term>) {\n");
    for f in fields {
        src.push_str(&slot_errors(f.cardinality, &format!("self.{}", names.fields[&f.name])));
    }
    if let Some((card, _)) = children {
        src.push_str(&slot_errors(*card, "self.children"));
    }
    src.push_str("        rt::extras_errors(&self.extras, out);\n    }\n}\n\n");
}

fn slot_errors(card: Cardinality, access: &str) -> String {
    match card {
        Cardinality::One => format!("        {access}.errors(out);\n"),
        Cardinality::Optional | Cardinality::Many => format!("        for c in &{access} {{\n            c.errors(out);\n        }}\n"),
    }
}

fn emit_local(src: &mut String, names: &Names, u: &LocalSum) -> Result<(), CodegenError> {
    emit_sum(src, names, names.ty(&u.name), &u.alternatives, &u.tokens)
}

/// A supertype or slot-local sum. Tokens share one `Token` variant.
fn emit_sum(src: &mut String, names: &Names, ty: &str, alternatives: &[String], tokens: &[String]) -> Result<(), CodegenError> {
    let variants: Vec<&str> = alternatives.iter().map(|a| names.ty(a)).collect();
    if !tokens.is_empty() {
        if let Some(a) = alternatives.iter().find(|a| names.ty(a) == "Token") {
            return Err(CodegenError::NameCollision { ident: format!("{ty}::Token"), first: a.clone(), second: "anonymous tokens".into() });
        }
    }
    let doc: Vec<String> = alternatives.iter().map(|a| format!("`{a}`")).chain(tokens.iter().map(|t| format!("`{t}`"))).collect();
    let _ = writeln!(src, "/// One of {}.\n#[derive(Debug, Clone, PartialEq)]\npub enum {ty} {{", doc.join(", "));
    for v in &variants {
        let _ = writeln!(src, "    {v}(::std::boxed::Box<{v}>),");
    }
    if !tokens.is_empty() {
        src.push_str("    Token(rt::Token),\n");
    }
    src.push_str("}\n\n");

    let token_pattern: Vec<String> = tokens.iter().map(|t| format!("{t:?}")).collect();
    let mut accepts: Vec<String> = variants.iter().map(|v| format!("<{v} as rt::FromTerm>::accepts(kind)")).collect();
    if !tokens.is_empty() {
        accepts.push(format!("matches!(kind, {})", token_pattern.join(" | ")));
    }
    let _ = write!(
        src,
        "impl rt::FromTerm for {ty} {{
    fn accepts(kind: &str) -> bool {{
        {}
    }}

    fn from_term(term: &rt::Term) -> ::std::option::Option<Self> {{
        let kind = term.kind.as_str();
",
        accepts.join("\n            || ")
    );
    for v in &variants {
        let _ = write!(
            src,
            "        if <{v} as rt::FromTerm>::accepts(kind) {{
            return <{v} as rt::FromTerm>::from_term(term).map(|v| Self::{v}(::std::boxed::Box::new(v)));
        }}
"
        );
    }
    if !tokens.is_empty() {
        let _ = write!(
            src,
            "        if matches!(kind, {}) {{
            return ::std::option::Option::Some(Self::Token(rt::Token::from_term(term)));
        }}
",
            token_pattern.join(" | ")
        );
    }
    src.push_str("        ::std::option::Option::None\n    }\n\n");
    src.push_str("    fn spans(&self, out: &mut ::std::vec::Vec<rt::SourceSpan>) {\n        match self {\n");
    for v in &variants {
        let _ = writeln!(src, "            Self::{v}(v) => rt::FromTerm::spans(v.as_ref(), out),");
    }
    if !tokens.is_empty() {
        src.push_str("            Self::Token(t) => t.spans(out),\n");
    }
    src.push_str("        }\n    }\n\n");
    src.push_str("    fn errors<'a>(&'a self, out: &mut ::std::vec::Vec<&'a rt::Term>) {\n        match self {\n");
    for v in &variants {
        let _ = writeln!(src, "            Self::{v}(v) => rt::FromTerm::errors(v.as_ref(), out),");
    }
    if !tokens.is_empty() {
        src.push_str("            Self::Token(_) => {}\n");
    }
    src.push_str("        }\n    }\n}\n\n");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::{build_schema, parse_node_types};
    use super::*;

    #[test]
    fn identifiers() {
        assert_eq!(rust_type_name("_simple_statement"), "SimpleStatement");
        assert_eq!(rust_type_name("pair.key"), "PairKey");
        assert_eq!(rust_type_name("self"), "Self_");
        assert_eq!(rust_type_name("3d"), "T3d");
        assert_eq!(rust_field_name("type"), "r#type");
        assert_eq!(rust_field_name("self"), "self_");
        assert_eq!(rust_field_name("return_type"), "return_type");
    }

    #[test]
    fn empty_schema_emits_nothing() {
        assert!(emit_source(&Schema::default(), &EmitOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn colliding_type_names() {
        let doc = r#"[{"type":"foo_bar","named":true},{"type":"foo__bar","named":true}]"#;
        let schema = build_schema(&parse_node_types(doc).unwrap()).unwrap();
        assert!(matches!(emit_source(&schema, &EmitOptions::default()), Err(CodegenError::NameCollision { .. })));
    }

    #[test]
    fn colliding_field_names() {
        let doc = r#"[{"type":"n","named":true,
            "fields":{"extras":{"multiple":false,"required":true,"types":[{"type":"n","named":true}]}}}]"#;
        let schema = build_schema(&parse_node_types(doc).unwrap()).unwrap();
        assert!(matches!(emit_source(&schema, &EmitOptions::default()), Err(CodegenError::NameCollision { .. })));
    }

    #[test]
    fn emission_is_deterministic() {
        let schema = build_schema(&parse_node_types(tree_sitter_json::NODE_TYPES).unwrap()).unwrap();
        let a = emit_source(&schema, &EmitOptions::default()).unwrap();
        let b = emit_source(&schema, &EmitOptions::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iter().map(|f| f.path.as_str()).collect::<Vec<_>>(), ["ast.rs", "names.json"]);
    }

    #[test]
    fn python_grammar_references_an_undeclared_alias() {
        // `as_pattern.alias` names `as_pattern_target`, which the bundled
        // metadata never declares.
        let descs = parse_node_types(tree_sitter_python::NODE_TYPES).unwrap();
        assert_eq!(build_schema(&descs), Err(CodegenError::UnresolvedType("as_pattern_target".into())));
    }
}

//! The typed-AST schema derived from node types.

use std::collections::{BTreeMap, BTreeSet};

use super::node_types::{ChildSlot, NodeTypeDescriptor, TypeRef};
use super::CodegenError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cardinality {
    One,
    Optional,
    Many,
}

impl Cardinality {
    fn of(slot: &ChildSlot) -> Self {
        match (slot.multiple, slot.required) {
            (true, _) => Cardinality::Many,
            (false, true) => Cardinality::One,
            (false, false) => Cardinality::Optional,
        }
    }
}

/// What a slot holds. Every payload is error-wrapped when emitted: a
/// position holds either a decoded value or the raw, erroneous subtree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    /// Exactly one named type.
    Type(String),
    /// Several types: a sum local to this slot. Anonymous token types are
    /// folded into a single token alternative.
    Union(LocalSum),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSum {
    /// `<owner>.<field>`, or `<owner>.children`.
    pub name: String,
    pub alternatives: Vec<String>,
    pub tokens: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub name: String,
    pub cardinality: Cardinality,
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemaEntry {
    /// A node with source text and no typed structure.
    Terminal { name: String },
    Product { name: String, fields: Vec<FieldSpec>, children: Option<(Cardinality, Payload)> },
    /// A supertype: any one of its alternatives.
    Sum { name: String, alternatives: Vec<String>, tokens: Vec<String> },
}

impl SchemaEntry {
    pub fn name(&self) -> &str {
        match self {
            SchemaEntry::Terminal { name } | SchemaEntry::Product { name, .. } | SchemaEntry::Sum { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schema {
    pub entries: Vec<SchemaEntry>,
    /// The root node type, if the grammar marks one.
    pub root: Option<String>,
}

impl Schema {
    pub fn get(&self, name: &str) -> Option<&SchemaEntry> {
        self.entries.iter().find(|e| e.name() == name)
    }

    /// Every local sum, in entry order.
    pub fn local_sums(&self) -> Vec<&LocalSum> {
        let mut out = Vec::new();
        for e in &self.entries {
            if let SchemaEntry::Product { fields, children, .. } = e {
                for f in fields {
                    if let Payload::Union(u) = &f.payload {
                        out.push(u);
                    }
                }
                if let Some((_, Payload::Union(u))) = children {
                    out.push(u);
                }
            }
        }
        out
    }
}

pub const RESERVED_FIELDS: [&str; 2] = ["ann", "text"];

fn split(types: &[TypeRef]) -> (Vec<String>, Vec<String>) {
    let mut named = BTreeSet::new();
    let mut tokens = BTreeSet::new();
    for t in types {
        if t.named {
            named.insert(t.type_name.clone());
        } else {
            tokens.insert(t.type_name.clone());
        }
    }
    (named.into_iter().collect(), tokens.into_iter().collect())
}

fn payload(owner: &str, slot_name: &str, types: &[TypeRef]) -> Payload {
    let (named, tokens) = split(types);
    if named.len() == 1 && tokens.is_empty() {
        Payload::Type(named.into_iter().next().expect("one element"))
    } else {
        Payload::Union(LocalSum { name: format!("{owner}.{slot_name}"), alternatives: named, tokens })
    }
}

/// Builds the schema: supertypes become sums, nodes with fields or children
/// products, the remaining named nodes terminals. Anonymous node types only
/// appear as token alternatives.
pub fn build_schema(descs: &[NodeTypeDescriptor]) -> Result<Schema, CodegenError> {
    let mut defined: BTreeMap<&str, usize> = BTreeMap::new();
    for d in descs.iter().filter(|d| d.named) {
        if defined.insert(&d.type_name, 0).is_some() {
            return Err(CodegenError::DuplicateType(d.type_name.clone()));
        }
    }
    let resolve = |t: &TypeRef| {
        if t.named && !defined.contains_key(t.type_name.as_str()) {
            Err(CodegenError::UnresolvedType(t.type_name.clone()))
        } else {
            Ok(())
        }
    };
    let mut schema = Schema::default();
    for d in descs.iter().filter(|d| d.named) {
        if d.root {
            schema.root = Some(d.type_name.clone());
        }
        let entry = if let Some(subtypes) = &d.subtypes {
            subtypes.iter().try_for_each(resolve)?;
            let (alternatives, tokens) = split(subtypes);
            SchemaEntry::Sum { name: d.type_name.clone(), alternatives, tokens }
        } else if d.is_terminal() {
            SchemaEntry::Terminal { name: d.type_name.clone() }
        } else {
            let mut fields = Vec::new();
            for (name, slot) in &d.fields {
                if RESERVED_FIELDS.contains(&name.as_str()) {
                    return Err(CodegenError::ReservedField { type_name: d.type_name.clone(), field: name.clone() });
                }
                slot.types.iter().try_for_each(resolve)?;
                fields.push(FieldSpec {
                    name: name.clone(),
                    cardinality: Cardinality::of(slot),
                    payload: payload(&d.type_name, name, &slot.types),
                });
            }
            let children = match &d.children {
                Some(slot) => {
                    slot.types.iter().try_for_each(resolve)?;
                    Some((Cardinality::of(slot), payload(&d.type_name, "children", &slot.types)))
                }
                None => None,
            };
            SchemaEntry::Product { name: d.type_name.clone(), fields, children }
        };
        schema.entries.push(entry);
    }
    Ok(schema)
}

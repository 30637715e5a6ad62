//! The grammar metadata document (`node-types.json`).

use std::collections::BTreeMap;

use serde::Deserialize;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeRef {
    #[serde(rename = "type")]
    pub type_name: String,
    pub named: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChildSlot {
    pub multiple: bool,
    pub required: bool,
    pub types: Vec<TypeRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeTypeDescriptor {
    #[serde(rename = "type")]
    pub type_name: String,
    /// Anonymous (unnamed) entries are tokens; they are kept but get no
    /// type of their own.
    pub named: bool,
    #[serde(default)]
    pub root: bool,
    #[serde(default)]
    pub extra: bool,
    pub subtypes: Option<Vec<TypeRef>>,
    #[serde(default)]
    pub fields: BTreeMap<String, ChildSlot>,
    pub children: Option<ChildSlot>,
}

impl NodeTypeDescriptor {
    pub fn is_supertype(&self) -> bool {
        self.subtypes.is_some()
    }

    pub fn is_terminal(&self) -> bool {
        self.subtypes.is_none() && self.fields.is_empty() && self.children.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct NodeTypesError {
    /// JSON path of the first violation, like `[4].fields.key.types`.
    pub path: String,
    pub message: String,
}

/// Parses and shape-checks a node-types document.
pub fn parse_node_types(doc: &str) -> Result<Vec<NodeTypeDescriptor>, NodeTypesError> {
    let de = &mut serde_json::Deserializer::from_str(doc);
    let descs: Vec<NodeTypeDescriptor> = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let message = inner.to_string();
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        NodeTypesError { path, message }
    })?;
    for (i, d) in descs.iter().enumerate() {
        let err = |suffix: String, message: &str| Err(NodeTypesError { path: format!("[{i}]{suffix}"), message: message.to_string() });
        if let Some(subtypes) = &d.subtypes {
            if subtypes.is_empty() {
                return err(".subtypes".into(), "a supertype needs at least one subtype");
            }
            if !d.fields.is_empty() || d.children.is_some() {
                return err(String::new(), "a supertype cannot also have fields or children");
            }
        }
        for (name, slot) in &d.fields {
            if slot.types.is_empty() {
                return err(format!(".fields.{name}.types"), "a slot needs at least one type");
            }
        }
        if let Some(slot) = &d.children {
            if slot.types.is_empty() {
                return err(".children.types".into(), "a slot needs at least one type");
            }
        }
    }
    Ok(descs)
}

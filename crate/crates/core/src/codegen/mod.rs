//! Typed AST generation from grammar metadata.
//!
//! `node-types.json` is read into descriptors, lowered to a [`Schema`], and
//! emitted as Rust source: one type per node type, with every child
//! position error-wrapped (see [`crate::typed`]).

mod emit;
mod node_types;
mod schema;

pub use emit::{emit_source, rust_field_name, rust_type_name, EmitOptions, EmittedFile};
pub use node_types::{parse_node_types, ChildSlot, NodeTypeDescriptor, NodeTypesError, TypeRef};
pub use schema::{build_schema, Cardinality, FieldSpec, LocalSum, Payload, Schema, SchemaEntry, RESERVED_FIELDS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodegenError {
    #[error("malformed node types at {0}")]
    Format(#[from] NodeTypesError),
    #[error("unresolved type `{0}`")]
    UnresolvedType(String),
    #[error("type `{0}` is declared more than once")]
    DuplicateType(String),
    #[error("type `{type_name}` has a field named `{field}`, which is reserved")]
    ReservedField { type_name: String, field: String },
    #[error("`{first}` and `{second}` both map to the identifier `{ident}`")]
    NameCollision { ident: String, first: String, second: String },
}

/// The whole pipeline: node types document to emitted files.
pub fn generate(doc: &str, options: &EmitOptions) -> Result<(Schema, Vec<EmittedFile>), CodegenError> {
    let descs = parse_node_types(doc)?;
    let schema = build_schema(&descs)?;
    let files = emit_source(&schema, options)?;
    Ok((schema, files))
}

//! Language descriptors and the registry that maps files to them.
//!
//! JSON and Python ship built in. Other languages come from a TOML registry
//! file:
//!
//! ```toml
//! [[language]]
//! id = "ruby"
//! extensions = ["rb"]
//! library = "/usr/local/lib/libtree-sitter-ruby.so"
//! symbol = "tree_sitter_ruby"          # optional, defaults to tree_sitter_<id>
//! significant_kinds = ["method", "class"]
//! keyed_kinds = { hash = "key" }
//!
//! [[language.declarations]]
//! kind = "method"
//! category = "method"
//! name_path = ["name"]
//!
//! [[language.tags]]
//! kind = "identifier"
//! role = "reference"
//! category = "variable"
//! fallback_category = "call"
//! ```
//!
//! A `[[language]]` entry whose `id` matches a built-in replaces it.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::diff::DiffOptions;
use crate::summary::DeclarationRule;
use crate::tags::{RuleRole, TagRule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    /// A grammar compiled into this binary ("json", "python").
    Builtin(String),
    /// A tree-sitter grammar in a shared library, exporting `symbol`.
    SharedLibrary { path: PathBuf, symbol: String },
    /// Sources are portable tree documents; no parser involved.
    Portable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageDescriptor {
    pub id: String,
    pub extensions: Vec<String>,
    pub backend: Backend,
    pub significant_kinds: BTreeSet<String>,
    pub declaration_rules: Vec<DeclarationRule>,
    pub tag_rules: Vec<TagRule>,
    /// Dictionary-shaped node kinds mapped to the child field that keys them.
    pub keyed_kinds: BTreeMap<String, String>,
}

impl LanguageDescriptor {
    /// Diff options for this language: declarations are matched by their
    /// name field, and keyed kinds are diffed by key.
    pub fn diff_options(&self) -> DiffOptions {
        let mut opts = DiffOptions::default();
        for rule in &self.declaration_rules {
            if let Some(first) = rule.name_path.first() {
                opts.identity_fields.entry(rule.kind.clone()).or_insert_with(|| first.clone());
            }
        }
        opts.keyed_kinds = self.keyed_kinds.clone();
        opts.significant_kinds = self.significant_kinds.clone();
        opts
    }

    pub fn matches_path(&self, path: &Path) -> bool {
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            return false;
        };
        self.extensions.iter().any(|ext| {
            name.len() > ext.len() + 1
                && name.ends_with(ext.as_str())
                && name.as_bytes()[name.len() - ext.len() - 1] == b'.'
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RegistryError {
    #[error("cannot read registry config {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid registry config: {0}")]
    Config(String),
    #[error("unknown language `{0}`")]
    UnknownLanguage(String),
    #[error("no language registered for `{0}`")]
    NoLanguageForPath(String),
}

#[derive(Debug, Clone)]
pub struct Registry {
    languages: Vec<LanguageDescriptor>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl Registry {
    /// JSON and Python.
    pub fn builtin() -> Self {
        Self { languages: vec![json(), python()] }
    }

    /// Validates uniqueness of ids and extensions.
    pub fn new(languages: Vec<LanguageDescriptor>) -> Result<Self, RegistryError> {
        let mut ids = BTreeSet::new();
        let mut exts: BTreeMap<&str, &str> = BTreeMap::new();
        for lang in &languages {
            if !ids.insert(lang.id.as_str()) {
                return Err(RegistryError::Config(format!("language `{}` is defined twice", lang.id)));
            }
            for ext in &lang.extensions {
                if let Some(other) = exts.insert(ext.as_str(), lang.id.as_str()) {
                    return Err(RegistryError::Config(format!(
                        "extension `.{ext}` is claimed by both `{other}` and `{}`",
                        lang.id
                    )));
                }
            }
        }
        Ok(Self { languages })
    }

    /// Built-ins overlaid with the languages of a TOML config document.
    pub fn from_config_str(doc: &str) -> Result<Self, RegistryError> {
        let config: ConfigFile = toml::from_str(doc).map_err(|e| RegistryError::Config(e.to_string()))?;
        let mut seen = BTreeSet::new();
        let mut langs = Self::builtin().languages;
        for entry in config.language {
            if !seen.insert(entry.id.clone()) {
                return Err(RegistryError::Config(format!("language `{}` is defined twice", entry.id)));
            }
            let desc = entry.into_descriptor()?;
            match langs.iter_mut().find(|l| l.id == desc.id) {
                Some(slot) => *slot = desc,
                None => langs.push(desc),
            }
        }
        Self::new(langs)
    }

    pub fn from_config_file(path: &Path) -> Result<Self, RegistryError> {
        let doc = std::fs::read_to_string(path)
            .map_err(|source| RegistryError::Io { path: path.to_path_buf(), source })?;
        Self::from_config_str(&doc)
    }

    pub fn languages(&self) -> &[LanguageDescriptor] {
        &self.languages
    }

    pub fn get(&self, id: &str) -> Result<&LanguageDescriptor, RegistryError> {
        self.languages
            .iter()
            .find(|l| l.id == id)
            .ok_or_else(|| RegistryError::UnknownLanguage(id.to_string()))
    }

    pub fn for_path(&self, path: &Path) -> Result<&LanguageDescriptor, RegistryError> {
        let mut hits = self.languages.iter().filter(|l| l.matches_path(path));
        match (hits.next(), hits.next()) {
            (Some(lang), None) => Ok(lang),
            (Some(a), Some(b)) => Err(RegistryError::Config(format!(
                "`{}` matches both `{}` and `{}`",
                path.display(),
                a.id,
                b.id
            ))),
            (None, _) => Err(RegistryError::NoLanguageForPath(path.display().to_string())),
        }
    }

    /// `--language` override when given, else detection by extension.
    pub fn resolve(&self, path: &Path, language: Option<&str>) -> Result<&LanguageDescriptor, RegistryError> {
        match language {
            Some(id) => self.get(id),
            None => self.for_path(path),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    language: Vec<LanguageEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LanguageEntry {
    id: String,
    #[serde(default)]
    extensions: Vec<String>,
    library: Option<PathBuf>,
    symbol: Option<String>,
    builtin: Option<String>,
    #[serde(default)]
    portable: bool,
    #[serde(default)]
    significant_kinds: BTreeSet<String>,
    #[serde(default)]
    keyed_kinds: BTreeMap<String, String>,
    #[serde(default)]
    declarations: Vec<DeclarationRule>,
    #[serde(default)]
    tags: Vec<TagRule>,
}

impl LanguageEntry {
    fn into_descriptor(self) -> Result<LanguageDescriptor, RegistryError> {
        let backend = match (self.library, self.builtin, self.portable) {
            (Some(path), None, false) => Backend::SharedLibrary {
                path,
                symbol: self.symbol.unwrap_or_else(|| format!("tree_sitter_{}", self.id.replace('-', "_"))),
            },
            (None, Some(name), false) => Backend::Builtin(name),
            (None, None, true) => Backend::Portable,
            _ => {
                return Err(RegistryError::Config(format!(
                    "language `{}` needs exactly one of `library`, `builtin`, `portable`",
                    self.id
                )))
            }
        };
        Ok(LanguageDescriptor {
            id: self.id,
            extensions: self.extensions.into_iter().map(|e| e.trim_start_matches('.').to_string()).collect(),
            backend,
            significant_kinds: self.significant_kinds,
            declaration_rules: self.declarations,
            tag_rules: self.tags,
            keyed_kinds: self.keyed_kinds,
        })
    }
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn json() -> LanguageDescriptor {
    LanguageDescriptor {
        id: "json".into(),
        extensions: vec!["json".into()],
        backend: Backend::Builtin("json".into()),
        significant_kinds: set(&["array", "object", "pair", "string", "number", "true", "false", "null"]),
        declaration_rules: vec![DeclarationRule::new("pair", "property", &["key"])],
        tag_rules: vec![TagRule::new("pair", RuleRole::Definition, "property", &["key"])],
        keyed_kinds: [("object".to_string(), "key".to_string())].into_iter().collect(),
    }
}

fn python() -> LanguageDescriptor {
    let function = TagRule {
        scope_introducing: true,
        binds_locals: Some("parameters".into()),
        local_category: Some("parameter".into()),
        ..TagRule::new("function_definition", RuleRole::Definition, "function", &["name"])
    };
    let class = TagRule {
        scope_introducing: true,
        ..TagRule::new("class_definition", RuleRole::Definition, "class", &["name"])
    };
    let assignment = TagRule {
        binds_locals: Some("left".into()),
        local_category: Some("variable".into()),
        ..TagRule::new("assignment", RuleRole::Definition, "variable", &["left"])
    };
    let for_loop = TagRule {
        binds_locals: Some("left".into()),
        local_category: Some("variable".into()),
        ..TagRule::new("for_statement", RuleRole::Definition, "variable", &["left"])
    };
    let identifier = TagRule {
        fallback_category: Some("global".into()),
        ..TagRule::new("identifier", RuleRole::Reference, "variable", &[])
    };
    LanguageDescriptor {
        id: "python".into(),
        extensions: vec!["py".into(), "pyi".into()],
        backend: Backend::Builtin("python".into()),
        significant_kinds: set(&[
            "function_definition",
            "class_definition",
            "decorated_definition",
            "expression_statement",
            "return_statement",
            "if_statement",
            "for_statement",
            "while_statement",
            "with_statement",
            "try_statement",
            "import_statement",
            "import_from_statement",
            "assignment",
            "call",
            "comment",
        ]),
        declaration_rules: vec![
            DeclarationRule::new("function_definition", "function", &["name"]),
            DeclarationRule::new("class_definition", "class", &["name"]),
        ],
        tag_rules: vec![
            function,
            class,
            assignment,
            for_loop,
            TagRule::new("call", RuleRole::Reference, "call", &["function"]),
            TagRule::new("call", RuleRole::Reference, "call", &["function", "attribute"]),
            TagRule::new("keyword_argument", RuleRole::Ignore, "", &["name"]),
            TagRule::new("attribute", RuleRole::Ignore, "", &["attribute"]),
            identifier,
        ],
        keyed_kinds: BTreeMap::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_builtins_by_extension() {
        let reg = Registry::builtin();
        assert_eq!(reg.for_path(Path::new("a/b.json")).unwrap().id, "json");
        assert_eq!(reg.for_path(Path::new("x.py")).unwrap().id, "python");
        assert!(matches!(reg.for_path(Path::new("x.rb")), Err(RegistryError::NoLanguageForPath(_))));
        assert!(matches!(reg.for_path(Path::new("json")), Err(RegistryError::NoLanguageForPath(_))));
        assert!(matches!(reg.get("nosuch"), Err(RegistryError::UnknownLanguage(_))));
    }

    #[test]
    fn config_adds_and_overrides_languages() {
        let reg = Registry::from_config_str(
            r#"
            [[language]]
            id = "tree"
            extensions = [".tree"]
            portable = true

            [[language]]
            id = "python"
            extensions = ["py"]
            builtin = "python"
            significant_kinds = ["module"]

            [[language.declarations]]
            kind = "function_definition"
            category = "def"
            name_path = ["name"]
            "#,
        )
        .unwrap();
        assert_eq!(reg.for_path(Path::new("a.tree")).unwrap().backend, Backend::Portable);
        let py = reg.get("python").unwrap();
        assert_eq!(py.declaration_rules[0].category, "def");
        assert!(reg.for_path(Path::new("x.pyi")).is_err());
    }

    #[test]
    fn shared_library_symbol_defaults_from_id() {
        let reg = Registry::from_config_str(
            "[[language]]\nid = \"ruby\"\nextensions = [\"rb\"]\nlibrary = \"/nope/libruby.so\"\n",
        )
        .unwrap();
        assert_eq!(
            reg.get("ruby").unwrap().backend,
            Backend::SharedLibrary { path: "/nope/libruby.so".into(), symbol: "tree_sitter_ruby".into() }
        );
    }

    #[test]
    fn ambiguous_extensions_are_rejected() {
        let err = Registry::from_config_str("[[language]]\nid = \"other\"\nextensions = [\"json\"]\nportable = true\n")
            .unwrap_err();
        assert!(err.to_string().contains("claimed by both"), "{err}");
    }

    #[test]
    fn backend_must_be_unambiguous() {
        let err = Registry::from_config_str("[[language]]\nid = \"x\"\nportable = true\nbuiltin = \"json\"\n")
            .unwrap_err();
        assert!(matches!(err, RegistryError::Config(_)));
    }

    #[test]
    fn diff_options_use_declaration_names_as_identity() {
        let opts = Registry::builtin().get("python").unwrap().diff_options();
        assert_eq!(opts.identity_fields["function_definition"], "name");
        let opts = Registry::builtin().get("json").unwrap().diff_options();
        assert_eq!(opts.keyed_kinds["object"], "key");
    }
}

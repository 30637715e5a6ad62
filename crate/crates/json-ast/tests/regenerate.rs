use std::path::Path;

use semascope_core::codegen::{generate, EmitOptions};

/// The committed sources are exactly what the generator emits today. Set
/// `SEMASCOPE_BLESS=1` to rewrite them after a grammar upgrade.
#[test]
fn committed_sources_are_current() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let doc = std::fs::read_to_string(root.join("../../fixtures/json-node-types.json")).unwrap();
    let (_, files) = generate(&doc, &EmitOptions::default()).unwrap();
    assert_eq!(files.len(), 2);
    for f in files {
        let path = root.join("src").join(&f.path);
        if std::env::var_os("SEMASCOPE_BLESS").is_some() {
            std::fs::write(&path, &f.contents).unwrap();
        }
        let committed = std::fs::read_to_string(&path).unwrap();
        assert!(committed == f.contents, "{} is stale; regenerate it", f.path);
    }
}

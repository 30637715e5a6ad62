//! Acceptance checks. Prints one PASS or FAIL line per criterion and exits
//! non-zero when any fails. Each check brings its own oracle.

#[path = "../../core/tests/common/mod.rs"]
mod trees;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use semascope_core::codegen::{generate, Cardinality, EmitOptions, Payload, SchemaEntry};
use semascope_core::diff::{render_git_patch, render_trace_svg, ses, ses_traced, GitPatchOptions, DEFAULT_TRACE_CAP};
use semascope_core::term::validate;
use semascope_core::typed::{term_spans, FromTerm};
use semascope_core::{
    apply_patch, diff_terms, extract_tags, find_definitions, find_references, parse_source, table_of_contents, Change,
    LanguageDescriptor, Projection, Registry, Tag, TagRole,
};
use serde_json::{json, Value};
use similar::{ChangeTag, TextDiff};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn main() {
    let checks: [(&str, fn() -> Outcome); 12] = [
        ("ses optimality", ses_optimality),
        ("myers classic instance", myers_classic),
        ("O(nd) scaling", scaling),
        ("diff round-trip", round_trip),
        ("git-patch soundness", git_patch),
        ("table of contents", toc_golden),
        ("codegen fidelity", codegen_fidelity),
        ("typed-decoder soundness", typed_decoder),
        ("tags", tags),
        ("service end-to-end", service),
        ("error tolerance", error_tolerance),
        ("determinism", determinism),
    ];
    // Panics are reported as failures below, not as raw stderr noise.
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in checks.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(check).unwrap_or_else(|p| Err(format!("panicked: {}", panic_text(&p))));
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS  {:>2} {name}: {detail} [{took:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2} {name}: {why} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn panic_text(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default()
}

fn fixtures() -> PathBuf {
    trees::fixtures()
}

fn language(id: &str) -> LanguageDescriptor {
    Registry::builtin().get(id).unwrap().clone()
}

/// Insert/delete edit distance by dynamic programming.
fn dp_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for i in 1..=a.len() {
        let mut diag = row[0];
        row[0] = i;
        for j in 1..=b.len() {
            let up = row[j];
            row[j] = if a[i - 1] == b[j - 1] { diag } else { 1 + row[j].min(row[j - 1]) };
            diag = up;
        }
    }
    row[b.len()]
}

fn ses_optimality() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xacce);
    for case in 0..1000 {
        let seq = |rng: &mut StdRng| -> Vec<u8> {
            let len = rng.random_range(0..=15);
            (0..len).map(|_| rng.random_range(0..4u8)).collect()
        };
        let (a, b) = (seq(&mut rng), seq(&mut rng));
        let script = ses(&a, &b, |x, y| x == y);
        ensure!(script.distance() == dp_distance(&a, &b), "case {case}: {a:?} -> {b:?}");
        ensure!(script.apply(&a, &b) == b, "case {case}: script does not replay");
    }
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(10), "took {took:?}");
    Ok("1000/1000 pairs match the DP edit distance".into())
}

fn myers_classic() -> Outcome {
    let a: Vec<char> = "ABCABBA".chars().collect();
    let b: Vec<char> = "CBABAC".chars().collect();
    let oracle = dp_distance(&a, &b);
    let (script, trace) = ses_traced(&a, &b, |x, y| x == y, DEFAULT_TRACE_CAP);
    ensure!(oracle == 5 && script.distance() == 5, "distance {} (oracle {oracle})", script.distance());
    let svg = render_trace_svg(&trace);
    let drawn = svg.matches("class=\"frontier\"").count();
    ensure!(trace.frontier_expansions() == 5 && drawn == 5, "{} rounds, {drawn} drawn", trace.frontier_expansions());
    Ok("5 edits, 5 frontier rounds in the SVG".into())
}

fn scaling() -> Outcome {
    fn pair(n: usize, d: usize) -> (Vec<u32>, Vec<u32>) {
        let a: Vec<u32> = (0..n as u32).collect();
        let mut b = a.clone();
        for k in 0..d / 2 {
            b[n / (d / 2 + 1) * (k + 1)] = u32::MAX - k as u32;
        }
        (a, b)
    }
    fn median(n: usize) -> Result<Duration, String> {
        let (a, b) = pair(n, 10);
        ensure!(ses(&a, &b, |x, y| x == y).distance() == 10, "d is not 10");
        let mut runs: Vec<Duration> = (0..5)
            .map(|_| {
                let start = Instant::now();
                for _ in 0..10 {
                    std::hint::black_box(ses(&a, &b, |x, y| x == y));
                }
                start.elapsed()
            })
            .collect();
        runs.sort();
        Ok(runs[2])
    }
    median(10_000)?;
    let (small, large) = (median(10_000)?, median(20_000)?);
    let ratio = large.as_secs_f64() / small.as_secs_f64();
    ensure!(ratio < 3.0, "ratio {ratio:.2}");
    Ok(format!("time ratio {ratio:.2} for n 10k -> 20k at d=10"))
}

fn round_trip() -> Outcome {
    let mut g = trees::Gen::new(0xacce);
    let opts = trees::test_options();
    for case in 0..500 {
        let size = 1 + g.below(200);
        let mut base = g.tree(size);
        while base.count() > 200 {
            base = g.tree(size / 2 + 1);
        }
        let edits = g.below(11);
        let mut other = g.mutate(&base, edits);
        while other.count() > 200 {
            let edits = g.below(5);
            other = g.mutate(&base, edits);
        }
        let (a, b) = (base.layout().0, other.layout().0);
        let p = diff_terms(&a, &b, &opts);
        ensure!(apply_patch(&p, Projection::Before) == a, "case {case}: before differs");
        ensure!(apply_patch(&p, Projection::After) == b, "case {case}: after differs");
    }
    Ok("500/500 pairs reconstruct both sides".into())
}

fn gnu_patch(before: &[u8], diff: &[u8]) -> Result<Vec<u8>, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (orig, p, out) = (dir.path().join("orig"), dir.path().join("p.diff"), dir.path().join("out"));
    std::fs::write(&orig, before).map_err(|e| e.to_string())?;
    std::fs::write(&p, diff).map_err(|e| e.to_string())?;
    let status = Command::new("patch").arg("--silent").arg("--force").arg("-o").arg(&out).arg(&orig).arg(&p).status();
    ensure!(status.map(|s| s.success()).unwrap_or(false), "patch rejected the diff");
    Ok(std::fs::read(&out).unwrap_or_default())
}

fn git_patch() -> Outcome {
    let corpus = trees::corpus();
    ensure!(corpus.len() >= 20, "only {} pairs", corpus.len());
    for (name, ext, before, after) in &corpus {
        let lang = language(if ext == "py" { "python" } else { "json" });
        let (a, b) = (parse_source(&lang, before).unwrap(), parse_source(&lang, after).unwrap());
        let diff = render_git_patch(&diff_terms(&a, &b, &lang.diff_options()), before, after, &GitPatchOptions::default())
            .map_err(|e| format!("{name}: {e}"))?;
        let patched = if diff.is_empty() { before.clone() } else { gnu_patch(before, &diff).map_err(|e| format!("{name}: {e}"))? };
        ensure!(&patched == after, "{name}: patched text differs");
    }
    Ok(format!("{} corpus pairs reproduce byte-exactly under GNU patch", corpus.len()))
}

type Entry = (String, String, Change);

/// Changed lines of a textual diff, charged to the innermost declaration
/// covering them. A declaration whose lines all changed on one side counts
/// as added or removed.
fn line_diff_oracle(lang: &LanguageDescriptor, before: &str, after: &str) -> BTreeSet<Entry> {
    let decls = |src: &str| -> Vec<(String, String, usize, usize)> {
        let t = parse_source(lang, src.as_bytes()).unwrap();
        t.preorder()
            .filter_map(|n| {
                let rule = lang.declaration_rules.iter().find(|r| r.kind == n.kind)?;
                Some((rule.category.clone(), n.resolve_path(&rule.name_path)?.source_text(), n.span.start_point.row, n.span.end_point.row))
            })
            .collect()
    };
    let (da, db) = (decls(before), decls(after));
    let (mut deleted, mut inserted) = (BTreeSet::new(), BTreeSet::new());
    for c in TextDiff::from_lines(before, after).iter_all_changes() {
        if c.value().trim().is_empty() {
            continue;
        }
        match c.tag() {
            ChangeTag::Delete => deleted.insert(c.old_index().unwrap()),
            ChangeTag::Insert => inserted.insert(c.new_index().unwrap()),
            ChangeTag::Equal => false,
        };
    }
    let mut out = BTreeSet::new();
    for (rows, ds, src, whole_change) in [(&deleted, &da, before, Change::Removed), (&inserted, &db, after, Change::Added)] {
        let lines: Vec<&str> = src.lines().collect();
        for &row in rows {
            let Some(d) = ds.iter().filter(|d| d.2 <= row && row <= d.3).min_by_key(|d| d.3 - d.2) else { continue };
            let whole = (d.2..=d.3).all(|r| rows.contains(&r) || lines.get(r).is_none_or(|l| l.trim().is_empty()));
            out.insert((d.0.clone(), d.1.clone(), if whole { whole_change } else { Change::Modified }));
        }
    }
    out
}

fn toc_golden() -> Outcome {
    let lang = language("python");
    let entry = |name: &str, change| ("function".to_string(), name.to_string(), change);
    let cases = [
        ("py-modified-function", vec![entry("foo", Change::Modified)]),
        ("py-added-function", vec![entry("helper", Change::Added)]),
        ("py-removed-function", vec![entry("obsolete", Change::Removed)]),
        ("py-identical", vec![]),
    ];
    for (name, expected) in cases {
        let dir = fixtures().join("corpus").join(name);
        let before = std::fs::read_to_string(dir.join("before.py")).unwrap();
        let after = std::fs::read_to_string(dir.join("after.py")).unwrap();
        let (a, b) = (parse_source(&lang, before.as_bytes()).unwrap(), parse_source(&lang, after.as_bytes()).unwrap());
        let toc = table_of_contents(&diff_terms(&a, &b, &lang.diff_options()), &lang.declaration_rules, "m.py");
        let got: Vec<Entry> = toc.into_iter().map(|e| (e.category, e.name, e.change)).collect();
        ensure!(got == expected, "{name}: {got:?}");
        let oracle = line_diff_oracle(&lang, &before, &after);
        ensure!(got.iter().cloned().collect::<BTreeSet<_>>() == oracle, "{name}: line-diff oracle says {oracle:?}");
    }
    Ok("modified, added, removed and identical pairs agree with the line-diff oracle".into())
}

fn codegen_fidelity() -> Outcome {
    let doc = std::fs::read_to_string(fixtures().join("json-node-types.json")).unwrap();
    let (schema, files) = generate(&doc, &EmitOptions::default()).map_err(|e| e.to_string())?;
    let Some(SchemaEntry::Sum { alternatives, .. }) = schema.get("_value") else { return Err("value is not a sum".into()) };
    let got: BTreeSet<&str> = alternatives.iter().map(String::as_str).collect();
    let listing = BTreeSet::from(["true", "false", "number", "null", "string", "array", "object"]);
    ensure!(alternatives.len() == 7 && got == listing, "value alternatives {alternatives:?}");

    let Some(SchemaEntry::Product { fields, .. }) = schema.get("pair") else { return Err("pair is not a product".into()) };
    let slot = |n: &str| fields.iter().find(|f| f.name == n);
    let key = slot("key").ok_or("pair has no key")?;
    let key_types = match &key.payload {
        Payload::Union(sum) => sum.alternatives.clone(),
        Payload::Type(t) => vec![t.clone()],
    };
    ensure!(key.cardinality == Cardinality::One && key_types == ["number", "string"], "pair key {key:?}");
    let value = slot("value").ok_or("pair has no value")?;
    ensure!(value.cardinality == Cardinality::One && value.payload == Payload::Type("_value".into()), "pair value {value:?}");

    let Some(SchemaEntry::Product { children: Some((card, payload)), .. }) = schema.get("array") else {
        return Err("array carries no children".into());
    };
    ensure!(*card == Cardinality::Many && *payload == Payload::Type("_value".into()), "array children {card:?} {payload:?}");

    // Every slot is error-wrapped in the emitted types.
    let ast = &files.iter().find(|f| f.path == "ast.rs").ok_or("no ast.rs")?.contents;
    for decl in ["pub key: rt::Checked<PairKey>,", "pub value: rt::Checked<Value>,", "pub children: ::std::vec::Vec<rt::Checked<Value>>,"] {
        ensure!(ast.contains(decl), "missing `{decl}`");
    }
    Ok("value is a 7-way sum; pair key number|string, value; array many error-wrapped values".into())
}

fn typed_decoder() -> Outcome {
    let lang = language("json");
    let (mut files, mut with_errors) = (0, 0);
    for (name, ext, before, after) in trees::corpus() {
        if ext != "json" {
            continue;
        }
        for src in [before, after] {
            files += 1;
            let term = parse_source(&lang, &src).unwrap();
            let doc = semascope_json_ast::decode(&term);
            let (mut got, mut want) = (Vec::new(), Vec::new());
            doc.spans(&mut got);
            term_spans(&term, &mut want);
            let key = |v: Vec<semascope_core::SourceSpan>| {
                let mut k: Vec<[usize; 6]> = v.iter().map(|s| s.to_array()).collect();
                k.sort();
                k
            };
            ensure!(key(got) == key(want), "{name}: span multiset changed");
            let mut errors = Vec::new();
            doc.errors(&mut errors);
            if term.has_error() {
                with_errors += 1;
                ensure!(!errors.is_empty(), "{name}: no error alternative decoded");
            } else {
                ensure!(doc.is_valid() && errors.is_empty(), "{name}: valid file decoded with errors");
            }
        }
    }
    ensure!(with_errors >= 1, "no corpus file has a syntax error");
    ensure!(<semascope_json_ast::Document as FromTerm>::accepts("document"), "document type not generated");
    Ok(format!("{files} files, {with_errors} with syntax errors"))
}

fn tags() -> Outcome {
    let lang = language("python");
    let src = std::fs::read(fixtures().join("tags/two_lines.py")).unwrap();
    let tags = extract_tags(&parse_source(&lang, &src).unwrap(), &lang.tag_rules, &src);
    let got: Vec<(&str, TagRole, &str, usize)> = tags.iter().map(|t| (t.name.as_str(), t.role, t.category.as_str(), t.span.start_point.row)).collect();
    let want = [("x", TagRole::Definition, "variable", 0), ("print", TagRole::Reference, "call", 1), ("x", TagRole::Reference, "variable", 1)];
    ensure!(got == want, "{got:?}");
    let defs = find_definitions(&tags, "x");
    let refs: Vec<&Tag> = find_references(&tags, "x").into_iter().chain(find_references(&tags, "print")).collect();
    ensure!(defs.len() == 1 && defs[0] == &tags[0], "definitions of x: {defs:?}");
    ensure!(refs.len() == 2 && refs[0] == &tags[2] && refs[1] == &tags[1], "references: {refs:?}");
    let mut order: Vec<usize> = find_references(&tags, "x").iter().chain(&find_definitions(&tags, "x")).map(|t| t.span.start_byte).collect();
    let sorted = {
        let mut s = order.clone();
        s.sort();
        s
    };
    order.reverse();
    ensure!(order == sorted, "lookups are not in document order");
    Ok("def x, call print, ref x".into())
}

/// Runs the CLI and returns (exit code, stdout).
fn cli(args: &[&dyn AsRef<std::ffi::OsStr>]) -> (Option<i32>, Vec<u8>) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_semascope"));
    cmd.env_remove("SEMASCOPE_CONFIG");
    for a in args {
        cmd.arg(a);
    }
    let out = cmd.output().expect("cli runs");
    (out.status.code(), out.stdout)
}

fn service() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = semascope_service::ServiceConfig {
        listen: "127.0.0.1:0".parse().unwrap(),
        store_path: dir.path().join("tags.redb"),
        ..Default::default()
    };
    let rt = tokio::runtime::Runtime::new().unwrap();
    let (stop, stopped) = tokio::sync::oneshot::channel::<()>();
    let (addr, server) = rt.block_on(semascope_service::start(config, async {
        let _ = stopped.await;
    }))
    .map_err(|e| e.to_string())?;
    let handle = rt.spawn(server);
    let result = service_checks(addr);
    let _ = stop.send(());
    let _ = rt.block_on(handle);
    result
}

fn service_checks(addr: std::net::SocketAddr) -> Outcome {
    let agent: ureq::Agent = ureq::Agent::config_builder().http_status_as_error(false).build().into();
    let call = |method: &str, path: &str, body: &str| -> Result<(u16, String), String> {
        let url = format!("http://{addr}{path}");
        let mut resp = match method {
            "GET" => agent.get(&url).call(),
            _ => agent.post(&url).content_type("application/json").send(body),
        }
        .map_err(|e| e.to_string())?;
        Ok((resp.status().as_u16(), resp.body_mut().read_to_string().map_err(|e| e.to_string())?))
    };

    let repo = fixtures().join("repo");
    let files: Vec<(String, String)> =
        ["app.py", "util.py"].iter().map(|n| (n.to_string(), std::fs::read_to_string(repo.join(n)).unwrap())).collect();
    let req = json!({"repo": "fixture", "revision": "c0ffee", "files": files.iter().map(|(p, s)| json!({"path": p, "source": s})).collect::<Vec<_>>()});
    let (status, body) = call("POST", "/v1/index", &req.to_string())?;
    ensure!(status == 200 && body.contains("\"indexed\":2"), "index: {status} {body}");

    let lang = language("python");
    let mut per_file = Vec::new();
    for (path, src) in &files {
        per_file.push((path.clone(), extract_tags(&parse_source(&lang, src.as_bytes()).unwrap(), &lang.tag_rules, src.as_bytes())));
    }
    let names: BTreeSet<String> = per_file.iter().flat_map(|(_, t)| t.iter().map(|t| t.name.clone())).collect();
    let mut lookups = 0;
    for name in &names {
        for (endpoint, role) in [("definitions", TagRole::Definition), ("references", TagRole::Reference)] {
            let path = format!("/v1/{endpoint}?repo=fixture&revision=c0ffee&name={name}");
            let (status, body) = call("GET", &path, "")?;
            ensure!(status == 200, "{path}: {status}");
            let expected: Vec<Value> = per_file
                .iter()
                .flat_map(|(p, tags)| {
                    tags.iter().filter(|t| t.role == role && &t.name == name).map(move |t| {
                        let mut v = serde_json::to_value(t).unwrap();
                        v.as_object_mut().unwrap().insert("path".into(), json!(p));
                        v
                    })
                })
                .collect();
            let got: Value = serde_json::from_str(&body).map_err(|e| e.to_string())?;
            ensure!(got["tags"] == Value::Array(expected), "{path}: {body}");
            ensure!(call("GET", &path, "")?.1 == body, "{path}: replay differs");
            lookups += 1;
        }
    }

    let pair = fixtures().join("corpus/py-modified-function");
    let (before, after) = (pair.join("before.py"), pair.join("after.py"));
    let (code, cli_toc) = cli(&[&"toc", &before, &after]);
    ensure!(code == Some(1), "cli toc exited {code:?}");
    let label = after.to_string_lossy().into_owned();
    let diff_req = json!({
        "language": "python",
        "before": std::fs::read_to_string(&before).unwrap(),
        "after": std::fs::read_to_string(&after).unwrap(),
        "path": label,
    })
    .to_string();
    let (status, body) = call("POST", "/v1/diff", &diff_req)?;
    ensure!(status == 200, "diff: {status} {body}");
    let served: Value = serde_json::from_str(&body).map_err(|e| e.to_string())?;
    let from_cli: Value = serde_json::from_slice(&cli_toc).map_err(|e| e.to_string())?;
    ensure!(served["toc"] == from_cli, "service toc {} vs cli {}", served["toc"], from_cli);
    ensure!(call("POST", "/v1/diff", &diff_req)?.1 == body, "diff replay differs");
    let parse_req = json!({"language": "json", "source": "{\"a\": [1, 2]}"}).to_string();
    ensure!(call("POST", "/v1/parse", &parse_req)? == call("POST", "/v1/parse", &parse_req)?, "parse replay differs");
    Ok(format!("{lookups} lookups match extract_tags; ToC matches the CLI; replays identical"))
}

fn error_tolerance() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xf022);
    let mut total = 0;
    for id in ["json", "python"] {
        let lang = language(id);
        for case in 0..10_000 {
            let len = rng.random_range(0..256);
            let input: Vec<u8> = (0..len).map(|_| rng.random::<u8>()).collect();
            let term = catch_unwind(AssertUnwindSafe(|| parse_source(&lang, &input)))
                .map_err(|p| format!("{id} case {case}: crashed: {}", panic_text(&p)))?
                .map_err(|e| format!("{id} case {case}: {e}"))?;
            validate(&term).map_err(|e| format!("{id} case {case}: {e}"))?;
            total += 1;
        }
    }
    Ok(format!("{total} random inputs parsed, all trees valid"))
}

fn determinism() -> Outcome {
    let corpus = fixtures().join("corpus");
    let runs: Vec<Vec<std::ffi::OsString>> = {
        let mut v = Vec::new();
        for (name, ext) in [("py-reordered-functions", "py"), ("json-moved-element", "json"), ("py-modified-function", "py")] {
            let (a, b) = (corpus.join(name).join(format!("before.{ext}")), corpus.join(name).join(format!("after.{ext}")));
            for format in ["json", "patch", "text"] {
                v.push(vec!["diff".into(), "--format".into(), format.into(), a.clone().into(), b.clone().into()]);
            }
            v.push(vec!["toc".into(), a.clone().into(), b.clone().into()]);
            v.push(vec!["parse".into(), a.clone().into()]);
            v.push(vec!["tags".into(), b.clone().into()]);
            v.push(vec!["fingerprint".into(), a.into()]);
            v.push(vec!["fingerprint".into(), b.into()]);
        }
        v
    };
    for args in &runs {
        let refs: Vec<&dyn AsRef<std::ffi::OsStr>> = args.iter().map(|a| a as &dyn AsRef<std::ffi::OsStr>).collect();
        let (first, second) = (cli(&refs), cli(&refs));
        ensure!(first.1 == second.1 && !first.1.is_empty(), "{args:?} differs between runs");
    }
    let dir = tempfile::tempdir().unwrap();
    let node_types = fixtures().join("json-node-types.json");
    let outputs: Vec<PathBuf> = ["one", "two"].iter().map(|n| dir.path().join(n)).collect();
    for out in &outputs {
        ensure!(cli(&[&"generate", &node_types, out]).0 == Some(0), "generate failed");
    }
    for file in ["ast.rs", "names.json"] {
        let read = |d: &Path| std::fs::read(d.join(file)).unwrap();
        ensure!(read(&outputs[0]) == read(&outputs[1]), "{file} differs between runs");
    }
    Ok(format!("{} command pairs and codegen output byte-identical across processes", runs.len()))
}

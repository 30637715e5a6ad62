use std::fmt::Display;
use std::io::{Read, Write};
use std::path::Path;

use semascope_core::codegen::{generate as run_codegen, EmitOptions};
use semascope_core::diff::{feature_vector, render_git_patch, render_json, render_trace_svg, ses_traced, Differ, GitPatchOptions, Patch, PatchTree, Trace};
use semascope_core::summary::{render_toc_json, render_toc_text};
use semascope_core::tags::{render_ctags, render_tags_json};
use semascope_core::{extract_tags, parse_source, portable, table_of_contents, DiffOptions, LanguageDescriptor, Registry, Term};

use crate::{Flags, Format};

pub struct Failure {
    pub code: u8,
    pub message: String,
}

type Outcome = Result<u8, Failure>;

fn fail(code: u8) -> impl Fn(&dyn Display) -> Failure {
    move |e| Failure { code, message: e.to_string() }
}

fn registry(flags: &Flags, code: u8) -> Result<Registry, Failure> {
    match &flags.config {
        Some(path) => Registry::from_config_file(path).map_err(|e| fail(code)(&e)),
        None => Ok(Registry::builtin()),
    }
}

fn read_input(path: &Path, code: u8) -> Result<Vec<u8>, Failure> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).map_err(|e| fail(code)(&format!("stdin: {e}")))?;
        return Ok(buf);
    }
    std::fs::read(path).map_err(|e| fail(code)(&format!("{}: {e}", path.display())))
}

/// Reads and parses one input.
fn load(reg: &Registry, flags: &Flags, path: &Path, code: u8) -> Result<(LanguageDescriptor, Vec<u8>, Term), Failure> {
    let lang = reg.resolve(path, flags.language.as_deref()).map_err(|e| fail(code)(&e))?.clone();
    let source = read_input(path, code)?;
    let term = parse_source(&lang, &source).map_err(|e| fail(code)(&format!("{}: {e}", path.display())))?;
    Ok((lang, source, term))
}

fn emit(bytes: &[u8]) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    match out.write_all(bytes).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(fail(2)(&format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn with_newline(mut s: String) -> Vec<u8> {
    if !s.is_empty() && !s.ends_with('\n') {
        s.push('\n');
    }
    s.into_bytes()
}

fn unsupported(format: Format, command: &str, code: u8) -> Failure {
    fail(code)(&format!("--format {} is not available for `{command}`", format!("{format:?}").to_lowercase()))
}

pub fn parse(flags: &Flags, file: &Path) -> Outcome {
    let reg = registry(flags, 1)?;
    let (_, _, term) = load(&reg, flags, file, 1)?;
    let out = match flags.format.unwrap_or(Format::Json) {
        Format::Json => portable::encode(&term),
        Format::Sexp | Format::Text => portable::to_sexp(&term),
        other => return Err(unsupported(other, "parse", 1)),
    };
    emit(&with_newline(out))?;
    Ok(0)
}

fn diff_options(flags: &Flags, lang: &LanguageDescriptor) -> Result<DiffOptions, Failure> {
    let mut opts = lang.diff_options();
    if let Some(t) = flags.threshold {
        opts.similarity_threshold = t;
    }
    if flags.no_moves {
        opts.move_detection = false;
    }
    opts.validate().map_err(|e| fail(2)(&e))?;
    Ok(opts)
}

struct Compared {
    lang: LanguageDescriptor,
    before: Vec<u8>,
    after: Vec<u8>,
    patch: PatchTree,
}

fn compare(flags: &Flags, before: &Path, after: &Path) -> Result<Compared, Failure> {
    let reg = registry(flags, 2)?;
    let (lang, before_src, a) = load(&reg, flags, before, 2)?;
    let (other, after_src, b) = load(&reg, flags, after, 2)?;
    if other.id != lang.id {
        return Err(fail(2)(&format!("{} is {} but {} is {}", before.display(), lang.id, after.display(), other.id)));
    }
    let opts = diff_options(flags, &lang)?;
    let mut differ = Differ::new(&opts);
    if flags.trace_svg.is_some() {
        differ = differ.with_traces();
    }
    let patch = differ.diff(&a, &b);
    if let Some(path) = &flags.trace_svg {
        // The widest search is the most informative one to draw.
        let trace = differ.take_traces().into_iter().max_by_key(|t| (t.distance, t.n + t.m)).unwrap_or_else(empty_trace);
        std::fs::write(path, render_trace_svg(&trace)).map_err(|e| fail(2)(&format!("{}: {e}", path.display())))?;
    }
    Ok(Compared { lang, before: before_src, after: after_src, patch })
}

fn empty_trace() -> Trace {
    ses_traced::<u8, u8>(&[], &[], |a, b| a == b, 1).1
}

fn exit_for(patch: &PatchTree) -> u8 {
    u8::from(!patch.is_identity())
}

pub fn diff(flags: &Flags, before: &Path, after: &Path) -> Outcome {
    let format = flags.format.unwrap_or(Format::Json);
    if !matches!(format, Format::Json | Format::Text | Format::Patch) {
        return Err(unsupported(format, "diff", 2));
    }
    let c = compare(flags, before, after)?;
    if c.patch.is_identity() {
        return Ok(0);
    }
    let out = match format {
        Format::Json => with_newline(render_json(&c.patch)),
        Format::Text => summarize(&c.patch).into_bytes(),
        _ => {
            let opts = GitPatchOptions {
                old_label: format!("a/{}", label(before)),
                new_label: format!("b/{}", label(after)),
                context: flags.context,
            };
            render_git_patch(&c.patch, &c.before, &c.after, &opts).map_err(|e| fail(2)(&e))?
        }
    };
    emit(&out)?;
    Ok(exit_for(&c.patch))
}

fn label(path: &Path) -> String {
    let s = path.to_string_lossy();
    s.strip_prefix("./").unwrap_or(&s).to_string()
}

/// One line per changed position, with 1-based line numbers.
fn summarize(patch: &PatchTree) -> String {
    let at = |t: &Term| format!("{}:{}", t.span.start_point.row + 1, t.span.start_point.column + 1);
    let mut out = String::new();
    for p in patch.changes() {
        let line = match p {
            Patch::Insert { term, move_id: Some(_) } => format!("> {} {} (moved)", term.kind, at(term)),
            Patch::Insert { term, .. } => format!("+ {} {}", term.kind, at(term)),
            Patch::Delete { term, move_id: Some(_) } => format!("< {} {} (moved)", term.kind, at(term)),
            Patch::Delete { term, .. } => format!("- {} {}", term.kind, at(term)),
            Patch::Replace { before, after, moved } => {
                let note = if *moved { " (moved)" } else { "" };
                format!("~ {} {} -> {} {}{note}", before.kind, at(before), after.kind, at(after))
            }
            Patch::Copy(_) => continue,
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn toc(flags: &Flags, before: &Path, after: &Path) -> Outcome {
    let format = flags.format.unwrap_or(Format::Json);
    if !matches!(format, Format::Json | Format::Text) {
        return Err(unsupported(format, "toc", 2));
    }
    let c = compare(flags, before, after)?;
    let entries = table_of_contents(&c.patch, &c.lang.declaration_rules, &label(after));
    let out = match format {
        Format::Json => with_newline(render_toc_json(&entries)),
        _ => render_toc_text(&entries).into_bytes(),
    };
    emit(&out)?;
    Ok(exit_for(&c.patch))
}

pub fn tags(flags: &Flags, file: &Path) -> Outcome {
    let reg = registry(flags, 1)?;
    let (lang, source, term) = load(&reg, flags, file, 1)?;
    let tags = extract_tags(&term, &lang.tag_rules, &source);
    let out = match flags.format.unwrap_or(Format::Json) {
        Format::Json => with_newline(render_tags_json(&tags)),
        Format::Ctags | Format::Text => render_ctags(&tags, &label(file), &source).into_bytes(),
        other => return Err(unsupported(other, "tags", 1)),
    };
    emit(&out)?;
    Ok(0)
}

pub fn generate(node_types: &Path, out_dir: &Path, runtime_path: &str) -> Outcome {
    let doc = std::fs::read_to_string(node_types).map_err(|e| fail(2)(&format!("{}: {e}", node_types.display())))?;
    let options = EmitOptions { runtime_path: runtime_path.to_string() };
    let (_, files) = run_codegen(&doc, &options).map_err(|e| fail(2)(&format!("{}: {e}", node_types.display())))?;
    std::fs::create_dir_all(out_dir).map_err(|e| fail(2)(&format!("{}: {e}", out_dir.display())))?;
    for file in &files {
        let path = out_dir.join(&file.path);
        std::fs::write(&path, &file.contents).map_err(|e| fail(2)(&format!("{}: {e}", path.display())))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(0)
}

pub fn fingerprint(flags: &Flags, file: &Path) -> Outcome {
    let reg = registry(flags, 1)?;
    let (lang, _, term) = load(&reg, flags, file, 1)?;
    let opts = diff_options(flags, &lang)?;
    let bytes = feature_vector(&term, opts.p, opts.q, opts.d).to_le_bytes();
    let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
    emit(&with_newline(hex))?;
    Ok(0)
}

//! `semascope`: parse, diff, summarize, tag and generate from the command line.
//!
//! Exit codes follow diff(1): `diff` and `toc` return 0 when the inputs are
//! structurally identical, 1 when they differ and 2 on trouble. `parse` and
//! `tags` return 1 on failure, `generate` returns 2.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "semascope", version, about = "Structural code analysis over tree-sitter grammars")]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct Flags {
    /// Language registry file. Built-in languages are used when absent.
    #[arg(long, global = true, env = "SEMASCOPE_CONFIG")]
    pub config: Option<PathBuf>,
    /// Language id, overriding detection by file extension.
    #[arg(long, global = true)]
    pub language: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Unchanged lines around each hunk of a patch.
    #[arg(long, global = true, default_value_t = 3)]
    pub context: usize,
    /// Largest relative distance at which a deleted and an inserted subtree
    /// count as a move.
    #[arg(long, global = true)]
    pub threshold: Option<f64>,
    #[arg(long, global = true)]
    pub no_moves: bool,
    /// Writes the widest shortest-edit-script search of the diff as SVG.
    #[arg(long, global = true, value_name = "PATH")]
    pub trace_svg: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Patch,
    Sexp,
    Ctags,
}

#[derive(Subcommand)]
enum Command {
    /// Prints the syntax tree of a file (`-` reads stdin).
    Parse { file: PathBuf },
    /// Structural diff of two files.
    Diff { before: PathBuf, after: PathBuf },
    /// Declarations added, removed or modified between two files.
    Toc { before: PathBuf, after: PathBuf },
    /// Definitions and references in a file.
    Tags { file: PathBuf },
    /// Typed AST sources from a grammar's node-types.json.
    Generate {
        node_types: PathBuf,
        out_dir: PathBuf,
        /// Module path of the runtime the generated code imports.
        #[arg(long, default_value = "::semascope_core::typed")]
        runtime_path: String,
    },
    /// Feature vector of a file's root, as little-endian hex.
    #[command(hide = true)]
    Fingerprint { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let f = &cli.flags;
    let outcome = match &cli.command {
        Command::Parse { file } => commands::parse(f, file),
        Command::Diff { before, after } => commands::diff(f, before, after),
        Command::Toc { before, after } => commands::toc(f, before, after),
        Command::Tags { file } => commands::tags(f, file),
        Command::Generate { node_types, out_dir, runtime_path } => commands::generate(node_types, out_dir, runtime_path),
        Command::Fingerprint { file } => commands::fingerprint(f, file),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("semascope: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

#![allow(dead_code)]

pub mod dot_check;
pub mod gen;

use std::io::Cursor;
use std::path::PathBuf;

use respmod::cli::{run, ExitStatus};
use respmod::Model;

pub fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn corpus(name: &str) -> PathBuf {
    repo_root().join("corpus").join(name)
}

pub fn corpus_text(name: &str) -> String {
    std::fs::read_to_string(corpus(name)).unwrap_or_else(|e| panic!("reading {name}: {e}"))
}

pub fn golden(name: &str) -> String {
    corpus_text(&format!("golden/{name}"))
}

pub fn corpus_model(name: &str) -> Model {
    respmod::load_model(name, &corpus_text(name)).unwrap_or_else(|e| panic!("{e}"))
}

pub struct Output {
    pub status: ExitStatus,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line in process. Corpus file names are resolved against
/// the corpus directory when they exist there.
pub fn cli(args: &[&str]) -> Output {
    cli_with_stdin(args, "")
}

pub fn cli_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut argv = vec!["respmod".to_string()];
    for a in args {
        let path = corpus(a);
        if !a.is_empty() && !a.starts_with('-') && path.is_file() {
            argv.push(path.display().to_string());
        } else {
            argv.push(a.to_string());
        }
    }
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let status = run(argv, &mut Cursor::new(stdin.as_bytes().to_vec()), &mut stdout, &mut stderr);
    Output {
        status,
        stdout: String::from_utf8(stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(stderr).expect("utf-8 stderr"),
    }
}

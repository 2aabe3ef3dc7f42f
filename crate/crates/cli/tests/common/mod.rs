#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use zdga::{spec, RingBuilder, ZeroDivisorGraph};

pub fn zdga(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zdga")).args(args).env_remove("ZDGA_MAX_ORDER").output().expect("zdga binary runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn schema_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema")
}

/// Ring specs from the shared corpus file.
pub fn corpus() -> Vec<String> {
    let text = std::fs::read_to_string(workspace_root().join("corpus/rings.txt")).expect("corpus file");
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(String::from).collect()
}

pub fn graph(text: &str) -> ZeroDivisorGraph {
    let ring = spec::build(text, &RingBuilder::new()).unwrap_or_else(|e| panic!("{text}: {e}"));
    ZeroDivisorGraph::build(&ring)
}

pub fn corpus_graphs() -> Vec<(String, ZeroDivisorGraph)> {
    corpus()
        .into_iter()
        .map(|s| {
            let g = graph(&s);
            (s, g)
        })
        .collect()
}

//! Helpers shared by the CLI integration suites: drive the real binary
//! in a scratch directory and read back its outputs.
#![allow(dead_code)] // each test target uses a different subset

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const BIN: &str = env!("CARGO_BIN_EXE_superlin");

/// Absolute path of a shipped fixture under `data/fixtures/`.
pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/fixtures")
        .join(name)
        .canonicalize()
        .expect("fixture exists")
}

/// Run the binary with `args`, using `dir` as the working directory.
pub fn run_in(dir: &Path, args: &[&str]) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).current_dir(dir).env_remove("SUPERLIN_SEED");
    cmd.output().expect("binary launches")
}

pub fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn assert_ok(out: &Output) {
    assert!(
        out.status.success(),
        "command failed (status {:?}):\n{}",
        out.status.code(),
        stderr_of(out)
    );
}

pub fn assert_fails(out: &Output) {
    assert!(!out.status.success(), "command unexpectedly succeeded");
}

pub fn read_json(path: &Path) -> serde_json::Value {
    let text = fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("reading {}: {e}", path.display()));
    serde_json::from_str(&text)
        .unwrap_or_else(|e| panic!("parsing {}: {e}", path.display()))
}

/// Assert two runs produced byte-identical files named `name`.
pub fn assert_same_bytes(dir_a: &Path, dir_b: &Path, name: &str) {
    let a = fs::read(dir_a.join(name)).unwrap_or_else(|e| panic!("reading {name} (a): {e}"));
    let b = fs::read(dir_b.join(name)).unwrap_or_else(|e| panic!("reading {name} (b): {e}"));
    assert!(a == b, "{name} differs between identical runs");
}

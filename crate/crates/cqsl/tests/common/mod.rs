#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use cqsl::state_io::StateFile;
use cqsl_core::{DensityMatrix, C64};
use serde_json::Value;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", self.stdout))
    }
}

pub fn cqsl(args: &[&str]) -> Run {
    cqsl_env(args, &[])
}

pub fn cqsl_env(args: &[&str], env: &[(&str, &Path)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cqsl"));
    cmd.args(args).env_remove(cqsl::cli::OUTPUT_DIR_ENV);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn write_density(dir: &Path, name: &str, rho: &DensityMatrix) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(&StateFile::from_density(rho)).unwrap()).unwrap();
    path
}

pub fn write_vector(dir: &Path, name: &str, psi: &[C64], dims: (usize, usize)) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(&StateFile::from_vector(psi, dims)).unwrap()).unwrap();
    path
}

pub fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/schemas")
        .join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

pub fn assert_valid(schema_name: &str, instance: &Value) {
    let validator = jsonschema::validator_for(&schema(schema_name)).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema_name}: {errors:?}\n{instance}");
}

pub fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

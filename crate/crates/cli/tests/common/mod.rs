#![allow(dead_code)]

use gradedjets_cli::{run_with_limit, Outcome, DEFAULT_MAX_TERMS};
use serde_json::Value;

pub const SCHEMA: &str = include_str!("../../schema/report.schema.json");

pub fn args(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

pub fn run_on(cmd: &str, input: &str) -> Outcome {
    run_with_limit(&args(cmd), &mut input.as_bytes(), DEFAULT_MAX_TERMS)
}

pub fn run_capped(cmd: &str, input: &str, cap: usize) -> Outcome {
    run_with_limit(&args(cmd), &mut input.as_bytes(), cap)
}

pub fn json(out: &gradedjets_cli::Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout))
}

pub fn validator() -> jsonschema::Validator {
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

pub fn schema_errors(v: &jsonschema::Validator, report: &Value) -> Vec<String> {
    v.iter_errors(report).map(|e| e.to_string()).collect()
}

/// Builtin invocations covering every algebra choice, dims 1-3, with and
/// without diffeomorphism ghosts.
pub fn corpus_invocations() -> Vec<String> {
    let algebras = [
        "--algebra abelian --rank 1",
        "--algebra abelian --rank 2",
        "--algebra abelian --rank 3",
        "--algebra su2",
        "--algebra su2u1",
    ];
    let mut out = Vec::new();
    for alg in algebras {
        for n in 1..=3 {
            for diffeo in ["", " --diffeo"] {
                out.push(format!("builtin ym {alg} --dim {n}{diffeo}"));
            }
        }
    }
    out
}

pub fn builtin(invocation: &str) -> String {
    let out = run_on(invocation, "");
    assert_eq!(out.code, 0, "{invocation}: {}", out.stderr);
    out.stdout
}

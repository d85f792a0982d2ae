#![allow(dead_code)]

use std::process::Command;

use ibn_core::{AlgebraExpr, BasisType};
use rand::Rng;
use serde_json::Value;

/// Random expression with at most `depth` operator levels above the leaves,
/// so `AlgebraExpr::depth` is at most `depth + 1`.
pub fn random_expr<R: Rng>(rng: &mut R, depth: u32) -> AlgebraExpr {
    if depth == 0 || rng.gen_bool(0.3) {
        return random_atom(rng);
    }
    let sub = |rng: &mut R| random_expr(rng, depth - 1);
    match rng.gen_range(0..6) {
        0 => AlgebraExpr::direct_sum(sub(rng), sub(rng)),
        1 => AlgebraExpr::tensor(sub(rng), sub(rng)),
        2 => AlgebraExpr::quotient(sub(rng)),
        3 => AlgebraExpr::hom_image(sub(rng)),
        4 => AlgebraExpr::extension_of(sub(rng)),
        _ => AlgebraExpr::InductiveLimit((0..rng.gen_range(1..=3)).map(|_| sub(rng)).collect()),
    }
}

pub fn random_atom<R: Rng>(rng: &mut R) -> AlgebraExpr {
    match rng.gen_range(0..12) {
        0 => AlgebraExpr::leaf(format!("O:{}", rng.gen_range(2..=9))),
        1 => AlgebraExpr::leaf("Oinf"),
        2 => {
            let m = rng.gen_range(1..=5);
            AlgebraExpr::leaf(format!("Unc:{m},{}", m + rng.gen_range(1..=6)))
        }
        3 => AlgebraExpr::leaf("Toeplitz"),
        4 => AlgebraExpr::leaf("T2"),
        5 => AlgebraExpr::leaf("BH"),
        6 => AlgebraExpr::leaf("Commutative"),
        7 => AlgebraExpr::leaf(format!("Rordam:{}", rng.gen_range(1..=6))),
        8 => AlgebraExpr::ExactLeaf(
            BasisType::new(rng.gen_range(1..=9), rng.gen_range(1..=9)).unwrap(),
        ),
        9 => AlgebraExpr::IbnLeaf,
        _ => AlgebraExpr::CornerOfInfiniteSimple,
    }
}

/// Inserts random whitespace after every `(` and `,` and before every `)`.
pub fn sprinkle_whitespace<R: Rng>(rng: &mut R, src: &str) -> String {
    let pad = |rng: &mut R| [" ", "", "\t", "\n ", "  "][rng.gen_range(0..5)].to_string();
    let mut out = pad(rng);
    for c in src.chars() {
        if c == ')' {
            out.push_str(&pad(rng));
        }
        out.push(c);
        if c == '(' || c == ',' {
            out.push_str(&pad(rng));
        }
    }
    out.push_str(&pad(rng));
    out
}

pub struct BinOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the compiled `ibn` binary.
pub fn ibn(args: &[&str]) -> BinOutput {
    ibn_env(args, None)
}

pub fn ibn_env(args: &[&str], step_bound: Option<&str>) -> BinOutput {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ibn"));
    cmd.args(args).env_remove(ibn_cli::STEP_BOUND_VAR);
    if let Some(b) = step_bound {
        cmd.env(ibn_cli::STEP_BOUND_VAR, b);
    }
    let out = cmd.output().expect("ibn binary runs");
    BinOutput {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub fn schema() -> Value {
    serde_json::from_str(ibn_cli::OUTPUT_SCHEMA).expect("schema is JSON")
}

/// Validator for one named shape under `$defs`, or the whole schema for `None`.
pub fn validator(def: Option<&str>) -> jsonschema::Validator {
    let mut s = schema();
    if let Some(name) = def {
        let obj = s.as_object_mut().unwrap();
        obj.remove("anyOf");
        obj.insert("$ref".into(), format!("#/$defs/{name}").into());
    }
    jsonschema::validator_for(&s).expect("schema compiles")
}

/// Schema violations for `instance`, rendered.
pub fn schema_errors(v: &jsonschema::Validator, instance: &Value) -> Vec<String> {
    v.iter_errors(instance).map(|e| e.to_string()).collect()
}

/// Matrix file for the `1 x n` row `[v1 ... vn]` over `presentation`.
pub fn row_matrix_file(n: usize, presentation: &str) -> String {
    serde_json::json!({
        "rows": 1,
        "cols": n,
        "entries": (1..=n).map(|i| format!("v{i}")).collect::<Vec<_>>(),
        "presentation": presentation,
    })
    .to_string()
}

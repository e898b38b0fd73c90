#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

pub fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

pub fn swf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swf"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn run(args: &[String]) -> (i32, Vec<u8>) {
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let out = swf(&args);
    (out.status.code().expect("exit code"), out.stdout)
}

pub fn json_of(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).expect("stdout is JSON")
}

/// Every subcommand on the corpus with the exit code it must produce.
pub fn corpus() -> Vec<(Vec<String>, i32)> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let cycle = r#"{"degree":1,"coefficients":{"a":1}}"#;
    vec![
        (s(&["validate", &data("ex0.json")]), 0),
        (s(&["validate", &data("gen9.json")]), 0),
        (s(&["validate", &data("perturbed9.json")]), 1),
        (s(&["validate", &data("malformed.json")]), 2),
        (
            s(&[
                "homology",
                &data("ex1.json"),
                "--max-power",
                "4",
                "--equivariant",
            ]),
            0,
        ),
        (s(&["homology", &data("ex1.json"), "--plain"]), 0),
        (
            s(&["homology", &data("free11.json"), "--max-power", "3"]),
            0,
        ),
        (
            s(&["homology", &data("perturbed9.json"), "--max-power", "3"]),
            1,
        ),
        (s(&["compare", &data("ex1.json"), "--max-power", "4"]), 0),
        (s(&["compare", &data("gen9.json"), "--max-power", "3"]), 0),
        (s(&["compare", &data("free11.json"), "--max-power", "2"]), 0),
        (
            s(&[
                "delta",
                &data("ex1.json"),
                "--cycle",
                cycle,
                "--max-power",
                "4",
            ]),
            0,
        ),
        (
            s(&[
                "delta",
                &data("ex1.json"),
                "--cycle",
                &data("cycle-ex1.json"),
                "--max-power",
                "4",
            ]),
            0,
        ),
        (
            s(&[
                "delta",
                &data("ex1.json"),
                "--cycle",
                r#"{"degree":2,"coefficients":{"a":1}}"#,
                "--max-power",
                "4",
            ]),
            1,
        ),
        (
            s(&[
                "delta",
                &data("ex1.json"),
                "--cycle",
                "{not json",
                "--max-power",
                "4",
            ]),
            2,
        ),
        (
            s(&["wallcross", &data("ex1-crossing.json"), "--max-power", "4"]),
            0,
        ),
        (
            s(&["wallcross", &data("death3.json"), "--max-power", "5"]),
            0,
        ),
        (
            s(&["morphisms", &data("ex1-crossing.json"), "--max-power", "4"]),
            0,
        ),
        (
            s(&["morphisms", &data("death3.json"), "--max-power", "4"]),
            0,
        ),
        (s(&["specflow", &data("path2.json")]), 0),
        (s(&["specflow", &data("path-wall.json")]), 3),
        (s(&["kuranishi", "--lambda-prime", "1", "--gamma", "-2"]), 0),
        (s(&["kuranishi", "--lambda-prime", "0", "--gamma", "1"]), 3),
        (
            s(&[
                "generate",
                "--seed",
                "9",
                "--orbits",
                "7",
                "--index-min",
                "-2",
                "--index-max",
                "3",
            ]),
            0,
        ),
        (
            s(&[
                "generate",
                "--seed",
                "3",
                "--orbits",
                "4",
                "--index-min",
                "-1",
                "--index-max",
                "3",
                "--crossing",
                "death",
            ]),
            0,
        ),
        (
            s(&[
                "generate",
                "--seed",
                "1",
                "--orbits",
                "3",
                "--index-min",
                "2",
                "--index-max",
                "1",
            ]),
            2,
        ),
        (s(&["validate", &data("missing.json")]), 2),
    ]
}

mod common;

use std::process::Command;

use serde_json::json;

use common::{corpus, data, json_of, run, swf};

#[test]
fn two_runs_are_byte_identical_and_exit_codes_match() {
    for (args, code) in corpus() {
        let (c1, o1) = run(&args);
        let (c2, o2) = run(&args);
        assert_eq!(
            c1,
            code,
            "exit code of {args:?}: {}",
            String::from_utf8_lossy(&o1)
        );
        assert_eq!(c1, c2, "{args:?}");
        assert_eq!(o1, o2, "{args:?}");
        json_of(&o1);
    }
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = ["compare", &data("gen9.json"), "--max-power", "3"];
    let free = swf(&args).stdout;
    let capped = Command::new(env!("CARGO_BIN_EXE_swf"))
        .args(args)
        .env("SWF_THREADS", "1")
        .output()
        .unwrap()
        .stdout;
    assert_eq!(free, capped);
}

#[test]
fn ex1_equivariant_ranks() {
    let out = swf(&[
        "homology",
        &data("ex1.json"),
        "--max-power",
        "4",
        "--equivariant",
    ]);
    let v = json_of(&out.stdout);
    assert_eq!(v["ranks"], json!({"2": 1, "4": 1, "6": 1}));
    assert_eq!(v["certified"], json!([0, 7]));
}

#[test]
fn ex1_plain_homology_is_one_in_degree_one() {
    let v = json_of(&swf(&["homology", &data("ex1.json"), "--plain"]).stdout);
    assert_eq!(v["ranks"], json!({"1": 1}));
    assert_eq!(v["euler"], json!(-1));
}

#[test]
fn ex1_wallcross_report() {
    let v = json_of(&swf(&["wallcross", &data("ex1-crossing.json"), "--max-power", "4"]).stdout);
    assert_eq!(v["casson"], json!([-1, 0]));
    assert_eq!(v["sf_c"], json!(-1));
    assert_eq!(v["ok"], json!(true));
}

#[test]
fn ex1_delta_is_one() {
    let out = swf(&[
        "delta",
        &data("ex1.json"),
        "--cycle",
        &data("cycle-ex1.json"),
        "--max-power",
        "4",
    ]);
    let v = json_of(&out.stdout);
    assert_eq!(v["delta"]["coefficient"], json!(1));
    assert_eq!(v["oracle"], json!(1));
}

#[test]
fn failing_validation_still_reports() {
    let out = swf(&["validate", &data("perturbed9.json")]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out.stdout);
    assert_eq!(v["ok"], json!(false));
    assert!(!v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn errors_name_their_kind() {
    let out = swf(&["specflow", &data("path-wall.json")]);
    assert_eq!(
        json_of(&out.stdout)["error"]["kind"],
        json!("EndpointOnWall")
    );
    let out = swf(&["validate", &data("malformed.json")]);
    assert_eq!(json_of(&out.stdout)["error"]["kind"], json!("Parse"));
}

#[test]
fn specflow_and_kuranishi_values() {
    let v = json_of(&swf(&["specflow", &data("path2.json")]).stdout);
    assert_eq!(v["spectral_flow"], json!(1));
    let v = json_of(&swf(&["kuranishi", "--lambda-prime", "-0.5", "--gamma", "3"]).stdout);
    assert_eq!(
        v,
        json!({"branch_side": 1, "branch_sign": -1, "delta_lambda": 1, "sf_c": -1})
    );
}

#[test]
fn pretty_only_changes_whitespace() {
    let args = ["compare", &data("ex1.json"), "--max-power", "4"];
    let plain = swf(&args).stdout;
    let mut with_flag = args.to_vec();
    with_flag.push("--pretty");
    let pretty = swf(&with_flag).stdout;
    assert_ne!(plain, pretty);
    assert_eq!(json_of(&plain), json_of(&pretty));
}

#[test]
fn generated_data_validates_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.json");
    let f = file.display().to_string();
    let out = swf(&[
        "generate",
        "--seed",
        "9",
        "--orbits",
        "7",
        "--index-min",
        "-2",
        "--index-max",
        "3",
        "-o",
        &f,
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(swf(&["validate", &f]).status.code(), Some(0));
    let golden = std::fs::read(data("gen9.json")).unwrap();
    assert_eq!(json_of(&std::fs::read(&file).unwrap()), json_of(&golden));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(swf(&[]).status.code(), Some(2));
    assert_eq!(
        swf(&["homology", &data("ex1.json"), "--equivariant", "--plain"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(swf(&["compare", &data("ex1.json")]).status.code(), Some(2));
}

use std::path::Path;
use std::process::{Command, Output};

use addcomb::format::{read_function, read_set, FunctionData};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_addcomb"))
        .args(args)
        .env_remove("ADDCOMB_THREADS")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn help_and_usage_errors() {
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("Usage"));
    assert_eq!(
        run(&["count", "--eq", "1,1,1,-3", "--set", "missing.txt"])
            .status
            .code(),
        Some(2)
    );
    let unknown = run(&["count", "--bogus"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("Usage"));
    assert_eq!(
        run(&["construct", "behrend", "--d", "0", "--n", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn behrend_report() {
    let out = run(&["construct", "behrend", "--d", "2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["size"], 2);
    assert_eq!(v["verified"], true);
}

#[test]
fn count_and_csv_header() {
    let dir = tempfile::tempdir().unwrap();
    let set = write(dir.path(), "a.txt", "group: 31\n1\n2\n3\n5\n7\n9\n");
    let v = json(&run(&["count", "--set", &set]));
    assert_eq!(v["total"], 51);
    assert_eq!(v["trivial"], 6);
    let csv = run(&["count", "--set", &set, "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let keys: Vec<String> = v.as_object().unwrap().keys().cloned().collect();
    assert_eq!(header, keys);
    assert_eq!(lines.count(), 1);
}

#[test]
fn empty_trace_and_rationals() {
    let dir = tempfile::tempdir().unwrap();
    let set = write(dir.path(), "p.txt", "group: 2\n0\n");
    let out = run(&["iterate", "--engine", "ff", "--set", &set, "--target", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["steps"], Value::Array(vec![]));
    assert_eq!(v["termination"], "DENSITY_CAP");
    assert_eq!(v["initial_density"], "1/2");
    let five = write(dir.path(), "five.txt", "group: 5\n0\n");
    let v = json(&run(&[
        "iterate", "--engine", "ff", "--set", &five, "--target", "6",
    ]));
    assert_eq!(v["initial_density"], "1/5");
}

#[test]
fn incomplete_search_exits_4() {
    let out = run(&["search", "--N", "30", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json(&out)["complete"], false);
    assert_eq!(run(&["search", "--N", "10"]).status.code(), Some(0));
}

#[test]
fn outputs_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let witness = d.join("w.txt").display().to_string();
    let report = d.join("r.json").display().to_string();
    let out = run(&[
        "construct",
        "behrend",
        "--d",
        "3",
        "--n",
        "2",
        "--witness",
        &witness,
        "--out",
        &report,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let set = read_set(Path::new(&witness)).unwrap();
    assert_eq!(set.len() as u64, v["size"].as_u64().unwrap());

    let f = write(d, "f.txt", "group: 8\n0 : 2\n3 : -1\n");
    let g = write(d, "g.txt", "group: 8\n1 : 5\n7 : 1\n");
    let h = d.join("h.txt");
    let out = run(&[
        "convolve",
        "--f",
        &f,
        "--g",
        &g,
        "--function-out",
        h.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let FunctionData::Int(h) = read_function(&h).unwrap() else {
        panic!("expected an integer function")
    };
    assert_eq!(h.values(), &[0, 10, -1, 0, -5, 0, 0, 2]);

    let members = d.join("b.txt");
    let out = run(&[
        "bohr",
        "--N",
        "101",
        "--freq",
        "1",
        "--freq",
        "10",
        "--radius",
        "1",
        "--members-out",
        members.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        read_set(&members).unwrap().len() as u64,
        json(&out)["size"].as_u64().unwrap()
    );
}

#[test]
fn thread_count_does_not_change_output() {
    let args = [
        "search", "--group", "5,5,5", "--mode", "greedy", "--seed", "9",
    ];
    let one = run(&[&args[..], &["--threads", "1"]].concat());
    let many = Command::new(env!("CARGO_BIN_EXE_addcomb"))
        .args(args)
        .env("ADDCOMB_THREADS", "8")
        .output()
        .unwrap();
    assert_eq!(one.stdout, many.stdout);
}

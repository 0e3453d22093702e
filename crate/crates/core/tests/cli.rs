use serde_json::Value;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graph-rigidity"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("graph-rigidity-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Runs with --json-out and returns (exit code, report).
fn run(args: &[&str], out: &str) -> (i32, Value) {
    let path = tmp(out);
    let st = bin().args(args).arg("--quiet").arg("--json-out").arg(&path).status().unwrap();
    let report = std::fs::read_to_string(&path).map(|s| serde_json::from_str(&s).unwrap()).unwrap_or(Value::Null);
    (st.code().unwrap(), report)
}

fn write(name: &str, v: &Value) -> String {
    let p = tmp(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

const CARRY_Z4: &str = r#"{"group":{"kind":"cyclic","n":4},"entries":[[1,3,1],[2,2,1],[2,3,1],[3,1,1],[3,2,1],[3,3,1]]}"#;

#[test]
fn two_cover_of_the_carry_cocycle() {
    let (code, rep) = run(&["two-cover", "--cocycle", CARRY_Z4, "--gens", "[1]"], "two-cover.json");
    assert_eq!(code, 0);
    let r = &rep["result"];
    assert_eq!(r["total"]["vertices"], 8);
    assert_eq!(r["base"]["vertices"], 4);
    assert_eq!(r["connected"], true);
    // the written covering verifies through its own subcommand
    let total = write("total.json", &r["total"]);
    let base = write("base.json", &r["base"]);
    let map = serde_json::to_string(&r["map"]).unwrap();
    let (code, rep) = run(&["verify-covering", "--source", &total, "--target", &base, "--map", &map], "verify.json");
    assert_eq!(code, 0);
    assert_eq!(rep["result"]["fiber_size"], 2);
}

#[test]
fn torus_propagation() {
    let (code, rep) = run(&["propagate", "--source", "torus:16x16", "--target", "torus:8x8", "--k", "4"], "propagate.json");
    assert_eq!(code, 0);
    assert_eq!(rep["verdict"], "positive");
    assert_eq!(rep["result"]["outcome"]["Covering"]["fiber_size"], 4);
}

#[test]
fn betti_bound_on_f2xf2() {
    let pres = r#"{"generators":["a","b","c","d"],"relators":["acAC","adAD","bcBC","bdBD"],"u":{"a":1,"b":1,"c":1,"d":1}}"#;
    let (code, rep) = run(&["betti-bound", "--presentation", pres], "betti.json");
    assert_eq!(code, 0);
    let r = &rep["result"];
    assert_eq!((r["n"].as_i64(), r["bound"].as_i64(), r["certificate"].as_bool()), (Some(1), Some(1), Some(true)));
    // D2 from `fox` feeds `rank`
    let (_, fox) = run(&["fox", "--presentation", pres], "fox.json");
    let d2 = write("d2.json", &fox["result"]["d2"]);
    let (code, rank) = run(&["rank", "--matrix", &d2], "rank.json");
    assert_eq!(code, 0);
    assert_eq!(rank["result"]["rank"], 3);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["vanishing-search", "--group", "Z/4", "--gens", "[1]", "--n", "2"], "vs.json").0, 1);
    assert_eq!(run(&["detect-fibers", "--graph", "cycle:6"], "fib.json").0, 1);
    assert_eq!(run(&["ball", "--graph", "cycle:5", "--vertex", "9", "--radius", "1"], "err.json").0, 2);
    assert_eq!(run(&["n3", "--group", "Z/4", "--gens", "not json"], "err2.json").0, 2);
    let st = bin().arg("no-such-subcommand").output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    assert!(!st.stderr.is_empty());
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["rank", "--matrix", "[[[0,1],[1]],[[2],[0,2]]]", "--seed", "7"];
    let a = run(&args, "same-a.json");
    let b = run(&args, "same-b.json");
    assert_eq!(std::fs::read(tmp("same-a.json")).unwrap(), std::fs::read(tmp("same-b.json")).unwrap());
    assert_eq!(a.1["inputs_digest"], b.1["inputs_digest"]);
    assert!(a.1.get("timing_ms").is_none());
}

#[test]
fn glued_outputs_round_trip() {
    let (code, x0) = run(&["build-x0", "--group", "Z/16", "--gens", "[2,3]", "--subgroup-gens", "[2]"], "x0.json");
    assert_eq!(code, 0);
    let path = tmp("x0.json").to_string_lossy().into_owned();
    // a saved report is accepted where its result is expected
    let (code, _) = run(&["admissible", "--glued", &path], "adm.json");
    assert_eq!(code, 0);
    let (code, bl) = run(&["bilipschitz", "--a", &path, "--b", &path], "bl.json");
    assert_eq!(code, 0);
    assert_eq!(bl["result"]["forward"], serde_json::json!([1, 1]));
    let (code, fib) = run(&["detect-fibers", "--graph", &path], "fib2.json");
    assert_eq!(code, 0);
    assert_eq!(fib["result"]["fibers"].as_array().unwrap().len(), x0["result"]["vertices"].as_u64().unwrap() as usize / 2);
}

#[test]
fn vanishing_search_output_feeds_coboundary() {
    let (code, _) = run(&["vanishing-search", "--group", "Z/4", "--gens", "[1]", "--n", "1"], "vs1.json");
    assert_eq!(code, 0);
    let path = tmp("vs1.json").to_string_lossy().into_owned();
    assert_eq!(run(&["cocycle-validate", "--cocycle", &path], "cv.json").0, 0);
    assert_eq!(run(&["coboundary", "--cocycle", &path], "cb.json").0, 1);
}

#[test]
fn every_subcommand_has_help() {
    let names = [
        "ball", "is-r-locally", "aut", "k-cover", "k-simply-connected", "fill-radius", "verify-covering", "extension-radius", "propagate", "deck", "rf-probe",
        "tree-extend", "n3", "augment", "discrete-genset", "padded-genset", "cocycle-validate", "coboundary", "central-ext", "two-cover", "vanishing-search",
        "build-x0", "build-xq", "build-xtilde", "triangle-condition", "marking-genset", "detect-fibers", "admissible", "bilipschitz", "fox", "rank",
        "betti-bound", "product-counts",
    ];
    for n in names {
        let o = bin().args([n, "--help"]).output().unwrap();
        assert_eq!(o.status.code(), Some(0), "{n}");
    }
}

#[test]
fn rf_probe_on_the_torus() {
    let (code, rep) = run(&["rf-probe", "--group", "Z^2", "--gens", "[[1,0],[0,1]]", "--quotient", "torus:8x8", "--n", "3", "--elements", "[[1,0],[1,1],[2,0]]"], "rf.json");
    assert_eq!(code, 0);
    assert_eq!(rep["result"]["all_free"], true);
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gammapres"));
    c.env_remove("GAMMAPRES_CACHE_DIR");
    c
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

/// Z/3 with Z/2 acting by inversion, a sign module and a cover Z/9 → Z/3.
fn fixtures() -> TempDir {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    write(p, "z3inv.json", r#"{"group":{"catalog":"C3"},"gamma":{"catalog":"C2"},"action":[[0,1,2],[0,2,1]]}"#);
    write(p, "z9inv.json", r#"{"group":{"catalog":"C9"},"gamma":{"catalog":"C2"},"action":[[0,1,2,3,4,5,6,7,8],[0,8,7,6,5,4,3,2,1]]}"#);
    write(p, "sign.json", r#"{"prime":3,"dim":1,"gamma_group":"z3inv.json","matrices":{"0":[[1]],"1":[[2]]}}"#);
    write(p, "cover.json", r#"{"source":"z9inv.json","images":[1]}"#);
    write(p, "c9.json", r#"{"catalog":"C9"}"#);
    write(p, "triv.json", r#"{"prime":3,"dim":1,"group":"c9.json","matrices":{"0":[[1]]}}"#);
    write(p, "s3.json", r#"{"catalog":"S3"}"#);
    d
}

#[test]
fn genprob_prints_exact_fraction() {
    let d = fixtures();
    let o = run(d.path(), &["genprob", "--gamma-group", "z3inv.json", "--relations", "2", "--exhaustive"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "8/9");
    let decomp = r#"{"factors":[{"abelian":true,"multiplicity":2,"prime":3,"endo_dim":1,"order":9,"y_size":3}]}"#;
    write(d.path(), "d.json", decomp);
    let o = run(d.path(), &["genprob", "--decomp", "d.json", "--relations", "3"]);
    assert_eq!(stdout(&o).trim(), "208/243");
}

#[test]
fn malformed_inputs_exit_2() {
    let d = fixtures();
    write(d.path(), "bad.json", r#"{"catalog": "C3""#);
    let o = run(d.path(), &["height", "--group", "bad.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.json"));
    write(d.path(), "assoc.json", r#"{"table":[[0,1],[1,1]],"generators":[1]}"#);
    assert_eq!(run(d.path(), &["height", "--group", "assoc.json"]).status.code(), Some(2));
    assert_eq!(run(d.path(), &["cohom", "--module", "triv.json", "--degree", "7"]).status.code(), Some(2));
    assert_eq!(run(d.path(), &["bogus"]).status.code(), Some(2));
    write(d.path(), "cfg.json", r#"{"primes":[4]}"#);
    assert_eq!(run(d.path(), &["--config", "cfg.json", "height", "--group", "s3.json"]).status.code(), Some(2));
}

#[test]
fn capacity_exits_3() {
    let d = fixtures();
    write(d.path(), "cfg.json", r#"{"h2_order":4}"#);
    let o = run(d.path(), &["--config", "cfg.json", "cohom", "--module", "triv.json", "--degree", "2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn cohom_and_mult_reports() {
    let d = fixtures();
    let o = run(d.path(), &["cohom", "--module", "triv.json", "--degree", "2"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["result"]["dim_cohomology"], 1);
    assert_eq!(v["provenance"]["dim_cohomology"], "oracle");
    let o = run(d.path(), &["mult", "--n", "1", "--gamma", "z3inv.json", "--module", "sign.json", "--oracle", "cover.json"]);
    let v = json(&o);
    let row = &v["result"]["rows"][0];
    assert_eq!(row["m_formula"], 1);
    assert_eq!(row["m_oracle"], 1);
    assert_eq!(row["agree"], true);
    assert_eq!(v["provenance"]["rows[].m_oracle"], "oracle");
}

#[test]
fn formula_and_tsv() {
    let d = fixtures();
    write(d.path(), "ld.json", r#"{"ell":5,"field":"number","module":"other","dim_a":2}"#);
    let o = run(d.path(), &["formula", "--op", "mult_bound_main", "--data", "ld.json", "--n", "3", "--case", "nf"]);
    let v = json(&o);
    assert_eq!(v["result"]["value"]["numerator"], "8");
    assert_eq!(v["provenance"]["input"], "evaluator-input");
    let o = run(d.path(), &["--format", "tsv", "formula", "--op", "fin_pres_relation_bound", "--n", "5", "--degree", "2"]);
    assert!(stdout(&o).lines().any(|l| l == "result.value\t7"));
}

#[test]
fn reports_are_reproducible_and_cache_is_transparent() {
    let d = fixtures();
    let cache = d.path().join("cache");
    let args = ["sample", "--gamma-group", "z3inv.json", "--relations", "2", "--draws", "2000", "--seed", "5"];
    let plain = run(d.path(), &args);
    assert_eq!(plain.stdout, run(d.path(), &args).stdout);
    let cached = |extra: &[&str]| {
        let mut c = bin();
        c.current_dir(d.path()).env("GAMMAPRES_CACHE_DIR", &cache).args(extra).args(args);
        c.output().unwrap()
    };
    let first = cached(&[]);
    let second = cached(&[]);
    assert_eq!(first.stdout, plain.stdout);
    assert_eq!(second.stdout, plain.stdout);
    assert_eq!(fs::read_dir(&cache).unwrap().count(), 1);
    assert_eq!(cached(&["--no-cache"]).stdout, plain.stdout);
}

#[test]
fn height_and_completion() {
    let d = fixtures();
    let v = json(&run(d.path(), &["height", "--group", "s3.json", "--hat"]));
    assert_eq!(v["result"]["h_value"], 2);
    assert_eq!(v["result"]["greedy_confirmed"], true);
    write(d.path(), "c4.json", r#"{"group":{"catalog":"C4"},"gamma":{"catalog":"1"},"action":[[0,1,2,3]]}"#);
    write(d.path(), "v.json", r#"{"members":[{"group":{"catalog":"C2"},"gamma":{"catalog":"1"},"action":[[0,1]]}]}"#);
    let v = json(&run(d.path(), &["proc", "--gamma", "c4.json", "--variety", "v.json"]));
    assert_eq!(v["result"]["completion_order"], 2);
    let v = json(&run(d.path(), &["relator-rank", "--n", "1", "--gamma", "c4.json"]));
    assert_eq!(v["result"]["value"], 1);
}

#[test]
fn selftest_passes_and_is_byte_identical() {
    let d = tempfile::tempdir().unwrap();
    let a = d.path().join("a.json");
    let b = d.path().join("b.json");
    let o = bin().args(["selftest", "--seed", "11", "--out"]).arg(&a).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = bin().args(["selftest", "--seed", "11", "--out"]).arg(&b).output().unwrap();
    assert!(o.status.success());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&fs::read(&a).unwrap()).unwrap();
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 11);
}

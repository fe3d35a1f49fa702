use std::time::{Duration, Instant};

use gammapres_core::selftest::{run_criterion, run_selftest, CRITERIA};
use gammapres_core::Limits;

const SEED: u64 = 20240601;

/// Wall-clock caps per criterion; criteria without one share the suite budget.
fn budget(id: u8) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(1)),
        2 => Some(Duration::from_secs(30)),
        3 | 8 => Some(Duration::from_secs(120)),
        _ => None,
    }
}

#[test]
fn acceptance() {
    let limits = Limits::default();
    let start = Instant::now();
    let mut failures = Vec::new();
    for &(id, name) in CRITERIA.iter() {
        let t = Instant::now();
        let r = run_criterion(id, SEED, &limits);
        let took = t.elapsed();
        let in_time = budget(id).is_none_or(|b| took <= b);
        let ok = r.passed && in_time;
        println!(
            "{} criterion {id:>2} {name}: {} instances, {:.2}s{}",
            if ok { "PASS" } else { "FAIL" },
            r.instances,
            took.as_secs_f64(),
            if in_time { "" } else { " over budget" }
        );
        for line in r.detail.iter().filter(|l| l.starts_with("FAIL")) {
            println!("    {line}");
        }
        if !ok {
            failures.push(id);
        }
    }
    let total = start.elapsed();
    let in_time = total <= Duration::from_secs(600);
    println!("{} full suite: {:.2}s", if in_time { "PASS" } else { "FAIL" }, total.as_secs_f64());
    assert!(in_time, "suite over budget");
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}

#[test]
fn bundles_are_byte_identical() {
    let limits = Limits::default();
    let a = serde_json::to_vec(&run_selftest(SEED, &limits)).unwrap();
    let b = serde_json::to_vec(&run_selftest(SEED, &limits)).unwrap();
    println!("{} determinism: {} bytes", if a == b { "PASS" } else { "FAIL" }, a.len());
    assert_eq!(a, b);
}

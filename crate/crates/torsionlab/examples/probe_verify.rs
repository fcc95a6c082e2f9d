use std::time::Instant;
use torsionlab::dataset::load_embedded;
use torsionlab::verify::{run_verify, summarize, CheckStatus, VerifyOptions};

fn main() {
    let slow = std::env::args().any(|a| a == "--slow");
    let t0 = Instant::now();
    let ds = load_embedded();
    let checks = run_verify(&ds, &VerifyOptions { slow, tables: None });
    let (pass, fail, skip) = summarize(&checks);
    for c in &checks {
        let s = match &c.status {
            CheckStatus::Pass => "PASS".to_string(),
            CheckStatus::Fail => "FAIL".to_string(),
            CheckStatus::Skip(r) => format!("SKIP({r})"),
        };
        println!("[{s}] ({}ms) {} :: {} {}", c.millis, c.table, c.name, c.detail);
    }
    println!("== {pass} passed, {fail} failed, {skip} skipped in {:?}", t0.elapsed());
}

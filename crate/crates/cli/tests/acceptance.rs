//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.

use std::time::Instant;

use provar_cli::reproduce;

fn main() {
    let start = Instant::now();
    let outcomes = reproduce::run(None).expect("full suite");
    let mut failures = 0;
    for o in &outcomes {
        if o.pass {
            println!("criterion {} ({}): PASS {}", o.number, o.title, o.actual);
        } else {
            failures += 1;
            println!("criterion {} ({}): FAIL {}", o.number, o.title, o.actual);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if failures > 0 || outcomes.len() != reproduce::CHECKS.len() {
        println!("{failures} acceptance criteria failed [{secs:.1}s]");
        std::process::exit(1);
    }
    println!("all {} acceptance criteria passed [{secs:.1}s]", outcomes.len());
}

//! Acceptance suite: one line per criterion on stderr, then a single assert.
//!
//! Criteria run one after another in a single test so that the wall-clock
//! limits are measured without competing test threads.

use std::io::Write;
use std::time::Instant;

use sumprod::suite::{self, time_limit, GOLDEN_SEED, TIME_LIMITS};

const SEED: u64 = 7;
const GOLDEN: &str = include_str!("golden/ratio_suite_seed7.csv");

fn line(text: &str) {
    // written to the raw handle so the libtest capture does not swallow it
    let mut err = std::io::stderr().lock();
    writeln!(err, "{text}").unwrap();
}

#[test]
fn acceptance_criteria() {
    let mut failures = Vec::new();
    for (id, _) in TIME_LIMITS {
        let limit = time_limit(id);
        let start = Instant::now();
        let (criterion, golden_ok) = if id == 7 {
            let (c, csv) = suite::ratio_suite(GOLDEN_SEED);
            (c, Some(csv == GOLDEN))
        } else {
            (suite::by_id(id, SEED), None)
        };
        let elapsed = start.elapsed();
        let in_time = elapsed < limit;
        let pass = criterion.pass && in_time && golden_ok.unwrap_or(true);
        let golden = match golden_ok {
            Some(true) => ", golden CSV identical",
            Some(false) => ", golden CSV DIFFERS",
            None => "",
        };
        line(&format!(
            "criterion {id} [{}] {}: {:.1}s of {}s{golden}",
            if pass { "PASS" } else { "FAIL" },
            criterion.name,
            elapsed.as_secs_f64(),
            limit.as_secs(),
        ));
        for v in criterion.verdicts.iter().filter(|v| !v.pass) {
            line(&format!("    failed {}: {}", v.id, v.witness));
        }
        if !pass {
            failures.push(id);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}

//! Acceptance criteria 1-9 on the full grids. Prints one line per criterion
//! and exits nonzero if any fails.

use squeezing::validate::{criterion, Bound, Check, Tier};
use std::process::ExitCode;
use std::time::Instant;

const TITLES: [&str; 9] = [
    "oracle agreement, m, n <= 60",
    "four-route pairwise agreement",
    "quoted scalars from distribution sums",
    "unitarity of the photon-number distribution",
    "coherent, Gaussian and thermal identities",
    "detailed balance and Rayleigh-Jeans / Wien contrast",
    "Hermite approximation regression bound",
    "oscillations of p_m(30)",
    "operator orderings and spinor identities",
];

fn describe(c: &Check) -> String {
    let op = match c.kind {
        Bound::AtMost => "<=",
        Bound::AtLeast => ">=",
    };
    let mut s = format!("{} = {:.3e} {op} {:.1e}", c.name, c.value, c.bound);
    if let Some(e) = &c.error {
        s.push_str(&format!(" [error: {e}]"));
    } else if !c.passed {
        if let Some(at) = &c.worst_point {
            s.push_str(&format!(" at {at}"));
        }
    }
    s
}

fn main() -> ExitCode {
    let mut all = true;
    for id in 1..=9u8 {
        let start = Instant::now();
        let checks = criterion(id, Tier::Full);
        let passed = !checks.is_empty() && checks.iter().all(|c| c.passed);
        all &= passed;
        println!(
            "criterion {id}: {} - {} ({:.1} s)",
            if passed { "PASS" } else { "FAIL" },
            TITLES[id as usize - 1],
            start.elapsed().as_secs_f64()
        );
        for c in &checks {
            println!("    {} {}", if c.passed { "ok  " } else { "FAIL" }, describe(c));
        }
    }
    if all {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}

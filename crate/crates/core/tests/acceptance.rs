//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria 7 and 11 are known to fail: the stated globality set on P^1 and
//! the P_j-stability of N_{n,j} at n = 2 are both contradicted by explicit
//! counterexamples, which the failure lines print. Any other failure makes
//! the process exit nonzero.

use std::time::Instant;
use wittkit::suites::{criterion, criterion_title, CRITERIA};

const KNOWN_FAILURES: &[usize] = &[7, 11];
const SEED: u64 = 20240601;

fn main() {
    let mut unexpected = Vec::new();
    let total = Instant::now();
    for k in 1..=CRITERIA {
        let start = Instant::now();
        let cases = criterion(k, SEED);
        let ms = start.elapsed().as_millis();
        let checks: usize = cases.iter().map(|c| c.checks).sum();
        let failed: Vec<_> = cases.iter().filter(|c| !c.passed()).collect();
        let verdict = if failed.is_empty() { "PASS" } else { "FAIL" };
        println!("{} criterion {:>2}: {} ({} checks, {} ms)", verdict, k, criterion_title(k), checks, ms);
        for c in &failed {
            println!("       {}: {}", c.name, c.failures.iter().take(4).cloned().collect::<Vec<_>>().join("; "));
        }
        if !failed.is_empty() && !KNOWN_FAILURES.contains(&k) {
            unexpected.push(k);
        }
    }
    println!("total {} ms", total.elapsed().as_millis());
    if !unexpected.is_empty() {
        println!("unexpected failures: {:?}", unexpected);
        std::process::exit(1);
    }
}

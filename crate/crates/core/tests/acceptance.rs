//! Acceptance criteria 1 to 10, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always reach the output.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use s3_double::mc;
use s3_double::register::Caps;
use s3_double::verify::{algebra, anyons, extended, gates, logical, ribbons, Check};

const SEED: u64 = 2024;
const TRIALS: usize = 10_000;

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_checks(checks: &[Check]) -> Outcome {
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let worst = checks.iter().map(|c| c.max_deviation).fold(0.0, f64::max);
    Outcome {
        passed: failed.is_empty() && !checks.is_empty(),
        detail: if failed.is_empty() {
            format!("{} checks, max deviation {worst:.1e}", checks.len())
        } else {
            format!("failed: {}", failed.join("; "))
        },
    }
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

fn monte_carlo() -> Outcome {
    let mut lines = Vec::new();
    let mut passed = true;
    for p in mc::PROTOCOLS {
        match mc::run(p, TRIALS, SEED, Caps::default()) {
            Ok(r) => {
                passed &= r.passed();
                let worst = r.statistics.iter().map(|s| s.z.abs()).fold(0.0, f64::max);
                lines.push(format!("{p} |z|<={worst:.2}{}", if r.passed() { "" } else { " FAIL" }));
            }
            Err(e) => {
                passed = false;
                lines.push(format!("{p} error: {e}"));
            }
        }
    }
    Outcome {
        passed,
        detail: lines.join(", "),
    }
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, Option<Duration>, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        (1, "1x1 torus census", Some(Duration::from_secs(1)), || from_checks(&algebra::census_checks())),
        (2, "stabilizer algebra", Some(Duration::from_secs(10)), || {
            from_checks(&algebra::drinfeld_checks(20, &mut rng()))
        }),
        (3, "ribbon identities", Some(Duration::from_secs(60)), || {
            from_checks(&ribbons::suite(&mut rng()).checks)
        }),
        (4, "anyon basis change", None, || {
            let mut c = anyons::basis_unitarity();
            c.extend(anyons::printed_c3_states());
            from_checks(&c)
        }),
        (5, "generalized ribbons", None, || from_checks(&extended::suite().checks)),
        (6, "lattice logical initialization", None, || from_checks(&logical::suite().checks)),
        (7, "gate truth tables", None, || from_checks(&gates::suite(&mut rng()).checks)),
        (8, "protocol statistics", Some(Duration::from_secs(300)), monte_carlo),
        (9, "charge-transfer law", None, || from_checks(&[anyons::charge_transfer()])),
        (10, "fusion table", None, || from_checks(&anyons::fusion_consistency())),
    ];
    let mut failures = 0;
    for (n, name, limit, run) in criteria {
        let t = Instant::now();
        let mut out = run();
        let took = t.elapsed();
        if let Some(l) = limit {
            if took > l {
                out.passed = false;
                out.detail.push_str(&format!(" (runtime over {l:?})"));
            }
        }
        if !out.passed {
            failures += 1;
        }
        println!(
            "criterion {n:>2} {} {name}: {} [{:.2}s]",
            if out.passed { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failures} failed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

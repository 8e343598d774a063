//! Acceptance criteria 1 to 10 at their stated sizes, tolerances and time
//! limits. Prints one verdict line per criterion and exits nonzero if any
//! criterion fails; every criterion runs regardless.

use std::process::ExitCode;

use ursell_core::report::{Check, SuiteReport};
use ursell_core::suites::{self, SuiteConfig, SuiteFn, DEFAULT_SEED};

struct Criterion {
    number: u32,
    suite: SuiteFn,
    /// Wall-clock limit in seconds, where one is stated.
    limit: Option<f64>,
    /// Smallest instance count named by the criterion, per check.
    min_instances: &'static [(&'static str, usize)],
}

const CRITERIA: &[Criterion] = &[
    Criterion { number: 1, suite: suites::special_values, limit: Some(1.0), min_instances: &[] },
    Criterion { number: 2, suite: suites::listed_partitions, limit: Some(1.0), min_instances: &[] },
    Criterion {
        number: 3,
        suite: suites::oracle_equivalence,
        limit: Some(60.0),
        min_instances: &[("R_graph = R_current", 100)],
    },
    Criterion { number: 4, suite: suites::reduction_laws, limit: None, min_instances: &[] },
    Criterion { number: 5, suite: suites::switching_exhaustive, limit: Some(60.0), min_instances: &[] },
    Criterion {
        number: 6,
        suite: suites::series_oracle,
        limit: None,
        min_instances: &[("random current instances", 20)],
    },
    Criterion {
        number: 7,
        suite: suites::ursell_signs,
        limit: Some(300.0),
        min_instances: &[("instances evaluated", 500)],
    },
    Criterion {
        number: 8,
        suite: suites::derivative_differences,
        limit: None,
        min_instances: &[("|exact - central difference| <= 1e-7, h = 1e-5", 50)],
    },
    Criterion {
        number: 9,
        suite: suites::lee_yang_circle,
        limit: None,
        min_instances: &[("||z| - 1| <= 1e-9 for every root", 500)],
    },
    Criterion {
        number: 10,
        suite: suites::first_zero_monotonicity,
        limit: Some(300.0),
        min_instances: &[("alpha1(J) >= alpha1(J') - 1e-9", 500)],
    },
];

/// Adds the size and time requirements as checks of their own.
fn judge(c: &Criterion, mut report: SuiteReport) -> SuiteReport {
    assert_eq!(report.criterion, Some(c.number), "suite table out of order");
    for &(name, min) in c.min_instances {
        let got = report.checks.iter().find(|k| k.name == name).map_or(0, |k| k.instances);
        let mut size = Check::new(format!("at least {min} instances of `{name}`"));
        size.record(got >= min, || format!("only {got}"));
        report.checks.push(size);
    }
    if let Some(limit) = c.limit {
        let seconds = report.seconds;
        let mut time = Check::new(format!("runtime under {limit} s"));
        time.record(seconds < limit, || format!("took {seconds:.2} s"));
        report.checks.push(time);
    }
    report
}

fn main() -> ExitCode {
    let config = SuiteConfig::with_seed(DEFAULT_SEED);
    let mut failed = Vec::new();
    let mut reports = Vec::new();
    for c in CRITERIA {
        let report = judge(c, (c.suite)(&config));
        print!("{}", report.render());
        if !report.passed() {
            failed.push(c.number);
        }
        reports.push(report);
    }
    println!();
    for r in &reports {
        println!("{} criterion {:>2}: {}", if r.passed() { "pass" } else { "FAIL" }, r.criterion.unwrap(), r.name);
    }
    if failed.is_empty() {
        println!("\nall 10 acceptance criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("\nfailing criteria: {failed:?}");
        ExitCode::FAILURE
    }
}

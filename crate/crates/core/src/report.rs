//! Suite results and their plain-text summary table.

use std::fmt::Write as _;

use serde::Serialize;

/// One named identity or property checked over some instances.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub instances: usize,
    pub violations: usize,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            instances: 0,
            violations: 0,
            detail: String::new(),
        }
    }

    /// Counts one instance; a failing one keeps the first `why` as detail.
    pub fn record(&mut self, ok: bool, why: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            if self.violations == 0 {
                self.detail = format!("first failure: {}", why());
            }
            self.violations += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    /// Acceptance criterion number, if the suite is one.
    pub criterion: Option<u32>,
    pub name: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    /// Wall time; left out of serialized reports so they stay reproducible.
    #[serde(skip)]
    pub seconds: f64,
}

impl SuiteReport {
    pub fn new(criterion: Option<u32>, name: impl Into<String>) -> Self {
        SuiteReport {
            criterion,
            name: name.into(),
            checks: Vec::new(),
            notes: Vec::new(),
            seconds: 0.0,
        }
    }

    pub fn instances(&self) -> usize {
        self.checks.iter().map(|c| c.instances).sum()
    }

    pub fn violations(&self) -> usize {
        self.checks.iter().map(|c| c.violations).sum()
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn label(&self) -> String {
        match self.criterion {
            Some(n) => format!("[{n:>2}] {}", self.name),
            None => format!("[--] {}", self.name),
        }
    }

    /// `PASS`/`FAIL` line followed by one indented line per check.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{verdict} {} ({} instances, {} violations, {:.2}s)",
            self.label(),
            self.instances(),
            self.violations(),
            self.seconds
        );
        for c in &self.checks {
            let mark = if c.passed() { "ok  " } else { "FAIL" };
            let _ = write!(out, "    {mark} {}: {}/{}", c.name, c.instances - c.violations, c.instances);
            if !c.detail.is_empty() {
                let _ = write!(out, " ({})", c.detail);
            }
            out.push('\n');
        }
        for n in &self.notes {
            let _ = writeln!(out, "    note: {n}");
        }
        out
    }
}

/// Fixed-width table: suite, instances, violations, wall time.
pub fn summary_table(reports: &[SuiteReport]) -> String {
    let width = reports.iter().map(|r| r.label().len()).max().unwrap_or(5).max(5);
    let mut out = String::new();
    let _ = writeln!(out, "{:<width$}  {:>9}  {:>10}  {:>9}", "suite", "instances", "violations", "seconds");
    for r in reports {
        let _ = writeln!(
            out,
            "{:<width$}  {:>9}  {:>10}  {:>9.2}",
            r.label(),
            r.instances(),
            r.violations(),
            r.seconds
        );
    }
    out
}

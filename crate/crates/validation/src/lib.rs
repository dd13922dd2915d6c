//! Bookkeeping for the acceptance run: one PASS/FAIL line per criterion.

use std::fmt::Display;
use std::time::Instant;

#[derive(Debug, Default)]
pub struct Tally {
    lines: Vec<String>,
    failed: Vec<String>,
}

impl Tally {
    /// Records and prints one criterion.
    pub fn record(&mut self, name: &str, ok: bool, detail: impl Display) {
        let line = format!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        println!("{line}");
        self.lines.push(line);
        if !ok {
            self.failed.push(name.to_string());
        }
    }

    /// Runs `f` and records its verdict with the elapsed time appended.
    pub fn run<F: FnOnce() -> (bool, String)>(&mut self, name: &str, f: F) {
        let t = Instant::now();
        let (ok, detail) = f();
        self.record(name, ok, format!("{detail} [{:.2} s]", t.elapsed().as_secs_f64()));
    }

    pub fn lines(&self) -> &[String] {
        &self.lines
    }

    pub fn failed(&self) -> &[String] {
        &self.failed
    }

    pub fn summary(&self) -> String {
        format!(
            "acceptance: {} of {} criteria passed{}",
            self.lines.len() - self.failed.len(),
            self.lines.len(),
            if self.failed.is_empty() { String::new() } else { format!("; failing: {}", self.failed.join(", ")) }
        )
    }
}

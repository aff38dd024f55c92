use qswitch_core::selftest::{run_selftest, Fault};

use crate::record::{Check, Outcome, Table};

pub fn run(fault: Fault) -> Outcome {
    let report = run_selftest(fault);
    let mut out = Outcome::default();
    let mut t = Table::new("selftest", &["check", "passed", "detail"]);
    for c in &report.checks {
        t.push(vec![
            c.name.to_string(),
            c.passed.to_string(),
            c.detail.clone(),
        ]);
        out.checks
            .push(Check::holds(c.name, c.passed, c.detail.clone()));
    }
    out.tables.push(t);
    out
}

//! Runs the structural law suite on computed levels and prints a summary.
//!
//!     cargo run --release --example laws

use coxdom::dominance::{hierarchy, HierarchyOptions};
use coxdom::laws::{check_laws, LawOptions};
use coxdom::{systems, Result};

fn main() -> Result<()> {
    let d = systems::tilde_a2();
    let h = hierarchy(&d, 3, &HierarchyOptions::default())?;
    let report = check_laws(&d, &h, &LawOptions { depth_cap: 6, ..LawOptions::default() })?;
    for law in &report.outcomes {
        let mark = if law.failed == 0 { "ok  " } else { "FAIL" };
        println!("{mark} {:<36} {:>5} checked", law.name, law.checked);
        for w in &law.witnesses {
            println!("       {w}");
        }
    }
    println!("{} roots sampled, all passed: {}", report.sampled_roots, report.passed());
    Ok(())
}

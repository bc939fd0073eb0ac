//! Cross-checks the fast dominance and depth computations against a
//! brute-force search over a ball of the Cayley graph.
//!
//!     cargo run --release --example oracle [radius]

use coxdom::oracle::{agreement, cayley_ball, dominance_oracle, Verdict};
use coxdom::{systems, Result, Root};

fn main() -> Result<()> {
    let radius: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(6);
    let d = systems::universal(3);
    let ball = cayley_ball(&d, radius)?;
    println!("ball of radius {radius}: {} elements", ball.len());

    let x = Root::from_ints(&d, &[1, 2, 0]);
    let y = Root::from_ints(&d, &[1, 0, 0]);
    match dominance_oracle(&d, &ball, &x, &y)? {
        Verdict::Consistent => println!("{x} dom {y}: no refutation in the ball"),
        Verdict::Refuted { witness } => println!("{x} dom {y} refuted by {}", witness.word.display(&d)),
    }

    let report = agreement(&d, &ball, 3, 4)?;
    println!(
        "{} roots, {} pairs: {} false positives, {} missing witnesses, longest witness {}",
        report.roots,
        report.pairs,
        report.false_positives.len(),
        report.missing_witnesses.len(),
        report.max_witness_length
    );
    println!("agreement: {}", if report.passed() { "ok" } else { "MISMATCH" });
    Ok(())
}

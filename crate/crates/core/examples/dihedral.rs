//! Places a dominance pair inside its infinite dihedral subsystem.
//!
//!     cargo run --example dihedral

use coxdom::dihedral::{canonical_pair, dihedral_roots, verify_dominance_pair};
use coxdom::{systems, Result, Root};

fn main() -> Result<()> {
    let d = systems::hyperbolic_rank2(3, 2);
    let x = Root::from_ints(&d, &[3, 8]);
    let y = Root::from_ints(&d, &[1, 3]);

    let frame = canonical_pair(&d, &x, &y)?;
    println!("canonical pair: alpha = {}, beta = {}, q = {}", frame.alpha, frame.beta, frame.q);
    for (pos, root) in dihedral_roots(&d, &frame, -3, 3)? {
        println!("  {pos:<10} {root}");
    }

    let report = verify_dominance_pair(&d, &x, &y)?;
    println!(
        "{x} at {}, {y} at {}: consecutive {}, (x, y) = {} = -(alpha, beta): {}",
        report.x_position, report.y_position, report.consecutive, report.inner_xy, report.opposite_inner
    );
    Ok(())
}

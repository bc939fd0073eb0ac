//! Elementary roots of a few systems, and the finiteness test they give.
//!
//!     cargo run --example elementary

use coxdom::dominance::{elementary_roots, has_infinite_edge};
use coxdom::{systems, Result};

fn main() -> Result<()> {
    for (name, d) in [
        ("A3", systems::a(3)),
        ("B3", systems::b(3)),
        ("affine A2", systems::tilde_a2()),
        ("universal rank 3", systems::universal(3)),
    ] {
        let d0 = elementary_roots(&d, 10_000)?;
        let finite = !has_infinite_edge(&d, &d0);
        println!("{name}: #D_0 = {}, finite group: {finite}", d0.len());
        for x in &d0 {
            println!("  {x}");
        }
    }
    Ok(())
}

//! The dominance hierarchy D_0, D_1, ... of an affine and a hyperbolic
//! system.
//!
//!     cargo run --example hierarchy [levels]

use coxdom::dominance::{hierarchy, HierarchyOptions};
use coxdom::{systems, Result};

fn main() -> Result<()> {
    let levels: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    for (name, d) in [("affine A2", systems::tilde_a2()), ("q = 3/2", systems::hyperbolic_rank2(3, 2))] {
        let h = hierarchy(&d, levels, &HierarchyOptions::default())?;
        println!("{name}: sizes {:?}", h.sizes());
        for level in &h.levels {
            let roots: Vec<String> = level.iter().map(|x| x.to_string()).collect();
            println!("  D_{}: {}", level.n, roots.join(" "));
        }
    }
    Ok(())
}

//! Builds a datum, then walks its positive roots by depth with their
//! descent words.
//!
//!     cargo run --example roots

use coxdom::roots::{enumerate, minimal_word};
use coxdom::{CoxeterDatum, Result};

fn main() -> Result<()> {
    // A triangle with one infinite edge and two order-3 edges.
    let d = CoxeterDatum::builder(["s", "t", "u"]).bond(0, 1, 3).bond(1, 2, 3).infinite(0, 2).build()?;
    println!("backend: {:?}", d.backend());
    for row in d.gram() {
        println!("  {}", row.iter().map(|s| format!("{s:>5}")).collect::<Vec<_>>().join(" "));
    }

    let layers = enumerate(&d, 4)?;
    for (k, layer) in layers.layers.iter().enumerate() {
        println!("depth {}: {} roots", k + 1, layer.len());
        for x in layer {
            let (w, simple) = minimal_word(&d, x)?;
            let prefix = if w.is_empty() { String::new() } else { format!("{} ", w.display(&d)) };
            println!("  {x:<12} = {prefix}e_{}", d.labels()[simple]);
        }
    }
    Ok(())
}
